#include "compacton/field_io.hpp"

#include <fstream>

#include "compacton/error.hpp"

namespace compacton {

nlohmann::json field_to_json(const Field& u, const Exponents& e) {
  const Grid& g = u.grid();
  nlohmann::json doc;
  doc["meta"] = {{"q", e.q},   {"p", e.p},   {"N", e.N},   {"T", g.T()},
                 {"R_omega", g.R()}, {"nz", g.nz()}, {"nr", g.nr()}};
  doc["values"] = std::vector<double>(u.values().begin(), u.values().end());
  return doc;
}

LoadedField field_from_json(const nlohmann::json& doc) {
  try {
    const auto& m = doc.at("meta");
    const Exponents e = Exponents::make(m.at("q"), m.at("p"), m.at("N"));
    const Geometry geo = Geometry::make(m.at("T"), m.at("R_omega"), e.N);
    auto grid = build_grid(geo, m.at("nz"), m.at("nr"));
    Field u(grid, doc.at("values").get<std::vector<double>>());
    if (!u.is_valid()) throw InvalidArgument("field file holds non-finite or non-Dirichlet values");
    return {e, std::move(u)};
  } catch (const nlohmann::json::exception& ex) {
    throw InvalidArgument(std::string("malformed field document: ") + ex.what());
  }
}

void write_field(const std::filesystem::path& path, const Field& u, const Exponents& e,
                 const nlohmann::json& extra_meta) {
  auto doc = field_to_json(u, e);
  for (const auto& [k, v] : extra_meta.items()) doc["meta"][k] = v;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  os << doc.dump() << '\n';
}

LoadedField read_field(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw InvalidArgument("cannot open field file " + path.string());
  nlohmann::json doc;
  try {
    is >> doc;
  } catch (const nlohmann::json::exception& ex) {
    throw InvalidArgument(std::string("field file is not JSON: ") + ex.what());
  }
  return field_from_json(doc);
}

}  // namespace compacton
