#include "compacton/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "compacton/error.hpp"

namespace compacton {
namespace {

nlohmann::json defaults() {
  return {
      {"exponents", {{"q", 0.1}, {"p", 0.2}, {"N", 4}}},
      {"geometry", {{"T", 1.0}, {"R_omega", 1.0}}},
      {"grid", {{"nz", 64}, {"nr", 64}}},
      {"solver",
       {{"max_iters", 3000},
        {"tol_grad", 1e-8},
        {"tol_root", 1e-12},
        {"tol_P", 1e-8},
        {"tol_res", 1e-6},
        {"tol_J", 1e-10},
        {"seeds", {"bump", "modulated", "compacton"}},
        {"newton_polish", true},
        {"eps_supp", 1e-6},
        {"eps_flux", 1e-3},
        {"eps_ztriv", 1e-6}}},
      {"scan",
       {{"lambda_list", nlohmann::json::array()},
        {"bisect_tol", 1e-4},
        {"coarse_points", 4},
        {"tol_Z", 1e-6}}},
      {"shoot", {{"tol_shoot", 1e-8}, {"a_hi", 1e3}}},
      {"output", {{"out_dir", "out"}}},
  };
}

nlohmann::json::json_pointer pointer(const std::string& key) {
  std::string p = "/" + key;
  for (char& c : p)
    if (c == '.') c = '/';
  return nlohmann::json::json_pointer(p);
}

void flatten(const nlohmann::json& j, const std::string& prefix,
             std::vector<std::pair<std::string, nlohmann::json>>& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
  } else {
    out.emplace_back(prefix, j);
  }
}

bool compatible(const nlohmann::json& proto, const nlohmann::json& v) {
  if (proto.is_number_integer()) return v.is_number_integer();
  if (proto.is_number()) return v.is_number();
  if (proto.is_boolean()) return v.is_boolean();
  if (proto.is_string()) return v.is_string();
  if (proto.is_array()) return v.is_array();
  return false;
}

}  // namespace

Config::Config() : doc_(defaults()) {}

Config Config::from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw InvalidArgument("configuration must be a JSON object");
  Config c;
  std::vector<std::pair<std::string, nlohmann::json>> flat;
  flatten(doc, "", flat);
  for (const auto& [k, v] : flat) c.set(k, v);
  c.validate();
  return c;
}

Config Config::from_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw InvalidArgument("cannot open config file " + path.string());
  nlohmann::json doc;
  try {
    is >> doc;
  } catch (const nlohmann::json::exception& ex) {
    throw InvalidArgument(std::string("config file is not JSON: ") + ex.what());
  }
  return from_json(doc);
}

void Config::set(const std::string& key, const nlohmann::json& value) {
  const auto ptr = pointer(key);
  if (!doc_.contains(ptr) || doc_.at(ptr).is_object())
    throw InvalidArgument("unknown configuration key '" + key + "'");
  nlohmann::json& slot = doc_.at(ptr);
  nlohmann::json v = value;
  if (slot.is_number_float() && v.is_number_integer()) v = v.get<double>();
  if (!compatible(slot, v))
    throw InvalidArgument("configuration key '" + key + "' has the wrong type");
  slot = std::move(v);
}

void Config::set(const std::string& key, const std::string& text) {
  nlohmann::json v = nlohmann::json::parse(text, nullptr, false);
  if (v.is_discarded()) v = text;
  set(key, v);
}

const nlohmann::json& Config::at(const std::string& key) const { return doc_.at(pointer(key)); }

std::vector<std::string> Config::keys() const {
  std::vector<std::pair<std::string, nlohmann::json>> flat;
  flatten(doc_, "", flat);
  std::vector<std::string> out;
  for (const auto& kv : flat) out.push_back(kv.first);
  return out;
}

void Config::validate() const {
  (void)exponents();
  (void)Geometry::make(at("geometry.T").get<double>(), at("geometry.R_omega").get<double>(), 3);
  (void)build_grid(geometry(), nz(), nr());
  for (const char* k : {"solver.tol_grad", "solver.tol_root", "solver.tol_P", "solver.tol_res",
                        "solver.tol_J", "solver.eps_supp", "solver.eps_flux", "solver.eps_ztriv",
                        "scan.bisect_tol", "scan.tol_Z", "shoot.tol_shoot"}) {
    if (!(at(k).get<double>() > 0.0))
      throw InvalidArgument(std::string("tolerance ") + k + " must be positive");
  }
  if (at("solver.max_iters").get<int>() < 1) throw InvalidArgument("solver.max_iters must be >= 1");
  if (at("scan.coarse_points").get<int>() < 0)
    throw InvalidArgument("scan.coarse_points must be >= 0");
  if (!(at("shoot.a_hi").get<double>() > 1.0)) throw InvalidArgument("shoot.a_hi must exceed 1");
  for (const auto& v : at("scan.lambda_list"))
    if (!v.is_number()) throw InvalidArgument("scan.lambda_list must hold numbers");
  for (const auto& v : at("solver.seeds")) {
    if (!v.is_string()) throw InvalidArgument("solver.seeds must hold names");
    const std::string s = v.get<std::string>();
    if (s != "bump" && s != "modulated" && s != "compacton")
      throw InvalidArgument("unknown seed '" + s + "' (bump, modulated, compacton)");
  }
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string Config::content_hash() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(doc_.dump())));
  return buf;
}

Exponents Config::exponents() const {
  return Exponents::make(at("exponents.q").get<double>(), at("exponents.p").get<double>(),
                         at("exponents.N").get<int>());
}

Geometry Config::geometry() const {
  return Geometry::make(at("geometry.T").get<double>(), at("geometry.R_omega").get<double>(),
                        at("exponents.N").get<int>());
}

int Config::nz() const { return at("grid.nz").get<int>(); }
int Config::nr() const { return at("grid.nr").get<int>(); }

SolverOptions Config::solver_options() const {
  SolverOptions o;
  o.max_iters = at("solver.max_iters").get<int>();
  o.tol_grad = at("solver.tol_grad").get<double>();
  o.tol_root = at("solver.tol_root").get<double>();
  o.tol_P = at("solver.tol_P").get<double>();
  o.tol_res = at("solver.tol_res").get<double>();
  o.tol_J = at("solver.tol_J").get<double>();
  o.newton_polish = at("solver.newton_polish").get<bool>();
  o.eps_supp = at("solver.eps_supp").get<double>();
  o.eps_flux = at("solver.eps_flux").get<double>();
  o.eps_ztriv = at("solver.eps_ztriv").get<double>();
  return o;
}

QuotientOptions Config::quotient_options() const {
  QuotientOptions o;
  o.max_iters = at("solver.max_iters").get<int>();
  o.tol_grad = at("solver.tol_grad").get<double>();
  return o;
}

ScanOptions Config::scan_options() const {
  ScanOptions o;
  o.solver = solver_options();
  o.bisect_tol = at("scan.bisect_tol").get<double>();
  o.coarse_points = at("scan.coarse_points").get<int>();
  o.tol_Z = at("scan.tol_Z").get<double>();
  return o;
}

ShootOptions Config::shoot_options() const {
  ShootOptions o;
  o.tol_shoot = at("shoot.tol_shoot").get<double>();
  o.a_hi = at("shoot.a_hi").get<double>();
  return o;
}

std::vector<double> Config::lambda_list() const {
  return at("scan.lambda_list").get<std::vector<double>>();
}

std::vector<std::string> Config::seed_names() const {
  return at("solver.seeds").get<std::vector<std::string>>();
}

std::filesystem::path Config::out_dir() const { return at("output.out_dir").get<std::string>(); }

std::string Config::file_tag() const {
  std::ostringstream os;
  os << "q" << at("exponents.q").get<double>() << "_p" << at("exponents.p").get<double>() << "_N"
     << at("exponents.N").get<int>() << "_T" << at("geometry.T").get<double>() << "_nz" << nz()
     << "_nr" << nr();
  return os.str();
}

}  // namespace compacton
