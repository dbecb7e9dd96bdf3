#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "compacton/mesh.hpp"

namespace compacton {

/// {"meta": {q, p, N, T, R_omega, nz, nr}, "values": [...]}, row-major.
nlohmann::json field_to_json(const Field& u, const Exponents& e);

struct LoadedField {
  Exponents exponents;
  Field field;
};

LoadedField field_from_json(const nlohmann::json& doc);

/// Writes with 17 significant digits so that a reload is bit-exact.
void write_field(const std::filesystem::path& path, const Field& u, const Exponents& e,
                 const nlohmann::json& extra_meta = nlohmann::json::object());
LoadedField read_field(const std::filesystem::path& path);

}  // namespace compacton
