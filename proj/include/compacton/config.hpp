#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "compacton/fibering.hpp"
#include "compacton/lambda_scan.hpp"
#include "compacton/mesh.hpp"
#include "compacton/radial_ode.hpp"
#include "compacton/rayleigh.hpp"

namespace compacton {

/// Run configuration. Keys are dot paths ("grid.nr"); files may use either
/// nested objects or flat dot keys, and unknown keys are rejected.
class Config {
 public:
  Config();

  static Config from_json(const nlohmann::json& doc);
  static Config from_file(const std::filesystem::path& path);

  /// Sets one key; the value is parsed as JSON, falling back to a string.
  void set(const std::string& key, const std::string& text);
  void set(const std::string& key, const nlohmann::json& value);
  /// Throws InvalidArgument unless every value satisfies its invariant.
  void validate() const;

  const nlohmann::json& doc() const { return doc_; }
  std::vector<std::string> keys() const;
  /// 64-bit FNV-1a of the canonical dump, as 16 hex digits.
  std::string content_hash() const;

  Exponents exponents() const;
  Geometry geometry() const;
  int nz() const;
  int nr() const;
  SolverOptions solver_options() const;
  QuotientOptions quotient_options() const;
  ScanOptions scan_options() const;
  ShootOptions shoot_options() const;
  std::vector<double> lambda_list() const;
  std::vector<std::string> seed_names() const;
  std::filesystem::path out_dir() const;
  /// Tag embedded in output file names: q, p, N, T, nz, nr.
  std::string file_tag() const;

 private:
  const nlohmann::json& at(const std::string& key) const;
  nlohmann::json doc_;
};

std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace compacton
