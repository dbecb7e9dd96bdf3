#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "compacton/fibering.hpp"
#include "compacton/rayleigh.hpp"

namespace compacton {

/// Fills support_radius, Iz_fraction, wall_flux_max and the compact_support /
/// periodically_trivial flags of a result from its field.
void classify(SolveResult& r, const SolverOptions& opts);

struct Extremals {
  QuotientResult lambda_1P;
  QuotientResult lambda_0T;
  QuotientResult lambda_0Omega;
  QuotientResult Lambda_1POmega;
};

/// lambda_0^Omega and Lambda_1P^Omega over z-constant fields first; their
/// minimisers seed lambda_0^T, whose minimiser seeds lambda_1P.
Extremals compute_extremals(const GridPtr& grid, const Exponents& e,
                            const std::vector<Field>& extra_seeds = {},
                            const QuotientOptions& opts = {});

struct ScanOptions {
  SolverOptions solver;
  double bisect_tol = 1e-4;    ///< final bracket width relative to lambda_0T
  int coarse_points = 4;       ///< interior points of the preliminary sweep
  double tol_Z = 1e-6;         ///< lambda is in Z when P < -tol_Z (I2 + S_q)
  bool continuation = true;
};

struct ScanRow {
  double lambda = 0.0;
  std::string status;  ///< "ok", "infeasible" or "error: ..."
  double phi = 0.0;
  double P = 0.0;
  double phi2 = 0.0;
  double residual = 0.0;
  double Iz_fraction = 0.0;
  bool compact_support = false;
  bool periodically_trivial = false;
  bool in_Z = false;
  std::string origin;  ///< "list", "coarse" or "bisection"
};

struct ScanReport {
  double lambda_1P = 0.0;
  double lambda_0T = 0.0;
  double lambda_0Omega = 0.0;
  double lambda_star = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  int bisection_steps = 0;
  std::vector<double> bracket_widths;
  bool multiple_sign_changes = false;
  std::string mode;
  std::vector<ScanRow> rows;
};

ScanRow make_row(const SolveResult& r, double tol_Z, const std::string& origin);

struct LambdaStar {
  double lambda_star = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  int steps = 0;
  std::vector<double> widths;
  bool multiple_sign_changes = false;
  SolveResult witness;
  std::vector<ScanRow> probes;
};

/// Bisection for the sign change of P(u_lambda) in [lambda_1P, lambda_0T].
/// Throws BracketFailure if lambda_1P is already in Z or lambda_0T is not.
LambdaStar find_lambda_star(const GridPtr& grid, const Exponents& e, const Extremals& ext,
                            const ScanOptions& opts);

/// One constrained solve per lambda, in decreasing order when continuation is
/// enabled; failures become rows, never exceptions.
ScanReport sweep(const GridPtr& grid, const Exponents& e, const Extremals& ext,
                 std::vector<double> lambdas, const ScanOptions& opts);

void write_scan_csv(const std::filesystem::path& path, const ScanReport& report);
nlohmann::json to_json(const ScanReport& report);

}  // namespace compacton
