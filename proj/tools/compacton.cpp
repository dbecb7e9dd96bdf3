#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "compacton/config.hpp"
#include "compacton/error.hpp"
#include "compacton/field_io.hpp"
#include "compacton/fibering.hpp"
#include "compacton/kernels.hpp"
#include "compacton/lambda_scan.hpp"
#include "compacton/pohozaev.hpp"
#include "compacton/radial_ode.hpp"
#include "compacton/rayleigh.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace compacton;

namespace {

enum Exit { ok = 0, infeasible = 2, no_convergence = 3, bad_config = 4 };

struct NonConvergence : Error {
  using Error::Error;
};

json envelope(const Config& cfg, const std::string& command) {
  return {{"command", command},
          {"config", cfg.doc()},
          {"config_hash", cfg.content_hash()},
          {"kernels", std::string(kernels::active().name)}};
}

void write_json(const fs::path& path, const json& doc) {
  fs::create_directories(path.parent_path().empty() ? fs::path(".") : path.parent_path());
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  out << doc.dump(2) << '\n';
  std::cout << path.string() << '\n';
}

std::string lambda_tag(double lambda) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "lam%.10g", lambda);
  return buf;
}

std::vector<Field> build_seeds(const Config& cfg, const GridPtr& grid, const Exponents& e) {
  const std::vector<Field> base = default_seeds(grid);
  std::vector<Field> seeds;
  for (const auto& name : cfg.seed_names()) {
    if (name == "bump") {
      seeds.push_back(base[0]);
    } else if (name == "modulated") {
      seeds.push_back(base[1]);
    } else if (name == "compacton") {
      const ShootResult c = find_compacton(e.N, e.q, e.p, cfg.shoot_options());
      seeds.push_back(embed(c, 0.9 * grid->R(), grid));
    }
  }
  return seeds;
}

json extremals_json(const Extremals& x) {
  return {{"lambda_1P", to_json(x.lambda_1P)},
          {"lambda_0T", to_json(x.lambda_0T)},
          {"lambda_0Omega", to_json(x.lambda_0Omega)},
          {"Lambda_1POmega", to_json(x.Lambda_1POmega)}};
}

int cmd_extremals(const Config& cfg) {
  const Exponents e = cfg.exponents();
  const GridPtr grid = build_grid(cfg.geometry(), cfg.nz(), cfg.nr());
  const Extremals x = compute_extremals(grid, e, {}, cfg.quotient_options());
  json doc = envelope(cfg, "extremals");
  doc["result"] = extremals_json(x);
  doc["ordering"] = {
      {"lambda_1P_lt_lambda_0T", x.lambda_1P.value < x.lambda_0T.value},
      {"lambda_0T_le_lambda_0Omega", x.lambda_0T.value <= x.lambda_0Omega.value * (1.0 + 1e-12)}};
  write_json(cfg.out_dir() / ("extremals_" + cfg.file_tag() + ".json"), doc);
  return ok;
}

int cmd_solve(const Config& cfg, double lambda) {
  const Exponents e = cfg.exponents();
  const SolverOptions opts = cfg.solver_options();
  const GridPtr grid = build_grid(cfg.geometry(), cfg.nz(), cfg.nr());
  const std::string stem = "solve_" + cfg.file_tag() + "_" + lambda_tag(lambda);
  const SolveResult r = minimize_constrained(lambda, grid, e, build_seeds(cfg, grid, e), opts);

  const fs::path field_path = cfg.out_dir() / (stem + "_field.json");
  fs::create_directories(cfg.out_dir());
  write_field(field_path, r.u, e,
              {{"lambda", lambda}, {"config", cfg.doc()}, {"config_hash", cfg.content_hash()}});
  json doc = envelope(cfg, "solve");
  doc["result"] = to_json(r, field_path.filename().string());
  write_json(cfg.out_dir() / (stem + ".json"), doc);
  if (!r.converged) throw NonConvergence("solver did not converge at lambda = " + std::to_string(lambda));
  return ok;
}

int cmd_scan(const Config& cfg) {
  const Exponents e = cfg.exponents();
  const ScanOptions opts = cfg.scan_options();
  const GridPtr grid = build_grid(cfg.geometry(), cfg.nz(), cfg.nr());
  const Extremals x = compute_extremals(grid, e, {}, cfg.quotient_options());

  ScanReport report = sweep(grid, e, x, cfg.lambda_list(), opts);
  const LambdaStar star = find_lambda_star(grid, e, x, opts);
  report.lambda_star = star.lambda_star;
  report.bracket_lo = star.lo;
  report.bracket_hi = star.hi;
  report.bisection_steps = star.steps;
  report.bracket_widths = star.widths;
  report.multiple_sign_changes = star.multiple_sign_changes;
  report.rows.insert(report.rows.end(), star.probes.begin(), star.probes.end());

  const std::string stem = "scan_" + cfg.file_tag();
  fs::create_directories(cfg.out_dir());
  write_scan_csv(cfg.out_dir() / (stem + ".csv"), report);
  const fs::path witness_path = cfg.out_dir() / (stem + "_witness_field.json");
  write_field(witness_path, star.witness.u, e,
              {{"lambda", star.witness.lambda},
               {"config", cfg.doc()},
               {"config_hash", cfg.content_hash()}});
  json doc = envelope(cfg, "scan");
  doc["extremals"] = extremals_json(x);
  doc["result"] = to_json(report);
  doc["witness"] = to_json(star.witness, witness_path.filename().string());
  write_json(cfg.out_dir() / (stem + ".json"), doc);
  return ok;
}

int cmd_shoot(const Config& cfg, int M) {
  const Exponents e = cfg.exponents();
  const ShootResult r = find_compacton(M, e.q, e.p, cfg.shoot_options());
  char tag[64];
  std::snprintf(tag, sizeof tag, "shoot_q%g_p%g_M%d", e.q, e.p, M);
  fs::create_directories(cfg.out_dir());
  {
    const fs::path csv = cfg.out_dir() / (std::string(tag) + "_profile.csv");
    std::ofstream out(csv);
    out << "# config_hash " << cfg.content_hash() << '\n';
    out << "r,psi,dpsi\n";
    out.precision(17);
    for (const auto& pt : r.profile) out << pt.r << ',' << pt.psi << ',' << pt.dpsi << '\n';
    std::cout << csv.string() << '\n';
  }
  json doc = envelope(cfg, "shoot");
  doc["result"] = to_json(r);
  doc["lambda_star_ball"] = lambda_star_ball(r, cfg.geometry().R_omega);
  write_json(cfg.out_dir() / (std::string(tag) + ".json"), doc);
  if (r.classification != ShootClass::compacton)
    throw NonConvergence("shooting ended in " + to_string(r.classification));
  return ok;
}

int cmd_verify(const Config& cfg, const std::vector<std::string>& inputs,
               std::optional<double> lambda_flag) {
  std::vector<Field> levels;
  std::optional<Exponents> e;
  double lambda = lambda_flag.value_or(NAN);
  for (const auto& path : inputs) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot read " + path);
    const json doc = json::parse(in);
    LoadedField lf = field_from_json(doc);
    if (!lambda_flag) {
      if (!doc["meta"].contains("lambda"))
        throw InvalidArgument(path + " carries no lambda; pass --lambda");
      lambda = doc["meta"]["lambda"].get<double>();
    }
    e = lf.exponents;
    levels.push_back(std::move(lf.field));
  }
  const PohozaevReport rep = levels.size() == 1 ? verify(levels[0], lambda, *e)
                                                : verify_refinement(levels, lambda, *e);
  json doc = envelope(cfg, "verify");
  doc["inputs"] = inputs;
  doc["lambda"] = lambda;
  doc["result"] = to_json(rep);
  const std::string stem = fs::path(inputs.back()).stem().string();
  write_json(cfg.out_dir() / ("verify_" + stem + ".json"), doc);
  return ok;
}

/// Pulls "--section.key value" pairs out of argv before CLI11 sees it.
std::vector<std::pair<std::string, std::string>> take_overrides(std::vector<std::string>& args) {
  std::vector<std::pair<std::string, std::string>> out;
  std::vector<std::string> rest;
  for (std::size_t k = 0; k < args.size(); ++k) {
    const std::string& a = args[k];
    if (a.rfind("--", 0) == 0 && a.find('.', 2) != std::string::npos) {
      const auto eq = a.find('=');
      if (eq != std::string::npos) {
        out.emplace_back(a.substr(2, eq - 2), a.substr(eq + 1));
      } else {
        if (k + 1 >= args.size()) throw InvalidArgument("missing value for " + a);
        out.emplace_back(a.substr(2), args[++k]);
      }
    } else {
      rest.push_back(a);
    }
  }
  args = std::move(rest);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::vector<std::pair<std::string, std::string>> overrides;
  try {
    overrides = take_overrides(args);
  } catch (const Error& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return bad_config;
  }

  CLI::App app{"Variational solver for -Lap u = lambda |u|^{p-1}u - |u|^{q-1}u on a cylinder"};
  app.require_subcommand(1);
  std::string config_file;
  app.add_option("--config", config_file, "JSON config (nested or flat dot keys)")
      ->check(CLI::ExistingFile);

  auto* extremals = app.add_subcommand("extremals", "compute the four extremal values");
  auto* solve = app.add_subcommand("solve", "constrained minimisation at one lambda");
  double lambda = 0.0;
  solve->add_option("--lambda", lambda, "spectral parameter")->required();
  auto* scan = app.add_subcommand("scan", "sweep lambda_list and locate lambda*");
  auto* shoot = app.add_subcommand("shoot", "radial compacton by shooting");
  int dim = 0;
  shoot->add_option("--dim", dim, "space dimension M")->required()->check(CLI::PositiveNumber);
  auto* verify_cmd = app.add_subcommand("verify", "Pohozaev check of saved fields");
  std::vector<std::string> inputs;
  verify_cmd->add_option("--input", inputs, "field file(s), coarse to fine")
      ->required()
      ->check(CLI::ExistingFile);
  double verify_lambda = 0.0;
  auto* verify_lambda_opt =
      verify_cmd->add_option("--lambda", verify_lambda, "overrides the lambda stored in the file");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& ex) {
    const int code = app.exit(ex);
    return code == 0 ? ok : bad_config;
  }

  Config cfg;
  try {
    if (!config_file.empty()) cfg = Config::from_file(config_file);
    for (const auto& [key, value] : overrides) cfg.set(key, value);
    cfg.validate();
  } catch (const std::exception& ex) {
    std::cerr << "invalid config: " << ex.what() << '\n';
    return bad_config;
  }

  try {
    if (*extremals) return cmd_extremals(cfg);
    if (*solve) return cmd_solve(cfg, lambda);
    if (*scan) return cmd_scan(cfg);
    if (*shoot) return cmd_shoot(cfg, dim);
    if (*verify_cmd)
      return cmd_verify(cfg, inputs,
                        *verify_lambda_opt ? std::optional<double>(verify_lambda) : std::nullopt);
  } catch (const Infeasible& ex) {
    std::cerr << "infeasible: " << ex.what() << '\n';
    return infeasible;
  } catch (const InvalidArgument& ex) {
    std::cerr << "invalid argument: " << ex.what() << '\n';
    return bad_config;
  } catch (const std::exception& ex) {
    std::cerr << "no convergence: " << ex.what() << '\n';
    return no_convergence;
  }
  return ok;
}
