#include "compacton/lambda_scan.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>

#include "compacton/error.hpp"

namespace compacton {

void classify(SolveResult& r, const SolverOptions& opts) {
  const Field& u = r.u;
  const Grid& g = u.grid();
  const double eps_supp = opts.eps_supp * u.max_abs();
  r.support_radius.assign(g.nz(), 0.0);
  double rho_max = 0.0;
  for (int i = 0; i < g.nz(); ++i) {
    for (int j = g.nr(); j >= 0; --j) {
      if (std::abs(u(i, j)) > eps_supp) {
        r.support_radius[i] = g.r(j);
        break;
      }
    }
    rho_max = std::max(rho_max, r.support_radius[i]);
  }
  const Field ur = d_r(u);
  const double eps_flux = opts.eps_flux * ur.max_abs();
  double wall = 0.0;
  for (int i = 0; i < g.nz(); ++i) wall = std::max(wall, std::abs(ur(i, g.nr())));
  r.wall_flux_max = wall;
  const bool inside = rho_max <= g.R() - 2.0 * g.hr() + 1e-12 * g.R();
  r.compact_support = !u.is_zero() && inside && wall <= eps_flux;
  const GradientIntegrals gi = gradient_integrals(u);
  const double I2 = gi.I_x + gi.I_z;
  r.Iz_fraction = I2 > 0.0 ? gi.I_z / I2 : 0.0;
  r.periodically_trivial = r.Iz_fraction <= opts.eps_ztriv;
}

Extremals compute_extremals(const GridPtr& grid, const Exponents& e,
                            const std::vector<Field>& extra_seeds, const QuotientOptions& opts) {
  const std::vector<Field> base = default_seeds(grid);
  std::vector<Field> zseeds{base.front()};
  for (const Field& s : extra_seeds) {
    Field z = s;
    z.make_z_constant();
    zseeds.push_back(std::move(z));
  }
  Extremals ext;
  ext.lambda_0Omega = minimize_quotient(QuotientKind::lambda0_omega, grid, e, zseeds, opts);
  zseeds.push_back(ext.lambda_0Omega.minimizer);
  ext.Lambda_1POmega = minimize_quotient(QuotientKind::Lambda1P_omega, grid, e, zseeds, opts);

  std::vector<Field> seeds = base;
  seeds.insert(seeds.end(), extra_seeds.begin(), extra_seeds.end());
  seeds.push_back(ext.lambda_0Omega.minimizer);
  ext.lambda_0T = minimize_quotient(QuotientKind::lambda0, grid, e, seeds, opts);
  if (ext.lambda_0T.value > ext.lambda_0Omega.value) {
    const QuotientKind kind = ext.lambda_0T.which;
    ext.lambda_0T = ext.lambda_0Omega;
    ext.lambda_0T.which = kind;
  }
  seeds.push_back(ext.lambda_0T.minimizer);
  seeds.push_back(ext.Lambda_1POmega.minimizer);
  ext.lambda_1P = minimize_quotient(QuotientKind::lambda1P, grid, e, seeds, opts);
  return ext;
}

ScanRow make_row(const SolveResult& r, double tol_Z, const std::string& origin) {
  ScanRow row;
  row.lambda = r.lambda;
  row.status = "ok";
  row.phi = r.phi;
  row.P = r.P;
  row.phi2 = r.phi2;
  row.residual = r.residual;
  row.Iz_fraction = r.Iz_fraction;
  row.compact_support = r.compact_support;
  row.periodically_trivial = r.periodically_trivial;
  row.in_Z = r.P < -tol_Z * (r.bundle.I2 + r.bundle.S_q);
  row.origin = origin;
  return row;
}

namespace {

ScanRow failed_row(double lambda, const std::string& status, const std::string& origin) {
  ScanRow row;
  row.lambda = lambda;
  row.status = status;
  row.phi = row.P = row.phi2 = row.residual = row.Iz_fraction = std::nan("");
  row.origin = origin;
  return row;
}

std::vector<Field> solver_seeds(const GridPtr& grid, const Extremals& ext,
                                std::initializer_list<const SolveResult*> warm) {
  std::vector<Field> seeds;
  for (const SolveResult* w : warm)
    if (w != nullptr && w->seed_index >= 0) seeds.push_back(w->u);
  seeds.push_back(ext.lambda_0T.minimizer);
  seeds.push_back(ext.lambda_1P.minimizer);
  seeds.push_back(default_seeds(grid).back());
  return seeds;
}

}  // namespace

LambdaStar find_lambda_star(const GridPtr& grid, const Exponents& e, const Extremals& ext,
                            const ScanOptions& opts) {
  if (!e.in_subcritical_set())
    throw InvalidArgument("lambda* search requires exponents with d* > 0");
  const double l1P = ext.lambda_1P.value;
  const double l0T = ext.lambda_0T.value;
  if (!(l1P < l0T)) throw BracketFailure("lambda_1P is not below lambda_0T");

  LambdaStar out;
  struct Probe {
    double lambda;
    bool in_Z;
    SolveResult result;
  };
  auto solve = [&](double lambda, std::initializer_list<const SolveResult*> warm,
                   const std::string& origin) -> Probe {
    try {
      SolveResult r = minimize_constrained(lambda, grid, e, solver_seeds(grid, ext, warm), opts.solver);
      ScanRow row = make_row(r, opts.tol_Z, origin);
      out.probes.push_back(row);
      return {lambda, row.in_Z, std::move(r)};
    } catch (const Infeasible&) {
      out.probes.push_back(failed_row(lambda, "infeasible", origin));
      return {lambda, false, SolveResult{}};
    }
  };

  Probe top = solve(l0T, {}, "coarse");
  if (!top.in_Z) throw BracketFailure("P(u_lambda) is not negative at lambda_0T");
  Probe bottom = solve(l1P + 1e-6 * l0T, {}, "coarse");
  if (bottom.in_Z) throw BracketFailure("P(u_lambda) < 0 already at lambda_1P");

  std::vector<Probe> coarse;
  coarse.push_back(std::move(top));
  for (int k = opts.coarse_points; k >= 1; --k) {
    const double lambda = l1P + (l0T - l1P) * k / (opts.coarse_points + 1);
    coarse.push_back(solve(lambda, {&coarse.back().result}, "coarse"));
  }
  coarse.push_back(std::move(bottom));
  std::reverse(coarse.begin(), coarse.end());  // increasing lambda

  int changes = 0;
  for (std::size_t k = 1; k < coarse.size(); ++k) changes += coarse[k].in_Z != coarse[k - 1].in_Z;
  out.multiple_sign_changes = changes > 1;
  std::size_t b_idx = coarse.size() - 1;
  while (b_idx > 0 && coarse[b_idx - 1].in_Z) --b_idx;
  Probe a = std::move(coarse[b_idx - 1]);
  Probe b = std::move(coarse[b_idx]);

  const double width_tol = opts.bisect_tol * l0T;
  out.widths.push_back(b.lambda - a.lambda);
  while (b.lambda - a.lambda > width_tol) {
    const double mid = 0.5 * (a.lambda + b.lambda);
    Probe m = solve(mid, {&b.result, &a.result}, "bisection");
    if (m.in_Z) {
      b = std::move(m);
    } else {
      a = std::move(m);
    }
    ++out.steps;
    out.widths.push_back(b.lambda - a.lambda);
  }
  out.lo = a.lambda;
  out.hi = b.lambda;
  out.lambda_star = 0.5 * (a.lambda + b.lambda);
  out.witness = minimize_constrained(out.lambda_star, grid, e,
                                     solver_seeds(grid, ext, {&a.result, &b.result}), opts.solver);
  out.probes.push_back(make_row(out.witness, opts.tol_Z, "witness"));
  return out;
}

ScanReport sweep(const GridPtr& grid, const Exponents& e, const Extremals& ext,
                 std::vector<double> lambdas, const ScanOptions& opts) {
  ScanReport rep;
  rep.lambda_1P = ext.lambda_1P.value;
  rep.lambda_0T = ext.lambda_0T.value;
  rep.lambda_0Omega = ext.lambda_0Omega.value;
  rep.mode = opts.continuation ? "continuation" : "cold-start";
  std::sort(lambdas.begin(), lambdas.end(), std::greater<>());
  SolveResult warm;
  for (double lambda : lambdas) {
    try {
      SolveResult r = minimize_constrained(
          lambda, grid, e, solver_seeds(grid, ext, {opts.continuation ? &warm : nullptr}),
          opts.solver);
      rep.rows.push_back(make_row(r, opts.tol_Z, "list"));
      if (opts.continuation) warm = std::move(r);
    } catch (const Infeasible&) {
      rep.rows.push_back(failed_row(lambda, "infeasible", "list"));
    } catch (const std::exception& ex) {
      rep.rows.push_back(failed_row(lambda, std::string("error: ") + ex.what(), "list"));
    }
  }
  std::sort(rep.rows.begin(), rep.rows.end(),
            [](const ScanRow& x, const ScanRow& y) { return x.lambda < y.lambda; });
  return rep;
}

void write_scan_csv(const std::filesystem::path& path, const ScanReport& report) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  os << "lambda,status,phi,P,phi2,residual,Iz_fraction,compact_support,periodically_trivial,in_Z,origin\n";
  os << std::setprecision(17);
  for (const ScanRow& r : report.rows) {
    os << r.lambda << ',' << '"' << r.status << '"' << ',' << r.phi << ',' << r.P << ',' << r.phi2
       << ',' << r.residual << ',' << r.Iz_fraction << ',' << r.compact_support << ','
       << r.periodically_trivial << ',' << r.in_Z << ',' << r.origin << '\n';
  }
}

nlohmann::json to_json(const ScanReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const ScanRow& r : report.rows) {
    rows.push_back({{"lambda", r.lambda},
                    {"status", r.status},
                    {"phi", r.phi},
                    {"P", r.P},
                    {"phi2", r.phi2},
                    {"residual", r.residual},
                    {"Iz_fraction", r.Iz_fraction},
                    {"compact_support", r.compact_support},
                    {"periodically_trivial", r.periodically_trivial},
                    {"in_Z", r.in_Z},
                    {"origin", r.origin}});
  }
  return {{"lambda_1P", report.lambda_1P},
          {"lambda_0T", report.lambda_0T},
          {"lambda_0Omega", report.lambda_0Omega},
          {"lambda_star", report.lambda_star},
          {"bracket", {report.bracket_lo, report.bracket_hi}},
          {"bisection_steps", report.bisection_steps},
          {"bracket_widths", report.bracket_widths},
          {"multiple_sign_changes", report.multiple_sign_changes},
          {"mode", report.mode},
          {"rows", rows}};
}

}  // namespace compacton
