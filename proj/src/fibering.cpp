#include "compacton/fibering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "compacton/error.hpp"
#include "compacton/lambda_scan.hpp"
#include "compacton/optimizer.hpp"
#include "compacton/rayleigh.hpp"
#include "compacton/sparse.hpp"

namespace compacton {
namespace {

double r1(const IntegralBundle& b, double t, const Exponents& e) {
  return formulas::R1(b.I2, b.S_q, b.S_p, t, e);
}

// Root of R^1(t) = lambda between lo and hi, where R^1 - lambda changes sign.
double bisect_ray(const IntegralBundle& b, double lambda, double lo, double hi,
                  const Exponents& e, double tol) {
  const bool lo_positive = r1(b, lo, e) > lambda;
  for (int k = 0; k < 400 && hi - lo > tol * hi; ++k) {
    const double mid = std::sqrt(lo * hi);
    const double m = (mid > lo && mid < hi) ? mid : 0.5 * (lo + hi);
    if ((r1(b, m, e) > lambda) == lo_positive) {
      lo = m;
    } else {
      hi = m;
    }
  }
  return 0.5 * (lo + hi);
}

Field weighted(const Field& f) {
  Field out = f;
  const Grid& g = f.grid();
  for (int i = 0; i < g.nz(); ++i)
    for (int j = 0; j <= g.nr(); ++j) out(i, j) *= g.weight(j);
  return out;
}

// Newton iteration on Phi from a point with P < 0; keeps nonnegativity.
Field newton_polish(Field u, double lambda, const Exponents& e, const SolverOptions& opts,
                    int& iterations) {
  iterations = 0;
  Field F = first_variation(u, lambda, e);
  double res = residual_norm(F);
  const IntegralBundle b0 = integrals(u, e.q, e.p);
  double phi = energy(b0, lambda, e);
  const double noise = 1e-14 * (b0.I2 + b0.S_q);
  for (int it = 0; it < opts.newton_iters && res > 0.25 * opts.tol_res; ++it) {
    const Field g = weighted(F);
    Field d;
    if (!newton_direction(u, g, lambda, e, d)) break;
    const double slope = weighted_dot(F, d);
    if (!(slope < 0.0)) break;
    bool accepted = false;
    double alpha = 1.0;
    for (int ls = 0; ls < 40; ++ls, alpha *= 0.5) {
      Field trial = u;
      trial.axpy(alpha, d);
      trial = trial.abs();
      const double phi_t = energy(integrals(trial, e.q, e.p), lambda, e);
      const Field F_t = first_variation(trial, lambda, e);
      const double res_t = residual_norm(F_t);
      const bool armijo = phi_t <= phi + 1e-4 * alpha * slope;
      const bool flat = phi_t <= phi + noise && res_t < res;
      if (armijo || flat) {
        u = std::move(trial);
        F = F_t;
        res = res_t;
        phi = phi_t;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    iterations = it + 1;
  }
  return u;
}

}  // namespace

double nehari_g(const IntegralBundle& b, double lambda, double t, const Exponents& e) {
  return std::pow(t, 1.0 - e.q) * b.I2 - lambda * std::pow(t, e.p - e.q) * b.S_p + b.S_q;
}

NehariRoots nehari_roots(const IntegralBundle& b, double lambda, const Exponents& e,
                         double tol_root) {
  if (!(b.I2 > 0.0) || !(b.S_q > 0.0) || !(b.S_p > 0.0))
    throw DegenerateBundle("Nehari roots need I2, S_q, S_p > 0");
  NehariRoots out;
  out.t1 = formulas::t1(b.I2, b.S_q, e);
  out.lambda_min_ray = r1(b, out.t1, e);
  if (lambda < out.lambda_min_ray * (1.0 - tol_root)) return out;
  if (lambda <= out.lambda_min_ray * (1.0 + tol_root)) {
    out.t_star = out.t1;
    out.t_tilde = out.t1;
    return out;
  }
  double lo = out.t1;
  while (r1(b, lo, e) <= lambda) lo *= 0.5;
  double hi = out.t1;
  while (r1(b, hi, e) <= lambda) hi *= 2.0;
  const double tol = std::min(tol_root, 1e-15);
  out.t_star = bisect_ray(b, lambda, lo, out.t1, e, tol);
  out.t_tilde = bisect_ray(b, lambda, out.t1, hi, e, tol);
  return out;
}

std::optional<Field> project_to_M(const Field& v, double lambda, const Exponents& e) {
  const IntegralBundle b = integrals(v, e.q, e.p);
  if (!(b.I2 > 0.0) || !(b.S_q > 0.0) || !(b.S_p > 0.0)) return std::nullopt;
  const NehariRoots roots = nehari_roots(b, lambda, e);
  if (!roots.t_tilde) return std::nullopt;
  const double t1P = formulas::t1P(b.I_x, b.I_z, b.S_q, e);
  if (*roots.t_tilde < t1P * (1.0 - 1e-12)) return std::nullopt;
  return *roots.t_tilde * v;
}

SolveResult evaluate_solution(const Field& u, double lambda, const Exponents& e,
                              const SolverOptions& opts) {
  SolveResult r;
  r.u = u;
  r.lambda = lambda;
  r.bundle = integrals(u, e.q, e.p);
  r.phi = energy(r.bundle, lambda, e);
  r.P = pohozaev(r.bundle, lambda, e);
  r.phi1 = fiber_phi1(r.bundle, lambda);
  r.phi2 = fiber_phi2(r.bundle, lambda, e);
  r.residual = residual_norm(first_variation(u, lambda, e));
  const double scale = r.bundle.I2 + r.bundle.S_q;
  r.feasible = scale > 0.0 && std::abs(r.phi1) <= opts.tol_root * scale &&
               r.P <= opts.tol_P * scale;
  classify(r, opts);
  return r;
}

SolveResult minimize_constrained(double lambda, const GridPtr& grid, const Exponents& e,
                                 const std::vector<Field>& seeds, const SolverOptions& opts) {
  if (seeds.empty()) throw InvalidArgument("minimize_constrained needs at least one seed");
  const Preconditioner precond(grid, opts.mu);
  const double margin = 1e-12 * std::abs(lambda);

  Problem J;
  J.objective = [&](const Field& v, double& f, Field* grad) {
    const IntegralBundle b = integrals(v, e.q, e.p);
    if (!(b.I2 > 0.0) || !(b.S_q > 0.0) || !(b.S_p > 0.0)) return false;
    const NehariRoots roots = nehari_roots(b, lambda, e, opts.tol_root);
    if (!roots.t_tilde) return false;
    const double t = *roots.t_tilde;
    f = energy(scale_bundle(b, t, e), lambda, e);
    if (grad != nullptr) {
      *grad = weighted(first_variation(t * v, lambda, e));
      *grad *= t;
    }
    return true;
  };
  J.constraint = [&](const Field& v, double& c, Field* grad) {
    const IntegralBundle b = integrals(v, e.q, e.p);
    if (!(b.I2 > 0.0) || !(b.S_q > 0.0) || !(b.S_p > 0.0)) return false;
    if (grad == nullptr) {
      c = lambda1P_of(b, e) - lambda;
    } else {
      c = quotient_with_gradient(QuotientKind::lambda1P, v, e, *grad) - lambda;
    }
    return true;
  };
  J.retract = [](Field& v) { v = v.abs(); };

  Problem Q;
  Q.objective = J.constraint;
  Q.retract = J.retract;

  SolveResult best;
  best.phi = std::numeric_limits<double>::infinity();
  std::vector<double> seed_energies;
  for (std::size_t s = 0; s < seeds.size(); ++s) {
    Field v = seeds[s].abs();
    const IntegralBundle b0 = integrals(v, e.q, e.p);
    if (!(b0.I2 > 0.0) || !(b0.S_q > 0.0) || !(b0.S_p > 0.0)) {
      seed_energies.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    if (auto u0 = project_to_M(v, lambda, e)) {
      seed_energies.push_back(energy(integrals(*u0, e.q, e.p), lambda, e));
    } else {
      seed_energies.push_back(std::numeric_limits<double>::quiet_NaN());
      // Reduce lambda1P along the seed's basin until the ray becomes feasible.
      MinimizeOptions qopts;
      qopts.max_iters = opts.max_iters;
      qopts.tol_grad = 1e-10;
      qopts.memory = opts.memory;
      qopts.target = -margin;
      const MinimizeResult qr = minimize(Q, v, precond, qopts);
      if (!(qr.value <= 0.0)) continue;
      v = qr.x;
    }

    MinimizeOptions mopts;
    mopts.max_iters = opts.max_iters;
    mopts.tol_grad = opts.tol_grad;
    mopts.tol_value = opts.tol_J;
    mopts.memory = opts.memory;
    mopts.constraint_margin = margin;
    {
      double f0 = 0.0;
      Field v0 = v;
      if (J.objective(v0, f0, nullptr)) {
        const IntegralBundle bb = integrals(v0, e.q, e.p);
        const auto roots = nehari_roots(bb, lambda, e, opts.tol_root);
        if (roots.t_tilde) mopts.value_scale = 1e-3 * scale_bundle(bb, *roots.t_tilde, e).I2;
      }
    }
    const MinimizeResult mr = minimize(J, v, precond, mopts);
    if (!std::isfinite(mr.value)) continue;
    auto u = project_to_M(mr.x, lambda, e);
    if (!u) continue;

    int newton_its = 0;
    if (opts.newton_polish) {
      const IntegralBundle bu = integrals(*u, e.q, e.p);
      const double tolP = opts.tol_P * (bu.I2 + bu.S_q);
      if (pohozaev(bu, lambda, e) < -tolP &&
          residual_norm(first_variation(*u, lambda, e)) > opts.tol_res) {
        Field polished = newton_polish(*u, lambda, e, opts, newton_its);
        if (auto up = project_to_M(polished, lambda, e)) {
          const IntegralBundle bp = integrals(*up, e.q, e.p);
          const double phi_old = energy(bu, lambda, e);
          const double phi_new = energy(bp, lambda, e);
          if (phi_new <= phi_old + 1e-12 * (bu.I2 + bu.S_q) &&
              pohozaev(bp, lambda, e) < -opts.tol_P * (bp.I2 + bp.S_q))
            u = std::move(up);
        }
      }
    }

    SolveResult r = evaluate_solution(*u, lambda, e, opts);
    r.converged = mr.converged;
    r.constraint_active = mr.constraint_active;
    r.iterations = mr.iterations;
    r.newton_iterations = newton_its;
    r.seed_index = static_cast<int>(s);
    if (r.feasible && r.phi < best.phi) best = std::move(r);
  }
  best.seed_energies = std::move(seed_energies);
  if (best.seed_index < 0)
    throw Infeasible("no seed admits a feasible point on the constrained Nehari set at lambda = " +
                     std::to_string(lambda));
  return best;
}

nlohmann::json to_json(const SolveResult& r, const std::string& field_file) {
  return {{"lambda", r.lambda},
          {"phi", r.phi},
          {"P", r.P},
          {"phi1", r.phi1},
          {"phi2", r.phi2},
          {"residual", r.residual},
          {"integrals",
           {{"I_x", r.bundle.I_x},
            {"I_z", r.bundle.I_z},
            {"I2", r.bundle.I2},
            {"S_q", r.bundle.S_q},
            {"S_p", r.bundle.S_p}}},
          {"Iz_fraction", r.Iz_fraction},
          {"wall_flux_max", r.wall_flux_max},
          {"support_radius", r.support_radius},
          {"flags",
           {{"compact_support", r.compact_support},
            {"periodically_trivial", r.periodically_trivial},
            {"feasible", r.feasible},
            {"converged", r.converged},
            {"constraint_active", r.constraint_active}}},
          {"iterations", r.iterations},
          {"newton_iterations", r.newton_iterations},
          {"seed_index", r.seed_index},
          {"seed_energies", r.seed_energies},
          {"field_file", field_file}};
}

}  // namespace compacton
