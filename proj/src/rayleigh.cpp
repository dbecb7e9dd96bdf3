#include "compacton/rayleigh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "compacton/dual.hpp"
#include "compacton/error.hpp"
#include "compacton/optimizer.hpp"

namespace compacton {
namespace {

void require_positive(const IntegralBundle& b) {
  if (!(b.I2 > 0.0) || !(b.S_q > 0.0) || !(b.S_p > 0.0))
    throw DegenerateBundle("quotient requires I2 > 0, S_q > 0 and S_p > 0");
}

using D4 = Dual<4>;

D4 quotient_dual(QuotientKind k, const IntegralBundle& b, const Exponents& e) {
  const D4 Ix = D4::variable(b.I_x, 0);
  const D4 Iz = D4::variable(b.I_z, 1);
  const D4 Sq = D4::variable(b.S_q, 2);
  const D4 Sp = D4::variable(b.S_p, 3);
  switch (k) {
    case QuotientKind::lambda0:
    case QuotientKind::lambda0_omega:
      return formulas::lambda0(Ix, Iz, Sq, Sp, e);
    case QuotientKind::lambda1P:
    case QuotientKind::Lambda1P_omega:
      return formulas::lambda1P(Ix, Iz, Sq, Sp, e);
  }
  return D4{};
}

}  // namespace

Quotients quotients(const IntegralBundle& b, double t, const Exponents& e) {
  if (!(b.S_p > 0.0)) throw DegenerateBundle("Rayleigh quotients need S_p > 0");
  if (!(t > 0.0)) throw InvalidArgument("ray parameter t must be positive");
  return {formulas::R0(b.I2, b.S_q, b.S_p, t, e), formulas::R1(b.I2, b.S_q, b.S_p, t, e),
          formulas::RP(b.I_x, b.I_z, b.S_q, b.S_p, t, e)};
}

FiberDiagnostics scale_factors(const IntegralBundle& b, const Exponents& e) {
  require_positive(b);
  FiberDiagnostics d;
  d.t0 = formulas::t0(b.I2, b.S_q, e);
  d.t1 = formulas::t1(b.I2, b.S_q, e);
  d.tP = formulas::tP(b.I_x, b.I_z, b.S_q, e);
  d.t1P = formulas::t1P(b.I_x, b.I_z, b.S_q, e);
  d.lambda0_u = formulas::R0(b.I2, b.S_q, b.S_p, d.t0, e);
  d.lambda1P_u = formulas::R1(b.I2, b.S_q, b.S_p, d.t1P, e);
  d.lambda1_u = formulas::R1(b.I2, b.S_q, b.S_p, d.t1, e);
  return d;
}

double lambda0_of(const IntegralBundle& b, const Exponents& e) {
  require_positive(b);
  return formulas::lambda0(b.I_x, b.I_z, b.S_q, b.S_p, e);
}

double lambda1P_of(const IntegralBundle& b, const Exponents& e) {
  require_positive(b);
  return formulas::lambda1P(b.I_x, b.I_z, b.S_q, b.S_p, e);
}

double lambda1_of(const IntegralBundle& b, const Exponents& e) {
  require_positive(b);
  return formulas::R1(b.I2, b.S_q, b.S_p, formulas::t1(b.I2, b.S_q, e), e);
}

double lambda0_constant(const Exponents& e) {
  const double q = e.q, p = e.p;
  const double a = (p - q) / (1.0 - q);
  const double b = (1.0 - p) / (1.0 - q);
  const double A = 2.0 * (p - q) / ((1.0 - p) * (q + 1.0));
  return (p + 1.0) * (0.5 * std::pow(A, b) + std::pow(A, -a) / (q + 1.0));
}

double lambda1P_constant_zconst(const Exponents& e) {
  const double q = e.q, p = e.p, ts = e.two_star();
  const double a = (p - q) / (1.0 - q);
  const double b = (1.0 - p) / (1.0 - q);
  const double k = (p - q) * ts / ((q + 1.0) * (ts - p - 1.0));
  return std::pow(k, b) + std::pow(k, -a);
}

BundleGradient bundle_gradient(const Field& u, const Exponents& e) {
  BundleGradient out{integrals(u, e.q, e.p), Field(u.grid_ptr()), Field(u.grid_ptr()),
                     Field(u.grid_ptr()), Field(u.grid_ptr())};
  stiffness_parts(u, out.d_Iz, out.d_Ix);
  const Grid& g = u.grid();
  for (int i = 0; i < g.nz(); ++i) {
    for (int j = 0; j < g.nr(); ++j) {
      const double W = g.weight(j);
      out.d_Iz(i, j) *= 2.0 * W;
      out.d_Ix(i, j) *= 2.0 * W;
      const double v = u(i, j);
      const double a = std::abs(v);
      if (a > 0.0) {
        out.d_Sq(i, j) = std::copysign((e.q + 1.0) * W * std::pow(a, e.q), v);
        out.d_Sp(i, j) = std::copysign((e.p + 1.0) * W * std::pow(a, e.p), v);
      }
    }
  }
  return out;
}

std::string to_string(QuotientKind k) {
  switch (k) {
    case QuotientKind::lambda0: return "lambda0";
    case QuotientKind::lambda1P: return "lambda1P";
    case QuotientKind::lambda0_omega: return "lambda0_omega";
    case QuotientKind::Lambda1P_omega: return "Lambda1P_omega";
  }
  return "?";
}

QuotientKind quotient_kind_from_string(const std::string& s) {
  for (auto k : {QuotientKind::lambda0, QuotientKind::lambda1P, QuotientKind::lambda0_omega,
                 QuotientKind::Lambda1P_omega})
    if (to_string(k) == s) return k;
  throw InvalidArgument("unknown quotient '" + s + "'");
}

bool is_z_constant_kind(QuotientKind k) {
  return k == QuotientKind::lambda0_omega || k == QuotientKind::Lambda1P_omega;
}

double quotient_value(QuotientKind k, const IntegralBundle& b, const Exponents& e) {
  require_positive(b);
  return quotient_dual(k, b, e).v;
}

double quotient_with_gradient(QuotientKind k, const Field& u, const Exponents& e, Field& grad) {
  const BundleGradient bg = bundle_gradient(u, e);
  require_positive(bg.bundle);
  const D4 q = quotient_dual(k, bg.bundle, e);
  grad = Field(u.grid_ptr());
  grad.axpy(q.d[0], bg.d_Ix);
  grad.axpy(q.d[1], bg.d_Iz);
  grad.axpy(q.d[2], bg.d_Sq);
  grad.axpy(q.d[3], bg.d_Sp);
  return q.v;
}

QuotientResult minimize_quotient(QuotientKind which, const GridPtr& grid, const Exponents& e,
                                 const std::vector<Field>& seeds, const QuotientOptions& opts) {
  if (seeds.empty()) throw InvalidArgument("minimize_quotient needs at least one seed");
  const bool zconst = is_z_constant_kind(which);
  const Preconditioner precond(grid, opts.mu);

  Problem problem;
  problem.objective = [&](const Field& x, double& f, Field* grad) {
    const IntegralBundle b = integrals(x, e.q, e.p);
    if (!(b.I2 > 0.0) || !(b.S_q > 0.0) || !(b.S_p > 0.0)) return false;
    if (grad == nullptr) {
      f = quotient_value(which, b, e);
    } else {
      f = quotient_with_gradient(which, x, e, *grad);
    }
    return std::isfinite(f);
  };
  problem.retract = [zconst](Field& x) {
    x = x.abs();
    if (zconst) x.make_z_constant();
  };
  if (zconst) problem.project = [](Field& d) { d.make_z_constant(); };

  MinimizeOptions mopts;
  mopts.max_iters = opts.max_iters;
  mopts.tol_grad = opts.tol_grad;
  mopts.tol_value = opts.tol_value;
  mopts.memory = opts.memory;

  QuotientResult best;
  best.which = which;
  best.value = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < seeds.size(); ++s) {
    Field x0 = seeds[s];
    problem.retract(x0);
    double f0 = 0.0;
    if (!problem.objective(x0, f0, nullptr)) {
      best.seed_values.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    best.seed_values.push_back(f0);
    const MinimizeResult r = minimize(problem, x0, precond, mopts);
    if (r.value < best.value) {
      best.value = r.value;
      best.minimizer = r.x;
      best.iterations = r.iterations;
      best.seed_index = static_cast<int>(s);
      best.converged = r.converged;
      best.grad_norm = r.grad_norm;
    }
  }
  if (best.seed_index < 0) throw DegenerateBundle("no seed gives a nondegenerate quotient");
  return best;
}

std::vector<Field> default_seeds(const GridPtr& grid) {
  const double R = grid->R();
  const double T = grid->T();
  auto bump = [R](double r) {
    const double s = std::max(0.0, 1.0 - r / R);
    return s * s;
  };
  std::vector<Field> seeds;
  seeds.push_back(Field::sample(grid, [&](double, double r) { return bump(r); }));
  seeds.push_back(Field::sample(grid, [&](double z, double r) {
    return bump(r) * (1.0 + std::cos(std::numbers::pi * z / T));
  }));
  return seeds;
}

nlohmann::json to_json(const QuotientResult& r, const std::string& minimizer_file) {
  return {{"which", to_string(r.which)},
          {"value", r.value},
          {"iterations", r.iterations},
          {"seed_index", r.seed_index},
          {"converged", r.converged},
          {"grad_norm", r.grad_norm},
          {"seed_values", r.seed_values},
          {"minimizer_file", minimizer_file}};
}

}  // namespace compacton
