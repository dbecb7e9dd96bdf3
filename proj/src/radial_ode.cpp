#include "compacton/radial_ode.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "compacton/error.hpp"

namespace compacton {
namespace {

using real = long double;

struct Rhs {
  int M;
  real q;
  real p;

  real source(real psi) const {
    const real a = std::fabs(psi);
    if (a == 0.0L) return 0.0L;
    const real mag = std::pow(a, p) - std::pow(a, q);
    return psi > 0.0L ? mag : -mag;
  }
  // Returns psi''.
  real operator()(real r, real psi, real dpsi) const {
    if (r == 0.0L) return -source(psi) / M;
    return -(M - 1) / r * dpsi - source(psi);
  }
};

// Dormand-Prince 5(4) tableau.
constexpr real c2 = 1.0L / 5, c3 = 3.0L / 10, c4 = 4.0L / 5, c5 = 8.0L / 9;
constexpr real a21 = 1.0L / 5;
constexpr real a31 = 3.0L / 40, a32 = 9.0L / 40;
constexpr real a41 = 44.0L / 45, a42 = -56.0L / 15, a43 = 32.0L / 9;
constexpr real a51 = 19372.0L / 6561, a52 = -25360.0L / 2187, a53 = 64448.0L / 6561,
               a54 = -212.0L / 729;
constexpr real a61 = 9017.0L / 3168, a62 = -355.0L / 33, a63 = 46732.0L / 5247,
               a64 = 49.0L / 176, a65 = -5103.0L / 18656;
constexpr real b1 = 35.0L / 384, b3 = 500.0L / 1113, b4 = 125.0L / 192, b5 = -2187.0L / 6784,
               b6 = 11.0L / 84;
constexpr real e1 = 71.0L / 57600, e3 = -71.0L / 16695, e4 = 71.0L / 1920,
               e5 = -17253.0L / 339200, e6 = 22.0L / 525, e7 = -1.0L / 40;

struct Step {
  real psi;
  real dpsi;
  real err_psi;
  real err_dpsi;
};

Step dp_step(const Rhs& f, real r, real y0, real y1, real h) {
  // y0 = psi, y1 = psi'; psi' derivative is y1, psi'' from f.
  const real k1a = y1, k1b = f(r, y0, y1);
  real u0 = y0 + h * a21 * k1a, u1 = y1 + h * a21 * k1b;
  const real k2a = u1, k2b = f(r + c2 * h, u0, u1);
  u0 = y0 + h * (a31 * k1a + a32 * k2a);
  u1 = y1 + h * (a31 * k1b + a32 * k2b);
  const real k3a = u1, k3b = f(r + c3 * h, u0, u1);
  u0 = y0 + h * (a41 * k1a + a42 * k2a + a43 * k3a);
  u1 = y1 + h * (a41 * k1b + a42 * k2b + a43 * k3b);
  const real k4a = u1, k4b = f(r + c4 * h, u0, u1);
  u0 = y0 + h * (a51 * k1a + a52 * k2a + a53 * k3a + a54 * k4a);
  u1 = y1 + h * (a51 * k1b + a52 * k2b + a53 * k3b + a54 * k4b);
  const real k5a = u1, k5b = f(r + c5 * h, u0, u1);
  u0 = y0 + h * (a61 * k1a + a62 * k2a + a63 * k3a + a64 * k4a + a65 * k5a);
  u1 = y1 + h * (a61 * k1b + a62 * k2b + a63 * k3b + a64 * k4b + a65 * k5b);
  const real k6a = u1, k6b = f(r + h, u0, u1);
  Step s;
  s.psi = y0 + h * (b1 * k1a + b3 * k3a + b4 * k4a + b5 * k5a + b6 * k6a);
  s.dpsi = y1 + h * (b1 * k1b + b3 * k3b + b4 * k4b + b5 * k5b + b6 * k6b);
  const real k7a = s.dpsi, k7b = f(r + h, s.psi, s.dpsi);
  s.err_psi = h * (e1 * k1a + e3 * k3a + e4 * k4a + e5 * k5a + e6 * k6a + e7 * k7a);
  s.err_dpsi = h * (e1 * k1b + e3 * k3b + e4 * k4b + e5 * k5b + e6 * k6b + e7 * k7b);
  return s;
}


// Replaces the part of a compacton profile below psi_anchor by the tail of the
// first integral. Beyond the anchor psi'^2 = 2 (V(psi) + E) with
// V(s) = s^{q+1}/(q+1) - s^{p+1}/(p+1), and E decays like (R - r)^{2 kappa - 1},
// so with s = psi_0 y^kappa the remaining length is a regular integral in y.
void attach_tail(ShootResult& out, const Rhs& f, double psi_anchor) {
  auto& pr = out.profile;
  std::size_t k = pr.size() - 1;
  while (k > 0 && !(pr[k].psi >= psi_anchor && pr[k].dpsi < 0.0)) --k;
  if (k == 0) k = pr.size() - 2;
  const ProfilePoint anchor = pr[k];
  pr.resize(k + 1);

  const real q = f.q, p = f.p;
  const real kappa = 2.0L / (1.0L - q);
  const real psi0 = anchor.psi;
  auto V = [&](real s) { return std::pow(s, q + 1) / (q + 1) - std::pow(s, p + 1) / (p + 1); };
  const real E0 = 0.5L * static_cast<real>(anchor.dpsi) * anchor.dpsi - V(psi0);

  // y = w^m smooths the y^{kappa (p - q)} term at the origin.
  const int m = std::max(1, static_cast<int>(std::ceil(3.0L / (kappa * (p - q)))));
  auto speed2 = [&](real y) {  // psi'^2 / y^{2 kappa - 2}
    return 2.0L * (std::pow(psi0, q + 1) / (q + 1) -
                   std::pow(psi0, p + 1) * std::pow(y, kappa * (p - q)) / (p + 1) + E0 * y);
  };
  auto integrand = [&](real w) {
    if (w <= 0.0L) return 0.0L;
    const real y = std::pow(w, static_cast<real>(m));
    const real dy = m * std::pow(w, static_cast<real>(m - 1));
    return psi0 * kappa * dy / std::sqrt(std::max(speed2(y), std::numeric_limits<real>::min()));
  };

  // Cumulative length from the edge, Simpson on panels in w.
  constexpr int panels = 2048;
  constexpr int every = 32;
  std::vector<real> w_at, len_at;
  real acc = 0.0L;
  w_at.push_back(0.0L);
  len_at.push_back(0.0L);
  for (int j = 0; j < panels; ++j) {
    const real a = static_cast<real>(j) / panels, b = static_cast<real>(j + 1) / panels;
    acc += (b - a) / 6.0L * (integrand(a) + 4.0L * integrand(0.5L * (a + b)) + integrand(b));
    if ((j + 1) % every == 0) {
      w_at.push_back(b);
      len_at.push_back(acc);
    }
  }
  const real R = anchor.r + acc;
  for (std::size_t i = w_at.size() - 1; i-- > 0;) {
    const real y = std::pow(w_at[i], static_cast<real>(m));
    const real s = psi0 * std::pow(y, kappa);
    const real ds = y > 0.0L ? -std::sqrt(std::max(std::pow(y, 2 * kappa - 2) * speed2(y), 0.0L)) : 0.0L;
    pr.push_back({static_cast<double>(R - len_at[i]), static_cast<double>(s), static_cast<double>(ds)});
  }
  out.R_M = static_cast<double>(R);
}

}  // namespace

std::string to_string(ShootClass c) {
  switch (c) {
    case ShootClass::compacton: return "compacton";
    case ShootClass::overshoot: return "overshoot";
    case ShootClass::undershoot: return "undershoot";
  }
  return "?";
}

double ShootResult::max_psi() const {
  double m = 0.0;
  for (const auto& pt : profile) m = std::max(m, pt.psi);
  return m;
}

ShootResult shoot(double a, int M, double q, double p, const ShootOptions& opts) {
  if (!(a > 0.0)) throw InvalidArgument("initial height must be positive");
  if (M < 1) throw InvalidArgument("dimension M must be >= 1");
  if (!(q > 0.0 && q < p && p < 1.0)) throw InvalidArgument("exponents must satisfy 0 < q < p < 1");

  const Rhs f{M, q, p};
  ShootResult out;
  out.a = a;
  out.M = M;
  out.q = q;
  out.p = p;
  const real tol = opts.tol_shoot * a;
  real r = 0.0L, psi = a, dpsi = 0.0L;
  out.profile.push_back({0.0, a, 0.0});
  real h = 1e-4L * std::max(1.0L, static_cast<real>(a));
  for (long step = 0; step < opts.max_steps; ++step) {
    if (r >= opts.r_max) break;
    const Step s = dp_step(f, r, psi, dpsi, h);
    const real sc0 = opts.atol + opts.rtol * std::max(std::fabs(psi), std::fabs(s.psi));
    const real sc1 = opts.atol + opts.rtol * std::max(std::fabs(dpsi), std::fabs(s.dpsi));
    const real err = std::sqrt(0.5L * (std::pow(s.err_psi / sc0, 2) + std::pow(s.err_dpsi / sc1, 2)));
    if (!(err <= 1.0L) || !std::isfinite(static_cast<double>(s.psi))) {
      const real fac = std::isfinite(static_cast<double>(err))
                           ? std::max(0.1L, 0.9L * std::pow(err, -0.2L))
                           : 0.1L;
      h *= std::min(fac, 0.9L);
      if (h < 1e-15L * std::max(r, 1e-3L))
        throw IntegratorFailure("step size underflow at r = " + std::to_string(static_cast<double>(r)));
      continue;
    }
    r += h;
    psi = s.psi;
    dpsi = s.dpsi;
    out.profile.push_back({static_cast<double>(r), static_cast<double>(psi), static_cast<double>(dpsi)});

    const bool near_origin = psi * psi + dpsi * dpsi <= tol * tol;
    if (near_origin && psi >= -tol) {
      out.classification = ShootClass::compacton;
      out.res_psi = static_cast<double>(std::fabs(psi));
      out.res_dpsi = static_cast<double>(std::fabs(dpsi));
      attach_tail(out, f, opts.tail_fraction * a);
      return out;
    }
    if (psi <= 0.0L) {
      out.classification = ShootClass::overshoot;
      out.R_M = static_cast<double>(r);
      out.res_psi = static_cast<double>(std::fabs(psi));
      out.res_dpsi = static_cast<double>(std::fabs(dpsi));
      return out;
    }
    if (dpsi >= 0.0L) {
      out.classification = ShootClass::undershoot;
      out.R_M = static_cast<double>(r);
      out.res_psi = static_cast<double>(std::fabs(psi));
      out.res_dpsi = static_cast<double>(std::fabs(dpsi));
      return out;
    }
    const real fac = err > 0.0L ? std::min(5.0L, std::max(0.2L, 0.9L * std::pow(err, -0.2L))) : 5.0L;
    h *= fac;
  }
  out.classification = ShootClass::undershoot;
  out.R_M = static_cast<double>(r);
  out.res_psi = static_cast<double>(std::fabs(psi));
  out.res_dpsi = static_cast<double>(std::fabs(dpsi));
  return out;
}

ShootResult find_compacton(int M, double q, double p, const ShootOptions& opts) {
  double lo = 1.0;
  double hi = opts.a_hi;
  ShootResult top = shoot(hi, M, q, p, opts);
  if (top.classification == ShootClass::compacton) return top;
  if (top.classification != ShootClass::overshoot)
    throw BracketFailure("initial height a_hi = " + std::to_string(hi) + " does not overshoot");
  ShootResult best = top;
  double best_miss = std::hypot(top.res_psi, top.res_dpsi);
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    ShootResult s = shoot(mid, M, q, p, opts);
    s.bisection_steps = k + 1;
    if (s.classification == ShootClass::compacton) return s;
    const double miss = std::hypot(s.res_psi, s.res_dpsi);
    if (miss < best_miss) {
      best = s;
      best_miss = miss;
    }
    if (s.classification == ShootClass::overshoot) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  best.bisection_steps = 200;
  return best;
}

ProfilePoint profile_at(const ShootResult& base, double r) {
  const auto& pr = base.profile;
  if (r <= 0.0) return pr.front();
  if (r >= pr.back().r) {
    if (base.classification == ShootClass::compacton) return {r, 0.0, 0.0};
    return pr.back();
  }
  const auto it = std::upper_bound(pr.begin(), pr.end(), r,
                                   [](double x, const ProfilePoint& pt) { return x < pt.r; });
  const ProfilePoint& A = *(it - 1);
  const ProfilePoint& B = *it;
  const double h = B.r - A.r;
  const double t = (r - A.r) / h;
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
  const double psi = h00 * A.psi + h10 * h * A.dpsi + h01 * B.psi + h11 * h * B.dpsi;
  const double d00 = (6 * t2 - 6 * t) / h, d10 = 3 * t2 - 4 * t + 1;
  const double d01 = (-6 * t2 + 6 * t) / h, d11 = 3 * t2 - 2 * t;
  const double dpsi = d00 * A.psi + d10 * A.dpsi + d01 * B.psi + d11 * B.dpsi;
  return {r, psi, dpsi};
}

double first_integral(const ProfilePoint& pt, double q, double p) {
  const double a = std::abs(pt.psi);
  return 0.5 * pt.dpsi * pt.dpsi + std::pow(a, p + 1.0) / (p + 1.0) -
         std::pow(a, q + 1.0) / (q + 1.0);
}

Rescaling rescale(const ShootResult& base, double R_target) {
  if (!(R_target > 0.0)) throw InvalidArgument("target radius must be positive");
  if (!(base.R_M > 0.0)) throw InvalidArgument("base profile has no support radius");
  Rescaling s;
  s.sigma = R_target / base.R_M;
  s.lambda_R = std::pow(s.sigma, -2.0 * (base.p - base.q) / (1.0 - base.q));
  s.amplitude_factor = std::pow(s.sigma, 2.0 / (1.0 - base.q));
  return s;
}

double lambda_star_ball(const ShootResult& base, double R) {
  return rescale(base, R).lambda_R;
}

Field embed(const ShootResult& base, double R_target, const GridPtr& grid) {
  if (R_target > grid->R()) throw InvalidArgument("target radius exceeds the cylinder radius");
  if (base.M != grid->N()) throw InvalidArgument("profile dimension does not match the grid");
  const Rescaling s = rescale(base, R_target);
  Field u(grid);
  for (int j = 0; j < grid->nr(); ++j) {
    const double r = grid->r(j);
    const double v = r < R_target ? s.amplitude_factor * profile_at(base, r / s.sigma).psi : 0.0;
    for (int i = 0; i < grid->nz(); ++i) u(i, j) = std::max(v, 0.0);
  }
  return u;
}

nlohmann::json to_json(const ShootResult& r) {
  return {{"a", r.a},
          {"M", r.M},
          {"q", r.q},
          {"p", r.p},
          {"R_M", r.R_M},
          {"classification", to_string(r.classification)},
          {"res_psi", r.res_psi},
          {"res_dpsi", r.res_dpsi},
          {"max_psi", r.max_psi()},
          {"bisection_steps", r.bisection_steps},
          {"profile_points", r.profile.size()},
          {"within_theorem", r.within_theorem()}};
}

}  // namespace compacton
