#include "compacton/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace compacton {
namespace {

double dot(const Field& a, const Field& b) {
  const auto va = a.values();
  const auto vb = b.values();
  double s = 0.0;
  for (std::size_t k = 0; k < va.size(); ++k) s += va[k] * vb[k];
  return s;
}

struct Pair {
  Field s;
  Field y;
  double rho;
};

struct State {
  Field x;
  double f = 0.0;
  Field g;
  double c = 0.0;
  Field gc;
};

class Engine {
 public:
  Engine(const Problem& problem, const Preconditioner& precond, const MinimizeOptions& opts)
      : pb_(problem), P_(precond), opts_(opts) {}

  MinimizeResult run(Field x0);

 private:
  void retract(Field& x) const {
    if (pb_.retract) pb_.retract(x);
  }
  void project(Field& d) const {
    if (pb_.project) pb_.project(d);
  }
  Field precondition(const Field& g) const {
    Field d = P_.apply(g);
    project(d);
    return d;
  }
  void normalize(Field& x) const {
    const double n = std::sqrt(P_.norm2(x));
    if (n > 0.0) x *= 1.0 / n;
  }
  bool has_constraint() const { return static_cast<bool>(pb_.constraint); }

  bool evaluate(State& s, bool with_grad) {
    ++evals_;
    if (!pb_.objective(s.x, s.f, with_grad ? &s.g : nullptr)) return false;
    if (with_grad) project(s.g);
    if (has_constraint()) {
      if (!pb_.constraint(s.x, s.c, with_grad ? &s.gc : nullptr)) return false;
      if (with_grad) project(s.gc);
    }
    return std::isfinite(s.f);
  }

  bool constraint_value(const Field& x, double& c, Field* grad) {
    ++evals_;
    if (!pb_.constraint(x, c, grad)) return false;
    if (grad != nullptr) project(*grad);
    return std::isfinite(c);
  }

  bool restore(Field& y);
  Field two_loop(const Field& g) const;

  const Problem& pb_;
  const Preconditioner& P_;
  MinimizeOptions opts_;
  std::deque<Pair> mem_;
  int evals_ = 0;
};

bool Engine::restore(Field& y) {
  double c0 = 0.0;
  Field gc;
  if (!constraint_value(y, c0, &gc)) return false;
  if (c0 <= 0.0) return true;
  Field e = precondition(gc);
  const double denom = dot(gc, e);
  if (!(denom > 0.0)) return false;
  e *= -1.0;
  auto trial = [&](double beta, double& c) {
    Field z = y;
    z.axpy(beta, e);
    retract(z);
    return constraint_value(z, c, nullptr);
  };
  double lo = 0.0, c_lo = c0;
  double hi = 1.5 * c0 / denom, c_hi = 0.0;
  bool bracketed = false;
  for (int k = 0; k < 40; ++k) {
    if (trial(hi, c_hi) && c_hi <= 0.0) {
      bracketed = true;
      break;
    }
    if (std::isfinite(c_hi) && c_hi > 0.0) {
      lo = hi;
      c_lo = c_hi;
    }
    hi *= 2.0;
  }
  if (!bracketed) return false;
  const double margin = opts_.constraint_margin;
  int side = 0;
  for (int k = 0; k < 100 && c_hi < -margin; ++k) {
    double mid = (lo * c_hi - hi * c_lo) / (c_hi - c_lo);
    if (!(mid > lo && mid < hi)) mid = 0.5 * (lo + hi);
    double c_mid = 0.0;
    if (!trial(mid, c_mid)) break;
    if (c_mid > 0.0) {
      lo = mid;
      c_lo = c_mid;
      if (side == -1) c_hi *= 0.5;
      side = -1;
    } else {
      hi = mid;
      c_hi = c_mid;
      if (side == 1) c_lo *= 0.5;
      side = 1;
    }
    if (hi - lo <= 1e-15 * hi) break;
  }
  y.axpy(hi, e);
  retract(y);
  double c_final = 0.0;
  return constraint_value(y, c_final, nullptr) && c_final <= 0.0;
}

Field Engine::two_loop(const Field& g) const {
  Field q = g;
  std::vector<double> alpha(mem_.size());
  for (std::size_t k = mem_.size(); k-- > 0;) {
    alpha[k] = mem_[k].rho * dot(mem_[k].s, q);
    q.axpy(-alpha[k], mem_[k].y);
  }
  Field r = precondition(q);
  if (!mem_.empty()) {
    const Pair& last = mem_.back();
    const Field Py = precondition(last.y);
    const double gamma = 1.0 / (last.rho * dot(last.y, Py));
    r *= gamma;
  }
  for (std::size_t k = 0; k < mem_.size(); ++k) {
    const double beta = mem_[k].rho * dot(mem_[k].y, r);
    r.axpy(alpha[k] - beta, mem_[k].s);
  }
  return r;
}

MinimizeResult Engine::run(Field x0) {
  MinimizeResult res;
  State cur;
  cur.x = std::move(x0);
  retract(cur.x);
  normalize(cur.x);
  if (has_constraint() && !restore(cur.x)) {
    res.x = cur.x;
    res.value = std::numeric_limits<double>::infinity();
    return res;
  }
  if (!evaluate(cur, true)) {
    res.x = cur.x;
    res.value = std::numeric_limits<double>::infinity();
    return res;
  }

  const double act_tol = 10.0 * opts_.constraint_margin + 1e-14;
  int stall = 0;
  bool stop = false;
  int it = 0;
  for (; it < opts_.max_iters && !stop; ++it) {
    const double scale = std::max(std::abs(cur.f), opts_.value_scale);

    // Tangential gradient when the constraint is active and binding.
    Field gt = cur.g;
    Field pgc;
    double denom = 0.0;
    const bool active = has_constraint() && cur.c > -act_tol;
    res.constraint_active = active;
    if (active) {
      pgc = precondition(cur.gc);
      denom = dot(cur.gc, pgc);
      if (denom > 0.0) {
        const double beta = dot(cur.g, pgc) / denom;
        if (beta < 0.0) gt.axpy(-beta, cur.gc);
      }
    }
    const Field Pgt = precondition(gt);
    res.grad_norm = std::sqrt(std::max(0.0, dot(gt, Pgt))) / (scale > 0.0 ? scale : 1.0);
    if (res.grad_norm <= opts_.tol_grad || cur.f <= opts_.target) {
      res.converged = true;
      break;
    }

    bool accepted = false;
    bool steepest = mem_.empty();
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      if (attempt == 1) {
        if (steepest) break;
        steepest = true;
        mem_.clear();
      }
      Field d = steepest ? Pgt : two_loop(gt);
      d *= -1.0;
      if (active && denom > 0.0) {
        const double dc = dot(cur.gc, d);
        if (dc > 0.0) d.axpy(-dc / denom, pgc);
      }
      const double slope = dot(cur.g, d);
      if (!(slope < 0.0)) continue;
      double alpha = 1.0;
      if (mem_.empty()) alpha = std::min(1.0, 0.05 / std::sqrt(std::max(P_.norm2(d), 1e-300)));
      for (int ls = 0; ls < 40; ++ls, alpha *= 0.5) {
        State trial;
        trial.x = cur.x;
        trial.x.axpy(alpha, d);
        retract(trial.x);
        bool restored = false;
        if (has_constraint()) {
          double c = 0.0;
          if (!constraint_value(trial.x, c, nullptr)) continue;
          if (c > 0.0) {
            if (!restore(trial.x)) continue;
            restored = true;
          }
        }
        ++evals_;
        double f = 0.0;
        if (!pb_.objective(trial.x, f, nullptr) || !std::isfinite(f)) continue;
        const bool armijo = f <= cur.f + 1e-4 * alpha * slope;
        if (!(armijo || (restored && f < cur.f))) continue;

        const double n = std::sqrt(P_.norm2(trial.x));
        const bool renorm = std::abs(n - 1.0) > 0.1;
        if (renorm) trial.x *= 1.0 / n;
        if (!evaluate(trial, true)) continue;

        Field gt_new = trial.g;
        if (has_constraint() && trial.c > -act_tol) {
          const Field p_new = precondition(trial.gc);
          const double den_new = dot(trial.gc, p_new);
          if (den_new > 0.0) {
            const double beta = dot(trial.g, p_new) / den_new;
            if (beta < 0.0) gt_new.axpy(-beta, trial.gc);
          }
        }
        if (renorm) {
          mem_.clear();
        } else {
          Field s = trial.x - cur.x;
          Field y = gt_new - gt;
          const double sy = dot(s, y);
          if (sy > 1e-12 * std::sqrt(dot(s, s) * dot(y, y))) {
            mem_.push_back({std::move(s), std::move(y), 1.0 / sy});
            if (static_cast<int>(mem_.size()) > opts_.memory) mem_.pop_front();
          }
        }
        const double decrease = (cur.f - trial.f) / (scale > 0.0 ? scale : 1.0);
        stall = decrease < opts_.tol_value ? stall + 1 : 0;
        cur = std::move(trial);
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      // No descent possible from here in floating point.
      res.converged = res.grad_norm <= 1e3 * opts_.tol_grad;
      stop = true;
    } else if (stall >= opts_.stagnation_window) {
      res.converged = true;
      stop = true;
    }
  }
  res.iterations = it;
  res.evaluations = evals_;
  res.value = cur.f;
  res.x = std::move(cur.x);
  return res;
}

}  // namespace

MinimizeResult minimize(const Problem& problem, Field x0, const Preconditioner& precond,
                        const MinimizeOptions& opts) {
  Engine engine(problem, precond, opts);
  return engine.run(std::move(x0));
}

}  // namespace compacton
