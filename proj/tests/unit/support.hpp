#pragma once

#include <cmath>
#include <functional>
#include <random>

#include "compacton/mesh.hpp"

namespace testing {

inline compacton::IntegralBundle random_bundle(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> lg(-3.0, 3.0);
  auto pos = [&] { return std::pow(10.0, lg(rng)); };
  return compacton::IntegralBundle::make(pos(), pos(), pos(), pos());
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

/// Midpoint rule on [a, b] with n cells.
inline double midpoint(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double acc = 0.0;
  for (int k = 0; k < n; ++k) acc += f(a + (k + 0.5) * h);
  return acc * h;
}

/// argmin of f over n log-spaced points in [lo, hi].
inline std::pair<double, double> log_grid_min(const std::function<double(double)>& f, double lo,
                                             double hi, int n) {
  double best_t = lo;
  double best = f(lo);
  const double step = std::log(hi / lo) / (n - 1);
  for (int k = 1; k < n; ++k) {
    const double t = lo * std::exp(step * k);
    const double v = f(t);
    if (v < best) {
      best = v;
      best_t = t;
    }
  }
  return {best_t, best};
}

/// Smooth positive field vanishing at the wall, randomised in shape.
inline compacton::Field random_smooth(const compacton::GridPtr& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.2, 1.0);
  std::uniform_real_distribution<double> ph(0.0, 6.283185307179586);
  const double a = u(rng), b = u(rng), c = u(rng), phase = ph(rng), k = 1.0 + 2.0 * u(rng);
  const double R = g->R(), T = g->T();
  return compacton::Field::sample(g, [=](double z, double r) {
    const double s = 1.0 - (r / R) * (r / R);
    return a * s * (1.0 + b * s) * (1.2 + c * std::cos(3.141592653589793 * z / T + phase)) *
           (1.0 + 0.1 * std::sin(k * r));
  });
}

}  // namespace testing
