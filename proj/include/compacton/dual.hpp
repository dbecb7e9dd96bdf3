#pragma once

// Forward-mode dual numbers with a fixed number of seed directions. Used to
// differentiate the closed-form quotients with respect to the integral bundle.

#include <array>
#include <cmath>

namespace compacton {

template <int K>
struct Dual {
  double v = 0.0;
  std::array<double, K> d{};

  Dual() = default;
  Dual(double value) : v(value) {}  // NOLINT: implicit lift of constants
  static Dual variable(double value, int k) {
    Dual x(value);
    x.d[k] = 1.0;
    return x;
  }
};

template <int K>
Dual<K> operator+(Dual<K> a, const Dual<K>& b) {
  a.v += b.v;
  for (int k = 0; k < K; ++k) a.d[k] += b.d[k];
  return a;
}

template <int K>
Dual<K> operator-(Dual<K> a, const Dual<K>& b) {
  a.v -= b.v;
  for (int k = 0; k < K; ++k) a.d[k] -= b.d[k];
  return a;
}

template <int K>
Dual<K> operator*(const Dual<K>& a, const Dual<K>& b) {
  Dual<K> r(a.v * b.v);
  for (int k = 0; k < K; ++k) r.d[k] = a.d[k] * b.v + a.v * b.d[k];
  return r;
}

template <int K>
Dual<K> operator/(const Dual<K>& a, const Dual<K>& b) {
  Dual<K> r(a.v / b.v);
  for (int k = 0; k < K; ++k) r.d[k] = (a.d[k] - r.v * b.d[k]) / b.v;
  return r;
}

template <int K>
Dual<K> operator+(Dual<K> a, double b) {
  a.v += b;
  return a;
}
template <int K>
Dual<K> operator+(double a, Dual<K> b) {
  return b + a;
}
template <int K>
Dual<K> operator-(Dual<K> a, double b) {
  a.v -= b;
  return a;
}
template <int K>
Dual<K> operator*(Dual<K> a, double b) {
  a.v *= b;
  for (auto& x : a.d) x *= b;
  return a;
}
template <int K>
Dual<K> operator*(double a, Dual<K> b) {
  return b * a;
}
template <int K>
Dual<K> operator/(Dual<K> a, double b) {
  return a * (1.0 / b);
}
template <int K>
Dual<K> operator/(double a, const Dual<K>& b) {
  return Dual<K>(a) / b;
}

template <int K>
Dual<K> pow(const Dual<K>& x, double a) {
  Dual<K> r(std::pow(x.v, a));
  const double slope = a * std::pow(x.v, a - 1.0);
  for (int k = 0; k < K; ++k) r.d[k] = slope * x.d[k];
  return r;
}

using std::pow;

}  // namespace compacton
