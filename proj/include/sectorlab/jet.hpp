// Truncated Taylor (jet) arithmetic. Propagating a variable jet through a
// closed-form expression yields derivatives to machine precision, which the
// function presets use instead of finite differences.
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

namespace sectorlab {

// Taylor coefficients c[0..Order] around the evaluation point:
// f(x0 + h) = sum_k c[k] h^k. Derivative f^(k) = k! c[k].
template <typename Scalar, int Order>
struct Jet {
  static constexpr int N = Order + 1;
  std::array<Scalar, N> c{};

  Jet() = default;
  explicit Jet(Scalar value) { c[0] = value; }

  static Jet variable(Scalar value) {
    Jet j(value);
    if constexpr (Order >= 1) j.c[1] = Scalar(1);
    return j;
  }

  Scalar derivative(int k) const {
    Scalar f(1);
    for (int i = 2; i <= k; ++i) f *= Scalar(i);
    return c[k] * f;
  }

  friend Jet operator+(const Jet& a, const Jet& b) {
    Jet r;
    for (int k = 0; k < N; ++k) r.c[k] = a.c[k] + b.c[k];
    return r;
  }
  friend Jet operator-(const Jet& a, const Jet& b) {
    Jet r;
    for (int k = 0; k < N; ++k) r.c[k] = a.c[k] - b.c[k];
    return r;
  }
  friend Jet operator-(const Jet& a) {
    Jet r;
    for (int k = 0; k < N; ++k) r.c[k] = -a.c[k];
    return r;
  }
  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    for (int k = 0; k < N; ++k) {
      Scalar s(0);
      for (int i = 0; i <= k; ++i) s += a.c[i] * b.c[k - i];
      r.c[k] = s;
    }
    return r;
  }
  friend Jet operator*(Scalar s, const Jet& a) {
    Jet r;
    for (int k = 0; k < N; ++k) r.c[k] = s * a.c[k];
    return r;
  }
  friend Jet operator/(const Jet& a, const Jet& b) {
    Jet r;
    for (int k = 0; k < N; ++k) {
      Scalar s = a.c[k];
      for (int i = 0; i < k; ++i) s -= r.c[i] * b.c[k - i];
      r.c[k] = s / b.c[0];
    }
    return r;
  }
  friend Jet operator+(const Jet& a, Scalar s) {
    Jet r = a;
    r.c[0] += s;
    return r;
  }
  friend Jet operator-(Scalar s, const Jet& a) {
    Jet r = -a;
    r.c[0] += s;
    return r;
  }
};

template <typename Scalar, int Order>
Jet<Scalar, Order> exp(const Jet<Scalar, Order>& a) {
  using std::exp;
  Jet<Scalar, Order> e;
  e.c[0] = exp(a.c[0]);
  for (int k = 1; k <= Order; ++k) {
    Scalar s(0);
    for (int j = 1; j <= k; ++j) s += Scalar(j) * a.c[j] * e.c[k - j];
    e.c[k] = s / Scalar(k);
  }
  return e;
}

template <typename Scalar, int Order>
Jet<Scalar, Order> log(const Jet<Scalar, Order>& a) {
  using std::log;
  Jet<Scalar, Order> l;
  l.c[0] = log(a.c[0]);
  for (int k = 1; k <= Order; ++k) {
    Scalar s = a.c[k] * Scalar(k);
    for (int j = 1; j < k; ++j) s -= Scalar(j) * l.c[j] * a.c[k - j];
    l.c[k] = s / (Scalar(k) * a.c[0]);
  }
  return l;
}

}  // namespace sectorlab
