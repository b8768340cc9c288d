// Scalar functions on (0, infinity) with derivative access, the dyadic
// partition of unity, and matrices of functions.
#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "sectorlab/errors.hpp"
#include "sectorlab/linalg.hpp"

namespace sectorlab {

inline constexpr int kMaxJetOrder = 6;

// A function value plus derivative access up to max_order. Presets built
// from closed forms carry jet-propagated derivatives (machine precision);
// derivative(0, t) always equals value(t).
class ScalarFunction {
 public:
  ScalarFunction() = default;
  ScalarFunction(std::string label, int max_order,
                 std::function<cplx(double)> value,
                 std::function<cplx(int, double)> derivative)
      : label_(std::move(label)),
        max_order_(max_order),
        value_(std::move(value)),
        derivative_(std::move(derivative)) {}

  // Value-only function; derivatives fall back to Richardson-extrapolated
  // central differences with step 1e-4 in the log variable.
  static ScalarFunction from_values(std::string label, std::function<cplx(double)> value,
                                    int max_order = 2);

  const std::string& label() const { return label_; }
  int max_order() const { return max_order_; }

  cplx value(double t) const { return value_(t); }
  cplx derivative(int k, double t) const {
    if (k == 0) return value_(t);
    if (k > max_order_)
      throw OrderTooLowError("derivative order " + std::to_string(k) + " exceeds max_order of " + label_);
    return derivative_(k, t);
  }

  ScalarFunction scaled(cplx factor) const;
  ScalarFunction dilated(double r) const;  // t -> f(r t)

 private:
  std::string label_;
  int max_order_ = 0;
  std::function<cplx(double)> value_;
  std::function<cplx(int, double)> derivative_;
};

// Dyadic partition of unity: phi_n(t) = phi0(2^{-n} t) with phi0 supported
// in (1/2, 2) and sum_n phi_n = 1 on (0, infinity). phi0 is assembled from
// the exp(-1/x) mollifier ramp so translates of the ramp telescope to 1.
class DyadicPartition {
 public:
  DyadicPartition() = default;
  DyadicPartition(int max_index, double sharpness);

  int max_index() const { return max_index_; }
  double sharpness() const { return sharpness_; }

  double phi(int n, double t) const;
  cplx phi_derivative(int n, int k, double t) const;
  ScalarFunction bump(int n) const;

  // support of phi_n is (2^{n-1}, 2^{n+1})
  static double support_lower(int n) { return std::pow(2.0, n - 1); }
  static double support_upper(int n) { return std::pow(2.0, n + 1); }

 private:
  int max_index_ = 0;
  double sharpness_ = 1.0;
};

DyadicPartition make_partition(int max_index, double transition_sharpness = 1.0);

// n x n grid of scalar functions; all entries share one max_order.
class FunctionMatrix {
 public:
  FunctionMatrix() = default;
  FunctionMatrix(std::size_t n, std::vector<ScalarFunction> entries);

  std::size_t size() const { return n_; }
  const ScalarFunction& operator()(std::size_t i, std::size_t j) const {
    return entries_[i * n_ + j];
  }

 private:
  std::size_t n_ = 0;
  std::vector<ScalarFunction> entries_;
};

// --- presets -------------------------------------------------------------

// t^{is}
ScalarFunction preset_imag_power(double s);
// exp(-t)
ScalarFunction preset_exp_decay();
// lambda -> t (e^{i theta} t - lambda)^{-1}, a normalized resolvent slice
ScalarFunction preset_resolvent_kernel(double theta, double t);
// phi0 of a default partition
ScalarFunction preset_bump(double sharpness = 1.0);
// seeded linear combination of dilated bumps, compactly supported
ScalarFunction preset_bump_combo(std::uint64_t seed, std::size_t count);
ScalarFunction preset_constant(cplx c);

// Parses "name" or "name(arg1,arg2)"; the preset catalog above.
ScalarFunction make_preset(const std::string& spec);

}  // namespace sectorlab
