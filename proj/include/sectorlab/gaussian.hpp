// Gaussian-sum norms, discretized square-function norms, randomized
// gamma-boundedness estimates, matricial gamma norms and the doubly-indexed
// Gaussian-sum comparison. Exact on Hilbert models, seeded Monte Carlo with
// antithetic pairing elsewhere. All estimators are lower bounds.
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "sectorlab/linalg.hpp"
#include "sectorlab/quadrature.hpp"
#include "sectorlab/rng.hpp"

namespace sectorlab {

struct SquareFunctionSpec {
  enum class Measure { dt, dt_over_t, product_dt_over_t_dtheta };
  std::vector<double> grid;     // strictly increasing
  std::vector<double> weights;  // positive quadrature weights
  Measure measure = Measure::dt;

  void validate() const;
};

SquareFunctionSpec make_log_spec(double a, double b, double panels_per_decade,
                                 SquareFunctionSpec::Measure measure);
// symmetric window [-T, T] for the dt measure; log-spaced toward the origin
SquareFunctionSpec make_symmetric_spec(double t_max, double t_min = 1e-3,
                                       double panels_per_decade = 8.0);

struct GaussNormEstimate {
  double value = 0.0;
  double std_error = 0.0;
  bool exact = false;
  std::size_t samples_used = 0;
};

// (E || sum_k g_k x_k ||^2)^{1/2}. Exact on Hilbert spaces, Monte Carlo with
// Box-Muller draws from the counter-based generator otherwise.
GaussNormEstimate gauss_norm(const std::vector<cvector>& vectors, const ModelSpace& space,
                             std::size_t samples, std::uint64_t seed);
// Monte Carlo path regardless of the space (oracle checks).
GaussNormEstimate gauss_norm_mc(const std::vector<cvector>& vectors, const ModelSpace& space,
                                std::size_t samples, std::uint64_t seed);

// Deterministic lattice surrogate ||(sum_k |x_k|^2)^{1/2}||_X; on l^p it is
// equivalent to the Gaussian norm up to universal constants only.
double lattice_square_sum_norm(const std::vector<cvector>& vectors, const ModelSpace& space);

// ||(sum_i w_i |F(t_i)|^2)^{1/2}||_X, coordinatewise quadrature then p-norm.
double square_function_norm(const std::function<cvector(double)>& f,
                            const SquareFunctionSpec& spec, const ModelSpace& space);
double square_function_norm(const std::vector<cvector>& values, const SquareFunctionSpec& spec,
                            const ModelSpace& space);

struct GammaEstimate {
  double lower_bound = 0.0;
  std::size_t samples_used = 0;
  std::uint64_t seed = 0;
  bool converged = false;
};

// Randomized lower bound on the best constant in the Gaussian-sum
// boundedness of the family: tuples and vectors are sampled, the norm ratio
// uses shared draws on both sides, and coordinate-perturbation ascent with
// restarts pushes the ratio up. Singleton tuples seeded with operator-norm
// maximizers keep the bound above the largest member norm.
GammaEstimate gamma_bound_estimate(const std::vector<ComplexMatrix>& family,
                                   const ModelSpace& space, std::size_t trials,
                                   std::uint64_t seed);

struct MatricialNormEstimate {
  double value = 0.0;
  bool exact = false;
};

// Norm of [S_kj] acting on Gaussian sums, sum_k g_k x_k -> sum_kj g_k S_kj x_j.
// Exact on Hilbert models (block spectral norm); randomized lower bound else.
MatricialNormEstimate matricial_gamma_norm(const std::vector<std::vector<ComplexMatrix>>& blocks,
                                           const ModelSpace& space, std::size_t trials,
                                           std::uint64_t seed);

// Largest observed two-sided ratio between doubly-indexed Gaussian sums and
// iterated Gaussian sums over seeded random families.
double property_alpha_estimate(const ModelSpace& space, std::size_t n, std::size_t trials,
                               std::uint64_t seed);

}  // namespace sectorlab
