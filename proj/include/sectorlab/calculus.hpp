// Model sectorial operators and their functional calculus: resolvents, the
// analytic semigroup, imaginary powers, the sector-contour calculus for
// functions with two-sided polynomial decay, the spectral oracle, and the
// dyadic spectral decomposition.
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sectorlab/functions.hpp"
#include "sectorlab/linalg.hpp"
#include "sectorlab/quadrature.hpp"

namespace sectorlab {

// Holomorphic function on the sector |arg z| < sector_angle with
// |f(z)| <= C min(|z|^eps, |z|^{-eps}) there.
struct SectorFunction {
  std::string label;
  double sector_angle = 0.0;
  double decay_exponent = 0.0;  // eps
  std::function<cplx(cplx)> eval;

  ScalarFunction restricted_to_axis() const;
};

// a/b-family of rational decay profiles plus exponentially damped variants;
// count <= 10 shipped presets.
std::vector<SectorFunction> sector_function_presets();

class SectorialOperator {
 public:
  SectorialOperator(ComplexMatrix matrix, ModelSpace space, double sector_angle = 0.05);

  const ComplexMatrix& matrix() const { return a_; }
  const ModelSpace& space() const { return space_; }
  double sector_angle() const { return omega_; }
  std::size_t dim() const { return a_.rows(); }

  bool self_adjoint() const { return self_adjoint_; }
  bool diagonal() const { return diagonal_; }
  const EigDecomposition* spectral_cache() const {
    return spectral_ ? &*spectral_ : nullptr;
  }

  double spectrum_min() const { return spec_min_; }
  double spectrum_max() const { return spec_max_; }

  // max of ||lambda (lambda - A)^{-1}|| sampled outside the sector at
  // omega + 0.1; finite and moderate for every shipped model.
  double certificate_constant() const { return certificate_; }
  bool certificate_passed() const { return certificate_ok_; }

 private:
  ComplexMatrix a_;
  ModelSpace space_;
  double omega_;
  bool self_adjoint_ = false;
  bool diagonal_ = false;
  std::optional<EigDecomposition> spectral_;
  double spec_min_ = 0.0, spec_max_ = 0.0;
  double certificate_ = 0.0;
  bool certificate_ok_ = false;
};

// (lambda - A)^{-1}; SpectrumHitError when lambda is within 1e-10 of the
// spectrum relative to the spectral radius.
ComplexMatrix resolvent(const SectorialOperator& a, cplx lambda);

// exp(-zA) for Re z > 0 (Re z = 0 allowed on self-adjoint models). Runs
// through the spectral decomposition when available, scaling-and-squaring
// otherwise.
ComplexMatrix semigroup(const SectorialOperator& a, cplx z);

// scaling-and-squaring exp(M); the general semigroup path
ComplexMatrix matrix_exponential(ComplexMatrix m);

// A^{it}; needs the spectral cache (self-adjoint models).
ComplexMatrix imaginary_power(const SectorialOperator& a, double t);

// V f(Lambda) V^*; the oracle the contour route is validated against.
ComplexMatrix spectral_calculus(const SectorialOperator& a, const std::function<cplx(double)>& f);
ComplexMatrix spectral_calculus(const SectorialOperator& a, const ScalarFunction& f);

struct ContourOptions {
  double panels_per_decade = 8.0;
  std::size_t nodes_per_panel = 8;
  double tail_target = 1e-10;      // window growth rule from the decay exponent
  double convergence_tol = 1e-8;   // relative change under node doubling
  double failure_tol = 1e-6;       // ContourNotConverged beyond this
  int max_doublings = 4;
};

// Radial quadrature data for the two rays at +-angle.
struct Contour {
  double angle = 0.0;
  std::vector<double> nodes;    // radii, log-spaced panels
  std::vector<double> weights;  // positive, integrate dr
};

Contour make_contour(const SectorialOperator& a, const SectorFunction& f,
                     const ContourOptions& opts = {}, double angle_override = 0.0);

// Cauchy-integral calculus over the sector boundary; node count is doubled
// until the result is stable.
ComplexMatrix contour_calculus(const SectorialOperator& a, const SectorFunction& f,
                               const ContourOptions& opts = {});

// Bounded holomorphic f with limits at 0 and infinity: splits off
// f(0) (1+z)^{-1} + f(inf) z (1+z)^{-1} so the remainder has two-sided
// decay, and adds the algebraic pieces back after the contour pass.
ComplexMatrix holomorphic_calculus(const SectorialOperator& a, const SectorFunction& f,
                                   cplx f_at_zero, cplx f_at_infinity,
                                   const ContourOptions& opts = {});

// Shares resolvent evaluations across functions with a common admissible
// angle and window.
std::vector<ComplexMatrix> contour_calculus_batch(const SectorialOperator& a,
                                                  const std::vector<SectorFunction>& fs,
                                                  const ContourOptions& opts = {});

// [phi_n(A)] for |n| <= K; SpectrumNotCoveredError unless
// 2^{-K+1} < min spectrum and 2^{K-1} > max spectrum.
std::vector<ComplexMatrix> paley_littlewood_family(const SectorialOperator& a,
                                                   const DyadicPartition& p);

// smallest K satisfying the coverage rule for this operator
int covering_index(const SectorialOperator& a);

}  // namespace sectorlab
