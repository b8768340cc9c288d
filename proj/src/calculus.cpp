#include "sectorlab/calculus.hpp"

#include <algorithm>
#include <cmath>

namespace sectorlab {

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;

cplx unit_phase(double angle) { return {std::cos(angle), std::sin(angle)}; }

}  // namespace

// --- SectorFunction ---------------------------------------------------------

ScalarFunction SectorFunction::restricted_to_axis() const {
  auto e = eval;
  return ScalarFunction::from_values(label, [e](double t) { return e(cplx(t)); }, 2);
}

std::vector<SectorFunction> sector_function_presets() {
  std::vector<SectorFunction> out;
  auto rational = [](double a, double b) {
    SectorFunction f;
    f.label = "z^" + std::to_string(a) + "/(1+z)^" + std::to_string(a + b);
    f.sector_angle = kPi - 0.2;
    f.decay_exponent = std::min(a, b);
    f.eval = [a, b](cplx z) { return std::pow(z, a) / std::pow(1.0 + z, a + b); };
    return f;
  };
  out.push_back(rational(1.0, 1.0));
  out.push_back(rational(0.5, 0.5));
  out.push_back(rational(2.0, 1.0));
  out.push_back(rational(1.0, 2.0));
  out.push_back(rational(1.5, 0.5));
  out.push_back(rational(0.5, 1.5));
  out.push_back(rational(2.0, 2.0));

  SectorFunction g1;
  g1.label = "z^0.5 exp(-z)";
  g1.sector_angle = kPi / 2 - 0.1;
  g1.decay_exponent = 0.5;
  g1.eval = [](cplx z) { return std::sqrt(z) * std::exp(-z); };
  out.push_back(g1);

  SectorFunction g2;
  g2.label = "z exp(-z)";
  g2.sector_angle = kPi / 2 - 0.1;
  g2.decay_exponent = 1.0;
  g2.eval = [](cplx z) { return z * std::exp(-z); };
  out.push_back(g2);

  SectorFunction g3;
  g3.label = "z/(1+z^2)";
  g3.sector_angle = kPi / 2 - 0.1;
  g3.decay_exponent = 1.0;
  g3.eval = [](cplx z) { return z / (1.0 + z * z); };
  out.push_back(g3);

  return out;
}

// --- SectorialOperator -------------------------------------------------------

SectorialOperator::SectorialOperator(ComplexMatrix matrix, ModelSpace space, double sector_angle)
    : a_(std::move(matrix)), space_(std::move(space)), omega_(sector_angle) {
  if (!a_.square()) throw InvalidSpecError("sectorial operator must be square");
  if (!a_.all_finite()) throw InvalidSpecError("operator entries must be finite");
  space_.validate();
  if (space_.dim != a_.rows())
    throw DimensionMismatchError("operator dimension does not match its space");
  if (!(omega_ > 0.0 && omega_ < kPi))
    throw InvalidSpecError("sector angle must lie in (0, pi)");

  diagonal_ = true;
  for (std::size_t i = 0; i < a_.rows() && diagonal_; ++i)
    for (std::size_t j = 0; j < a_.cols(); ++j)
      if (i != j && a_(i, j) != cplx(0.0)) {
        diagonal_ = false;
        break;
      }

  self_adjoint_ = a_.hermitian_defect() <= 1e-12;
  if (self_adjoint_) {
    spectral_ = hermitian_eig(a_);
    spec_min_ = spectral_->eigenvalues.front();
    spec_max_ = spectral_->eigenvalues.back();
    if (!(spec_min_ > 0.0))
      throw InvalidSpecError("self-adjoint model must have strictly positive spectrum");
  } else {
    const EigDecomposition g = hermitian_eig(a_.adjoint() * a_);
    spec_min_ = std::sqrt(std::max(0.0, g.eigenvalues.front()));
    spec_max_ = std::sqrt(std::max(0.0, g.eigenvalues.back()));
    if (!(spec_min_ > 0.0))
      throw InvalidSpecError("operator must be bounded away from zero");
  }

  // resolvent growth sampled outside the slightly widened sector
  const double omega_prime = omega_ + 0.1;
  const ComplexMatrix eye = ComplexMatrix::identity(a_.rows());
  double worst = 0.0;
  bool ok = true;
  const bool cheap_norm = space_.dim > 64;
  for (int ia = 0; ia < 8 && ok; ++ia) {
    const double ang = omega_prime + (kPi - omega_prime) * (ia + 0.5) / 8.0;
    for (int ir = 0; ir < 4; ++ir) {
      const double r = spec_min_ / 10.0 *
                       std::pow(100.0 * spec_max_ / spec_min_, (ir + 0.5) / 4.0);
      for (double sgn : {1.0, -1.0}) {
        const cplx lam = r * unit_phase(sgn * ang);
        if (diagonal_) {
          // diagonal resolvents scale per coordinate, so the weighted norm
          // is the largest modulus regardless of the weights
          for (std::size_t j = 0; j < a_.rows(); ++j)
            worst = std::max(worst, std::abs(lam / (lam - a_(j, j))));
          continue;
        }
        try {
          ComplexMatrix res = solve_matrix(eye * lam - a_, eye);
          res *= lam;
          const double nrm = cheap_norm ? res.frobenius_norm()
                                        : operator_pnorm(res, space_, 4, 7).value;
          worst = std::max(worst, nrm);
        } catch (const SingularMatrixError&) {
          ok = false;
        }
      }
    }
  }
  certificate_ = worst;
  certificate_ok_ = ok && worst < 1e4;
}

ComplexMatrix resolvent(const SectorialOperator& a, cplx lambda) {
  if (a.spectral_cache()) {
    for (double ev : a.spectral_cache()->eigenvalues)
      if (std::abs(lambda - ev) <= 1e-10 * a.spectrum_max())
        throw SpectrumHitError("resolvent argument within 1e-10 of the spectrum");
  }
  const std::size_t n = a.dim();
  if (a.diagonal()) {
    ComplexMatrix r(n, n);
    for (std::size_t j = 0; j < n; ++j) r(j, j) = 1.0 / (lambda - a.matrix()(j, j));
    return r;
  }
  const ComplexMatrix eye = ComplexMatrix::identity(n);
  try {
    return solve_matrix(eye * lambda - a.matrix(), eye);
  } catch (const SingularMatrixError&) {
    throw SpectrumHitError("resolvent argument is numerically in the spectrum");
  }
}

namespace {

ComplexMatrix taylor_exp(const ComplexMatrix& m) {
  const std::size_t n = m.rows();
  ComplexMatrix term = ComplexMatrix::identity(n);
  ComplexMatrix sum = term;
  for (int k = 1; k <= 24; ++k) {
    term = term * m;
    term *= cplx(1.0 / k);
    sum += term;
    if (term.frobenius_norm() < 1e-18 * sum.frobenius_norm()) break;
  }
  return sum;
}

}  // namespace

ComplexMatrix matrix_exponential(ComplexMatrix m) {
  int squarings = 0;
  double nrm = m.frobenius_norm();
  while (nrm > 0.5) {
    m *= cplx(0.5);
    nrm *= 0.5;
    ++squarings;
  }
  ComplexMatrix e = taylor_exp(m);
  for (int s = 0; s < squarings; ++s) e = e * e;
  return e;
}

ComplexMatrix semigroup(const SectorialOperator& a, cplx z) {
  if (z.real() < 0.0) throw InvalidSpecError("semigroup parameter needs Re z >= 0");
  if (z.real() == 0.0 && !a.self_adjoint())
    throw InvalidSpecError("boundary semigroup values need a self-adjoint model");
  if (const EigDecomposition* d = a.spectral_cache()) {
    const std::size_t n = a.dim();
    std::vector<cplx> diag(n);
    for (std::size_t j = 0; j < n; ++j) diag[j] = std::exp(-z * d->eigenvalues[j]);
    return d->eigenvectors * ComplexMatrix::diagonal(diag) * d->eigenvectors.adjoint();
  }
  ComplexMatrix m = a.matrix();
  m *= -z;
  return matrix_exponential(std::move(m));
}

ComplexMatrix imaginary_power(const SectorialOperator& a, double t) {
  const EigDecomposition* d = a.spectral_cache();
  if (!d)
    throw IllConditionedEigenbasisError(
        "imaginary powers need a spectral decomposition; model is not self-adjoint");
  const std::size_t n = a.dim();
  std::vector<cplx> diag(n);
  for (std::size_t j = 0; j < n; ++j)
    diag[j] = std::exp(cplx(0.0, t * std::log(d->eigenvalues[j])));
  return d->eigenvectors * ComplexMatrix::diagonal(diag) * d->eigenvectors.adjoint();
}

ComplexMatrix spectral_calculus(const SectorialOperator& a, const std::function<cplx(double)>& f) {
  const EigDecomposition* d = a.spectral_cache();
  if (!d)
    throw IllConditionedEigenbasisError(
        "spectral calculus needs a spectral decomposition; model is not self-adjoint");
  const std::size_t n = a.dim();
  std::vector<cplx> diag(n);
  for (std::size_t j = 0; j < n; ++j) diag[j] = f(d->eigenvalues[j]);
  return d->eigenvectors * ComplexMatrix::diagonal(diag) * d->eigenvectors.adjoint();
}

ComplexMatrix spectral_calculus(const SectorialOperator& a, const ScalarFunction& f) {
  return spectral_calculus(a, [&f](double lam) { return f.value(lam); });
}

// --- contour calculus ---------------------------------------------------------

namespace {

struct ContourWindow {
  double r_min, r_max;
};

ContourWindow contour_window(const SectorialOperator& a, const SectorFunction& f,
                             double tail_target) {
  const double eps = std::max(f.decay_exponent, 0.05);
  const double grow = std::pow(tail_target, 1.0 / eps);
  ContourWindow w;
  w.r_min = a.spectrum_min() * std::min(0.1, grow);
  w.r_max = a.spectrum_max() * std::max(10.0, 1.0 / grow);
  return w;
}

// two-ray boundary integral at a fixed resolution
void contour_pass(const SectorialOperator& a,
                  const std::vector<const SectorFunction*>& fs, double angle,
                  const ContourWindow& win, double ppd, std::size_t npp,
                  std::vector<ComplexMatrix>& out) {
  const std::size_t n = a.dim();
  const ComplexMatrix eye = ComplexMatrix::identity(n);
  QuadratureRule rule = log_panels(win.r_min, win.r_max, ppd, npp);
  out.assign(fs.size(), ComplexMatrix(n, n));
  const cplx lower_phase = unit_phase(-angle);
  const cplx upper_phase = unit_phase(angle);
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double r = rule.nodes[i];
    const double w = rule.weights[i];
    for (int side = 0; side < 2; ++side) {
      const cplx phase = side == 0 ? lower_phase : upper_phase;
      const double orientation = side == 0 ? 1.0 : -1.0;
      const cplx lam = r * phase;
      // plain LU here; the node-doubling convergence guards accuracy
      const LuFactorization lu(eye * lam - a.matrix());
      const ComplexMatrix res = lu.solve(eye);
      for (std::size_t k = 0; k < fs.size(); ++k) {
        const cplx coeff = orientation * w * fs[k]->eval(lam) * phase;
        if (coeff == cplx(0.0)) continue;
        for (std::size_t e = 0; e < n * n; ++e)
          out[k].entries()[e] += coeff * res.entries()[e];
      }
    }
  }
  const cplx inv_2pii(0.0, -1.0 / (2.0 * kPi));  // 1/(2 pi i)
  for (auto& m : out) m *= inv_2pii;
}

}  // namespace

Contour make_contour(const SectorialOperator& a, const SectorFunction& f,
                     const ContourOptions& opts, double angle_override) {
  if (f.sector_angle <= a.sector_angle())
    throw InvalidSpecError("function sector does not contain the operator sector");
  Contour c;
  c.angle = angle_override > 0.0 ? angle_override : 0.5 * (a.sector_angle() + f.sector_angle);
  const ContourWindow w = contour_window(a, f, opts.tail_target);
  QuadratureRule rule = log_panels(w.r_min, w.r_max, opts.panels_per_decade, opts.nodes_per_panel);
  c.nodes = std::move(rule.nodes);
  c.weights = std::move(rule.weights);
  return c;
}

std::vector<ComplexMatrix> contour_calculus_batch(const SectorialOperator& a,
                                                  const std::vector<SectorFunction>& fs,
                                                  const ContourOptions& opts) {
  std::vector<ComplexMatrix> results(fs.size());
  std::vector<bool> done(fs.size(), false);

  // group by admissible angle so resolvent factorizations are shared
  while (true) {
    std::vector<std::size_t> group;
    double angle = 0.0;
    for (std::size_t k = 0; k < fs.size(); ++k) {
      if (done[k]) continue;
      const double cand = 0.5 * (a.sector_angle() + fs[k].sector_angle);
      if (group.empty()) {
        angle = cand;
        group.push_back(k);
      } else if (std::abs(cand - angle) < 1e-12) {
        group.push_back(k);
      }
    }
    if (group.empty()) break;

    ContourWindow win{1e300, 0.0};
    std::vector<const SectorFunction*> ptrs;
    for (std::size_t k : group) {
      if (fs[k].sector_angle <= a.sector_angle())
        throw InvalidSpecError("function sector does not contain the operator sector");
      const ContourWindow w = contour_window(a, fs[k], opts.tail_target);
      win.r_min = std::min(win.r_min, w.r_min);
      win.r_max = std::max(win.r_max, w.r_max);
      ptrs.push_back(&fs[k]);
    }

    double ppd = opts.panels_per_decade;
    std::vector<ComplexMatrix> prev;
    contour_pass(a, ptrs, angle, win, ppd, opts.nodes_per_panel, prev);
    std::vector<ComplexMatrix> cur;
    double worst = 0.0;
    for (int level = 0; level < opts.max_doublings; ++level) {
      ppd *= 2.0;
      contour_pass(a, ptrs, angle, win, ppd, opts.nodes_per_panel, cur);
      worst = 0.0;
      for (std::size_t k = 0; k < ptrs.size(); ++k) {
        const double ref = std::max(cur[k].frobenius_norm(), 1e-300);
        worst = std::max(worst, (cur[k] - prev[k]).frobenius_norm() / ref);
      }
      prev = cur;
      if (worst < opts.convergence_tol) break;
    }
    if (worst > opts.failure_tol)
      throw ContourNotConvergedError("contour quadrature still moving by " + std::to_string(worst));
    for (std::size_t k = 0; k < group.size(); ++k) {
      results[group[k]] = prev[k];
      done[group[k]] = true;
    }
  }
  return results;
}

ComplexMatrix contour_calculus(const SectorialOperator& a, const SectorFunction& f,
                               const ContourOptions& opts) {
  return contour_calculus_batch(a, {f}, opts).front();
}

ComplexMatrix holomorphic_calculus(const SectorialOperator& a, const SectorFunction& f,
                                   cplx f_at_zero, cplx f_at_infinity,
                                   const ContourOptions& opts) {
  SectorFunction remainder = f;
  remainder.label = f.label + "#regularized";
  const auto eval = f.eval;
  remainder.eval = [eval, f_at_zero, f_at_infinity](cplx z) {
    return eval(z) - f_at_zero / (1.0 + z) - f_at_infinity * z / (1.0 + z);
  };

  // the split may cancel f exactly (rational f with matching limits); the
  // contour of a roundoff-level remainder carries no signal
  const double angle = 0.5 * (a.sector_angle() + f.sector_angle);
  double rem_peak = 0.0, f_peak = 0.0;
  for (int i = 0; i <= 40; ++i) {
    const double r = a.spectrum_min() * 0.01 *
                     std::pow(1e4 * a.spectrum_max() / a.spectrum_min(), i / 40.0);
    for (double sgn : {-1.0, 1.0}) {
      const cplx z = r * unit_phase(sgn * angle);
      rem_peak = std::max(rem_peak, std::abs(remainder.eval(z)));
      f_peak = std::max(f_peak, std::abs(eval(z)));
    }
  }
  const std::size_t n = a.dim();
  ComplexMatrix core(n, n);
  if (rem_peak > 1e-13 * (f_peak + std::abs(f_at_zero) + std::abs(f_at_infinity)))
    core = contour_calculus(a, remainder, opts);

  const ComplexMatrix shifted_inverse =
      solve_matrix(ComplexMatrix::identity(n) + a.matrix(), ComplexMatrix::identity(n));
  return core + f_at_zero * shifted_inverse +
         f_at_infinity * (a.matrix() * shifted_inverse);
}

// --- dyadic spectral decomposition ---------------------------------------------

int covering_index(const SectorialOperator& a) {
  int k = 2;
  while (!(std::pow(2.0, -k + 1) < a.spectrum_min() && std::pow(2.0, k - 1) > a.spectrum_max())) {
    ++k;
    if (k > 1100) throw SpectrumNotCoveredError("spectrum spans too many octaves to cover");
  }
  return k;
}

std::vector<ComplexMatrix> paley_littlewood_family(const SectorialOperator& a,
                                                   const DyadicPartition& p) {
  if (!a.self_adjoint())
    throw IllConditionedEigenbasisError("spectral decomposition needs a self-adjoint model");
  const int need = covering_index(a);
  if (p.max_index() < need)
    throw SpectrumNotCoveredError("partition range " + std::to_string(p.max_index()) +
                                  " does not cover the spectrum; need " + std::to_string(need));
  std::vector<ComplexMatrix> family;
  family.reserve(2 * p.max_index() + 1);
  for (int n = -p.max_index(); n <= p.max_index(); ++n)
    family.push_back(spectral_calculus(a, [&p, n](double lam) -> cplx { return p.phi(n, lam); }));
  return family;
}

}  // namespace sectorlab
