#include "sectorlab/gaussian.hpp"

#include <algorithm>
#include <cmath>

namespace sectorlab {

void SquareFunctionSpec::validate() const {
  if (grid.size() != weights.size())
    throw DimensionMismatchError("square-function grid and weights differ in length");
  for (std::size_t i = 0; i + 1 < grid.size(); ++i)
    if (!(grid[i] < grid[i + 1]))
      throw InvalidSpecError("square-function grid must be strictly increasing");
  for (double w : weights)
    if (!(w > 0.0)) throw InvalidSpecError("square-function weights must be positive");
}

SquareFunctionSpec make_log_spec(double a, double b, double panels_per_decade,
                                 SquareFunctionSpec::Measure measure) {
  QuadratureRule rule = log_panels(a, b, panels_per_decade);
  SquareFunctionSpec spec;
  spec.measure = measure;
  spec.grid = rule.nodes;
  spec.weights = rule.weights;
  if (measure == SquareFunctionSpec::Measure::dt_over_t)
    for (std::size_t i = 0; i < spec.grid.size(); ++i) spec.weights[i] /= spec.grid[i];
  spec.validate();
  return spec;
}

SquareFunctionSpec make_symmetric_spec(double t_max, double t_min, double panels_per_decade) {
  QuadratureRule half = log_panels(t_min, t_max, panels_per_decade);
  QuadratureRule center = linear_panels(-t_min, t_min, 2);
  SquareFunctionSpec spec;
  spec.measure = SquareFunctionSpec::Measure::dt;
  for (std::size_t i = half.size(); i-- > 0;) {
    spec.grid.push_back(-half.nodes[i]);
    spec.weights.push_back(half.weights[i]);
  }
  for (std::size_t i = 0; i < center.size(); ++i) {
    spec.grid.push_back(center.nodes[i]);
    spec.weights.push_back(center.weights[i]);
  }
  for (std::size_t i = 0; i < half.size(); ++i) {
    spec.grid.push_back(half.nodes[i]);
    spec.weights.push_back(half.weights[i]);
  }
  spec.validate();
  return spec;
}

// --- Gaussian sum norms -----------------------------------------------------

namespace {

void check_vectors(const std::vector<cvector>& vectors, const ModelSpace& space) {
  space.validate();
  if (space.p == ModelSpace::inf)
    throw InvalidSpecError("sup-norm spaces are outside the Gaussian machinery");
  if (vectors.empty()) throw InvalidSpecError("gauss_norm needs at least one vector");
  for (const auto& v : vectors)
    if (v.size() != space.dim)
      throw DimensionMismatchError("vector length does not match the space");
}

double exact_hilbert_gauss(const std::vector<cvector>& vectors, const ModelSpace& space) {
  double s = 0.0;
  for (const auto& v : vectors) {
    const double n = pnorm(v, space);
    s += n * n;
  }
  return std::sqrt(s);
}

// mean and standard error of ||sum g_k x_k||^2 over antithetic pairs
GaussNormEstimate mc_gauss(const std::vector<cvector>& vectors, const ModelSpace& space,
                           std::size_t samples, const IndexedGaussians& g) {
  const std::size_t pairs = std::max<std::size_t>(samples / 2, 1);
  const std::size_t k_count = vectors.size();
  const std::size_t dim = space.dim;
  cvector acc(dim);
  double mean = 0.0, m2 = 0.0;
  for (std::size_t s = 0; s < pairs; ++s) {
    double pair_value = 0.0;
    for (int anti = 0; anti < 2; ++anti) {
      std::fill(acc.begin(), acc.end(), cplx(0.0));
      for (std::size_t k = 0; k < k_count; ++k) {
        const double gk = g(s, k, anti == 1);
        const cvector& xk = vectors[k];
        for (std::size_t j = 0; j < dim; ++j) acc[j] += gk * xk[j];
      }
      const double nrm = pnorm(acc, space);
      pair_value += 0.5 * nrm * nrm;
    }
    const double delta = pair_value - mean;
    mean += delta / static_cast<double>(s + 1);
    m2 += delta * (pair_value - mean);
  }
  GaussNormEstimate est;
  est.samples_used = 2 * pairs;
  est.value = std::sqrt(std::max(mean, 0.0));
  if (pairs > 1 && est.value > 0.0) {
    const double var_mean = m2 / static_cast<double>(pairs - 1) / static_cast<double>(pairs);
    est.std_error = std::sqrt(var_mean) / (2.0 * est.value);
  }
  return est;
}

}  // namespace

GaussNormEstimate gauss_norm(const std::vector<cvector>& vectors, const ModelSpace& space,
                             std::size_t samples, std::uint64_t seed) {
  check_vectors(vectors, space);
  if (space.is_hilbert()) {
    GaussNormEstimate est;
    est.value = exact_hilbert_gauss(vectors, space);
    est.exact = true;
    return est;
  }
  return mc_gauss(vectors, space, samples, IndexedGaussians(seed, 0));
}

GaussNormEstimate gauss_norm_mc(const std::vector<cvector>& vectors, const ModelSpace& space,
                                std::size_t samples, std::uint64_t seed) {
  check_vectors(vectors, space);
  return mc_gauss(vectors, space, samples, IndexedGaussians(seed, 0));
}

double lattice_square_sum_norm(const std::vector<cvector>& vectors, const ModelSpace& space) {
  check_vectors(vectors, space);
  cvector sq(space.dim, cplx(0.0));
  for (const auto& v : vectors)
    for (std::size_t j = 0; j < space.dim; ++j) sq[j] += std::norm(v[j]);
  for (std::size_t j = 0; j < space.dim; ++j) sq[j] = std::sqrt(sq[j].real());
  return pnorm(sq, space);
}

// --- square function norms ----------------------------------------------------

double square_function_norm(const std::vector<cvector>& values, const SquareFunctionSpec& spec,
                            const ModelSpace& space) {
  spec.validate();
  if (values.size() != spec.grid.size())
    throw DimensionMismatchError("one value vector per grid point required");
  std::vector<double> sq(space.dim, 0.0);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i].size() != space.dim)
      throw DimensionMismatchError("value dimension does not match the space");
    for (std::size_t j = 0; j < space.dim; ++j)
      sq[j] += spec.weights[i] * std::norm(values[i][j]);
  }
  cvector amp(space.dim);
  for (std::size_t j = 0; j < space.dim; ++j) amp[j] = std::sqrt(sq[j]);
  return pnorm(amp, space);
}

double square_function_norm(const std::function<cvector(double)>& f,
                            const SquareFunctionSpec& spec, const ModelSpace& space) {
  std::vector<cvector> values;
  values.reserve(spec.grid.size());
  for (double t : spec.grid) values.push_back(f(t));
  return square_function_norm(values, spec, space);
}

// --- gamma bound estimation ----------------------------------------------------

namespace {

struct RatioEvaluator {
  const ModelSpace& space;
  std::size_t mc_samples;
  IndexedGaussians gauss;

  // || sum g_k T_k x_k || / || sum g_k x_k || with shared draws
  double operator()(const std::vector<const ComplexMatrix*>& ops,
                    const std::vector<cvector>& xs) const {
    std::vector<cvector> mapped(xs.size());
    for (std::size_t k = 0; k < xs.size(); ++k) mapped[k] = ops[k]->apply(xs[k]);
    if (space.is_hilbert()) {
      const double den = exact_hilbert_gauss(xs, space);
      if (den == 0.0) return 0.0;
      return exact_hilbert_gauss(mapped, space) / den;
    }
    const double den = mc_gauss(xs, space, mc_samples, gauss).value;
    if (den == 0.0) return 0.0;
    return mc_gauss(mapped, space, mc_samples, gauss).value / den;
  }
};

}  // namespace

GammaEstimate gamma_bound_estimate(const std::vector<ComplexMatrix>& family,
                                   const ModelSpace& space, std::size_t trials,
                                   std::uint64_t seed) {
  space.validate();
  if (space.p == ModelSpace::inf)
    throw InvalidSpecError("sup-norm spaces are outside the Gaussian machinery");
  if (family.empty()) throw InvalidSpecError("gamma bound needs a nonempty family");
  for (const auto& t : family)
    if (!t.square() || t.rows() != space.dim)
      throw DimensionMismatchError("family member does not act on the space");

  GammaEstimate est;
  est.seed = seed;

  // singleton floor: the family constant dominates every member norm
  for (const auto& t : family)
    est.lower_bound = std::max(est.lower_bound, operator_pnorm(t, space, 24, seed).value);

  RatioEvaluator ratio{space, 512, IndexedGaussians(seed, 0x11)};
  CounterRng rng(seed, 0x22);
  const std::size_t dim = space.dim;
  double best_mid = est.lower_bound;

  for (std::size_t trial = 0; trial < std::max<std::size_t>(trials, 2); ++trial) {
    const std::size_t len = 1 + static_cast<std::size_t>(rng.next_u64() % 4);
    std::vector<const ComplexMatrix*> ops(len);
    std::vector<cvector> xs(len, cvector(dim));
    for (std::size_t k = 0; k < len; ++k) {
      ops[k] = &family[rng.next_u64() % family.size()];
      for (auto& z : xs[k]) z = rng.next_complex_normal();
    }
    double cur = ratio(ops, xs);
    for (int step = 0; step < 48; ++step) {
      const double scale = step < 16 ? 0.5 : (step < 32 ? 0.2 : 0.05);
      const std::size_t k = rng.next_u64() % len;
      const std::size_t j = rng.next_u64() % dim;
      const cplx old = xs[k][j];
      xs[k][j] += scale * rng.next_complex_normal();
      const double cand = ratio(ops, xs);
      if (cand > cur) {
        cur = cand;
      } else {
        xs[k][j] = old;
      }
    }
    est.lower_bound = std::max(est.lower_bound, cur);
    if (trial == trials / 2) best_mid = est.lower_bound;
    if (!space.is_hilbert()) est.samples_used += 512 * 2 * 49;
  }
  est.converged = est.lower_bound <= best_mid * 1.01;
  return est;
}

// --- matricial gamma norm ---------------------------------------------------------

namespace {

double power_iteration_sigma_max(const ComplexMatrix& s, std::uint64_t seed) {
  const std::size_t n = s.cols();
  const ComplexMatrix sh = s.adjoint();
  double best = 0.0;
  CounterRng rng(seed, 0x33);
  for (int restart = 0; restart < 3; ++restart) {
    cvector v(n);
    for (auto& z : v) z = rng.next_complex_normal();
    double lam = 0.0;
    for (int it = 0; it < 600; ++it) {
      cvector w = sh.apply(s.apply(v));
      const double nrm = vec::norm2(w);
      if (nrm == 0.0) break;
      for (auto& z : w) z /= nrm;
      const double prev = lam;
      lam = nrm;
      v = std::move(w);
      if (it > 4 && std::abs(lam - prev) <= 1e-13 * lam) break;
    }
    best = std::max(best, lam);
  }
  return std::sqrt(best);
}

}  // namespace

MatricialNormEstimate matricial_gamma_norm(const std::vector<std::vector<ComplexMatrix>>& blocks,
                                           const ModelSpace& space, std::size_t trials,
                                           std::uint64_t seed) {
  space.validate();
  if (space.p == ModelSpace::inf)
    throw InvalidSpecError("sup-norm spaces are outside the Gaussian machinery");
  const std::size_t n = blocks.size();
  if (n == 0) throw InvalidSpecError("matricial norm needs a nonempty block grid");
  const std::size_t m = space.dim;
  for (const auto& row : blocks) {
    if (row.size() != n) throw DimensionMismatchError("block grid must be square");
    for (const auto& b : row)
      if (!b.square() || b.rows() != m)
        throw DimensionMismatchError("block does not act on the space");
  }

  if (space.is_hilbert()) {
    // Gaussian sums over a Hilbert space collapse to the direct sum of n
    // copies, so the norm is the block matrix spectral norm (with the
    // weighted similarity applied per copy).
    ComplexMatrix big(n * m, n * m);
    for (std::size_t bi = 0; bi < n; ++bi)
      for (std::size_t bj = 0; bj < n; ++bj)
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t j = 0; j < m; ++j) {
            cplx v = blocks[bi][bj](i, j);
            if (!space.weights.empty())
              v *= std::sqrt(space.weights[i] / space.weights[j]);
            big(bi * m + i, bj * m + j) = v;
          }
    const double value =
        n * m <= 160 ? spectral_norm(big) : power_iteration_sigma_max(big, seed);
    return {value, true};
  }

  RatioEvaluator ratio{space, 512, IndexedGaussians(seed, 0x44)};
  CounterRng rng(seed, 0x55);
  double best = 0.0;
  auto map_ratio = [&](std::vector<cvector>& xs) {
    std::vector<cvector> ys(n, cvector(m, cplx(0.0)));
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) {
        const cvector t = blocks[k][j].apply(xs[j]);
        for (std::size_t c = 0; c < m; ++c) ys[k][c] += t[c];
      }
    const double den = mc_gauss(xs, space, 512, ratio.gauss).value;
    return den == 0.0 ? 0.0 : mc_gauss(ys, space, 512, ratio.gauss).value / den;
  };
  for (std::size_t trial = 0; trial < std::max<std::size_t>(trials, 2); ++trial) {
    std::vector<cvector> xs(n, cvector(m));
    for (auto& x : xs)
      for (auto& z : x) z = rng.next_complex_normal();
    double cur = map_ratio(xs);
    for (int step = 0; step < 48; ++step) {
      const double scale = step < 24 ? 0.4 : 0.1;
      const std::size_t k = rng.next_u64() % n;
      const std::size_t j = rng.next_u64() % m;
      const cplx old = xs[k][j];
      xs[k][j] += scale * rng.next_complex_normal();
      const double cand = map_ratio(xs);
      if (cand > cur) {
        cur = cand;
      } else {
        xs[k][j] = old;
      }
    }
    best = std::max(best, cur);
  }
  return {best, false};
}

// --- property (alpha) ------------------------------------------------------------

double property_alpha_estimate(const ModelSpace& space, std::size_t n, std::size_t trials,
                               std::uint64_t seed) {
  space.validate();
  if (n < 2) throw InvalidSpecError("doubly indexed families need n >= 2");
  if (space.p == ModelSpace::inf)
    throw InvalidSpecError("sup-norm spaces are outside the Gaussian machinery");
  const std::size_t m = space.dim;
  CounterRng rng(seed, 0x66);
  double worst = 1.0;
  const std::size_t samples = 4096;

  for (std::size_t trial = 0; trial < trials; ++trial) {
    std::vector<cvector> family(n * n, cvector(m));
    for (auto& x : family)
      for (auto& z : x) z = rng.next_complex_normal();

    double single, iterated;
    if (space.is_hilbert()) {
      // both sides reduce to the same sum of squares
      single = exact_hilbert_gauss(family, space);
      iterated = single;
    } else {
      single = mc_gauss(family, space, samples, IndexedGaussians(seed, 1000 + trial)).value;
      // iterated sum: sample g_i and g'_j, average || sum g_i g'_j x_ij ||^2
      IndexedGaussians g(seed, 2000 + trial);
      const std::size_t pairs = samples / 2;
      double mean = 0.0;
      cvector acc(m);
      for (std::size_t s = 0; s < pairs; ++s) {
        for (int anti = 0; anti < 2; ++anti) {
          std::fill(acc.begin(), acc.end(), cplx(0.0));
          for (std::size_t i = 0; i < n; ++i) {
            const double gi = g(s, i, anti == 1);
            for (std::size_t j = 0; j < n; ++j) {
              const double gj = g(s, n + j, anti == 1);
              const cvector& x = family[i * n + j];
              const double gij = gi * gj;
              for (std::size_t c = 0; c < m; ++c) acc[c] += gij * x[c];
            }
          }
          const double nrm = pnorm(acc, space);
          mean += nrm * nrm;
        }
      }
      iterated = std::sqrt(mean / static_cast<double>(2 * pairs));
    }
    if (single > 0.0 && iterated > 0.0)
      worst = std::max({worst, single / iterated, iterated / single});
  }
  return worst;
}

}  // namespace sectorlab
