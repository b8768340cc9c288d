#include "sectorlab/models.hpp"

#include <cmath>

namespace sectorlab {

ModelSpec::Kind ModelSpec::kind_from_string(const std::string& s) {
  if (s == "laplacian1d") return Kind::laplacian1d;
  if (s == "laplacian2d") return Kind::laplacian2d;
  if (s == "diagonal") return Kind::diagonal;
  if (s == "weighted_translation") return Kind::weighted_translation;
  throw InvalidSpecError("unknown model kind: " + s);
}

std::string ModelSpec::kind_to_string(Kind k) {
  switch (k) {
    case Kind::laplacian1d: return "laplacian1d";
    case Kind::laplacian2d: return "laplacian2d";
    case Kind::diagonal: return "diagonal";
    case Kind::weighted_translation: return "weighted_translation";
  }
  return "?";
}

Model build_model(const ModelSpec& spec) {
  switch (spec.kind) {
    case ModelSpec::Kind::laplacian1d: {
      if (spec.m < 1) throw InvalidSpecError("laplacian1d needs m >= 1");
      ComplexMatrix a = ComplexMatrix::tridiagonal(spec.m, -1.0, 2.0);
      ModelSpace space(spec.p, spec.m);
      return Model{SectorialOperator(std::move(a), std::move(space), spec.sector_angle), spec, {}, 0.0};
    }
    case ModelSpec::Kind::laplacian2d: {
      if (spec.m < 1) throw InvalidSpecError("laplacian2d needs m >= 1 per axis");
      const ComplexMatrix one = ComplexMatrix::tridiagonal(spec.m, -1.0, 2.0);
      const ComplexMatrix eye = ComplexMatrix::identity(spec.m);
      ComplexMatrix a = kron(one, eye) + kron(eye, one);
      ModelSpace space(spec.p, spec.m * spec.m);
      return Model{SectorialOperator(std::move(a), std::move(space), spec.sector_angle), spec, {}, 0.0};
    }
    case ModelSpec::Kind::diagonal: {
      if (spec.eigenvalues.empty()) throw InvalidSpecError("diagonal model needs eigenvalues");
      for (double ev : spec.eigenvalues)
        if (!(ev > 0.0)) throw InvalidSpecError("diagonal eigenvalues must be positive");
      ComplexMatrix a = ComplexMatrix::diagonal(std::span<const double>(spec.eigenvalues));
      ModelSpace space(spec.p, spec.eigenvalues.size());
      return Model{SectorialOperator(std::move(a), std::move(space), spec.sector_angle), spec, {}, 0.0};
    }
    case ModelSpec::Kind::weighted_translation: {
      if (spec.m < 3 || spec.m % 2 == 0)
        throw InvalidSpecError("weighted_translation needs odd m >= 3 so 0 is on the grid");
      if (!(spec.length > 0.0)) throw InvalidSpecError("weighted_translation needs L > 0");
      const std::size_t m = spec.m;
      const double step = 2.0 * spec.length / static_cast<double>(m - 1);
      std::vector<double> xi(m);
      std::vector<double> weights(m);
      std::vector<double> diag(m);
      for (std::size_t j = 0; j < m; ++j) {
        xi[j] = -spec.length + step * static_cast<double>(j);
        // amplitude weight <xi>^alpha enters the norm squared
        weights[j] = std::pow(1.0 + xi[j] * xi[j], spec.alpha);
        diag[j] = std::exp(xi[j]);
      }
      ComplexMatrix a = ComplexMatrix::diagonal(std::span<const double>(diag));
      ModelSpace space(2.0, m, std::move(weights));
      Model model{SectorialOperator(std::move(a), std::move(space), spec.sector_angle), spec, {}, 0.0};
      model.frequency_grid = std::move(xi);
      model.grid_step = step;
      return model;
    }
  }
  throw InvalidSpecError("unhandled model kind");
}

namespace {

long shift_count(const Model& model, double t) {
  if (model.spec.kind != ModelSpec::Kind::weighted_translation)
    throw InvalidSpecError("translation action only exists on the weighted_translation model");
  const double raw = t / model.grid_step;
  const long k = std::lround(raw);
  if (std::abs(raw - static_cast<double>(k)) > 1e-9)
    throw InvalidSpecError("translation parameter must be a multiple of the grid step");
  return k;
}

}  // namespace

ComplexMatrix translation_power(const Model& model, double t) {
  const long k = shift_count(model, t);
  const long m = static_cast<long>(model.op.dim());
  ComplexMatrix u(m, m);
  for (long j = 0; j < m; ++j) {
    const long i = j + k;  // coefficient at xi_j moves to xi_j + t
    if (i >= 0 && i < m) u(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = 1.0;
  }
  return u;
}

double translation_power_norm(const Model& model, double t) {
  const long k = shift_count(model, t);
  const long m = static_cast<long>(model.op.dim());
  const auto& w = model.op.space().weights;
  double best = 0.0;
  for (long j = 0; j < m; ++j) {
    const long i = j + k;
    if (i >= 0 && i < m)
      best = std::max(best, w[static_cast<std::size_t>(i)] / w[static_cast<std::size_t>(j)]);
  }
  return std::sqrt(best);
}

}  // namespace sectorlab
