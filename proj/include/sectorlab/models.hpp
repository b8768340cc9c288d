// Model operator factory: discrete Laplacians, diagonal models, and the
// weighted-translation model whose imaginary powers shift a truncated
// frequency grid.
#pragma once

#include <string>
#include <vector>

#include "sectorlab/calculus.hpp"

namespace sectorlab {

struct ModelSpec {
  enum class Kind { laplacian1d, laplacian2d, diagonal, weighted_translation };

  Kind kind = Kind::laplacian1d;
  std::size_t m = 8;      // per-axis size for laplacian2d, grid size otherwise
  double p = 2.0;
  std::vector<double> eigenvalues;  // diagonal kind
  double alpha = 1.0;               // weighted_translation smoothness weight
  double length = 20.0;             // weighted_translation half-width L
  double sector_angle = 0.05;

  static Kind kind_from_string(const std::string& s);
  static std::string kind_to_string(Kind k);
};

struct Model {
  SectorialOperator op;
  ModelSpec spec;
  // weighted_translation bookkeeping
  std::vector<double> frequency_grid;
  double grid_step = 0.0;
};

Model build_model(const ModelSpec& spec);

// Group action realizing the imaginary powers of the weighted_translation
// model: shift by t on the frequency grid, t an integer multiple of the
// grid step. Mass shifted outside the truncated grid is lost, which is why
// results only witness the infinite model for |t| <= L/2.
ComplexMatrix translation_power(const Model& model, double t);

// || translation_power(t) || on the weighted space (closed form: the largest
// weight ratio over admissible shifts).
double translation_power_norm(const Model& model, double t);

}  // namespace sectorlab
