// Gauss-Legendre nodes and composite panel rules, including log-spaced
// panels for integrands that live across many decades.
#pragma once

#include <cstddef>
#include <vector>

namespace sectorlab {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::size_t size() const { return nodes.size(); }
};

// n-point Gauss-Legendre rule on [-1, 1] (Newton on the Legendre recurrence).
QuadratureRule gauss_legendre(std::size_t n);

// Composite rule over explicit breakpoints, nodes_per_panel Gauss-Legendre
// points per panel.
QuadratureRule composite_panels(const std::vector<double>& breakpoints,
                                std::size_t nodes_per_panel = 8);

// Uniform panels over [a, b].
QuadratureRule linear_panels(double a, double b, std::size_t panels,
                             std::size_t nodes_per_panel = 8);

// Panels uniform in log x over [a, b], 0 < a < b. Integrates dx (the
// Jacobian is folded into the weights).
QuadratureRule log_panels(double a, double b, double panels_per_decade,
                          std::size_t nodes_per_panel = 8);

}  // namespace sectorlab
