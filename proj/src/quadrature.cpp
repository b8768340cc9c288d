#include "sectorlab/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace sectorlab {

QuadratureRule gauss_legendre(std::size_t n) {
  static std::mutex cache_mutex;
  static std::map<std::size_t, QuadratureRule> cache;
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
  }

  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const std::size_t m = (n + 1) / 2;
  for (std::size_t i = 0; i < m; ++i) {
    double x = std::cos(M_PI * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  std::lock_guard<std::mutex> lock(cache_mutex);
  cache[n] = rule;
  return rule;
}

QuadratureRule composite_panels(const std::vector<double>& breakpoints,
                                std::size_t nodes_per_panel) {
  if (breakpoints.size() < 2) throw std::invalid_argument("need at least one panel");
  const QuadratureRule base = gauss_legendre(nodes_per_panel);
  QuadratureRule rule;
  rule.nodes.reserve((breakpoints.size() - 1) * nodes_per_panel);
  rule.weights.reserve((breakpoints.size() - 1) * nodes_per_panel);
  for (std::size_t k = 0; k + 1 < breakpoints.size(); ++k) {
    const double a = breakpoints[k], b = breakpoints[k + 1];
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (std::size_t i = 0; i < nodes_per_panel; ++i) {
      rule.nodes.push_back(mid + half * base.nodes[i]);
      rule.weights.push_back(half * base.weights[i]);
    }
  }
  return rule;
}

QuadratureRule linear_panels(double a, double b, std::size_t panels,
                             std::size_t nodes_per_panel) {
  std::vector<double> bp(panels + 1);
  for (std::size_t k = 0; k <= panels; ++k)
    bp[k] = a + (b - a) * static_cast<double>(k) / static_cast<double>(panels);
  return composite_panels(bp, nodes_per_panel);
}

QuadratureRule log_panels(double a, double b, double panels_per_decade,
                          std::size_t nodes_per_panel) {
  if (!(a > 0.0) || !(b > a)) throw std::invalid_argument("log_panels needs 0 < a < b");
  const double la = std::log(a), lb = std::log(b);
  const double decades = (lb - la) / std::log(10.0);
  const std::size_t panels =
      std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(decades * panels_per_decade)));
  const QuadratureRule base = gauss_legendre(nodes_per_panel);
  QuadratureRule rule;
  rule.nodes.reserve(panels * nodes_per_panel);
  rule.weights.reserve(panels * nodes_per_panel);
  for (std::size_t k = 0; k < panels; ++k) {
    const double va = la + (lb - la) * static_cast<double>(k) / static_cast<double>(panels);
    const double vb = la + (lb - la) * static_cast<double>(k + 1) / static_cast<double>(panels);
    const double mid = 0.5 * (va + vb), half = 0.5 * (vb - va);
    for (std::size_t i = 0; i < nodes_per_panel; ++i) {
      const double v = mid + half * base.nodes[i];
      const double x = std::exp(v);
      rule.nodes.push_back(x);
      rule.weights.push_back(half * base.weights[i] * x);
    }
  }
  return rule;
}

}  // namespace sectorlab
