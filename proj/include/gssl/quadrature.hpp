#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "gssl/error.hpp"

namespace gssl {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre rule with `count` nodes on [lo, hi]. Nodes are found by
// Newton iteration on P_count starting from the Chebyshev-like guess.
inline QuadratureRule gauss_legendre(std::size_t count, double lo = -1.0, double hi = 1.0) {
  require(count >= 1, "gauss_legendre: count must be >= 1");
  QuadratureRule rule;
  rule.nodes.resize(count);
  rule.weights.resize(count);
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  const std::size_t m = (count + 1) / 2;
  const double nd = static_cast<double>(count);
  for (std::size_t i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (nd + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = 0.0;
      for (std::size_t j = 0; j < count; ++j) {
        const double p2 = p1;
        p1 = p0;
        const double jd = static_cast<double>(j);
        p0 = ((2.0 * jd + 1.0) * z * p1 - jd * p2) / (jd + 1.0);
      }
      dp = nd * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.nodes[i] = mid - half * z;
    rule.nodes[count - 1 - i] = mid + half * z;
    rule.weights[i] = half * w;
    rule.weights[count - 1 - i] = half * w;
  }
  return rule;
}

// Tensor-product rule over [x0, x1] x [y0, y1].
template <typename F>
double integrate_box(F&& f, double x0, double x1, double y0, double y1, std::size_t nodes) {
  const QuadratureRule rx = gauss_legendre(nodes, x0, x1);
  const QuadratureRule ry = gauss_legendre(nodes, y0, y1);
  double total = 0.0;
  for (std::size_t i = 0; i < nodes; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < nodes; ++j) row += ry.weights[j] * f(rx.nodes[i], ry.nodes[j]);
    total += rx.weights[i] * row;
  }
  return total;
}

}  // namespace gssl
