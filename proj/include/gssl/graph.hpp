#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <ostream>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "gssl/error.hpp"
#include "gssl/models.hpp"
#include "gssl/numeric.hpp"
#include "gssl/quadrature.hpp"

namespace gssl {

using GraphSignal = Eigen::VectorXd;

// Normalized Gaussian kernel (2 pi sigma^2)^(-d/2) exp(-|xi - xj|^2 / (2 sigma^2)).
inline double gaussian_kernel(double squared_distance, double sigma, std::size_t dim) {
  const double norm = std::pow(2.0 * std::numbers::pi * sigma * sigma, -0.5 * static_cast<double>(dim));
  return norm * std::exp(-squared_distance / (2.0 * sigma * sigma));
}

inline double gaussian_weight(const Eigen::Ref<const Eigen::VectorXd>& xi,
                              const Eigen::Ref<const Eigen::VectorXd>& xj, double sigma) {
  require(sigma > 0.0, "gaussian_weight: sigma must be positive");
  require(xi.size() == xj.size(), "gaussian_weight: dimension mismatch");
  return gaussian_kernel((xi - xj).squaredNorm(), sigma, static_cast<std::size_t>(xi.size()));
}

// Fully connected similarity graph with w_ii = 0.
struct SimilarityGraph {
  Eigen::MatrixXd weights;
  Eigen::VectorXd degrees;
  double sigma = 0.0;
  std::size_t dim = 0;

  std::size_t size() const { return static_cast<std::size_t>(weights.rows()); }
};

struct LaplacianMatrix {
  Eigen::MatrixXd entries;  // (1/n)(D - W)

  std::size_t size() const { return static_cast<std::size_t>(entries.rows()); }
};

inline SimilarityGraph build_graph(const Dataset& data, double sigma) {
  require(data.size() >= 1, "build_graph: empty dataset");
  require(sigma > 0.0, "build_graph: sigma must be positive");
  require(data.points.allFinite(), "build_graph: non-finite coordinates");
  const Eigen::Index n = data.points.rows();
  SimilarityGraph g;
  g.sigma = sigma;
  g.dim = data.dim();
  g.weights.resize(n, n);
  const std::size_t d = data.dim();
  // Each pair is computed once and mirrored, so W is exactly symmetric.
  for (Eigen::Index j = 0; j < n; ++j) {
    g.weights(j, j) = 0.0;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double d2 = (data.points.row(i) - data.points.row(j)).squaredNorm();
      const double w = gaussian_kernel(d2, sigma, d);
      g.weights(i, j) = w;
      g.weights(j, i) = w;
    }
  }
  g.degrees.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    g.degrees(i) = pairwise_sum(std::span<const double>(g.weights.col(i).data(), static_cast<std::size_t>(n)));
  }
  return g;
}

inline LaplacianMatrix laplacian(const SimilarityGraph& graph) {
  const double inv_n = 1.0 / static_cast<double>(graph.size());
  LaplacianMatrix L;
  L.entries = -graph.weights * inv_n;
  L.entries.diagonal() = graph.degrees * inv_n;
  return L;
}

inline void require_binary(const GraphSignal& f, std::size_t n, const char* who) {
  require(static_cast<std::size_t>(f.size()) == n, std::string(who) + ": indicator length mismatch");
  for (Eigen::Index i = 0; i < f.size(); ++i)
    require(f(i) == 0.0 || f(i) == 1.0, std::string(who) + ": indicator must be binary");
}

// Direct cross-edge sum over i in S, j not in S.
inline double cut_value_direct(const SimilarityGraph& graph, const GraphSignal& indicator) {
  require_binary(indicator, graph.size(), "cut_value");
  const Eigen::Index n = static_cast<Eigen::Index>(graph.size());
  std::vector<double> partial;
  partial.reserve(static_cast<std::size_t>(n));
  std::vector<double> row;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (indicator(i) != 1.0) continue;
    row.clear();
    for (Eigen::Index j = 0; j < n; ++j)
      if (indicator(j) == 0.0) row.push_back(graph.weights(j, i));
    partial.push_back(pairwise_sum(row));
  }
  return pairwise_sum(partial);
}

// n f^T L f, evaluated with pairwise accumulation.
inline double cut_value_quadratic(const LaplacianMatrix& L, const GraphSignal& f) {
  const Eigen::VectorXd Lf = L.entries * f;
  return static_cast<double>(L.size()) *
         pairwise_dot(std::span<const double>(f.data(), static_cast<std::size_t>(f.size())),
                      std::span<const double>(Lf.data(), static_cast<std::size_t>(Lf.size())));
}

// Cut(S, S^c). Both the direct double sum and n f^T L f are evaluated; a
// disagreement beyond 1e-9 relative is a numerical error.
inline double cut_value(const SimilarityGraph& graph, const GraphSignal& indicator) {
  const double direct = cut_value_direct(graph, indicator);
  const double quad = cut_value_quadratic(laplacian(graph), indicator);
  // The quadratic form cancels terms of size sum_{i in S} d_i.
  const double scale = std::max(std::abs(direct), indicator.dot(graph.degrees));
  require(std::abs(direct - quad) <= 1e-9 * scale + 1e-300,
          "cut_value: direct sum and quadratic form disagree", ErrorKind::Numerical);
  return direct;
}

// Edge list `i,j,weight` over the upper triangle. Debug aid only.
inline void write_edge_list_csv(std::ostream& os, const SimilarityGraph& graph) {
  os << "i,j,weight\n";
  os.precision(17);
  const Eigen::Index n = static_cast<Eigen::Index>(graph.size());
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) os << i << ',' << j << ',' << graph.weights(i, j) << '\n';
}

// (K_sigma * p)(x): kernel-smoothed density at x, by tensor Gauss-Legendre
// over the box x +- 8 sigma. Used to check the p + O(sigma^2) expansion.
template <typename Model>
double kernel_smoothed_density(const Model& model, const Eigen::Vector2d& x, double sigma,
                               std::size_t nodes = 256) {
  require(sigma > 0.0, "kernel_smoothed_density: sigma must be positive");
  const double r = 8.0 * sigma;
  Eigen::VectorXd y(2);
  return integrate_box(
      [&](double u, double v) {
        y << u, v;
        const double d2 = (x - Eigen::Vector2d(u, v)).squaredNorm();
        return gaussian_kernel(d2, sigma, 2) * density_at(model, y);
      },
      x(0) - r, x(0) + r, x(1) - r, x(1) + r, nodes);
}

}  // namespace gssl
