#pragma once

// Label selection, bandlimited reconstruction and the error/complexity
// measures built on top of them.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "gssl/error.hpp"
#include "gssl/graph.hpp"
#include "gssl/lapack.hpp"
#include "gssl/spectral.hpp"

namespace gssl {

struct LabelSet {
  std::vector<std::size_t> indices;  // sorted, distinct
  double cutoff = 0.0;               // omega_c(L)

  std::size_t size() const { return indices.size(); }
};

// lambda_l, 1-indexed.
inline double cutoff_frequency(const SpectralDecomposition& decomp, std::size_t l) {
  require(l >= 1 && l <= decomp.size(), "cutoff_frequency: l must lie in [1, n]");
  return decomp.eigenvalues(static_cast<Eigen::Index>(l - 1));
}

// Rows picked by pivoted column-wise Gaussian elimination on the first l
// eigenvectors, in pick order. Step k takes the unpicked row with the largest
// |entry| in the (already eliminated) column k and then eliminates that row
// from every later column. Picks for l are a prefix of the picks for any
// larger l.
//
// The elimination is blocked: inside a panel of columns the column
// operations are applied directly; the later columns receive the panel's
// combined update T -= A * (A_P^-1 T_P) at once, where A_P (pivot rows of the
// panel) is lower triangular.
inline std::vector<std::size_t> pivot_order(const SpectralDecomposition& decomp, std::size_t l) {
  const std::size_t n = decomp.size();
  require(l >= 1 && l <= n, "select_labels: l must lie in [1, n]");
  constexpr Eigen::Index kPanel = 32;
  const Eigen::Index rows = static_cast<Eigen::Index>(n);
  const Eigen::Index cols = static_cast<Eigen::Index>(l);
  Eigen::MatrixXd C = decomp.eigenvectors.leftCols(cols);
  std::vector<char> used(n, 0);
  std::vector<std::size_t> picks;
  picks.reserve(l);

  for (Eigen::Index k0 = 0; k0 < cols; k0 += kPanel) {
    const Eigen::Index kb = std::min(kPanel, cols - k0);
    for (Eigen::Index k = k0; k < k0 + kb; ++k) {
      double top = 0.0;
      for (Eigen::Index i = 0; i < rows; ++i)
        if (!used[static_cast<std::size_t>(i)]) top = std::max(top, std::abs(C(i, k)));
      require(top > 0.0, "select_labels: eigenvector block lost rank", ErrorKind::Numerical);
      const double cut = top * (1.0 - 1e-12);
      Eigen::Index p = 0;
      for (Eigen::Index i = 0; i < rows; ++i) {
        if (!used[static_cast<std::size_t>(i)] && std::abs(C(i, k)) >= cut) {
          p = i;
          break;
        }
      }
      used[static_cast<std::size_t>(p)] = 1;
      picks.push_back(static_cast<std::size_t>(p));
      const double pivot = C(p, k);
      for (Eigen::Index j = k + 1; j < k0 + kb; ++j) {
        const double factor = C(p, j) / pivot;
        if (factor != 0.0) C.col(j) -= factor * C.col(k);
      }
    }
    const Eigen::Index rest = cols - (k0 + kb);
    if (rest == 0) continue;
    Eigen::MatrixXd pivot_block(kb, kb);
    Eigen::MatrixXd trailing_pivots(kb, rest);
    for (Eigen::Index r = 0; r < kb; ++r) {
      const Eigen::Index p = static_cast<Eigen::Index>(picks[static_cast<std::size_t>(k0 + r)]);
      pivot_block.row(r) = C.row(p).segment(k0, kb);
      trailing_pivots.row(r) = C.row(p).tail(rest);
    }
    const Eigen::MatrixXd X = pivot_block.triangularView<Eigen::Lower>().solve(trailing_pivots);
    C.rightCols(rest).noalias() -= C.middleCols(k0, kb) * X;
  }
  return picks;
}

inline LabelSet label_set_from_order(const SpectralDecomposition& decomp,
                                     const std::vector<std::size_t>& order, std::size_t l) {
  require(l >= 1 && l <= order.size(), "label_set_from_order: l exceeds the pivot order");
  LabelSet out;
  out.indices.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(l));
  std::sort(out.indices.begin(), out.indices.end());
  out.cutoff = cutoff_frequency(decomp, l);
  return out;
}

inline LabelSet select_labels(const SpectralDecomposition& decomp, std::size_t l) {
  return label_set_from_order(decomp, pivot_order(decomp, l), l);
}

struct Reconstruction {
  GraphSignal signal;
  std::size_t band_size = 0;  // |R|
  std::size_t rank = 0;       // numerical rank of U_{L,R}
  bool rank_deficient = false;
};

// Bandlimited least squares: g = U_{:,R} c with c minimizing
// |U_{L,R} c - f_L|^2 (minimum norm), R = {i : lambda_i <= theta}.
inline Reconstruction reconstruct_bandlimited(const SpectralDecomposition& decomp,
                                              const LabelSet& labels,
                                              const Eigen::VectorXd& known_values, double theta) {
  require(!labels.indices.empty(), "reconstruct_bandlimited: empty label set");
  require(static_cast<std::size_t>(known_values.size()) == labels.size(),
          "reconstruct_bandlimited: known_values length must equal |labels|");
  const std::size_t n = decomp.size();
  for (std::size_t idx : labels.indices)
    require(idx < n, "reconstruct_bandlimited: label index out of range");
  const std::size_t r = eigencount(decomp, theta);
  if (r == 0)
    throw Error(ErrorKind::EmptyBand, "reconstruct_bandlimited: theta is below lambda_1, band is empty");

  const Eigen::Index rows = static_cast<Eigen::Index>(labels.size());
  const Eigen::Index band = static_cast<Eigen::Index>(r);
  Eigen::MatrixXd A(rows, band);
  for (Eigen::Index i = 0; i < rows; ++i)
    A.row(i) = decomp.eigenvectors.row(static_cast<Eigen::Index>(labels.indices[static_cast<std::size_t>(i)])).head(band);

  Reconstruction out;
  out.band_size = r;
  Eigen::VectorXd coeffs;
  bool solved = false;
  if (rows == band) {
    // kappa_2 <= n kappa_1, so rcond_1 >= 1e-6 keeps every singular value
    // above the 1e-10 truncation level and LU gives the same answer.
    const lapack::LuSolve lu = lapack::lu_solve(A, known_values);
    if (!lu.singular && lu.rcond >= 1e-6) {
      coeffs = lu.x;
      out.rank = r;
      solved = true;
    }
  }
  if (!solved) {
    lapack::LeastSquares ls;
    try {
      ls = lapack::gelsd(A, known_values, 1e-10);
    } catch (const Error&) {
      ls = lapack::gelss(A, known_values, 1e-10);
    }
    coeffs = ls.x;
    out.rank = static_cast<std::size_t>(ls.rank);
  }
  out.rank_deficient = out.rank < std::min(labels.size(), r);
  out.signal = decomp.eigenvectors.leftCols(band) * coeffs;
  return out;
}

inline GraphSignal threshold_signal(const GraphSignal& g, double level = 0.5) {
  GraphSignal out(g.size());
  for (Eigen::Index i = 0; i < g.size(); ++i) out(i) = g(i) >= level ? 1.0 : 0.0;
  return out;
}

// Mismatches on the unlabeled nodes divided by their number.
inline double mean_error(const GraphSignal& predicted, const GraphSignal& truth, const LabelSet& labels) {
  const std::size_t n = static_cast<std::size_t>(truth.size());
  require(static_cast<std::size_t>(predicted.size()) == n, "mean_error: length mismatch");
  require_binary(predicted, n, "mean_error");
  require_binary(truth, n, "mean_error");
  std::vector<char> labeled(n, 0);
  for (std::size_t idx : labels.indices) {
    require(idx < n, "mean_error: label index out of range");
    labeled[idx] = 1;
  }
  const std::size_t unlabeled =
      n - static_cast<std::size_t>(std::count(labeled.begin(), labeled.end(), 1));
  require(unlabeled > 0, "mean_error: every node is labeled");
  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (!labeled[i] && predicted(static_cast<Eigen::Index>(i)) != truth(static_cast<Eigen::Index>(i)))
      ++mismatches;
  return static_cast<double>(mismatches) / static_cast<double>(unlabeled);
}

// (1/n) N_L(omega(f)).
inline double label_complexity(const SpectralDecomposition& decomp, const GraphSignal& f,
                               double energy_tol = 1e-4) {
  const double w = bandwidth(decomp, f, energy_tol);
  return static_cast<double>(eigencount(decomp, w)) / static_cast<double>(decomp.size());
}

}  // namespace gssl
