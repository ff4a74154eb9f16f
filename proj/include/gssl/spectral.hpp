#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <ostream>

#include <Eigen/Dense>

#include "gssl/error.hpp"
#include "gssl/graph.hpp"
#include "gssl/lapack.hpp"

namespace gssl {

// Ascending eigenvalues and orthonormal eigenvectors (columns) of a Laplacian.
struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;

  std::size_t size() const { return static_cast<std::size_t>(eigenvalues.size()); }
};

namespace detail {

inline void require_symmetric(const Eigen::MatrixXd& a) {
  require(a.rows() == a.cols(), "eigendecompose: matrix must be square");
  if (a.size() == 0) return;
  const double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  require(asym <= 1e-9 * scale, "eigendecompose: matrix is not symmetric");
}

// Small negative eigenvalues are roundoff; anything larger means the input
// was not positive semidefinite.
inline void clamp_psd(Eigen::VectorXd& w, double matrix_scale) {
  if (w.size() == 0) return;
  const double tol = 1e-8 * std::max(w(w.size() - 1), matrix_scale);
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (w(i) >= 0.0) continue;
    require(-w(i) <= tol, "eigendecompose: negative eigenvalue beyond tolerance (matrix not PSD)",
            ErrorKind::Numerical);
    w(i) = 0.0;
  }
}

// Index of the largest-|.| entry; entries within 1e-12 relative of the max
// count as ties and resolve to the lowest index.
inline Eigen::Index dominant_index(const Eigen::Ref<const Eigen::VectorXd>& v) {
  const double top = v.cwiseAbs().maxCoeff();
  const double cut = top * (1.0 - 1e-12);
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (std::abs(v(i)) >= cut) return i;
  return 0;
}

}  // namespace detail

inline SpectralDecomposition eigendecompose(const Eigen::MatrixXd& symmetric) {
  detail::require_symmetric(symmetric);
  SpectralDecomposition out;
  out.eigenvectors = symmetric;
  out.eigenvalues = lapack::syevd(out.eigenvectors, true);
  detail::clamp_psd(out.eigenvalues, symmetric.size() ? symmetric.cwiseAbs().maxCoeff() : 0.0);
  for (Eigen::Index k = 0; k < out.eigenvectors.cols(); ++k) {
    auto col = out.eigenvectors.col(k);
    if (col(detail::dominant_index(col)) < 0.0) col = -col;
  }
  return out;
}

inline SpectralDecomposition eigendecompose(const LaplacianMatrix& L) {
  return eigendecompose(L.entries);
}

// Eigenvalues only; cheaper when only eigenvalue counts are needed.
inline Eigen::VectorXd laplacian_eigenvalues(const LaplacianMatrix& L) {
  detail::require_symmetric(L.entries);
  Eigen::MatrixXd work = L.entries;
  Eigen::VectorXd w = lapack::syevd(work, false);
  detail::clamp_psd(w, L.entries.size() ? L.entries.cwiseAbs().maxCoeff() : 0.0);
  return w;
}

// Graph Fourier transform: c_i = u_i^T f.
inline Eigen::VectorXd gft(const SpectralDecomposition& decomp, const GraphSignal& f) {
  require(static_cast<std::size_t>(f.size()) == decomp.size(), "gft: signal length mismatch");
  return decomp.eigenvectors.transpose() * f;
}

inline GraphSignal inverse_gft(const SpectralDecomposition& decomp, const Eigen::VectorXd& c) {
  require(static_cast<std::size_t>(c.size()) == decomp.size(), "inverse_gft: length mismatch");
  return decomp.eigenvectors * c;
}

// Smallest eigenvalue nu such that the energy on eigenvalues strictly above
// nu is at most energy_tol * |f|^2. A roundoff floor of (64 n eps)^2 |f|^2 is
// always allowed, so energy_tol = 0 gives the strict bandwidth up to
// floating point.
inline double bandwidth(const SpectralDecomposition& decomp, const GraphSignal& f,
                        double energy_tol = 1e-4) {
  require(energy_tol >= 0.0 && energy_tol < 1.0, "bandwidth: energy_tol must lie in [0, 1)");
  const Eigen::VectorXd c = gft(decomp, f);
  const double energy = f.squaredNorm();
  require(energy > 0.0, "bandwidth: zero signal");
  const double n = static_cast<double>(decomp.size());
  const double floor = std::pow(64.0 * n * std::numeric_limits<double>::epsilon(), 2.0);
  const double allowed = std::max(energy_tol, floor) * energy;
  const Eigen::VectorXd& lam = decomp.eigenvalues;
  const Eigen::Index N = lam.size();
  // Walk down from the top eigenvalue; tail holds the energy strictly above
  // the current candidate. Equal eigenvalues are grouped.
  double tail = 0.0;
  Eigen::Index i = N - 1;
  double answer = lam(N - 1);
  while (i >= 0) {
    Eigen::Index j = i;
    while (j > 0 && lam(j - 1) == lam(i)) --j;
    if (tail > allowed) break;
    answer = lam(i);
    for (Eigen::Index k = j; k <= i; ++k) tail += c(k) * c(k);
    i = j - 1;
  }
  return answer;
}

// omega_m(f) = (f^T L^m f / f^T f)^(1/m) by repeated mat-vec with L (L^m is
// never formed). The vector is renormalized after every product and its log
// norm accumulated, so large m neither overflows nor underflows.
inline double bandwidth_estimate(const LaplacianMatrix& L, const GraphSignal& f, int m) {
  require(m >= 1, "bandwidth_estimate: m must be >= 1");
  require(static_cast<std::size_t>(f.size()) == L.size(), "bandwidth_estimate: length mismatch");
  const double fnorm = f.norm();
  require(fnorm > 0.0, "bandwidth_estimate: zero signal");
  Eigen::VectorXd v = f / fnorm;
  double log_scale = 0.0;  // log of |L^k f/|f||
  for (int k = 0; k < m / 2; ++k) {
    v = L.entries * v;
    const double nv = v.norm();
    if (nv == 0.0) return 0.0;
    log_scale += std::log(nv);
    v /= nv;
  }
  // f^T L^m f / f^T f = exp(2 log_scale) * q with q = |v|^2 or v^T L v.
  double q = 1.0;
  if (m % 2 == 1) q = std::max(0.0, v.dot(L.entries * v));
  if (q == 0.0) return 0.0;
  return std::exp((2.0 * log_scale + std::log(q)) / static_cast<double>(m));
}

// N_L(t) = #{i : lambda_i <= t}.
inline std::size_t eigencount(const Eigen::VectorXd& ascending, double t) {
  const double* b = ascending.data();
  const double* e = b + ascending.size();
  return static_cast<std::size_t>(std::upper_bound(b, e, t) - b);
}

inline std::size_t eigencount(const SpectralDecomposition& decomp, double t) {
  return eigencount(decomp.eigenvalues, t);
}

inline void write_spectrum_csv(std::ostream& os, const Eigen::VectorXd& eigenvalues) {
  os << "index,eigenvalue\n";
  os.precision(17);
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) os << i << ',' << eigenvalues(i) << '\n';
}

}  // namespace gssl
