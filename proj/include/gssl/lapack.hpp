#pragma once

// Thin RAII-free wrappers over the handful of LAPACK drivers the library uses.
// All matrices are Eigen column-major.

#include <algorithm>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <lapacke.h>

#include "gssl/error.hpp"

namespace gssl::lapack {

// Residual check of the eigensolver on a fixed 160 x 160 matrix, run once per
// process. Some BLAS builds pick faulty kernels on newer CPUs and return
// garbage without reporting an error; this turns that into a hard failure.
inline bool kernels_ok() {
  static const bool ok = [] {
    const lapack_int n = 160;
    Eigen::MatrixXd a(n, n);
    for (lapack_int j = 0; j < n; ++j)
      for (lapack_int i = 0; i < n; ++i) a(i, j) = 1.0 / (1.0 + i + j) + (i == j ? 0.01 * i : 0.0);
    Eigen::MatrixXd v = a;
    Eigen::VectorXd w(n);
    if (LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, v.data(), n, w.data()) != 0) return false;
    const double resid = (a * v - v * w.asDiagonal()).cwiseAbs().maxCoeff();
    const double orth = (v.transpose() * v - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
    return resid <= 1e-10 && orth <= 1e-10;
  }();
  return ok;
}

inline void require_kernels() {
  if (!kernels_ok())
    throw Error(ErrorKind::Numerical,
                "LAPACK self-check failed: the BLAS library returns wrong eigenvectors on this CPU "
                "(for OpenBLAS, set OPENBLAS_CORETYPE, e.g. Haswell)");
}

// Symmetric eigendecomposition (divide and conquer). `a` is overwritten with
// the eigenvectors when `vectors` is true; eigenvalues come back ascending.
inline Eigen::VectorXd syevd(Eigen::MatrixXd& a, bool vectors) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  Eigen::VectorXd w(n);
  if (n == 0) return w;
  require_kernels();
  const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, vectors ? 'V' : 'N', 'L', n, a.data(),
                                         n, w.data());
  if (info != 0)
    throw Error(ErrorKind::Numerical, "dsyevd failed to converge (info=" + std::to_string(info) + ")");
  return w;
}

struct LuSolve {
  Eigen::VectorXd x;
  double rcond = 0.0;  // reciprocal 1-norm condition estimate
  bool singular = false;
};

// Square solve via partial-pivot LU with a condition estimate.
inline LuSolve lu_solve(Eigen::MatrixXd a, const Eigen::VectorXd& b) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  LuSolve out;
  out.x = b;
  if (n == 0) return out;
  require_kernels();
  const double anorm = a.cwiseAbs().colwise().sum().maxCoeff();
  std::vector<lapack_int> ipiv(static_cast<std::size_t>(n));
  const lapack_int info = LAPACKE_dgetrf(LAPACK_COL_MAJOR, n, n, a.data(), n, ipiv.data());
  if (info > 0) {
    out.singular = true;
    return out;
  }
  if (info < 0) throw Error(ErrorKind::Numerical, "dgetrf: invalid argument");
  LAPACKE_dgecon(LAPACK_COL_MAJOR, '1', n, a.data(), n, anorm, &out.rcond);
  LAPACKE_dgetrs(LAPACK_COL_MAJOR, 'N', n, 1, a.data(), n, ipiv.data(), out.x.data(), n);
  return out;
}

struct LeastSquares {
  Eigen::VectorXd x;
  lapack_int rank = 0;
  Eigen::VectorXd singular_values;
};

// Minimum-norm least squares via SVD; singular values below
// rcond * sigma_max are treated as zero.
inline LeastSquares gelsd(Eigen::MatrixXd a, const Eigen::VectorXd& b, double rcond) {
  const lapack_int m = static_cast<lapack_int>(a.rows());
  const lapack_int n = static_cast<lapack_int>(a.cols());
  const lapack_int ldb = std::max(m, n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(ldb);
  rhs.head(m) = b;
  require_kernels();
  LeastSquares out;
  out.singular_values.resize(std::min(m, n));
  lapack_int info = LAPACKE_dgelsd(LAPACK_COL_MAJOR, m, n, 1, a.data(), m, rhs.data(), ldb,
                                   out.singular_values.data(), rcond, &out.rank);
  if (info != 0)
    throw Error(ErrorKind::Numerical, "dgelsd failed (info=" + std::to_string(info) + ")");
  out.x = rhs.head(n);
  return out;
}

// Same contract as gelsd, using the QR-iteration SVD driver; slower but a
// useful fallback when divide and conquer fails to converge.
inline LeastSquares gelss(Eigen::MatrixXd a, const Eigen::VectorXd& b, double rcond) {
  const lapack_int m = static_cast<lapack_int>(a.rows());
  const lapack_int n = static_cast<lapack_int>(a.cols());
  const lapack_int ldb = std::max(m, n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(ldb);
  rhs.head(m) = b;
  require_kernels();
  LeastSquares out;
  out.singular_values.resize(std::min(m, n));
  lapack_int info = LAPACKE_dgelss(LAPACK_COL_MAJOR, m, n, 1, a.data(), m, rhs.data(), ldb,
                                   out.singular_values.data(), rcond, &out.rank);
  if (info != 0)
    throw Error(ErrorKind::Numerical, "dgelss failed (info=" + std::to_string(info) + ")");
  out.x = rhs.head(n);
  return out;
}

}  // namespace gssl::lapack
