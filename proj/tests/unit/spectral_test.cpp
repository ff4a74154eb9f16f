#include <cmath>
#include <limits>
#include <sstream>

#include <gtest/gtest.h>

#include "gssl/spectral.hpp"
#include "test_util.hpp"

using namespace gssl;
using gssl::testing::random_laplacian;
using gssl::testing::random_vector;
using gssl::testing::two_points;
using gssl::testing::uniform_int;

namespace {

// (sum c_i^2 lambda_i^m / sum c_i^2)^(1/m) in log space.
double spectral_form(const SpectralDecomposition& dec, const Eigen::VectorXd& f, int m) {
  const Eigen::VectorXd c = gft(dec, f);
  double top = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < c.size(); ++i)
    if (c(i) != 0 && dec.eigenvalues(i) > 0) top = std::max(top, 2 * std::log(std::abs(c(i))) + m * std::log(dec.eigenvalues(i)));
  double s = 0;
  for (Eigen::Index i = 0; i < c.size(); ++i)
    if (c(i) != 0 && dec.eigenvalues(i) > 0)
      s += std::exp(2 * std::log(std::abs(c(i))) + m * std::log(dec.eigenvalues(i)) - top);
  return std::exp((top + std::log(s) - std::log(f.squaredNorm())) / m);
}

}  // namespace

TEST(Eigendecompose, ZeroMatrix) {
  const auto dec = eigendecompose(Eigen::MatrixXd::Zero(3, 3));
  EXPECT_EQ(dec.eigenvalues, Eigen::VectorXd::Zero(3));
  EXPECT_LE((dec.eigenvectors.transpose() * dec.eigenvectors - Eigen::MatrixXd::Identity(3, 3)).norm(), 1e-14);
}

TEST(Eigendecompose, TwoNodeGraph) {
  const auto L = laplacian(build_graph(two_points(0.7), 0.5));
  const double w = 2 * L.entries(0, 0);
  const auto dec = eigendecompose(L);
  EXPECT_NEAR(dec.eigenvalues(0), 0.0, 1e-15);
  EXPECT_NEAR(dec.eigenvalues(1), w, 1e-15);
  const double h = 1 / std::sqrt(2.0);
  EXPECT_NEAR(dec.eigenvectors(0, 0), h, 1e-12);
  EXPECT_NEAR(dec.eigenvectors(1, 0), h, 1e-12);
  EXPECT_NEAR(std::abs(dec.eigenvectors(0, 1)), h, 1e-12);
  EXPECT_NEAR(dec.eigenvectors(0, 1), -dec.eigenvectors(1, 1), 1e-12);
}

TEST(Eigendecompose, ReconstructsAndIsOrthonormal) {
  CounterRng rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = trial == 0 ? 20 : uniform_int(rng, 2, 60);
    const auto L = random_laplacian(n, rng);
    const auto dec = eigendecompose(L);
    const Eigen::MatrixXd rec = dec.eigenvectors * dec.eigenvalues.asDiagonal() * dec.eigenvectors.transpose();
    EXPECT_LE((rec - L.entries).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_LE((dec.eigenvectors.transpose() * dec.eigenvectors -
               Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)))
                  .cwiseAbs()
                  .maxCoeff(),
              1e-10);
    for (Eigen::Index i = 1; i < dec.eigenvalues.size(); ++i) EXPECT_LE(dec.eigenvalues(i - 1), dec.eigenvalues(i));
    const Eigen::VectorXd only = laplacian_eigenvalues(L);
    EXPECT_LE((only - dec.eigenvalues).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Eigendecompose, SignConventionDominantEntryPositive) {
  CounterRng rng(2);
  const auto dec = eigendecompose(random_laplacian(40, rng));
  for (Eigen::Index k = 0; k < dec.eigenvectors.cols(); ++k) {
    const auto col = dec.eigenvectors.col(k);
    Eigen::Index idx = 0;
    col.cwiseAbs().maxCoeff(&idx);
    EXPECT_GT(col(idx), 0.0);
  }
}

TEST(Eigendecompose, RejectsNonSymmetricAndIndefinite) {
  Eigen::MatrixXd a(2, 2);
  a << 1, 2, 0, 1;
  EXPECT_THROW(eigendecompose(a), Error);
  a << -1, 0, 0, 1;
  EXPECT_THROW(eigendecompose(a), Error);
  EXPECT_THROW(eigendecompose(Eigen::MatrixXd::Zero(2, 3)), Error);
}

TEST(Gft, ExamplesAndRoundTrip) {
  CounterRng rng(3);
  const auto dec = eigendecompose(random_laplacian(20, rng));
  const Eigen::VectorXd c3 = gft(dec, dec.eigenvectors.col(2));
  Eigen::VectorXd e3 = Eigen::VectorXd::Zero(20);
  e3(2) = 1;
  EXPECT_LE((c3 - e3).cwiseAbs().maxCoeff(), 1e-8);
  const Eigen::VectorXd c = gft(dec, Eigen::VectorXd::Constant(20, 2.0));
  EXPECT_NEAR(c(0), 2.0 * std::sqrt(20.0), 1e-9);
  EXPECT_LE(c.tail(19).cwiseAbs().maxCoeff(), 1e-9);
  const Eigen::VectorXd f = random_vector(20, rng);
  EXPECT_LE((inverse_gft(dec, gft(dec, f)) - f).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_NEAR(gft(dec, f).squaredNorm(), f.squaredNorm(), 1e-10 * f.squaredNorm());
  EXPECT_THROW(gft(dec, Eigen::VectorXd::Zero(3)), Error);
}

TEST(Bandwidth, Examples) {
  CounterRng rng(4);
  const auto dec = eigendecompose(random_laplacian(25, rng));
  EXPECT_EQ(bandwidth(dec, Eigen::VectorXd::Ones(25), 0.0), dec.eigenvalues(0));
  EXPECT_EQ(bandwidth(dec, Eigen::VectorXd::Ones(25)), dec.eigenvalues(0));
  EXPECT_NEAR(bandwidth(dec, Eigen::VectorXd::Ones(25)), 0.0, 1e-12);
  const Eigen::VectorXd f = dec.eigenvectors.col(0) + dec.eigenvectors.col(3);
  EXPECT_EQ(bandwidth(dec, f, 0.0), dec.eigenvalues(3));
  // a component holding 1e-6 of the energy is dropped at tol 1e-4
  const Eigen::VectorXd g = dec.eigenvectors.col(1) + 1e-3 * dec.eigenvectors.col(20);
  EXPECT_EQ(bandwidth(dec, g, 0.0), dec.eigenvalues(20));
  EXPECT_EQ(bandwidth(dec, g, 1e-4), dec.eigenvalues(1));

  const auto two = eigendecompose(laplacian(build_graph(two_points(0.4), 0.5)));
  EXPECT_EQ(bandwidth(two, Eigen::Vector2d(1, 0), 0.0), two.eigenvalues(1));
}

TEST(Bandwidth, RejectsBadInput) {
  CounterRng rng(5);
  const auto dec = eigendecompose(random_laplacian(10, rng));
  EXPECT_THROW(bandwidth(dec, Eigen::VectorXd::Zero(10)), Error);
  EXPECT_THROW(bandwidth(dec, Eigen::VectorXd::Ones(10), 1.0), Error);
  EXPECT_THROW(bandwidth(dec, Eigen::VectorXd::Ones(10), -0.1), Error);
}

TEST(Bandwidth, NonincreasingInTolerance) {
  CounterRng rng(6);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = uniform_int(rng, 3, 50);
    const auto dec = eigendecompose(random_laplacian(n, rng));
    const Eigen::VectorXd f = random_vector(n, rng);
    double prev = bandwidth(dec, f, 0.0);
    for (double tol : {1e-8, 1e-6, 1e-4, 1e-2, 0.1, 0.5}) {
      const double w = bandwidth(dec, f, tol);
      EXPECT_LE(w, prev);
      prev = w;
    }
  }
}

TEST(BandwidthEstimate, TwoNodeExamples) {
  const auto L = laplacian(build_graph(two_points(0.4), 0.5));
  const double w = 2 * L.entries(0, 0);
  EXPECT_NEAR(bandwidth_estimate(L, Eigen::Vector2d(1, 0), 1), w / 2, 1e-15);
  EXPECT_NEAR(bandwidth_estimate(L, Eigen::Vector2d(1, 0), 2), w / std::sqrt(2.0), 1e-15);
  EXPECT_EQ(bandwidth_estimate(L, Eigen::Vector2d(1, 1), 3), 0.0);
  EXPECT_THROW(bandwidth_estimate(L, Eigen::Vector2d(1, 1), 0), Error);
  EXPECT_THROW(bandwidth_estimate(L, Eigen::Vector2d(0, 0), 1), Error);
}

TEST(BandwidthEstimate, MonotoneAndBoundedByBandwidth) {
  CounterRng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = uniform_int(rng, 2, 50);
    const auto L = random_laplacian(n, rng);
    const auto dec = eigendecompose(L);
    const Eigen::VectorXd f = random_vector(n, rng);
    const double w = bandwidth(dec, f, 0.0);
    double prev = 0;
    for (int m = 1; m <= 12; ++m) {
      const double wm = bandwidth_estimate(L, f, m);
      EXPECT_LE(prev, wm + 1e-9) << "m=" << m;
      EXPECT_LE(wm, w + 1e-9);
      prev = wm;
    }
  }
}

TEST(BandwidthEstimate, MatVecEqualsSpectralForm) {
  CounterRng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = uniform_int(rng, 2, 50);
    const auto L = random_laplacian(n, rng);
    const auto dec = eigendecompose(L);
    const Eigen::VectorXd f = random_vector(n, rng);
    for (int m = 1; m <= 12; ++m) {
      const double a = bandwidth_estimate(L, f, m), b = spectral_form(dec, f, m);
      EXPECT_NEAR(a, b, 1e-7 * b) << "n=" << n << " m=" << m;
    }
  }
}

// omega (c_k^2 / |c|^2)^(1/m) <= omega_m <= omega with k the top active
// index. The top eigenvalue is kept within a factor 2 of lambda_n so that
// rounding noise in the upper coefficients stays below the tolerance at m = 40.
TEST(BandwidthEstimate, ConvergesToBandwidth) {
  CounterRng rng(9);
  int checked = 0;
  for (int trial = 0; trial < 400 && checked < 20; ++trial) {
    const std::size_t n = uniform_int(rng, 5, 30);
    const auto L = random_laplacian(n, rng);
    const auto dec = eigendecompose(L);
    const Eigen::Index k = static_cast<Eigen::Index>(uniform_int(rng, 1, n - 1));
    const double top = dec.eigenvalues(static_cast<Eigen::Index>(n) - 1);
    if (dec.eigenvalues(k) < 0.5 * top) continue;
    Eigen::VectorXd c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i <= k; ++i) c(i) = rng.normal();
    c(k) = 1.0;
    const Eigen::VectorXd f = inverse_gft(dec, c);
    const double w = bandwidth(dec, f, 0.0);
    const double share = 1.0 / c.squaredNorm();
    const double w40 = bandwidth_estimate(L, f, 40);
    EXPECT_GE(w40, w * std::pow(share, 1.0 / 40) * (1 - 1e-9));
    EXPECT_LE(w40, w * (1 + 1e-9));
    EXPECT_GT(w40, bandwidth_estimate(L, f, 2));
    ++checked;
  }
  EXPECT_GE(checked, 10);
}

TEST(BandwidthEstimate, LargeOrderStaysFinite) {
  CounterRng rng(10);
  LaplacianMatrix L = random_laplacian(30, rng);
  L.entries *= 1e-3;
  const Eigen::VectorXd f = random_vector(30, rng);
  const double w = bandwidth_estimate(L, f, 400);
  EXPECT_TRUE(std::isfinite(w));
  EXPECT_GT(w, 0.0);
  EXPECT_LE(w, eigendecompose(L).eigenvalues(29) * (1 + 1e-9));
}

TEST(Eigencount, Examples) {
  const auto two = eigendecompose(laplacian(build_graph(two_points(0.4), 0.5)));
  const double w = two.eigenvalues(1);
  EXPECT_EQ(eigencount(two, -1e-12), 0u);
  EXPECT_EQ(eigencount(two, 0.0), 1u);
  EXPECT_EQ(eigencount(two, w / 2), 1u);
  EXPECT_EQ(eigencount(two, w), 2u);
  EXPECT_EQ(eigencount(two, 10.0), 2u);
}

TEST(Eigencount, RightContinuousStepFunction) {
  CounterRng rng(11);
  const auto dec = eigendecompose(random_laplacian(40, rng));
  std::size_t prev = 0;
  for (int i = 0; i <= 1000; ++i) {
    const double t = -0.01 + 1.0 * i / 1000;
    const std::size_t c = eigencount(dec, t);
    EXPECT_GE(c, prev);
    prev = c;
  }
  for (Eigen::Index i = 0; i < dec.eigenvalues.size(); ++i) {
    EXPECT_GE(eigencount(dec, dec.eigenvalues(i)), static_cast<std::size_t>(i + 1));
    EXPECT_LE(eigencount(dec, std::nextafter(dec.eigenvalues(i), -1.0)), static_cast<std::size_t>(i));
  }
}

TEST(SpectrumCsv, HeaderAndRows) {
  std::ostringstream os;
  write_spectrum_csv(os, Eigen::Vector2d(0.0, 0.5));
  EXPECT_EQ(os.str(), "index,eigenvalue\n0,0\n1,0.5\n");
}
