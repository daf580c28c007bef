#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "tripod/error.hpp"
#include "tripod/numerics.hpp"

using tripod::bessel_j0;
using tripod::gauss_legendre;

TEST_SUITE("numerics") {

TEST_CASE("bessel_j0 matches reference values") {
  // mpmath, 30 digits
  CHECK(bessel_j0(0.0) == 1.0);
  CHECK(bessel_j0(1.0) == doctest::Approx(0.76519768655796655).epsilon(1e-15));
  CHECK(bessel_j0(5.0) == doctest::Approx(-0.1775967713143383).epsilon(1e-14));
  CHECK(bessel_j0(20.0) == doctest::Approx(0.16702466434058315).epsilon(1e-13));
  CHECK(bessel_j0(50.0) == doctest::Approx(0.055812327669251815).epsilon(1e-13));
  CHECK(bessel_j0(100.0) == doctest::Approx(0.019985850304223122).epsilon(1e-13));
}

TEST_CASE("bessel_j0 vanishes at its first zeros") {
  for (double zero : {2.4048255576957728, 5.5200781102863106, 8.6537279129110122}) {
    CHECK(std::abs(bessel_j0(zero)) < 5e-14);  // series cancellation near x = 9
  }
}

TEST_CASE("bessel_j0 is continuous across the series/asymptotic switch") {
  CHECK(bessel_j0(11.9) == doctest::Approx(0.025049441699589645).epsilon(1e-11));
  CHECK(bessel_j0(12.1) == doctest::Approx(0.069666773606807312).epsilon(1e-11));
  const double below = bessel_j0(std::nextafter(12.0, 0.0));
  const double above = bessel_j0(std::nextafter(12.0, 20.0));
  CHECK(std::abs(below - above) < 1e-11);
}

TEST_CASE("bessel_j0 rejects inputs outside its domain") {
  CHECK_THROWS_AS(bessel_j0(-1.0), tripod::DomainError);
  CHECK_THROWS_AS(bessel_j0(std::numeric_limits<double>::quiet_NaN()), tripod::DomainError);
  CHECK_THROWS_AS(bessel_j0(std::numeric_limits<double>::infinity()), tripod::DomainError);
}

TEST_CASE("gauss_legendre is exact for degree 2n-1") {
  const auto grid = gauss_legendre(6, -0.5, 2.0);
  CHECK(grid.size() == 6);
  // int x^11 dx over [-0.5, 2]
  const double exact = (std::pow(2.0, 12) - std::pow(-0.5, 12)) / 12.0;
  CHECK(grid.integrate([](double x) { return std::pow(x, 11); }) == doctest::Approx(exact).epsilon(1e-14));
  CHECK(grid.weights.sum() == doctest::Approx(2.5).epsilon(1e-15));
  for (Eigen::Index k = 1; k < grid.size(); ++k) CHECK(grid.nodes[k - 1] < grid.nodes[k]);
}

TEST_CASE("gauss_legendre integrates smooth functions spectrally") {
  const auto grid = gauss_legendre(24, 0.0, std::numbers::pi);
  CHECK(grid.integrate([](double x) { return std::sin(x); }) == doctest::Approx(2.0).epsilon(1e-15));
  const Eigen::VectorXd samples = grid.nodes.array().exp();
  CHECK(grid.integrate(samples) == doctest::Approx(std::exp(std::numbers::pi) - 1.0).epsilon(1e-14));
}

TEST_CASE("gauss_legendre validates its arguments") {
  CHECK_THROWS_AS(gauss_legendre(0, 0.0, 1.0), tripod::ArgumentError);
  CHECK_THROWS_AS(gauss_legendre(4, 1.0, 1.0), tripod::ArgumentError);
  CHECK_THROWS_AS(gauss_legendre(4, 2.0, 1.0), tripod::ArgumentError);
}

TEST_CASE("LegendreInterpolant reproduces polynomials and smooth functions") {
  const auto grid = gauss_legendre(20, 0.0, 3.0);
  Eigen::VectorXd cubic(grid.size());
  Eigen::VectorXd smooth(grid.size());
  for (Eigen::Index k = 0; k < grid.size(); ++k) {
    const double x = grid.nodes[k];
    cubic[k] = 1.0 - 2.0 * x + 0.5 * x * x * x;
    smooth[k] = std::exp(-x) * std::cos(2.0 * x);
  }
  const tripod::LegendreInterpolant<double> p(grid, cubic);
  const tripod::LegendreInterpolant<double> f(grid, smooth);
  for (double x : {0.0, 0.37, 1.5, 2.999, 3.0}) {
    CHECK(p(x) == doctest::Approx(1.0 - 2.0 * x + 0.5 * x * x * x).epsilon(1e-13));
    CHECK(std::abs(f(x) - std::exp(-x) * std::cos(2.0 * x)) < 1e-10);
  }
  CHECK(p(grid.nodes[3]) == cubic[3]);
  CHECK_THROWS_AS(tripod::LegendreInterpolant<double>(grid, Eigen::VectorXd::Zero(3)),
                  tripod::ArgumentError);
}

TEST_CASE("symmetric_eig agrees with Eigen's self-adjoint solver") {
  std::mt19937 rng(7);
  std::normal_distribution<double> normal;
  const int n = 40;
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = normal(rng);
  }
  a = (0.5 * (a + a.transpose())).eval();

  const auto ours = tripod::symmetric_eig(a);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> reference(a);
  const Eigen::VectorXd ref_desc = reference.eigenvalues().reverse();
  CHECK((ours.eigenvalues - ref_desc).cwiseAbs().maxCoeff() < 1e-12);
  for (int k = 1; k < n; ++k) CHECK(ours.eigenvalues[k - 1] >= ours.eigenvalues[k]);

  const Eigen::MatrixXd& v = ours.eigenvectors;
  CHECK((v.transpose() * v - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((a * v - v * ours.eigenvalues.asDiagonal()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("symmetric_eig keeps tiny eigenvalues of a graded matrix accurate") {
  // Q diag(1, 1e-6, 1e-12) Q^T with a fixed rotation Q.
  const Eigen::Matrix3d q = Eigen::AngleAxisd(0.7, Eigen::Vector3d(1, 2, 3).normalized()).toRotationMatrix();
  const Eigen::Vector3d d(1.0, 1e-6, 1e-12);
  const Eigen::Matrix3d a = q * d.asDiagonal() * q.transpose();
  const auto r = tripod::symmetric_eig(a);
  CHECK(r.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(r.eigenvalues[1] == doctest::Approx(1e-6).epsilon(1e-9));
  CHECK(std::abs(r.eigenvalues[2] - 1e-12) < 1e-15);
}

TEST_CASE("symmetric_eig rejects non-symmetric input") {
  Eigen::Matrix2d a;
  a << 1.0, 2.0, 0.0, 1.0;
  CHECK_THROWS_AS(tripod::symmetric_eig(a), tripod::ArgumentError);
}

}  // TEST_SUITE
