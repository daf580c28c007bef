#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "tripod/error.hpp"
#include "tripod/oracle.hpp"

using namespace tripod;

namespace {

PdeGrid small_grid(int n) {
  PdeGrid g;
  g.n_t = n;
  g.n_z = n;
  return g;
}

Eigen::VectorXd gaussian_pulse(const PdeGrid& grid) {
  const Eigen::VectorXd t = grid.t_nodes();
  return (-(t.array() - 2.0).square()).exp();
}

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("entrance column follows the closed-form z = 0 solution") {
  // b_+(T_W, 0) = -(1/sqrt2) int_0^T a_in(T - t) sin t dt
  const PdeGrid grid = small_grid(512);
  const FieldState f = integrate_write(grid, gaussian_pulse(grid), DrivingConfig::SymmetricPlus);
  const double got = addressed_wave(f, DrivingConfig::SymmetricPlus)(grid.n_t, 0);

  const Grid rule = gauss_legendre(64, 0.0, grid.t_w);
  const double expected = -std::sqrt(0.5) * rule.integrate([&](double t) {
    const double tau = grid.t_w - t;
    return std::exp(-(tau - 2.0) * (tau - 2.0)) * std::sin(t);
  });
  CHECK(got == doctest::Approx(expected).epsilon(1e-4));
}

TEST_CASE("zero input leaves every field at zero") {
  const PdeGrid grid = small_grid(32);
  const FieldState f = integrate_write(grid, Eigen::VectorXd::Zero(grid.n_t + 1), DrivingConfig::Omega1Only);
  CHECK(f.a.isZero());
  CHECK(f.c.isZero());
  CHECK(f.b1.isZero());
  CHECK(f.b2.isZero());
  CHECK(integrate_read(grid, Eigen::VectorXd::Zero(grid.n_z + 1), DrivingConfig::Omega2Only).isZero());
}

TEST_CASE("write integration is linear") {
  const PdeGrid grid = small_grid(64);
  const Eigen::VectorXd u = gaussian_pulse(grid);
  const Eigen::VectorXd v = grid.t_nodes().array().sin();
  const auto cfg = DrivingConfig::SymmetricMinus;
  const FieldState fu = integrate_write(grid, u, cfg);
  const FieldState fv = integrate_write(grid, v, cfg);
  const FieldState fw = integrate_write(grid, 2.0 * u - 0.5 * v, cfg);
  CHECK((fw.b2 - (2.0 * fu.b2 - 0.5 * fv.b2)).cwiseAbs().maxCoeff() < 1e-13);
  CHECK((fw.a - (2.0 * fu.a - 0.5 * fv.a)).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("symmetric driving leaves the partner wave empty and conserves excitations") {
  const PdeGrid grid = small_grid(256);
  const FieldState f = integrate_write(grid, gaussian_pulse(grid), DrivingConfig::SymmetricPlus);
  CHECK(addressed_wave(f, DrivingConfig::SymmetricMinus).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(std::abs(excitation_balance(grid, f)) < 1e-3);
}

TEST_CASE("single-sided driving leaves the other level empty") {
  const PdeGrid grid = small_grid(32);
  const FieldState f = integrate_write(grid, gaussian_pulse(grid), DrivingConfig::Omega2Only);
  CHECK(f.b1.isZero());
  CHECK(f.b2.cwiseAbs().maxCoeff() > 0.01);
}

TEST_CASE("relative_l2") {
  Eigen::VectorXd ref(3);
  ref << 1.0, 1.0, 1.0;
  CHECK(relative_l2(ref, ref, 0.5) == 0.0);
  CHECK(relative_l2(2.0 * ref, ref, 0.5) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(relative_l2(ref, Eigen::VectorXd::Ones(2), 0.5), ArgumentError);
}

TEST_CASE("grid and sample validation") {
  PdeGrid g = small_grid(16);
  g.l = 0;
  CHECK_THROWS_AS(g.validate(), ArgumentError);
  const PdeGrid ok = small_grid(16);
  CHECK_THROWS_AS(integrate_write(ok, Eigen::VectorXd::Zero(5), DrivingConfig::Omega1Only), ArgumentError);
  CHECK_THROWS_AS(integrate_read(ok, Eigen::VectorXd::Zero(5), DrivingConfig::Omega1Only), ArgumentError);
}

TEST_CASE("kernel predictions agree with direct integration") {
  const auto& p = fixtures::default_pipeline();
  const DiscrepancyReport r = compare_with_kernel(small_grid(128), p.basis, p.kernel);
  REQUIRE(r.cases.size() == 3);
  for (const OracleCase& c : r.cases) {
    CHECK(c.rel_l2_error < 2e-3);
    CHECK(c.order > 1.8);
    CHECK(c.coarse_error > 3.0 * c.rel_l2_error);
  }
  CHECK(r.max_abs_b_minus == 0.0);
  CHECK(std::abs(r.excitation_balance) < 1e-3);
}

TEST_CASE("forward retrieval does not reproduce the kernel read map") {
  const auto& p = fixtures::default_pipeline();
  const DiscrepancyReport r = compare_with_kernel(small_grid(128), p.basis, p.kernel, Retrieval::Forward);
  CHECK(r.cases[0].rel_l2_error < 2e-3);  // write does not depend on the read direction
  CHECK(r.cases[1].rel_l2_error > 0.1);
}

TEST_CASE("mismatched geometry is an argument error") {
  const auto& p = fixtures::default_pipeline();
  PdeGrid g = small_grid(64);
  g.l = 9.0;
  CHECK_THROWS_AS(compare_with_kernel(g, p.basis, p.kernel), ArgumentError);
  g = small_grid(64);
  g.t_w = 5.0;
  CHECK_THROWS_AS(compare_with_kernel(g, p.basis, p.kernel), ArgumentError);
  g = small_grid(64);
  g.n_t = 63;
  CHECK_THROWS_AS(compare_with_kernel(g, p.basis, p.kernel), ArgumentError);
}

}  // TEST_SUITE
