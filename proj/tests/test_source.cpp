#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "tripod/error.hpp"
#include "tripod/source.hpp"

using namespace tripod;

namespace {

// Brute-force double integral of phi(t) phi(t') rate e^{-rate|t-t'|} on a
// uniform trapezoid mesh; independent of the panel/substitution scheme.
double brute_force_correction(const SourceParams& params, const SchmidtBasis& basis, Eigen::Index i,
                              int n) {
  const auto phi = temporal_mode(basis, i);
  const double h = basis.t_w / n;
  const double rate = params.kappa_tw / basis.t_w * (1.0 - 0.5 * params.mu);
  Eigen::VectorXd f(n + 1);
  Eigen::VectorXd w = Eigen::VectorXd::Constant(n + 1, h);
  w[0] = w[n] = 0.5 * h;
  for (int k = 0; k <= n; ++k) f[k] = phi(k * h) * w[k];
  double sum = 0;
  for (int a = 0; a <= n; ++a) {
    for (int b = 0; b <= n; ++b) sum += f[a] * f[b] * rate * std::exp(-rate * std::abs(a - b) * h);
  }
  const double hmu = 1.0 - 0.5 * params.mu;
  return -(1.0 - params.mu) / (8.0 * hmu * hmu) * sum;
}

}  // namespace

TEST_SUITE("source") {

TEST_CASE("squeezed variance limits") {
  const SqueezedVariance zero = squeezed_variance(0.0);
  CHECK(std::abs(zero.normally_ordered + 0.25) < 1e-12);
  CHECK(zero.full == 0.0);

  const SqueezedVariance one = squeezed_variance(1.0);
  CHECK(one.normally_ordered == 0.0);
  CHECK(one.full == doctest::Approx(0.25).epsilon(1e-15));

  for (double mu : {1e-3, 0.01, 0.1, 0.2, 0.3}) {
    const SqueezedVariance v = squeezed_variance(mu);
    CHECK(std::abs(v.full - mu * mu / 16.0) <= mu * mu * mu);
    CHECK(std::abs(v.full - (0.25 + v.normally_ordered)) < 1e-15);
  }
  // exact delta-limit value at mu = 0.1: 0.01 / 16 / 0.95^2
  CHECK(squeezed_variance(0.1).full == doctest::Approx(6.925207756232687e-4).epsilon(1e-14));
}

TEST_CASE("source parameter validation and warnings") {
  CHECK_THROWS_AS(squeezed_variance(-0.1), ArgumentError);
  CHECK_THROWS_AS(squeezed_variance(1.5), ArgumentError);
  SourceParams p;
  p.mu = 0.0;
  CHECK_THROWS_AS(p.validate(), ArgumentError);
  p = SourceParams{};
  p.kappa_tw = 0.0;
  CHECK_THROWS_AS(p.validate(), ArgumentError);
  p = SourceParams{};
  p.n_bar_tw = -1;
  CHECK_THROWS_AS(p.validate(), ArgumentError);

  p = SourceParams{};
  CHECK(p.warnings().empty());
  p.mu = 0.7;
  p.kappa_tw = 5;
  CHECK(p.warnings().size() == 2);
}

TEST_CASE("finite-pulse correction approaches the delta limit") {
  const SchmidtBasis& b = fixtures::default_pipeline().basis;
  SourceParams p;
  p.kappa_tw = 1e4;
  const double limit = squeezed_variance(p.mu).normally_ordered;
  for (Eigen::Index i = 0; i < 2; ++i) {
    const double c = finite_pulse_correction(p, b, i);
    CHECK(std::abs(c - limit) <= 0.01 * std::abs(limit));
  }
}

TEST_CASE("finite-pulse correction matches a brute-force double integral") {
  const SchmidtBasis& b = fixtures::default_pipeline().basis;
  SourceParams p;
  p.kappa_tw = 10;
  p.mu = 0.2;
  for (Eigen::Index i = 0; i < 2; ++i) {
    const double ours = finite_pulse_correction(p, b, i);
    const double brute = brute_force_correction(p, b, i, 2000);
    CHECK(ours == doctest::Approx(brute).epsilon(1e-5));
  }
}

TEST_CASE("mode occupancy follows the zero-frequency weight") {
  const SchmidtBasis& b = fixtures::default_pipeline().basis;
  SourceParams p;
  p.n_bar_tw = 100;
  const double phi0 = phi_zero_frequency(b, 0);
  CHECK(mode_occupancy(p, b, 0) == doctest::Approx(100 * phi0 * phi0).epsilon(1e-15));
}

TEST_CASE("input spec in the delta limit") {
  const SchmidtBasis& b = fixtures::default_pipeline().basis;
  SourceParams p;
  const InputPulseSpec spec = build_input_spec(p, b);
  REQUIRE(spec.modes.size() == static_cast<std::size_t>(b.n_modes));
  CHECK_FALSE(spec.finite_pulse);

  const double v = squeezed_variance(p.mu).full;
  for (std::size_t i = 0; i < spec.modes.size(); ++i) {
    const double phi0 = phi_zero_frequency(b, static_cast<Eigen::Index>(i));
    const ModeSpec& m = spec.modes[i];
    CHECK(m.mean_x == doctest::Approx(10.0 * phi0).epsilon(1e-14));
    CHECK(m.mean_y == 0.0);
    if (phi0 * phi0 >= kOccupancyThreshold) {
      CHECK(m.var_x == v);
      CHECK(m.var_x * m.var_y == doctest::Approx(1.0 / 16.0).epsilon(1e-14));
    } else {
      CHECK(m.var_x == kVacuumVariance);
      CHECK(m.var_y == kVacuumVariance);
    }
  }
  // Modes 1 and 2 carry the squeezing at the default geometry; mode 3 does not.
  CHECK(spec.modes[0].var_x < 0.01);
  CHECK(spec.modes[1].var_x < 0.01);
  CHECK(spec.modes[2].var_x == kVacuumVariance);
}

TEST_CASE("input spec squeezed in y and with finite pulses") {
  const SchmidtBasis& b = fixtures::default_pipeline().basis;
  SourceParams p;
  p.squeezed_quadrature = Quadrature::Y;
  p.kappa_tw = 50;
  const InputPulseSpec spec = build_input_spec(p, b);
  CHECK(spec.finite_pulse);
  CHECK(spec.modes[0].mean_x == 0.0);
  CHECK(spec.modes[0].var_y == doctest::Approx(0.25 + finite_pulse_correction(p, b, 0)).epsilon(1e-14));
  CHECK(spec.modes[0].var_y > squeezed_variance(p.mu).full);
}

}  // TEST_SUITE
