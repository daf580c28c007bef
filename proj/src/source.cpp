#include "tripod/source.hpp"

#include <algorithm>
#include <cmath>

#include "tripod/error.hpp"

namespace tripod {

namespace {

// e^{-40} is below double resolution relative to the O(1) integrand.
constexpr double kExponentCutoff = 40.0;
constexpr int kLayerPoints = 64;

double correlation_amplitude(double mu) {
  const double h = 1.0 - 0.5 * mu;
  return -(1.0 - mu) / (8.0 * h * h);
}

}  // namespace

void SourceParams::validate() const {
  if (!std::isfinite(n_bar_tw) || n_bar_tw < 0) throw ArgumentError("n_bar_tw must be >= 0");
  if (!std::isfinite(mu) || mu <= 0 || mu > 1) throw ArgumentError("mu must lie in (0, 1]");
  if (!std::isfinite(kappa_tw) || kappa_tw <= 0) throw ArgumentError("kappa_tw must be > 0");
}

std::vector<std::string> SourceParams::warnings() const {
  std::vector<std::string> out;
  if (mu > 0.5) out.emplace_back("mu > 0.5: laser synchronization too strong to preserve squeezing");
  if (kappa_tw < 10) out.emplace_back("kappa_tw < 10: pulse too short to inherit the laser squeezing");
  return out;
}

double mode_occupancy(const SourceParams& params, const SchmidtBasis& basis, Eigen::Index i) {
  const double phi0 = phi_zero_frequency(basis, i);
  return params.n_bar_tw * phi0 * phi0;
}

SqueezedVariance squeezed_variance(double mu) {
  if (!std::isfinite(mu) || mu < 0 || mu > 1) throw ArgumentError("mu must lie in [0, 1]");
  const double h = 1.0 - 0.5 * mu;
  SqueezedVariance v;
  v.normally_ordered = -0.25 * (1.0 - mu) / (h * h);
  // 1/4 + <:dx^2:> written without cancellation: (mu/4)^2 / (1 - mu/2)^2.
  v.full = 0.0625 * mu * mu / (h * h);
  return v;
}

SqueezedVariance squeezed_variance(const SourceParams& params) {
  params.validate();
  return squeezed_variance(params.mu);
}

double finite_pulse_correction(const SourceParams& params, const SchmidtBasis& basis,
                               Eigen::Index i) {
  params.validate();
  const auto phi = temporal_mode(basis, i);
  const double t_w = basis.t_w;
  const double rate = params.kappa_tw / t_w * (1.0 - 0.5 * params.mu);

  const Grid unit = gauss_legendre(kLayerPoints, 0.0, 1.0);
  // h(t) = int_0^T phi(t') rate e^{-rate |t - t'|} dt', split at t' = t and
  // written in the decay variable u = rate |t - t'|.
  auto smoothed = [&](double t) {
    double sum = 0;
    const double reach_left = std::min(rate * t, kExponentCutoff);
    const double reach_right = std::min(rate * (t_w - t), kExponentCutoff);
    for (Eigen::Index k = 0; k < unit.size(); ++k) {
      const double u_left = reach_left * unit.nodes[k];
      const double u_right = reach_right * unit.nodes[k];
      sum += unit.weights[k] * (reach_left * phi(t - u_left / rate) * std::exp(-u_left) +
                                reach_right * phi(t + u_right / rate) * std::exp(-u_right));
    }
    return sum;
  };

  // Boundary layers of width ~1/rate at both ends get their own panels.
  const double layer = std::min(0.25 * t_w, kExponentCutoff / rate);
  const int bulk_points = std::max<int>(kLayerPoints, static_cast<int>(basis.t_grid.size()));
  const Grid panels[] = {gauss_legendre(kLayerPoints, 0.0, layer),
                         gauss_legendre(bulk_points, layer, t_w - layer),
                         gauss_legendre(kLayerPoints, t_w - layer, t_w)};
  double overlap = 0;
  for (const Grid& panel : panels) {
    overlap += panel.integrate([&](double t) { return phi(t) * smoothed(t); });
  }
  return correlation_amplitude(params.mu) * overlap;
}

InputPulseSpec build_input_spec(const SourceParams& params, const SchmidtBasis& basis) {
  params.validate();
  InputPulseSpec spec;
  spec.squeezed_quadrature = params.squeezed_quadrature;
  spec.finite_pulse = params.kappa_tw < kDeltaLimitKappa;

  const SqueezedVariance limit = squeezed_variance(params.mu);
  const double amplitude = std::sqrt(params.n_bar_tw);
  for (Eigen::Index i = 0; i < basis.n_modes; ++i) {
    const double phi0 = phi_zero_frequency(basis, i);
    const double phi0_sq = phi0 * phi0;

    double mean_sq = amplitude * phi0;
    double var_sq = kVacuumVariance;
    double var_anti = kVacuumVariance;
    if (phi0_sq >= kOccupancyThreshold) {
      var_sq = spec.finite_pulse ? kVacuumVariance + finite_pulse_correction(params, basis, i)
                                 : limit.full;
      var_anti = 1.0 / (16.0 * var_sq);
    }

    ModeSpec mode;
    if (params.squeezed_quadrature == Quadrature::X) {
      mode = {mean_sq, 0.0, var_sq, var_anti};
    } else {
      mode = {0.0, mean_sq, var_anti, var_sq};
    }
    spec.modes.push_back(mode);
    spec.occupancy.push_back(params.n_bar_tw * phi0_sq);
  }
  return spec;
}

}  // namespace tripod
