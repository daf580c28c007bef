#pragma once

#include <string>
#include <vector>

#include "tripod/gaussian.hpp"
#include "tripod/kernel.hpp"

namespace tripod {

enum class Quadrature { X, Y };

/// Pulse cut from a synchronized sub-Poissonian laser.
struct SourceParams {
  double n_bar_tw = 100.0;  ///< mean photon number per pulse
  double mu = 0.1;          ///< synchronization parameter, (0, 1]
  double kappa_tw = 1e4;    ///< pulse duration in units of the laser linewidth
  Quadrature squeezed_quadrature = Quadrature::X;

  void validate() const;
  /// Soft violations of the regime where the laser keeps its squeezing.
  std::vector<std::string> warnings() const;
};

/// Below this kappa*T_W the finite-pulse double integral replaces the
/// delta-correlated limit.
constexpr double kDeltaLimitKappa = 1e3;
/// Modes with phi_i^2(0) below this carry no squeezing.
constexpr double kOccupancyThreshold = 0.01;

struct SqueezedVariance {
  double normally_ordered = 0;
  double full = 0;
};

/// Per retained Schmidt mode, the statistics of the input amplitude e_in,i.
struct InputPulseSpec {
  Quadrature squeezed_quadrature = Quadrature::X;
  std::vector<ModeSpec> modes;
  std::vector<double> occupancy;
  bool finite_pulse = false;  ///< finite-kappa integral used instead of the delta limit
};

/// n_bar T_W phi_i^2(omega = 0).
double mode_occupancy(const SourceParams& params, const SchmidtBasis& basis, Eigen::Index i);

/// kappa T_W -> infinity limit:
///   <:dx^2:> = -(1/4)(1 - mu)/(1 - mu/2)^2,  <dx^2> = 1/4 + <:dx^2:>.
SqueezedVariance squeezed_variance(double mu);
SqueezedVariance squeezed_variance(const SourceParams& params);

/// Normally ordered squeezed-quadrature variance of mode i at finite
/// kappa T_W, from the exponential pair correlation of the laser.
double finite_pulse_correction(const SourceParams& params, const SchmidtBasis& basis,
                               Eigen::Index i);

InputPulseSpec build_input_spec(const SourceParams& params, const SchmidtBasis& basis);

}  // namespace tripod
