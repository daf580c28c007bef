#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "tripod/commands.hpp"
#include "tripod/protocol.hpp"
#include "tripod/source.hpp"

namespace fixtures {

/// Default-grid pipeline (L = 10, T_W = 5.5), built once per process.
inline const tripod::Pipeline& default_pipeline() {
  static const tripod::Pipeline p = tripod::build_pipeline(tripod::KernelConfig{});
  return p;
}

/// One pulse of n_modes identical modes, squeezed in q with variance v and
/// the minimum-uncertainty partner 1/(16 v).
inline tripod::InputPulseSpec squeezed_pulse(tripod::Quadrature q, double v, std::size_t n_modes,
                                             double mean = 0.0) {
  tripod::InputPulseSpec spec;
  spec.squeezed_quadrature = q;
  const double anti = 1.0 / (16.0 * v);
  for (std::size_t i = 0; i < n_modes; ++i) {
    tripod::ModeSpec m;
    if (q == tripod::Quadrature::X) {
      m = {mean, 0.0, v, anti};
    } else {
      m = {0.0, mean, anti, v};
    }
    spec.modes.push_back(m);
    spec.occupancy.push_back(mean * mean);
  }
  return spec;
}

/// Pulse 1 squeezed in x, pulse 2 in y.
inline std::vector<tripod::InputPulseSpec> orthogonal_pulses(double v, std::size_t n_modes,
                                                             double mean = 0.0) {
  return {squeezed_pulse(tripod::Quadrature::X, v, n_modes, mean),
          squeezed_pulse(tripod::Quadrature::Y, v, n_modes, mean)};
}

inline const tripod::QuadratureStats& stats(const tripod::StageReport& stage, tripod::ModeLabel label) {
  for (const auto& m : stage.modes) {
    if (m.label == label) return m.stats;
  }
  throw std::out_of_range("no stats for " + label.name());
}

inline double duan_value(const tripod::StageReport& stage, tripod::ModeLabel a, tripod::ModeLabel b) {
  for (const auto& d : stage.duan) {
    if ((d.pair.first == a && d.pair.second == b) || (d.pair.first == b && d.pair.second == a)) {
      return d.value;
    }
  }
  throw std::out_of_range("no Duan value for " + a.name() + "/" + b.name());
}

/// Duan value of the ideal-squeezing limit. The quantities checked here are
/// affine in the squeezed variance v while the partner variance 1/(16 v)
/// cancels exactly, so two finite-v runs extrapolate to v = 0 without the
/// roundoff a direct v -> 0 evaluation would bring.
template <typename F>
double ideal_limit(F&& duan_at) {
  constexpr double v = 1e-4;
  return 2.0 * duan_at(v) - duan_at(2.0 * v);
}

}  // namespace fixtures
