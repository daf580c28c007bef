#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tripod/gaussian.hpp"
#include "tripod/kernel.hpp"
#include "tripod/source.hpp"

namespace tripod {

/// Driving-field ratio at fixed total Rabi norm Omega:
/// (Omega, 0), (0, Omega), (Omega/sqrt2, Omega/sqrt2), (Omega/sqrt2, -Omega/sqrt2).
enum class DrivingConfig { Omega1Only, Omega2Only, SymmetricPlus, SymmetricMinus };

enum class SpinWave { One, Two, Plus, Minus };

SpinWave target_wave(DrivingConfig cfg);
DrivingConfig driving_for(SpinWave wave);
std::string to_string(DrivingConfig cfg);
std::string to_string(SpinWave wave);

struct WriteStep {
  int pulse = 0;  ///< index into the input spec list
  DrivingConfig drive = DrivingConfig::SymmetricPlus;
};

/// A write/read sequence. Two writes must address orthogonal partner waves
/// (+/- or 1/2), likewise two reads.
struct ScenarioScript {
  std::string name;
  std::vector<WriteStep> writes;
  std::vector<DrivingConfig> reads;
  /// Mix the two input pulses on a 50/50 splitter before writing.
  bool entangled_inputs = false;

  void validate() const;
  /// Compact text form accepted by parse_script.
  std::string describe() const;
};

/// Tokens separated by whitespace, commas or semicolons:
///   write:<r>   r in {1, 2, +, -}; the k-th write takes input pulse k
///   read:<r>
///   entangle    mix the input pulses before writing
ScenarioScript parse_script(std::string_view text, std::string name = "custom");

/// S1..S6.
std::vector<ScenarioScript> builtin_scenarios();
ScenarioScript builtin_scenario(std::string_view name);

struct QuadratureStats {
  double photon_number = 0;
  double mean_x = 0;
  double mean_y = 0;
  double var_x = kVacuumVariance;
  double var_y = kVacuumVariance;
  double no_var_x = 0;  ///< normally ordered: var_x - 1/4
  double no_var_y = 0;
};

struct ModeStats {
  ModeLabel label;
  QuadratureStats stats;
};

struct StageReport {
  std::vector<ModeStats> modes;
  std::vector<DuanResult> duan;
  double min_symplectic_eigenvalue = kVacuumVariance;
};

struct ModeReport {
  Eigen::Index mode = 0;
  double lambda = 0;
  std::optional<double> write_efficiency;  ///< single non-vacuum write only
  StageReport input;
  StageReport after_write;
  StageReport after_read;
  /// max |cov(out1, out2)| entry; zero unless two reads happened.
  double output_cross_covariance = 0;
};

struct ScenarioReport {
  ScenarioScript script;
  std::vector<ModeReport> modes;

  double min_symplectic_eigenvalue() const;
};

QuadratureStats quadrature_stats(const GaussianState& state, ModeLabel label);

/// Evaluates the script independently for each lambda_i; specs[k] feeds
/// write pulse k and must cover every mode.
ScenarioReport run_scenario(const ScenarioScript& script, std::span<const double> lambdas,
                            std::span<const InputPulseSpec> specs);
ScenarioReport run_scenario(const ScenarioScript& script, const SchmidtBasis& basis,
                            std::span<const InputPulseSpec> specs);

/// Spin-wave photon number over input photon number after a single write.
double efficiency(const ScenarioReport& report, Eigen::Index i);

}  // namespace tripod
