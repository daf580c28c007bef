#pragma once

#include <functional>
#include <optional>
#include <string>

#include "tripod/config.hpp"
#include "tripod/kernel.hpp"
#include "tripod/report.hpp"

namespace tripod {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 2,
  kExitNumerical = 3,
  kExitIo = 4,
};

struct CommandFlags {
  std::optional<std::string> out_dir;  ///< overrides output.directory
  bool debug = false;                  ///< imaginary-part check of the kernel integrand
};

struct SweepFlags {
  std::string param;  ///< t_w, l or mu
  double from = 0;
  double to = 0;
  int steps = 2;
};

/// Write kernel, full-cycle kernel and Schmidt basis for one grid config.
struct Pipeline {
  WriteKernel kernel;
  FullCycleKernel full_cycle;
  SchmidtBasis basis;
};

Pipeline build_pipeline(const KernelConfig& config);

/// Input specs for up to two pulses; pulse 2 is squeezed in the quadrature
/// orthogonal to pulse 1.
std::vector<InputPulseSpec> build_pulses(const SourceParams& params, const SchmidtBasis& basis);

/// Runs body and maps exceptions to exit codes, reporting on stderr.
int guarded(const std::function<void()>& body);

int cmd_kernel(const RunConfig& config, const CommandFlags& flags);
int cmd_schmidt(const RunConfig& config, const CommandFlags& flags);
int cmd_input(const RunConfig& config, const CommandFlags& flags);
int cmd_scenario(const RunConfig& config, const CommandFlags& flags);
int cmd_oracle(const RunConfig& config, const CommandFlags& flags);
int cmd_sweep(const RunConfig& config, const CommandFlags& flags, const SweepFlags& sweep);

}  // namespace tripod
