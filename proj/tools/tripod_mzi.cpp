#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "tripod/commands.hpp"
#include "tripod/config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Tripod-memory Mach-Zehnder interferometer: kernels, Schmidt modes, "
               "squeezed-light scenarios and a PDE cross-check"};
  app.set_version_flag("--version", tripod::tool_version());
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir;
  bool debug = false;
  app.add_option("-c,--config", config_path, "INI config file (defaults when omitted)");
  app.add_option("-o,--out", out_dir, "output directory (overrides [output] directory)");
  app.add_flag("--debug", debug, "check and report the imaginary part of the kernel integrand");

  auto* kernel = app.add_subcommand("kernel", "write and full-cycle kernels");
  auto* schmidt = app.add_subcommand("schmidt", "Schmidt decomposition of the full-cycle kernel");
  auto* input = app.add_subcommand("input", "per-mode input statistics of the squeezed pulses");
  auto* scenario = app.add_subcommand("scenario", "evaluate the configured write/read scenario");
  auto* oracle = app.add_subcommand("oracle", "PDE integration against the kernel predictions");
  auto* sweep = app.add_subcommand("sweep", "sweep one parameter and tabulate the mode structure");

  tripod::SweepFlags sweep_flags;
  sweep->add_option("--param", sweep_flags.param, "t_w, l or mu")
      ->required()
      ->check(CLI::IsMember({"t_w", "l", "mu"}));
  sweep->add_option("--from", sweep_flags.from, "first value")->required();
  sweep->add_option("--to", sweep_flags.to, "last value")->required();
  sweep->add_option("--steps", sweep_flags.steps, "number of points (endpoints included)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : tripod::kExitValidation;
  }

  std::optional<tripod::RunConfig> config;
  const int loaded = tripod::guarded([&] {
    config = config_path.empty() ? tripod::parse_config("") : tripod::load_config(config_path);
  });
  if (loaded != tripod::kExitOk) return loaded;

  tripod::CommandFlags flags;
  flags.debug = debug;
  if (!out_dir.empty()) flags.out_dir = out_dir;

  if (*kernel) return tripod::cmd_kernel(*config, flags);
  if (*schmidt) return tripod::cmd_schmidt(*config, flags);
  if (*input) return tripod::cmd_input(*config, flags);
  if (*scenario) return tripod::cmd_scenario(*config, flags);
  if (*oracle) return tripod::cmd_oracle(*config, flags);
  if (*sweep) return tripod::cmd_sweep(*config, flags, sweep_flags);
  return tripod::kExitValidation;
}
