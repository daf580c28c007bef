#include "tripod/commands.hpp"

#include <cmath>
#include <filesystem>
#include <iostream>

#include "tripod/error.hpp"
#include "tripod/oracle.hpp"
#include "tripod/protocol.hpp"
#include "tripod/source.hpp"

namespace tripod {

namespace fs = std::filesystem;

namespace {

// Real-input symmetry makes the imaginary part vanish up to rounding.
constexpr double kImaginaryTolerance = 1e-10;
// Field dumps keep at most ~65 nodes per axis.
constexpr int kFieldDumpNodes = 64;

fs::path output_dir(const RunConfig& config, const CommandFlags& flags) {
  const fs::path dir = flags.out_dir ? fs::path(*flags.out_dir) : fs::path(config.output.directory);
  fs::create_directories(dir);
  return dir;
}

void emit_json(const RunConfig& config, const fs::path& dir, const std::string& command,
               const Json& bundle) {
  if (config.output.json) write_text(dir / (command + ".json"), dump_json(bundle));
}

double z0_sine_residual(const WriteKernel& kernel) {
  double worst = 0;
  for (Eigen::Index i = 0; i < kernel.t_grid.size(); ++i) {
    const double t = kernel.t_grid.nodes[i];
    worst = std::max(worst, std::abs(write_kernel_cell(t, 0.0, kernel.config.n_inner) - std::sin(t)));
  }
  return worst;
}

Json debug_section(const WriteKernel& kernel) {
  const double residual = max_imaginary_residual(kernel);
  std::cerr << "debug: max |Im G_ab| over the kernel grid = " << format_number(residual) << "\n";
  if (residual > kImaginaryTolerance) {
    throw NumericalError("imaginary part of the write kernel exceeds " +
                         format_number(kImaginaryTolerance) + ": " + format_number(residual));
  }
  return {{"max_imaginary_residual", residual}, {"tolerance", kImaginaryTolerance}};
}

double squeezed_var(const InputPulseSpec& spec, std::size_t i) {
  const ModeSpec& m = spec.modes[i];
  return spec.squeezed_quadrature == Quadrature::X ? m.var_x : m.var_y;
}

}  // namespace

Pipeline build_pipeline(const KernelConfig& config) {
  Pipeline p;
  p.kernel = compute_write_kernel(config);
  p.full_cycle = compute_full_cycle(p.kernel);
  p.basis = schmidt_decompose(p.full_cycle, p.kernel);
  return p;
}

std::vector<InputPulseSpec> build_pulses(const SourceParams& params, const SchmidtBasis& basis) {
  SourceParams second = params;
  second.squeezed_quadrature =
      params.squeezed_quadrature == Quadrature::X ? Quadrature::Y : Quadrature::X;
  return {build_input_spec(params, basis), build_input_spec(second, basis)};
}

int guarded(const std::function<void()>& body) {
  try {
    body();
    return kExitOk;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ArgumentError& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return kExitValidation;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

int cmd_kernel(const RunConfig& config, const CommandFlags& flags) {
  return guarded([&] {
    const fs::path dir = output_dir(config, flags);
    const WriteKernel kernel = compute_write_kernel(config.grid);
    const FullCycleKernel full_cycle = compute_full_cycle(kernel);

    Json bundle = make_bundle("kernel", config);
    bundle["kernel"] = {
        {"n_t", config.grid.n_t},
        {"n_z", config.grid.n_z},
        {"n_inner", config.grid.n_inner},
        {"z0_sine_residual", z0_sine_residual(kernel)},
        {"full_cycle_asymmetry", (full_cycle.values - full_cycle.values.transpose()).cwiseAbs().maxCoeff()}};
    if (flags.debug) bundle["debug"] = debug_section(kernel);

    if (config.output.csv) {
      write_kernel_csv(dir / "kernel.csv", kernel);
      write_full_cycle_csv(dir / "full_cycle.csv", full_cycle);
    }
    emit_json(config, dir, "kernel", bundle);
  });
}

int cmd_schmidt(const RunConfig& config, const CommandFlags& flags) {
  return guarded([&] {
    const fs::path dir = output_dir(config, flags);
    const Pipeline p = build_pipeline(config.grid);

    Json bundle = make_bundle("schmidt", config);
    bundle["schmidt"] = schmidt_json(p.basis);
    if (flags.debug) bundle["debug"] = debug_section(p.kernel);

    if (config.output.csv) {
      write_schmidt_csv(dir / "schmidt.csv", p.basis);
      write_temporal_modes_csv(dir / "phi_modes.csv", p.basis);
      write_spatial_modes_csv(dir / "g_modes.csv", p.basis);
    }
    emit_json(config, dir, "schmidt", bundle);
  });
}

int cmd_input(const RunConfig& config, const CommandFlags& flags) {
  return guarded([&] {
    const fs::path dir = output_dir(config, flags);
    const Pipeline p = build_pipeline(config.grid);
    const std::vector<InputPulseSpec> pulses = build_pulses(config.source, p.basis);
    for (const std::string& w : config.source.warnings()) std::cerr << "warning: " << w << "\n";

    Json bundle = make_bundle("input", config);
    bundle["schmidt"] = schmidt_json(p.basis);
    bundle["source"] = source_json(config.source, pulses);
    if (flags.debug) bundle["debug"] = debug_section(p.kernel);

    if (config.output.csv) write_source_csv(dir / "source.csv", pulses.front());
    emit_json(config, dir, "input", bundle);
  });
}

int cmd_scenario(const RunConfig& config, const CommandFlags& flags) {
  return guarded([&] {
    const fs::path dir = output_dir(config, flags);
    const Pipeline p = build_pipeline(config.grid);
    const std::vector<InputPulseSpec> pulses = build_pulses(config.source, p.basis);
    const ScenarioReport report = run_scenario(config.script(), p.basis, pulses);

    Json bundle = make_bundle("scenario", config);
    bundle["schmidt"] = schmidt_json(p.basis);
    bundle["source"] = source_json(config.source, pulses);
    bundle["scenario"] = scenario_json(report);
    if (config.oracle.enabled) {
      const DiscrepancyReport oracle =
          compare_with_kernel(config.pde_grid(), p.basis, p.kernel, config.oracle.retrieval);
      bundle["oracle"] = oracle_json(oracle);
      if (config.output.csv) write_oracle_csv(dir / "oracle.csv", oracle);
    }
    if (flags.debug) bundle["debug"] = debug_section(p.kernel);

    if (config.output.csv) {
      write_schmidt_csv(dir / "schmidt.csv", p.basis);
      write_source_csv(dir / "source.csv", pulses.front());
      write_scenario_csv(dir / "scenario.csv", report);
    }
    emit_json(config, dir, "scenario", bundle);
  });
}

int cmd_oracle(const RunConfig& config, const CommandFlags& flags) {
  return guarded([&] {
    const fs::path dir = output_dir(config, flags);
    const Pipeline p = build_pipeline(config.grid);
    const PdeGrid grid = config.pde_grid();
    const DiscrepancyReport oracle =
        compare_with_kernel(grid, p.basis, p.kernel, config.oracle.retrieval);

    Json bundle = make_bundle("oracle", config);
    bundle["schmidt"] = schmidt_json(p.basis);
    bundle["oracle"] = oracle_json(oracle);
    if (flags.debug) bundle["debug"] = debug_section(p.kernel);

    if (config.output.csv) {
      write_oracle_csv(dir / "oracle.csv", oracle);
      const FieldState field =
          integrate_write(grid, mode_input_envelope(grid, p.basis, 0), DrivingConfig::SymmetricPlus);
      const int stride = std::max(1, std::max(grid.n_t, grid.n_z) / kFieldDumpNodes);
      write_fields_csv(dir / "oracle_fields.csv", grid, field, stride);
    }
    emit_json(config, dir, "oracle", bundle);
  });
}

int cmd_sweep(const RunConfig& config, const CommandFlags& flags, const SweepFlags& sweep) {
  return guarded([&] {
    if (sweep.param != "t_w" && sweep.param != "l" && sweep.param != "mu") {
      throw ArgumentError("--param must be one of t_w, l, mu");
    }
    if (sweep.steps < 1) throw ArgumentError("--steps must be >= 1");
    if (!std::isfinite(sweep.from) || !std::isfinite(sweep.to) || sweep.from > sweep.to) {
      throw ArgumentError("--from must not exceed --to");
    }
    if (sweep.steps == 1 && sweep.from != sweep.to) {
      throw ArgumentError("--steps 1 needs --from equal to --to");
    }

    std::vector<RunConfig> points;
    for (int k = 0; k < sweep.steps; ++k) {
      const double value =
          sweep.steps == 1 ? sweep.from
                           : sweep.from + (sweep.to - sweep.from) * k / (sweep.steps - 1.0);
      RunConfig point = config;
      if (sweep.param == "t_w") point.grid.t_w = value;
      if (sweep.param == "l") point.grid.l = value;
      if (sweep.param == "mu") point.source.mu = value;
      point.validate();
      points.push_back(point);
    }

    const fs::path dir = output_dir(config, flags);
    std::optional<Pipeline> shared;  // mu does not touch the kernel
    if (sweep.param == "mu") shared = build_pipeline(config.grid);

    Json rows = Json::array();
    std::optional<CsvWriter> csv;
    if (config.output.csv) {
      csv.emplace(dir / "sweep.csv",
                  std::vector<std::string>{"param", "value", "mode", "lambda", "phi0_sq", "var_sq"});
    }
    for (const RunConfig& point : points) {
      const double value = sweep.param == "t_w" ? point.grid.t_w
                           : sweep.param == "l" ? point.grid.l
                                                : point.source.mu;
      const Pipeline p = shared ? *shared : build_pipeline(point.grid);
      const InputPulseSpec spec = build_input_spec(point.source, p.basis);
      Json modes = Json::array();
      for (Eigen::Index i = 0; i < p.basis.n_modes; ++i) {
        const double phi0 = phi_zero_frequency(p.basis, i);
        const double var_sq = squeezed_var(spec, static_cast<std::size_t>(i));
        modes.push_back({{"i", i + 1},
                         {"lambda", p.basis.lambdas[i]},
                         {"phi0_sq", phi0 * phi0},
                         {"var_sq", var_sq}});
        if (csv) {
          csv->cell(sweep.param).cell(value).cell(static_cast<long>(i + 1));
          csv->cell(p.basis.lambdas[i]).cell(phi0 * phi0).cell(var_sq);
          csv->end_row();
        }
      }
      rows.push_back({{"value", value}, {"modes", modes}});
    }
    if (csv) csv->close();

    Json bundle = make_bundle("sweep", config);
    bundle["sweep"] = {{"param", sweep.param},
                       {"from", sweep.from},
                       {"to", sweep.to},
                       {"steps", sweep.steps},
                       {"points", rows}};
    emit_json(config, dir, "sweep", bundle);
  });
}

}  // namespace tripod
