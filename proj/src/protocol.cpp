#include "tripod/protocol.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "tripod/error.hpp"

namespace tripod {

namespace {

enum class SpinBasis { PlusMinus, OneTwo };

SpinBasis basis_of(SpinWave wave) {
  return (wave == SpinWave::Plus || wave == SpinWave::Minus) ? SpinBasis::PlusMinus
                                                             : SpinBasis::OneTwo;
}

SpinWave partner(SpinWave wave) {
  switch (wave) {
    case SpinWave::One: return SpinWave::Two;
    case SpinWave::Two: return SpinWave::One;
    case SpinWave::Plus: return SpinWave::Minus;
    case SpinWave::Minus: return SpinWave::Plus;
  }
  return wave;
}

ModeLabel spin_label(SpinWave wave) {
  switch (wave) {
    case SpinWave::One: return modes::spin1;
    case SpinWave::Two: return modes::spin2;
    case SpinWave::Plus: return modes::spin_plus;
    case SpinWave::Minus: return modes::spin_minus;
  }
  return modes::spin_plus;
}

ModeLabel input_label(int pulse) { return pulse == 0 ? modes::in1 : modes::in2; }
ModeLabel output_label(std::size_t read) { return read == 0 ? modes::out1 : modes::out2; }

SpinBasis current_basis(const GaussianState& state) {
  return state.contains(modes::spin_plus) ? SpinBasis::PlusMinus : SpinBasis::OneTwo;
}

// b_{1,2} = (b_+ +/- b_-)/sqrt2 and back; the same 50/50 mixing both ways.
GaussianState to_basis(const GaussianState& state, SpinBasis target) {
  if (current_basis(state) == target) return state;
  if (target == SpinBasis::OneTwo) {
    auto rotated = rotate_pm_basis(state, modes::spin_plus, modes::spin_minus);
    rotated = relabel(rotated, modes::spin_plus, modes::spin1);
    return relabel(rotated, modes::spin_minus, modes::spin2);
  }
  auto rotated = rotate_pm_basis(state, modes::spin1, modes::spin2);
  rotated = relabel(rotated, modes::spin1, modes::spin_plus);
  return relabel(rotated, modes::spin2, modes::spin_minus);
}

double min_symplectic(const GaussianState& state) {
  return symplectic_eigenvalues(state).minCoeff();
}

std::optional<SpinWave> parse_wave(std::string_view token) {
  if (token == "1") return SpinWave::One;
  if (token == "2") return SpinWave::Two;
  if (token == "+") return SpinWave::Plus;
  if (token == "-") return SpinWave::Minus;
  return std::nullopt;
}

}  // namespace

SpinWave target_wave(DrivingConfig cfg) {
  switch (cfg) {
    case DrivingConfig::Omega1Only: return SpinWave::One;
    case DrivingConfig::Omega2Only: return SpinWave::Two;
    case DrivingConfig::SymmetricPlus: return SpinWave::Plus;
    case DrivingConfig::SymmetricMinus: return SpinWave::Minus;
  }
  return SpinWave::Plus;
}

DrivingConfig driving_for(SpinWave wave) {
  switch (wave) {
    case SpinWave::One: return DrivingConfig::Omega1Only;
    case SpinWave::Two: return DrivingConfig::Omega2Only;
    case SpinWave::Plus: return DrivingConfig::SymmetricPlus;
    case SpinWave::Minus: return DrivingConfig::SymmetricMinus;
  }
  return DrivingConfig::SymmetricPlus;
}

std::string to_string(DrivingConfig cfg) {
  switch (cfg) {
    case DrivingConfig::Omega1Only: return "Omega1Only";
    case DrivingConfig::Omega2Only: return "Omega2Only";
    case DrivingConfig::SymmetricPlus: return "SymmetricPlus";
    case DrivingConfig::SymmetricMinus: return "SymmetricMinus";
  }
  return "?";
}

std::string to_string(SpinWave wave) {
  switch (wave) {
    case SpinWave::One: return "1";
    case SpinWave::Two: return "2";
    case SpinWave::Plus: return "+";
    case SpinWave::Minus: return "-";
  }
  return "?";
}

void ScenarioScript::validate() const {
  if (writes.empty() || writes.size() > 2) {
    throw ArgumentError("scenario '" + name + "': need one or two writes");
  }
  if (reads.size() > 2) throw ArgumentError("scenario '" + name + "': at most two reads");
  for (const auto& w : writes) {
    if (w.pulse < 0 || w.pulse > 1) {
      throw ArgumentError("scenario '" + name + "': pulse index must be 0 or 1");
    }
  }
  if (writes.size() == 2) {
    if (writes[0].pulse == writes[1].pulse) {
      throw ArgumentError("scenario '" + name + "': a pulse can only be written once");
    }
    const SpinWave first = target_wave(writes[0].drive);
    const SpinWave second = target_wave(writes[1].drive);
    if (first == second) {
      throw ArgumentError("scenario '" + name + "': two writes into spin wave " +
                          to_string(first));
    }
    if (second != partner(first)) {
      throw ArgumentError("scenario '" + name + "': second write must address the wave orthogonal to " +
                          to_string(first));
    }
  }
  if (reads.size() == 2 && target_wave(reads[1]) != partner(target_wave(reads[0]))) {
    throw ArgumentError("scenario '" + name + "': second read must address the wave orthogonal to " +
                        to_string(target_wave(reads[0])));
  }
  if (entangled_inputs && writes.size() != 2) {
    throw ArgumentError("scenario '" + name + "': entangled inputs need two writes");
  }
}

std::string ScenarioScript::describe() const {
  std::ostringstream out;
  if (entangled_inputs) out << "entangle ";
  for (const auto& w : writes) out << "write:" << to_string(target_wave(w.drive)) << ' ';
  for (const auto& r : reads) out << "read:" << to_string(target_wave(r)) << ' ';
  std::string text = out.str();
  if (!text.empty()) text.pop_back();
  return text;
}

ScenarioScript parse_script(std::string_view text, std::string name) {
  ScenarioScript script;
  script.name = std::move(name);
  std::string token;
  auto flush = [&] {
    if (token.empty()) return;
    if (token == "entangle") {
      script.entangled_inputs = true;
    } else if (token.rfind("write:", 0) == 0 || token.rfind("read:", 0) == 0) {
      const bool is_write = token[0] == 'w';
      const auto wave = parse_wave(std::string_view(token).substr(is_write ? 6 : 5));
      if (!wave) throw ArgumentError("script: unknown spin wave in '" + token + "'");
      if (is_write) {
        script.writes.push_back({static_cast<int>(script.writes.size()), driving_for(*wave)});
      } else {
        script.reads.push_back(driving_for(*wave));
      }
    } else {
      throw ArgumentError("script: unknown token '" + token + "'");
    }
    token.clear();
  };
  for (char ch : text) {
    if (std::isspace(static_cast<unsigned char>(ch)) || ch == ',' || ch == ';') {
      flush();
    } else {
      token.push_back(ch);
    }
  }
  flush();
  script.validate();
  return script;
}

std::vector<ScenarioScript> builtin_scenarios() {
  using D = DrivingConfig;
  std::vector<ScenarioScript> scripts;
  // Store and retrieve through the same wave: the full interferometer.
  scripts.push_back({"S1", {{0, D::SymmetricPlus}}, {D::SymmetricPlus}, false});
  // Partial read of b1: retrieved light stays entangled with b2.
  scripts.push_back({"S2", {{0, D::SymmetricPlus}}, {D::Omega1Only}, false});
  // Read b1 then b2: two semi-squeezed pulses.
  scripts.push_back({"S3", {{0, D::SymmetricPlus}}, {D::Omega1Only, D::Omega2Only}, false});
  // Orthogonally squeezed pulses into b+ and b-, read b1 and b2: entangler.
  scripts.push_back({"S4", {{0, D::SymmetricPlus}, {1, D::SymmetricMinus}},
                     {D::Omega1Only, D::Omega2Only}, false});
  // Same writes, read b+ and b-: two independent squeezed pulses.
  scripts.push_back({"S5", {{0, D::SymmetricPlus}, {1, D::SymmetricMinus}},
                     {D::SymmetricPlus, D::SymmetricMinus}, false});
  // Entangled input pair, read b1 and b2: disentangled squeezed outputs.
  scripts.push_back({"S6", {{0, D::SymmetricPlus}, {1, D::SymmetricMinus}},
                     {D::Omega1Only, D::Omega2Only}, true});
  return scripts;
}

ScenarioScript builtin_scenario(std::string_view name) {
  for (auto& script : builtin_scenarios()) {
    if (script.name == name) return script;
  }
  throw ArgumentError("unknown scenario '" + std::string(name) + "'");
}

QuadratureStats quadrature_stats(const GaussianState& state, ModeLabel label) {
  const Eigen::Vector2d m = state.mean_of(label);
  const Eigen::Matrix2d v = state.block(label);
  QuadratureStats s;
  s.photon_number = photon_number(state, label);
  s.mean_x = m[0];
  s.mean_y = m[1];
  s.var_x = v(0, 0);
  s.var_y = v(1, 1);
  s.no_var_x = v(0, 0) - kVacuumVariance;
  s.no_var_y = v(1, 1) - kVacuumVariance;
  return s;
}

double ScenarioReport::min_symplectic_eigenvalue() const {
  double worst = kVacuumVariance;
  for (const auto& m : modes) {
    worst = std::min({worst, m.input.min_symplectic_eigenvalue,
                      m.after_write.min_symplectic_eigenvalue,
                      m.after_read.min_symplectic_eigenvalue});
  }
  return worst;
}

ScenarioReport run_scenario(const ScenarioScript& script, std::span<const double> lambdas,
                            std::span<const InputPulseSpec> specs) {
  script.validate();
  for (const auto& w : script.writes) {
    if (static_cast<std::size_t>(w.pulse) >= specs.size()) {
      throw ArgumentError("scenario '" + script.name + "': no input spec for pulse " +
                          std::to_string(w.pulse));
    }
    if (specs[w.pulse].modes.size() < lambdas.size()) {
      throw ArgumentError("scenario '" + script.name + "': input spec covers fewer modes than the basis");
    }
  }

  ScenarioReport report;
  report.script = script;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    const double lam = lambdas[i];
    ModeReport mode;
    mode.mode = static_cast<Eigen::Index>(i);
    mode.lambda = lam;

    GaussianState state = vacuum_register({modes::in1, modes::in2, modes::spin_plus,
                                           modes::spin_minus, modes::out1, modes::out2,
                                           ModeLabel::loss(0), ModeLabel::loss(1),
                                           ModeLabel::loss(2), ModeLabel::loss(3)});
    for (const auto& w : script.writes) {
      state = set_mode(state, input_label(w.pulse), specs[w.pulse].modes[i]);
    }
    if (script.entangled_inputs) state = rotate_pm_basis(state, modes::in1, modes::in2);

    for (const auto& w : script.writes) {
      mode.input.modes.push_back({input_label(w.pulse), quadrature_stats(state, input_label(w.pulse))});
    }
    if (script.writes.size() == 2) mode.input.duan.push_back(duan(state, modes::in1, modes::in2));
    mode.input.min_symplectic_eigenvalue = min_symplectic(state);

    double input_photons = 0;
    for (std::size_t k = 0; k < script.writes.size(); ++k) {
      const auto& w = script.writes[k];
      const SpinWave wave = target_wave(w.drive);
      state = to_basis(state, basis_of(wave));
      input_photons = photon_number(state, input_label(w.pulse));
      state = memory_half_cycle(state, input_label(w.pulse), spin_label(wave), lam,
                                ModeLabel::loss(static_cast<int>(k)));
    }
    if (script.writes.size() == 1 && input_photons > 0) {
      const SpinWave wave = target_wave(script.writes[0].drive);
      mode.write_efficiency = photon_number(state, spin_label(wave)) / input_photons;
    }

    for (SpinBasis view : {SpinBasis::PlusMinus, SpinBasis::OneTwo}) {
      const GaussianState viewed = to_basis(state, view);
      const ModeLabel a = view == SpinBasis::PlusMinus ? modes::spin_plus : modes::spin1;
      const ModeLabel b = view == SpinBasis::PlusMinus ? modes::spin_minus : modes::spin2;
      mode.after_write.modes.push_back({a, quadrature_stats(viewed, a)});
      mode.after_write.modes.push_back({b, quadrature_stats(viewed, b)});
      mode.after_write.duan.push_back(duan(viewed, a, b));
    }
    mode.after_write.min_symplectic_eigenvalue = min_symplectic(state);

    std::vector<SpinWave> read_waves;
    for (std::size_t k = 0; k < script.reads.size(); ++k) {
      const SpinWave wave = target_wave(script.reads[k]);
      state = to_basis(state, basis_of(wave));
      state = memory_half_cycle(state, spin_label(wave), output_label(k), lam,
                                ModeLabel::loss(static_cast<int>(2 + k)));
      read_waves.push_back(wave);
    }

    for (std::size_t k = 0; k < script.reads.size(); ++k) {
      mode.after_read.modes.push_back({output_label(k), quadrature_stats(state, output_label(k))});
    }
    if (script.reads.size() == 2) {
      mode.after_read.duan.push_back(duan(state, modes::out1, modes::out2));
      mode.output_cross_covariance = state.cross(modes::out1, modes::out2).cwiseAbs().maxCoeff();
    }
    if (!read_waves.empty()) {
      const SpinBasis basis = current_basis(state);
      const SpinWave first = basis == SpinBasis::PlusMinus ? SpinWave::Plus : SpinWave::One;
      for (SpinWave wave : {first, partner(first)}) {
        if (std::find(read_waves.begin(), read_waves.end(), wave) != read_waves.end()) continue;
        mode.after_read.modes.push_back({spin_label(wave), quadrature_stats(state, spin_label(wave))});
        for (std::size_t k = 0; k < script.reads.size(); ++k) {
          mode.after_read.duan.push_back(duan(state, output_label(k), spin_label(wave)));
        }
      }
    }
    mode.after_read.min_symplectic_eigenvalue = min_symplectic(state);
    report.modes.push_back(std::move(mode));
  }
  return report;
}

ScenarioReport run_scenario(const ScenarioScript& script, const SchmidtBasis& basis,
                            std::span<const InputPulseSpec> specs) {
  const std::vector<double> lambdas(basis.lambdas.data(), basis.lambdas.data() + basis.n_modes);
  return run_scenario(script, lambdas, specs);
}

double efficiency(const ScenarioReport& report, Eigen::Index i) {
  if (report.script.writes.size() != 1) {
    throw ArgumentError("efficiency: undefined for a multi-write scenario");
  }
  if (i < 0 || i >= static_cast<Eigen::Index>(report.modes.size())) {
    throw ArgumentError("efficiency: mode index out of range");
  }
  const auto& value = report.modes[i].write_efficiency;
  if (!value) throw ArgumentError("efficiency: input mode carries no photons");
  return *value;
}

}  // namespace tripod
