#include "tripod/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <ctime>

#include "tripod/error.hpp"

#ifndef TRIPOD_MZI_VERSION
#define TRIPOD_MZI_VERSION "0.0.0"
#endif

namespace tripod {

std::string tool_version() { return TRIPOD_MZI_VERSION; }

std::string format_number(double value) {
  if (!std::isfinite(value)) return "null";
  if (value == 0) return "0";  // folds -0
  char buffer[40];
  const auto [end, ec] =
      std::to_chars(buffer, buffer + sizeof buffer, value, std::chars_format::general, 17);
  if (ec != std::errc()) throw NumericalError("format_number: conversion failed");
  return std::string(buffer, end);
}

namespace {

void dump_into(const Json& v, int depth, std::string& out) {
  const std::string pad(2 * (depth + 1), ' ');
  const std::string close_pad(2 * depth, ' ');
  if (v.is_object()) {
    if (v.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for (const auto& [key, item] : v.items()) {
      if (!first) out += ",\n";
      first = false;
      out += pad + Json(key).dump() + ": ";
      dump_into(item, depth + 1, out);
    }
    out += "\n" + close_pad + "}";
  } else if (v.is_array()) {
    if (v.empty()) {
      out += "[]";
      return;
    }
    out += "[\n";
    bool first = true;
    for (const auto& item : v) {
      if (!first) out += ",\n";
      first = false;
      out += pad;
      dump_into(item, depth + 1, out);
    }
    out += "\n" + close_pad + "]";
  } else if (v.is_number_float()) {
    out += format_number(v.get<double>());
  } else {
    out += v.dump();
  }
}

Json label_list(const std::vector<ModeStats>& modes) {
  Json list = Json::array();
  for (const ModeStats& m : modes) {
    list.push_back({{"label", m.label.name()},
                    {"photon_number", m.stats.photon_number},
                    {"mean_x", m.stats.mean_x},
                    {"mean_y", m.stats.mean_y},
                    {"var_x", m.stats.var_x},
                    {"var_y", m.stats.var_y},
                    {"normally_ordered_var_x", m.stats.no_var_x},
                    {"normally_ordered_var_y", m.stats.no_var_y}});
  }
  return list;
}

std::string sign_name(DuanResult::Sign sign) {
  return sign == DuanResult::Sign::PlusXMinusY ? "x_sum_y_difference" : "x_difference_y_sum";
}

Json stage_json(const StageReport& stage) {
  Json duans = Json::array();
  for (const DuanResult& d : stage.duan) {
    duans.push_back({{"a", d.pair.first.name()},
                     {"b", d.pair.second.name()},
                     {"sign", sign_name(d.sign)},
                     {"value", d.value}});
  }
  return {{"modes", label_list(stage.modes)},
          {"duan", duans},
          {"min_symplectic_eigenvalue", stage.min_symplectic_eigenvalue}};
}

std::string quadrature_name(Quadrature q) { return q == Quadrature::X ? "x" : "y"; }

std::string retrieval_name(Retrieval r) { return r == Retrieval::Backward ? "backward" : "forward"; }

}  // namespace

std::string dump_json(const Json& value) {
  std::string out;
  dump_into(value, 0, out);
  out += "\n";
  return out;
}

Json report_timestamp() {
  const char* env = std::getenv("SOURCE_DATE_EPOCH");
  if (env == nullptr) return nullptr;
  long long seconds = 0;
  const std::string text(env);
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), seconds);
  if (ec != std::errc() || ptr != text.data() + text.size() || seconds < 0) return nullptr;
  const std::time_t t = static_cast<std::time_t>(seconds);
  std::tm utc{};
  if (gmtime_r(&t, &utc) == nullptr) return nullptr;
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return std::string(buffer);
}

Json make_bundle(const std::string& command, const RunConfig& config) {
  Json bundle;
  bundle["tool"] = kToolName;
  bundle["version"] = tool_version();
  bundle["timestamp"] = report_timestamp();
  bundle["command"] = command;
  bundle["config"] = config_json(config);
  return bundle;
}

Json config_json(const RunConfig& c) {
  Json formats = Json::array();
  if (c.output.csv) formats.push_back("csv");
  if (c.output.json) formats.push_back("json");
  return {
      {"grid",
       {{"t_w", c.grid.t_w}, {"l", c.grid.l}, {"n_t", c.grid.n_t}, {"n_z", c.grid.n_z},
        {"n_inner", c.grid.n_inner}}},
      {"source",
       {{"n_bar_tw", c.source.n_bar_tw},
        {"mu", c.source.mu},
        {"kappa_tw", c.source.kappa_tw},
        {"squeezed_quadrature", quadrature_name(c.source.squeezed_quadrature)}}},
      {"scenario", {{"name", c.scenario.name}, {"script", c.script().describe()}}},
      {"oracle",
       {{"enabled", c.oracle.enabled},
        {"n_t", c.oracle.n_t},
        {"n_z", c.oracle.n_z},
        {"retrieval", retrieval_name(c.oracle.retrieval)}}},
      {"output", {{"formats", formats}}},
  };
}

Json schmidt_json(const SchmidtBasis& basis) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < basis.n_modes; ++i) {
    const double phi0 = phi_zero_frequency(basis, i);
    rows.push_back({{"i", i + 1},
                    {"lambda", basis.lambdas[i]},
                    {"mu", basis.mu[i]},
                    {"phi0_sq", phi0 * phi0}});
  }
  return {{"t_w", basis.t_w}, {"l", basis.l}, {"n_modes", basis.n_modes}, {"modes", rows}};
}

Json source_json(const SourceParams& params, const std::vector<InputPulseSpec>& pulses) {
  const SqueezedVariance limit = squeezed_variance(params.mu);
  Json warnings = Json::array();
  for (const std::string& w : params.warnings()) warnings.push_back(w);
  Json pulse_list = Json::array();
  for (std::size_t p = 0; p < pulses.size(); ++p) {
    const InputPulseSpec& spec = pulses[p];
    Json rows = Json::array();
    for (std::size_t i = 0; i < spec.modes.size(); ++i) {
      const ModeSpec& m = spec.modes[i];
      rows.push_back({{"i", i + 1},
                      {"occupancy", spec.occupancy[i]},
                      {"mean_x", m.mean_x},
                      {"mean_y", m.mean_y},
                      {"var_x", m.var_x},
                      {"var_y", m.var_y}});
    }
    pulse_list.push_back({{"pulse", p + 1},
                          {"squeezed_quadrature", quadrature_name(spec.squeezed_quadrature)},
                          {"finite_pulse", spec.finite_pulse},
                          {"modes", rows}});
  }
  return {{"n_bar_tw", params.n_bar_tw},
          {"mu", params.mu},
          {"kappa_tw", params.kappa_tw},
          {"normally_ordered_variance_limit", limit.normally_ordered},
          {"full_variance_limit", limit.full},
          {"warnings", warnings},
          {"pulses", pulse_list}};
}

Json scenario_json(const ScenarioReport& report) {
  Json writes = Json::array();
  for (const WriteStep& w : report.script.writes) {
    writes.push_back({{"pulse", w.pulse + 1}, {"drive", to_string(w.drive)}});
  }
  Json reads = Json::array();
  for (DrivingConfig r : report.script.reads) reads.push_back(to_string(r));

  Json modes = Json::array();
  for (const ModeReport& m : report.modes) {
    Json efficiency = nullptr;
    if (m.write_efficiency) efficiency = *m.write_efficiency;
    modes.push_back({{"i", m.mode + 1},
                     {"lambda", m.lambda},
                     {"write_efficiency", efficiency},
                     {"input", stage_json(m.input)},
                     {"after_write", stage_json(m.after_write)},
                     {"after_read", stage_json(m.after_read)},
                     {"output_cross_covariance", m.output_cross_covariance}});
  }
  return {{"name", report.script.name},
          {"script", report.script.describe()},
          {"entangled_inputs", report.script.entangled_inputs},
          {"writes", writes},
          {"reads", reads},
          {"min_symplectic_eigenvalue", report.min_symplectic_eigenvalue()},
          {"modes", modes}};
}

Json oracle_json(const DiscrepancyReport& report) {
  Json cases = Json::array();
  for (const OracleCase& c : report.cases) {
    cases.push_back({{"case", c.name},
                     {"rel_l2_error", c.rel_l2_error},
                     {"coarse_rel_l2_error", c.coarse_error},
                     {"order", c.order}});
  }
  return {{"n_t", report.grid.n_t},
          {"n_z", report.grid.n_z},
          {"retrieval", retrieval_name(report.retrieval)},
          {"lambda", report.lambda},
          {"excitation_balance", report.excitation_balance},
          {"max_abs_b_minus", report.max_abs_b_minus},
          {"cases", cases}};
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
  if (!out_) throw IoError("cannot open " + path.string() + " for writing");
  for (const std::string& h : header) cell(h);
  end_row();
}

CsvWriter& CsvWriter::cell(const std::string& text) {
  if (row_started_) out_ << ',';
  row_started_ = true;
  out_ << text;
  return *this;
}

CsvWriter& CsvWriter::cell(double value) { return cell(format_number(value)); }

CsvWriter& CsvWriter::cell(long value) { return cell(std::to_string(value)); }

void CsvWriter::end_row() {
  out_ << '\n';
  row_started_ = false;
}

void CsvWriter::close() {
  out_.flush();
  if (!out_) throw IoError("write failed: " + path_.string());
  out_.close();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

void write_kernel_csv(const std::filesystem::path& path, const WriteKernel& kernel) {
  CsvWriter csv(path, {"t", "z", "g_ab"});
  for (Eigen::Index i = 0; i < kernel.t_grid.size(); ++i) {
    for (Eigen::Index j = 0; j < kernel.z_grid.size(); ++j) {
      csv.cell(kernel.t_grid.nodes[i]).cell(kernel.z_grid.nodes[j]).cell(kernel.values(i, j));
      csv.end_row();
    }
  }
  csv.close();
}

void write_full_cycle_csv(const std::filesystem::path& path, const FullCycleKernel& full_cycle) {
  CsvWriter csv(path, {"t", "t_prime", "g"});
  const Eigen::VectorXd& t = full_cycle.t_grid.nodes;
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    for (Eigen::Index j = 0; j < t.size(); ++j) {
      csv.cell(t[i]).cell(t[j]).cell(full_cycle.values(i, j));
      csv.end_row();
    }
  }
  csv.close();
}

void write_schmidt_csv(const std::filesystem::path& path, const SchmidtBasis& basis) {
  CsvWriter csv(path, {"i", "lambda", "mu", "phi0_sq"});
  for (Eigen::Index i = 0; i < basis.n_modes; ++i) {
    const double phi0 = phi_zero_frequency(basis, i);
    csv.cell(static_cast<long>(i + 1)).cell(basis.lambdas[i]).cell(basis.mu[i]).cell(phi0 * phi0);
    csv.end_row();
  }
  csv.close();
}

void write_temporal_modes_csv(const std::filesystem::path& path, const SchmidtBasis& basis) {
  CsvWriter csv(path, {"i", "t", "phi"});
  for (Eigen::Index i = 0; i < basis.n_modes; ++i) {
    for (Eigen::Index k = 0; k < basis.t_grid.size(); ++k) {
      csv.cell(static_cast<long>(i + 1)).cell(basis.t_grid.nodes[k]).cell(basis.phi(k, i));
      csv.end_row();
    }
  }
  csv.close();
}

void write_spatial_modes_csv(const std::filesystem::path& path, const SchmidtBasis& basis) {
  CsvWriter csv(path, {"i", "z", "g"});
  for (Eigen::Index i = 0; i < basis.n_modes; ++i) {
    for (Eigen::Index k = 0; k < basis.z_grid.size(); ++k) {
      csv.cell(static_cast<long>(i + 1)).cell(basis.z_grid.nodes[k]).cell(basis.g(k, i));
      csv.end_row();
    }
  }
  csv.close();
}

void write_source_csv(const std::filesystem::path& path, const InputPulseSpec& spec) {
  CsvWriter csv(path, {"i", "occupancy", "var_x", "var_y"});
  for (std::size_t i = 0; i < spec.modes.size(); ++i) {
    csv.cell(static_cast<long>(i + 1)).cell(spec.occupancy[i]).cell(spec.modes[i].var_x).cell(
        spec.modes[i].var_y);
    csv.end_row();
  }
  csv.close();
}

void write_scenario_csv(const std::filesystem::path& path, const ScenarioReport& report) {
  CsvWriter csv(path, {"mode", "metric", "value"});
  auto row = [&](long mode, const std::string& metric, double value) {
    csv.cell(mode).cell(metric).cell(value);
    csv.end_row();
  };
  for (const ModeReport& m : report.modes) {
    const long i = static_cast<long>(m.mode + 1);
    row(i, "lambda", m.lambda);
    if (m.write_efficiency) row(i, "write_efficiency", *m.write_efficiency);
    const std::pair<const char*, const StageReport*> stages[] = {
        {"input", &m.input}, {"after_write", &m.after_write}, {"after_read", &m.after_read}};
    for (const auto& [stage_name, stage] : stages) {
      const std::string prefix = std::string(stage_name) + ".";
      for (const ModeStats& s : stage->modes) {
        const std::string p = prefix + s.label.name() + ".";
        row(i, p + "photon_number", s.stats.photon_number);
        row(i, p + "var_x", s.stats.var_x);
        row(i, p + "var_y", s.stats.var_y);
        row(i, p + "normally_ordered_var_x", s.stats.no_var_x);
        row(i, p + "normally_ordered_var_y", s.stats.no_var_y);
      }
      for (const DuanResult& d : stage->duan) {
        row(i, prefix + "duan." + d.pair.first.name() + "-" + d.pair.second.name(), d.value);
      }
      row(i, prefix + "min_symplectic_eigenvalue", stage->min_symplectic_eigenvalue);
    }
    row(i, "output_cross_covariance", m.output_cross_covariance);
  }
  csv.close();
}

void write_oracle_csv(const std::filesystem::path& path, const DiscrepancyReport& report) {
  CsvWriter csv(path, {"case", "rel_l2_error", "order"});
  for (const OracleCase& c : report.cases) {
    csv.cell(c.name).cell(c.rel_l2_error).cell(c.order);
    csv.end_row();
  }
  csv.close();
}

void write_fields_csv(const std::filesystem::path& path, const PdeGrid& grid,
                      const FieldState& field, int stride) {
  if (stride < 1) throw ArgumentError("write_fields_csv: stride must be >= 1");
  CsvWriter csv(path, {"t", "z", "a", "c", "b1", "b2"});
  for (int n = 0; n <= grid.n_t; n += stride) {
    for (int j = 0; j <= grid.n_z; j += stride) {
      csv.cell(n * grid.dt()).cell(j * grid.dz());
      csv.cell(field.a(n, j)).cell(field.c(n, j)).cell(field.b1(n, j)).cell(field.b2(n, j));
      csv.end_row();
    }
  }
  csv.close();
}

}  // namespace tripod
