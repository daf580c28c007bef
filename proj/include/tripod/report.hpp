#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tripod/config.hpp"
#include "tripod/kernel.hpp"
#include "tripod/oracle.hpp"
#include "tripod/protocol.hpp"
#include "tripod/source.hpp"

namespace tripod {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolName = "tripod_mzi";
std::string tool_version();

/// 17 significant digits, locale independent; non-finite values become null.
std::string format_number(double value);

/// Serializes with fixed key order (insertion order) and format_number for
/// every float, so equal inputs give equal bytes.
std::string dump_json(const Json& value);

/// ISO 8601 UTC from SOURCE_DATE_EPOCH, null when unset or unparsable.
Json report_timestamp();

/// tool, version, timestamp, command, config.
Json make_bundle(const std::string& command, const RunConfig& config);

Json config_json(const RunConfig& config);
Json schmidt_json(const SchmidtBasis& basis);
Json source_json(const SourceParams& params, const std::vector<InputPulseSpec>& pulses);
Json scenario_json(const ScenarioReport& report);
Json oracle_json(const DiscrepancyReport& report);

/// Row-wise CSV with a header; numbers go through format_number.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

  CsvWriter& cell(const std::string& text);
  CsvWriter& cell(double value);
  CsvWriter& cell(long value);
  void end_row();
  void close();  ///< flushes; throws IoError on failure

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  bool row_started_ = false;
};

void write_text(const std::filesystem::path& path, const std::string& text);

void write_kernel_csv(const std::filesystem::path& path, const WriteKernel& kernel);
void write_full_cycle_csv(const std::filesystem::path& path, const FullCycleKernel& full_cycle);
void write_schmidt_csv(const std::filesystem::path& path, const SchmidtBasis& basis);
/// Long format: (i, t, phi) and (i, z, g).
void write_temporal_modes_csv(const std::filesystem::path& path, const SchmidtBasis& basis);
void write_spatial_modes_csv(const std::filesystem::path& path, const SchmidtBasis& basis);
void write_source_csv(const std::filesystem::path& path, const InputPulseSpec& spec);
void write_scenario_csv(const std::filesystem::path& path, const ScenarioReport& report);
void write_oracle_csv(const std::filesystem::path& path, const DiscrepancyReport& report);
/// (t, z, a, c, b1, b2), every stride-th mesh node.
void write_fields_csv(const std::filesystem::path& path, const PdeGrid& grid,
                      const FieldState& field, int stride);

}  // namespace tripod
