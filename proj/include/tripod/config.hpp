#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "tripod/kernel.hpp"
#include "tripod/oracle.hpp"
#include "tripod/protocol.hpp"
#include "tripod/source.hpp"

namespace tripod {

/// Parse failure; line is 0 when the problem is not tied to a single line
/// (e.g. a cross-key constraint).
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(int line, std::string key, const std::string& message);

  int line() const { return line_; }
  const std::string& key() const { return key_; }

 private:
  int line_;
  std::string key_;
};

struct ScenarioConfig {
  std::string name = "S1";  ///< S1..S6 or "custom"
  std::string script;       ///< parse_script text, required for "custom"
};

struct OracleConfig {
  bool enabled = false;
  int n_t = 512;
  int n_z = 512;
  Retrieval retrieval = Retrieval::Backward;
};

struct OutputConfig {
  std::string directory = "out";
  bool csv = true;
  bool json = true;
};

struct RunConfig {
  KernelConfig grid;
  SourceParams source;
  ScenarioConfig scenario;
  OracleConfig oracle;
  OutputConfig output;

  ScenarioScript script() const;
  PdeGrid pde_grid() const;
  void validate() const;  ///< throws ConfigError
};

/// INI text:
///   [grid]     t_w, l, n_t, n_z, n_inner
///   [source]   n_bar_tw, mu, kappa_tw, squeezed_quadrature (x|y)
///   [scenario] name, script
///   [oracle]   enabled, n_t, n_z, retrieval (backward|forward)
///   [output]   directory, formats (comma list of csv, json)
/// '#' starts a comment. Omitted keys keep their defaults. Keys before the
/// first header resolve by name when unambiguous.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

}  // namespace tripod
