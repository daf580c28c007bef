#include "tripod/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include "tripod/error.hpp"

namespace tripod {

ConfigError::ConfigError(int line, std::string key, const std::string& message)
    : std::invalid_argument(line > 0 ? "line " + std::to_string(line) + ": " + key + ": " + message
                                     : key + ": " + message),
      line_(line),
      key_(std::move(key)) {}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return out;
}

struct Entry {
  int line;
  std::string key;  // "section.key"
  std::string value;
};

double to_real(const Entry& e) {
  double v = 0;
  const char* first = e.value.data();
  const char* last = first + e.value.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
    throw ConfigError(e.line, e.key, "expected a real number, got '" + e.value + "'");
  }
  return v;
}

int to_int(const Entry& e) {
  int v = 0;
  const char* first = e.value.data();
  const char* last = first + e.value.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw ConfigError(e.line, e.key, "expected an integer, got '" + e.value + "'");
  }
  return v;
}

bool to_bool(const Entry& e) {
  const std::string v = lower(e.value);
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  throw ConfigError(e.line, e.key, "expected a boolean, got '" + e.value + "'");
}

void require(bool ok, const Entry& e, const std::string& message) {
  if (!ok) throw ConfigError(e.line, e.key, message);
}

using Setter = std::function<void(RunConfig&, const Entry&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"grid.t_w",
       [](RunConfig& c, const Entry& e) {
         c.grid.t_w = to_real(e);
         require(c.grid.t_w > 0, e, "must be > 0");
       }},
      {"grid.l",
       [](RunConfig& c, const Entry& e) {
         c.grid.l = to_real(e);
         require(c.grid.l > 0, e, "must be > 0");
       }},
      {"grid.n_t",
       [](RunConfig& c, const Entry& e) {
         c.grid.n_t = to_int(e);
         require(c.grid.n_t >= 8 && c.grid.n_t <= 2000, e, "must lie in [8, 2000]");
       }},
      {"grid.n_z",
       [](RunConfig& c, const Entry& e) {
         c.grid.n_z = to_int(e);
         require(c.grid.n_z >= 8 && c.grid.n_z <= 2000, e, "must lie in [8, 2000]");
       }},
      {"grid.n_inner",
       [](RunConfig& c, const Entry& e) {
         c.grid.n_inner = to_int(e);
         require(c.grid.n_inner >= 8, e, "must be >= 8");
       }},
      {"source.n_bar_tw",
       [](RunConfig& c, const Entry& e) {
         c.source.n_bar_tw = to_real(e);
         require(c.source.n_bar_tw >= 0, e, "must be >= 0");
       }},
      {"source.mu",
       [](RunConfig& c, const Entry& e) {
         c.source.mu = to_real(e);
         require(c.source.mu > 0 && c.source.mu <= 1, e, "must lie in (0, 1]");
       }},
      {"source.kappa_tw",
       [](RunConfig& c, const Entry& e) {
         c.source.kappa_tw = to_real(e);
         require(c.source.kappa_tw > 0, e, "must be > 0");
       }},
      {"source.squeezed_quadrature",
       [](RunConfig& c, const Entry& e) {
         const std::string v = lower(e.value);
         require(v == "x" || v == "y", e, "expected x or y");
         c.source.squeezed_quadrature = v == "x" ? Quadrature::X : Quadrature::Y;
       }},
      {"scenario.name",
       [](RunConfig& c, const Entry& e) {
         const std::string v = e.value;
         const bool builtin = v.size() == 2 && v[0] == 'S' && v[1] >= '1' && v[1] <= '6';
         require(builtin || v == "custom", e, "expected S1..S6 or custom");
         c.scenario.name = v;
       }},
      {"scenario.script",
       [](RunConfig& c, const Entry& e) {
         try {
           parse_script(e.value).validate();
         } catch (const ArgumentError& err) {
           throw ConfigError(e.line, e.key, err.what());
         }
         c.scenario.script = e.value;
       }},
      {"oracle.enabled", [](RunConfig& c, const Entry& e) { c.oracle.enabled = to_bool(e); }},
      {"oracle.n_t",
       [](RunConfig& c, const Entry& e) {
         c.oracle.n_t = to_int(e);
         require(c.oracle.n_t >= 4 && c.oracle.n_t % 2 == 0, e, "must be even and >= 4");
       }},
      {"oracle.n_z",
       [](RunConfig& c, const Entry& e) {
         c.oracle.n_z = to_int(e);
         require(c.oracle.n_z >= 4 && c.oracle.n_z % 2 == 0, e, "must be even and >= 4");
       }},
      {"oracle.retrieval",
       [](RunConfig& c, const Entry& e) {
         const std::string v = lower(e.value);
         require(v == "backward" || v == "forward", e, "expected backward or forward");
         c.oracle.retrieval = v == "backward" ? Retrieval::Backward : Retrieval::Forward;
       }},
      {"output.directory",
       [](RunConfig& c, const Entry& e) {
         require(!e.value.empty(), e, "must not be empty");
         c.output.directory = e.value;
       }},
      {"output.formats",
       [](RunConfig& c, const Entry& e) {
         c.output.csv = false;
         c.output.json = false;
         std::stringstream items(e.value);
         std::string item;
         while (std::getline(items, item, ',')) {
           const std::string v = lower(trim(item));
           if (v == "csv") {
             c.output.csv = true;
           } else if (v == "json") {
             c.output.json = true;
           } else {
             throw ConfigError(e.line, e.key, "unknown format '" + v + "'");
           }
         }
         require(c.output.csv || c.output.json, e, "at least one of csv, json");
       }},
  };
  return table;
}

// Keys before the first header are accepted when their name is unique
// across sections (t_w, mu, ...); n_t and n_z need a section.
std::string resolve_bare_key(int line, const std::string& key) {
  std::string match;
  for (const auto& [full, setter] : setters()) {
    if (full.substr(full.find('.') + 1) != key) continue;
    if (!match.empty()) throw ConfigError(line, key, "ambiguous outside a [section]");
    match = full;
  }
  if (match.empty()) throw ConfigError(line, key, "unknown key");
  return match;
}

}  // namespace

ScenarioScript RunConfig::script() const {
  if (scenario.name == "custom") return parse_script(scenario.script, "custom");
  return builtin_scenario(scenario.name);
}

PdeGrid RunConfig::pde_grid() const {
  PdeGrid g;
  g.n_t = oracle.n_t;
  g.n_z = oracle.n_z;
  g.t_w = grid.t_w;
  g.l = grid.l;
  return g;
}

void RunConfig::validate() const {
  try {
    grid.validate();
  } catch (const ArgumentError& e) {
    throw ConfigError(0, "grid", e.what());
  }
  try {
    source.validate();
  } catch (const ArgumentError& e) {
    throw ConfigError(0, "source", e.what());
  }
  if (scenario.name == "custom" && scenario.script.empty()) {
    throw ConfigError(0, "scenario.script", "required when scenario.name = custom");
  }
  try {
    script().validate();
  } catch (const ArgumentError& e) {
    throw ConfigError(0, "scenario", e.what());
  }
}

RunConfig parse_config(std::string_view text) {
  RunConfig config;
  std::set<std::string> seen;
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(line_no, std::string(line), "unterminated section header");
      section = lower(trim(line.substr(1, line.size() - 2)));
      static const std::set<std::string> known = {"grid", "source", "scenario", "oracle", "output"};
      if (!known.count(section)) throw ConfigError(line_no, section, "unknown section");
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(line_no, std::string(line), "expected key = value");
    const std::string key = lower(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    Entry entry{line_no, section + "." + key, value};
    if (section.empty()) entry.key = resolve_bare_key(line_no, key);

    const auto it = setters().find(entry.key);
    if (it == setters().end()) throw ConfigError(line_no, entry.key, "unknown key");
    if (!seen.insert(entry.key).second) throw ConfigError(line_no, entry.key, "duplicate key");
    it->second(config, entry);
  }
  config.validate();
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

}  // namespace tripod
