#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "tripod/commands.hpp"
#include "tripod/config.hpp"
#include "tripod/report.hpp"

using namespace tripod;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("tripod_mzi_test_" + name);
  fs::remove_all(dir);
  return dir;
}

// Small grid keeping the command tests fast.
RunConfig quick_config(const fs::path& dir) {
  RunConfig c = parse_config("[grid]\nn_t = 64\nn_z = 64\nn_inner = 64\n");
  c.output.directory = dir.string();
  return c;
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("empty text gives the defaults") {
  const RunConfig c = parse_config("");
  CHECK(c.grid.l == 10.0);
  CHECK(c.grid.t_w == 5.5);
  CHECK(c.grid.n_t == 256);
  CHECK(c.source.mu == 0.1);
  CHECK(c.source.n_bar_tw == 100.0);
  CHECK(c.source.kappa_tw == 1e4);
  CHECK(c.scenario.name == "S1");
  CHECK_FALSE(c.oracle.enabled);
  CHECK(c.oracle.retrieval == Retrieval::Backward);
  CHECK(c.output.csv);
  CHECK(c.output.json);
}

TEST_CASE("constraint violations name the key and line") {
  try {
    parse_config("# comment\nt_w = -1\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 2);
    CHECK(e.key() == "grid.t_w");
    CHECK(std::string(e.what()).find("t_w") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config("[source]\nmu = 1.5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[grid]\nn_t = 4\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[oracle]\nn_t = 511\n"), ConfigError);
}

TEST_CASE("type mismatches, unknown and duplicate keys are rejected") {
  CHECK_THROWS_AS(parse_config("[grid]\nl = ten\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[grid]\nn_t = 12.5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[grid]\nwidth = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[physics]\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[grid]\nl = 3\nl = 4\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[oracle]\nenabled = maybe\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[output]\nformats = csv, xml\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("n_t = 64\n"), ConfigError);  // grid or oracle?
  CHECK_THROWS_AS(parse_config("[grid\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[grid]\njust text\n"), ConfigError);
}

TEST_CASE("scenario selection") {
  const RunConfig s4 = parse_config("[scenario]\nname = S4\n");
  CHECK(s4.script().writes.size() == 2);
  CHECK(s4.script().reads.size() == 2);

  const RunConfig custom = parse_config("[scenario]\nname = custom\nscript = write:1; read:1\n");
  CHECK(custom.script().reads.front() == DrivingConfig::Omega1Only);

  CHECK_THROWS_AS(parse_config("[scenario]\nname = custom\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[scenario]\nname = S9\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[scenario]\nscript = write:+ write:1\n"), ConfigError);
}

TEST_CASE("full config round trip") {
  const RunConfig c = parse_config(R"(
[grid]
t_w = 4.0      # shorter write
l = 12
n_t = 96
n_z = 80
n_inner = 64
[source]
n_bar_tw = 25
mu = 0.2
kappa_tw = 300
squeezed_quadrature = y
[oracle]
enabled = true
n_t = 256
n_z = 128
retrieval = forward
[output]
directory = results
formats = json
)");
  CHECK(c.grid.t_w == 4.0);
  CHECK(c.grid.n_z == 80);
  CHECK(c.source.squeezed_quadrature == Quadrature::Y);
  CHECK(c.oracle.enabled);
  CHECK(c.pde_grid().n_z == 128);
  CHECK(c.pde_grid().l == 12.0);
  CHECK(c.oracle.retrieval == Retrieval::Forward);
  CHECK(c.output.directory == "results");
  CHECK_FALSE(c.output.csv);
}

}  // TEST_SUITE

TEST_SUITE("report") {

TEST_CASE("numbers carry 17 significant digits") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(5.5) == "5.5");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(1e-300) == "1e-300");
  CHECK(format_number(2.0 / 3.0) == "0.66666666666666663");
  CHECK(format_number(std::nan("")) == "null");
  for (double x : {M_PI, 1.0 / 3.0, 6.02214076e23, -2.5e-7}) {
    CHECK(std::stod(format_number(x)) == x);
  }
}

TEST_CASE("json dump keeps insertion order") {
  Json j;
  j["zeta"] = 1;
  j["alpha"] = 0.25;
  j["list"] = Json::array({1.5, "x", nullptr, true});
  j["empty"] = Json::object();
  const std::string text = dump_json(j);
  CHECK(text.find("zeta") < text.find("alpha"));
  CHECK(text == "{\n  \"zeta\": 1,\n  \"alpha\": 0.25,\n  \"list\": [\n    1.5,\n    \"x\",\n"
                "    null,\n    true\n  ],\n  \"empty\": {}\n}\n");
  CHECK(Json::parse(text)["alpha"] == 0.25);
}

TEST_CASE("timestamp comes only from SOURCE_DATE_EPOCH") {
  unsetenv("SOURCE_DATE_EPOCH");
  CHECK(report_timestamp().is_null());
  setenv("SOURCE_DATE_EPOCH", "1700000000", 1);
  CHECK(report_timestamp() == "2023-11-14T22:13:20Z");
  setenv("SOURCE_DATE_EPOCH", "soon", 1);
  CHECK(report_timestamp().is_null());
  unsetenv("SOURCE_DATE_EPOCH");
}

TEST_CASE("csv writer") {
  const fs::path dir = scratch_dir("csv");
  fs::create_directories(dir);
  {
    CsvWriter csv(dir / "t.csv", {"a", "b"});
    csv.cell(1L).cell(0.5);
    csv.end_row();
    csv.close();
  }
  CHECK(slurp(dir / "t.csv") == "a,b\n1,0.5\n");
  CHECK_THROWS_AS(CsvWriter(dir / "missing" / "t.csv", {"a"}), IoError);
  fs::remove_all(dir);
}

}  // TEST_SUITE

TEST_SUITE("cli") {

TEST_CASE("scenario command writes deterministic bundles") {
  const fs::path dir = scratch_dir("scenario");
  const RunConfig c = quick_config(dir);
  REQUIRE(cmd_scenario(c, {}) == kExitOk);
  const std::string first = slurp(dir / "scenario.json");
  REQUIRE(cmd_scenario(c, {}) == kExitOk);
  CHECK(slurp(dir / "scenario.json") == first);

  const Json bundle = Json::parse(first);
  CHECK(bundle["tool"] == "tripod_mzi");
  CHECK(bundle["command"] == "scenario");
  const Json& modes = bundle["scenario"]["modes"];
  REQUIRE(modes.size() >= 2);
  for (const Json& m : modes) {
    if (m["write_efficiency"].is_null()) continue;
    CHECK(m["write_efficiency"].get<double>() ==
          doctest::Approx(std::sqrt(m["lambda"].get<double>())).epsilon(1e-12));
  }
  CHECK(modes[0]["after_read"]["modes"][0]["label"] == "out1");
  CHECK(fs::exists(dir / "scenario.csv"));
  CHECK(slurp(dir / "scenario.csv").rfind("mode,metric,value\n", 0) == 0);
  fs::remove_all(dir);
}

TEST_CASE("schmidt, input and kernel commands") {
  const fs::path dir = scratch_dir("stages");
  const RunConfig c = quick_config(dir);
  CHECK(cmd_kernel(c, {}) == kExitOk);
  CHECK(cmd_schmidt(c, {}) == kExitOk);
  CHECK(cmd_input(c, {}) == kExitOk);
  CHECK(slurp(dir / "kernel.csv").rfind("t,z,g_ab\n", 0) == 0);
  CHECK(slurp(dir / "full_cycle.csv").rfind("t,t_prime,g\n", 0) == 0);
  CHECK(slurp(dir / "schmidt.csv").rfind("i,lambda,mu,phi0_sq\n", 0) == 0);
  CHECK(slurp(dir / "source.csv").rfind("i,occupancy,var_x,var_y\n", 0) == 0);
  const Json kernel = Json::parse(slurp(dir / "kernel.json"));
  CHECK(kernel["kernel"]["z0_sine_residual"].get<double>() < 1e-12);
  fs::remove_all(dir);
}

TEST_CASE("debug flag reports the imaginary residual") {
  const fs::path dir = scratch_dir("debug");
  const RunConfig c = quick_config(dir);
  CommandFlags flags;
  flags.debug = true;
  REQUIRE(cmd_kernel(c, flags) == kExitOk);
  const Json bundle = Json::parse(slurp(dir / "kernel.json"));
  CHECK(bundle["debug"]["max_imaginary_residual"].get<double>() < 1e-12);
  fs::remove_all(dir);
}

TEST_CASE("oracle command") {
  const fs::path dir = scratch_dir("oracle");
  RunConfig c = quick_config(dir);
  c.oracle.n_t = 64;
  c.oracle.n_z = 64;
  REQUIRE(cmd_oracle(c, {}) == kExitOk);
  CHECK(slurp(dir / "oracle.csv").rfind("case,rel_l2_error,order\nwrite,", 0) == 0);
  CHECK(slurp(dir / "oracle_fields.csv").rfind("t,z,a,c,b1,b2\n", 0) == 0);
  const Json bundle = Json::parse(slurp(dir / "oracle.json"));
  CHECK(bundle["oracle"]["cases"].size() == 3);
  fs::remove_all(dir);
}

TEST_CASE("sweep over l gives one row per value and mode") {
  const fs::path dir = scratch_dir("sweep");
  const RunConfig c = quick_config(dir);
  REQUIRE(cmd_sweep(c, {}, {"l", 2.0, 20.0, 4}) == kExitOk);
  std::istringstream csv(slurp(dir / "sweep.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "param,value,mode,lambda,phi0_sq,var_sq");
  const Json bundle = Json::parse(slurp(dir / "sweep.json"));
  std::size_t rows = 0;
  for (const Json& point : bundle["sweep"]["points"]) rows += point["modes"].size();
  std::size_t lines = 0;
  while (std::getline(csv, line)) ++lines;
  CHECK(lines == rows);
  CHECK(bundle["sweep"]["points"].size() == 4);
  CHECK(bundle["sweep"]["points"][3]["value"] == 20.0);
  fs::remove_all(dir);
}

TEST_CASE("exit codes") {
  const fs::path dir = scratch_dir("codes");
  RunConfig c = quick_config(dir);
  CHECK(cmd_sweep(c, {}, {"n_t", 1, 2, 2}) == kExitValidation);
  CHECK(cmd_sweep(c, {}, {"l", 5, 2, 2}) == kExitValidation);
  CHECK(cmd_sweep(c, {}, {"mu", 0.1, 1.5, 3}) == kExitValidation);

  fs::create_directories(dir);
  write_text(dir / "blocker", "");
  CommandFlags flags;
  flags.out_dir = (dir / "blocker" / "sub").string();
  CHECK(cmd_schmidt(c, flags) == kExitIo);

  CHECK(guarded([] { throw NumericalError("x"); }) == kExitNumerical);
  CHECK(guarded([] { throw ConfigError(3, "grid.l", "bad"); }) == kExitValidation);
  CHECK(guarded([] {}) == kExitOk);
  fs::remove_all(dir);
}

}  // TEST_SUITE
