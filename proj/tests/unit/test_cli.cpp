#include <doctest.h>

#include <filesystem>
#include <random>

#include "config.hpp"
#include "output.hpp"
#include "suites.hpp"

using namespace dlab;
using namespace dlab::cli;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("dlab-test-" + name);
  fs::remove_all(p);
  return p;
}

bool has_error(const ConfigError& e, const std::string& needle) {
  for (const auto& m : e.errors()) {
    if (m.find(needle) != std::string::npos) return true;
  }
  return false;
}

const char* kMinimal = R"(
[operator]
kind = "hermite"
dim = 1

[phase]
family = "fractional"
nu = 0.5
)";

}  // namespace

TEST_CASE("minimal config gets defaults") {
  const ScenarioConfig c = load_config_string(kMinimal);
  CHECK(c.op.kind == "hermite");
  CHECK(c.grids.t.size() == 12);
  CHECK(c.grids.t.front() == doctest::Approx(0.05));
  CHECK(c.grids.t.back() == doctest::Approx(0.6));
  CHECK(c.grids.spatial_points == 61);
  CHECK(c.tol.time_slope == 0.15);
  CHECK(c.make_phase().verified);
}

TEST_CASE("validation collects every error") {
  try {
    load_config_string(R"(
[operator]
kind = "laguerre"
alpha = [-0.6]
[phase]
family = "fractional"
nu = 1.5
[window]
plateau_end = 1.0
support_end = 3.0
[grids]
spatial_points = 1
colour = "red"
)");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(has_error(e, "grids.colour: unknown key"));
  }
  try {
    load_config_string(R"(
[operator]
kind = "laguerre"
alpha = [-0.6]
[phase]
family = "fractional"
nu = 1.5
[window]
plateau_end = 1.0
support_end = 3.0
[grids]
spatial_points = 1
)");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(has_error(e, "alpha > -1/2"));
    CHECK(has_error(e, "fractional requires 0<nu<1"));
    CHECK(has_error(e, "window"));
    CHECK(has_error(e, "grids.spatial_points"));
    CHECK(e.errors().size() >= 4);
  }
}

TEST_CASE("times must lie inside the dispersive window") {
  try {
    load_config_string(std::string(kMinimal) + "[grids]\nt = [0.1, 0.75]\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(has_error(e, "grids.t"));
  }
}

TEST_CASE("parse errors carry line and column") {
  try {
    load_config_string("[operator]\nkind = \n", "bad.toml");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    REQUIRE(e.errors().size() == 1);
    CHECK(e.errors()[0].rfind("bad.toml:2:", 0) == 0);
  }
}

TEST_CASE("config round-trips through its TOML echo") {
  ScenarioConfig c = load_config_string(R"(
[operator]
kind = "twisted"
dim = 1
[phase]
family = "klein_gordon"
[grids]
t_log = [0.05, 0.6, 7]
lambda = [4, 8.5]
fit_t = [0.05]
[besov]
q = 3.0
[output]
seed = 99
)");
  const ScenarioConfig back = load_config_string(to_toml(c));
  CHECK(equivalent(c, back));
  CHECK(back.grids.t == c.grids.t);
}

TEST_CASE("csv layout") {
  DecayScan s;
  s.t_grid = {0.1, 0.2};
  s.lambda_grid = {4.0, 8.0};
  s.M.resize(2, 2);
  s.M << 1.0 / 3.0, 2.0, 0.0, 1e-20;
  CHECK(scan_csv(s) == "t\\lambda,4,8\n0.1,0.333333333333333,2\n0.2,0,1e-20\n");
}

TEST_CASE("svg output") {
  Plot p;
  p.title = "one point";
  p.series.push_back({"a", {1.0}, {2.0}});
  p.lines.push_back({"fit", 1.0, 0.0, 1.0, 2.0, false});
  const std::string one = render_svg(p);
  CHECK(one.find("warning") != std::string::npos);
  CHECK(one.find("clip-path=\"url(#plot)\"") == std::string::npos);
  Plot q;
  q.title = "a < b & c";
  q.series.push_back({"lambda=4", {0.1, 0.2, 0.4}, {3.0, 2.0, 1.5}});
  q.lines.push_back({"fit", -0.5, 0.3, 0.1, 0.4, false});
  const std::string a = render_svg(q), b = render_svg(q);
  CHECK(a == b);
  CHECK(a.rfind("<?xml", 0) == 0);
  CHECK(a.find("a &lt; b &amp; c") != std::string::npos);
  CHECK(a.substr(a.size() - 7) == "</svg>\n");
}

TEST_CASE("sha256") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("runs write a manifest and compare against golden outputs") {
  const ScenarioConfig c = load_config_string(kMinimal);
  RunOptions o;
  o.out_dir = temp_dir("golden-a");
  const RunReport r = run("hypotheses", c, o);
  CHECK_FALSE(r.any_failed());
  const json manifest = json::parse(read_file(o.out_dir / "manifest.json"));
  bool saw_report = false;
  for (const auto& e : manifest["files"]) {
    const std::string path = e["path"];
    CHECK(sha256_hex(read_file(o.out_dir / path)) == e["sha256"]);
    if (path == "report.json") saw_report = true;
  }
  CHECK(saw_report);
  CHECK(json::parse(read_file(o.out_dir / "hypotheses.json")).is_object());

  RunOptions again;
  again.out_dir = temp_dir("golden-b");
  again.golden = o.out_dir / "manifest.json";
  const RunReport r2 = run("hypotheses", c, again);
  CHECK_FALSE(r2.any_failed());
  CHECK(r2.checks.back().name == "golden");

  json tampered = manifest;
  tampered["files"][0]["sha256"] = std::string(64, '0');
  write_file(o.out_dir / "tampered.json", tampered.dump());
  again.golden = o.out_dir / "tampered.json";
  CHECK(run("hypotheses", c, again).any_failed());
}

TEST_CASE("an empty shell yields a warning and zero entries") {
  const ScenarioConfig c = load_config_string(std::string(kMinimal) + "[grids]\nlambda = [0.5]\nt = [0.1, 0.2]\n");
  RunOptions o;
  o.out_dir = temp_dir("empty");
  const RunReport r = run("decay-scan", c, o);
  CHECK_FALSE(r.any_failed());
  bool warned = false;
  for (const auto& ch : r.checks) warned = warned || (ch.name == "scan_cells" && ch.status == Status::warn);
  CHECK(warned);
  CHECK(read_file(o.out_dir / "decay.csv") == "t\\lambda,0.5\n0.1,0\n0.2,0\n");
}
