#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <locale>
#include <string>
#include <vector>

#include "risdeploy/commands.hpp"
#include "risdeploy/errors.hpp"
#include "risdeploy/output.hpp"
#include "risdeploy/scenario.hpp"

using namespace risdeploy;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("risdeploy_test_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

// A scenario small enough for every subcommand to run in a second or two.
json tiny_doc() {
  return json{{"layout", {{"road_halfwidth", 20.0}, {"grid_resolution", 1.0}}},
              {"ris", {{"n_rows", 40}, {"n_cols", 40}, {"tilt_deg", 20.0}}},
              {"blockers", {{"snapshot_x", {-10.0, 3.0}}}},
              {"search",
               {{"x_values", {-10.0, 0.0, 10.0}},
                {"h_values", {8.0, 12.0}},
                {"tilt_resolution_deg", 10.0},
                {"nested_draws", 5}}},
              {"run", {{"draws", 20}, {"seed", 9}}}};
}

fs::path write_scenario(const fs::path& dir, const json& doc) {
  const fs::path p = dir / "scenario.json";
  write_text_file(p, doc.dump(2));
  return p;
}

int cli(std::vector<std::string> args) {
  std::vector<const char*> argv{"risdeploy"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

// Data rows of a raster file, header and '#' lines dropped, y column dropped.
std::vector<std::vector<std::string>> raster_cells(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  bool header_seen = false;
  for (const std::string& line : split(text, '\n')) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    auto cells = split(line, ',');
    cells.erase(cells.begin());
    rows.push_back(cells);
  }
  return rows;
}

struct CommaDecimal : std::numpunct<char> {
  char do_decimal_point() const override { return ','; }
  char do_thousands_sep() const override { return '.'; }
  std::string do_grouping() const override { return "\3"; }
};

}  // namespace

TEST_CASE("defaults are the reference deployment") {
  const ScenarioFile s = parse_scenario(json::object());
  CHECK(s.layout.wavelength == 0.005);
  CHECK(s.layout.gains_tx_rx == 100.0);
  CHECK(s.ris.element_gain == 8.0);
  CHECK(s.blocker_density == 1.0);
  CHECK(s.layout.pl_threshold == 2.5e8);
  CHECK(s.layout.bs_height == 10.0);
  CHECK(s.layout.blocker_height == 2.0);
  CHECK(s.layout.blocker_lane_y == 6.0);
  CHECK(s.layout.ris_y == 14.0);
  CHECK(s.layout.road_halfwidth == 50.0);
  CHECK(s.layout.blocker_length == 4.8);
  CHECK(s.ris.elem_a == 0.0025);
  CHECK(s.ris.elem_b == 0.0025);
  CHECK(s.ris.n_rows == 200);
  CHECK(s.ris.n_cols == 200);
  CHECK(s.layout.grid_resolution == 0.5);
  CHECK(rad_to_deg(s.search.tilt_resolution) == doctest::Approx(1.0));
  CHECK(s.layout.snr == doctest::Approx(1e9));
  CHECK(s.run.n_draws == 500);
  CHECK(s.search.x_values.size() == 9);
  CHECK(s.search.h_values.size() == 15);
}

TEST_CASE("scenario parsing converts units and rejects unknown keys") {
  const ScenarioFile s = parse_scenario(json{{"layout", {{"snr_db", 80.0}, {"ris_y", 22.0}}},
                                             {"ris", {{"tilt_deg", 15.0}, {"height", 12.0}}}});
  CHECK(s.layout.snr == doctest::Approx(1e8));
  CHECK(s.layout.ris_y == 22.0);
  CHECK(s.ris.tilt == doctest::Approx(deg_to_rad(15.0)));

  const auto rejects = [](const json& doc, const std::string& fragment) {
    try {
      parse_scenario(doc);
    } catch (const ConfigError& e) {
      CAPTURE(e.what());
      CHECK(std::string(e.what()).find(fragment) != std::string::npos);
      return;
    }
    FAIL("accepted " << doc.dump());
  };
  rejects(json{{"layuot", json::object()}}, "layuot");
  rejects(json{{"layout", {{"snr", 90}}}}, "scenario.layout");
  rejects(json{{"ris", {{"tilt", 0.5}}}}, "tilt");
  rejects(json{{"run", {{"draws", "many"}}}}, "run.draws");
  rejects(json{{"ris", {{"tilt_deg", 89.0}, {"height", 20.0}}}}, "tilt");
  rejects(json{{"search", {{"metric", "speed"}}}}, "speed");
  rejects(json{{"search", {{"h_values", json::array()}}}}, "h_values");
  rejects(json{{"run", {{"draws", 0}}}}, "draws");
  rejects(json{{"layout", {{"blocker_lane_y", 20.0}}}}, "lane");
}

TEST_CASE("parameter echo round-trips") {
  ScenarioFile s = parse_scenario(tiny_doc());
  s.layout.snr = db_to_linear(87.5);
  const std::string header = output_header("test", s, {{"note", "x"}});
  CHECK(header.rfind("# risdeploy ", 0) == 0);
  CHECK(header.find("# seed: 9\n") != std::string::npos);
  CHECK(header.find("# rng: philox4x32-10/stream-v1\n") != std::string::npos);
  CHECK(header.find("# near_field: ") != std::string::npos);

  const ScenarioFile back = parse_header_echo(header + "a,b\n1,2\n");
  CHECK(back.layout.road_halfwidth == s.layout.road_halfwidth);
  CHECK(back.layout.snr == doctest::Approx(s.layout.snr).epsilon(1e-14));
  CHECK(back.ris.tilt == doctest::Approx(s.ris.tilt).epsilon(1e-14));
  CHECK(back.ris.n_rows == s.ris.n_rows);
  CHECK(back.search.x_values == s.search.x_values);
  CHECK(back.search.tilt_resolution == doctest::Approx(s.search.tilt_resolution).epsilon(1e-14));
  CHECK(back.search.nested_draws == s.search.nested_draws);
  CHECK(back.snapshot_blockers == s.snapshot_blockers);
  CHECK(back.run.seed == s.run.seed);
  CHECK(back.run.n_draws == s.run.n_draws);
  // a second trip is a fixed point of the echo
  CHECK(to_json(parse_header_echo(output_header("test", back))).dump() == to_json(back).dump());

  CHECK_THROWS_AS(parse_header_echo("x,y\n1,2\n"), ConfigError);
}

TEST_CASE("near-field note keeps both values visible") {
  const std::string note = near_field_note(default_scenario());
  CHECK(note.find("56568.5") != std::string::npos);
  CHECK(note.find("400 m") != std::string::npos);
}

TEST_CASE("number formatting ignores the global locale") {
  const std::locale saved = std::locale::global(std::locale(std::locale::classic(), new CommaDecimal));
  const std::string v = format_value(1234567.125);
  const std::string r = format_rate(7.7146975);
  std::locale::global(saved);
  CHECK(v == "1234567.125");
  CHECK(r == "7.7147");
}

TEST_CASE("snapshot validation") {
  const ScenarioFile s = parse_scenario(tiny_doc());
  const fs::path out = scratch("snapshot_validation");
  CHECK_THROWS_AS(cmd_snapshot(s, {}, out, {}), ConfigError);
  CHECK_THROWS_AS(cmd_snapshot(s, {16.0}, out, {}), ConfigError);
  CHECK_THROWS_AS(cmd_snapshot(s, {-20.5}, out, {}), ConfigError);
  CHECK_NOTHROW(cmd_snapshot(s, {15.2}, out, {}));
}

TEST_CASE("mirrored single screen gives column-reversed rasters") {
  json doc = tiny_doc();
  doc["ris"]["x"] = 0.0;
  const ScenarioFile s = parse_scenario(doc);
  const fs::path a = scratch("mirror_a"), b = scratch("mirror_b");
  const double len = s.layout.blocker_length;
  cmd_snapshot(s, {-7.0}, a, {});
  cmd_snapshot(s, {7.0 - len}, b, {});
  for (const char* file : {"snapshot_status.csv", "snapshot_rate.csv"}) {
    auto left = raster_cells(read_text_file(a / file));
    const auto right = raster_cells(read_text_file(b / file));
    REQUIRE(left.size() == right.size());
    for (auto& row : left) std::reverse(row.begin(), row.end());
    CAPTURE(file);
    CHECK(left == right);
  }
}

TEST_CASE("exit codes") {
  const fs::path dir = scratch("exit_codes");
  const fs::path good = write_scenario(dir, tiny_doc());
  CHECK(cli({"snapshot", "--scenario", good.string(), "--out", (dir / "ok").string()}) == kExitOk);
  CHECK(fs::exists(dir / "ok" / "snapshot_status.csv"));
  CHECK(fs::exists(dir / "ok" / "snapshot_rate.csv"));
  CHECK(fs::exists(dir / "ok" / "snapshot_summary.csv"));

  json bad = tiny_doc();
  bad["layout"]["colour"] = "red";
  const fs::path bad_dir = dir / "bad";
  fs::create_directories(bad_dir);
  CHECK(cli({"snapshot", "--scenario", write_scenario(bad_dir, bad).string()}) == kExitConfigError);
  CHECK(cli({"snapshot", "--scenario", (dir / "missing.json").string()}) == kExitConfigError);
  CHECK(cli({"snapshot", "--bogus-flag"}) == kExitConfigError);
  CHECK(cli({}) == kExitConfigError);
  CHECK(cli({"coverage", "--optimize", "sideways"}) == kExitConfigError);
  CHECK(cli({"snapshot", "--scenario", good.string(), "--blockers", "80"}) == kExitConfigError);
  CHECK(cli({"snapshot", "--scenario", good.string(), "--draws", "0"}) == kExitConfigError);

  // a regular file where the output directory should be
  write_text_file(dir / "blocked", "x");
  CHECK(cli({"snapshot", "--scenario", good.string(), "--out", (dir / "blocked").string()}) ==
        kExitRuntimeError);

#ifdef RISDEPLOY_CLI_PATH
  const std::string exe = RISDEPLOY_CLI_PATH;
  const auto status = [&](const std::string& args) {
    const int raw = std::system((exe + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  CHECK(status("--version") == 0);
  CHECK(status("snapshot --scenario " + good.string() + " --out " + (dir / "exe").string()) == 0);
  CHECK(status("snapshot --scenario " + (dir / "missing.json").string()) == 2);
  CHECK(status("snapshot --scenario " + good.string() + " --out " + (dir / "blocked").string()) == 3);
#endif
}

TEST_CASE("reruns are byte-identical at any thread count") {
  const fs::path dir = scratch("determinism");
  const fs::path scenario = write_scenario(dir, tiny_doc());
  const std::vector<std::vector<std::string>> commands{
      {"snapshot"}, {"sweep-x"}, {"optimize"}, {"cdf", "--optimize", "tilt"},
      {"coverage", "--optimize", "height-tilt"}};
  std::vector<std::string> files;
  for (const std::string threads : {"1", "1", "3"}) {
    const fs::path out = dir / ("run_" + std::to_string(files.size()));
    for (auto args : commands) {
      args.insert(args.end(), {"--scenario", scenario.string(), "--out", out.string(), "--threads", threads});
      REQUIRE(cli(args) == kExitOk);
    }
    std::string all;
    for (const char* f : {"snapshot_status.csv", "snapshot_rate.csv", "snapshot_summary.csv", "sweep_x.csv",
                          "optimize.csv", "optimize_trace.csv", "cdf_ris.csv", "cdf_no_ris.csv",
                          "coverage.csv"}) {
      REQUIRE(fs::exists(out / f));
      all += read_text_file(out / f);
    }
    files.push_back(all);
  }
  CHECK(files[0] == files[1]);
  CHECK(files[0] == files[2]);

  // a different seed changes the Monte Carlo outputs
  const fs::path other = dir / "other_seed";
  REQUIRE(cli({"coverage", "--scenario", scenario.string(), "--out", other.string(), "--seed", "10"}) == kExitOk);
  const std::string cov = read_text_file(other / "coverage.csv");
  CHECK(cov.find("# seed: 10") != std::string::npos);
  CHECK(cov != read_text_file(dir / "run_0" / "coverage.csv"));
}

TEST_CASE("output tables have the documented columns") {
  const fs::path dir = scratch("columns");
  const fs::path scenario = write_scenario(dir, tiny_doc());
  for (const char* cmd : {"sweep-x", "optimize", "cdf", "coverage"})
    REQUIRE(cli({cmd, "--scenario", scenario.string(), "--out", dir.string()}) == kExitOk);
  const auto first_row = [&](const char* f) {
    for (const std::string& line : split(read_text_file(dir / f), '\n'))
      if (!line.empty() && line[0] != '#') return line;
    return std::string();
  };
  CHECK(first_row("sweep_x.csv").rfind("x,mean,ci,", 0) == 0);
  CHECK(first_row("optimize.csv") == "h,best_tilt_deg,mean,ci");
  CHECK(first_row("cdf_ris.csv") == "rate,cdf");
  CHECK(first_row("coverage.csv").rfind("configuration,coverage_mean,coverage_ci", 0) == 0);
  const std::string cdf = read_text_file(dir / "cdf_ris.csv");
  CHECK(cdf.find("# median: ") != std::string::npos);
  // last CDF row reaches 1
  const auto lines = split(cdf, '\n');
  CHECK(lines[lines.size() - 2].substr(lines[lines.size() - 2].rfind(',') + 1) == "1");
}
