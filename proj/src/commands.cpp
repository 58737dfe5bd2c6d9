#include "risdeploy/commands.hpp"

#include <cstdio>
#include <iostream>
#include <map>
#include <optional>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "risdeploy/errors.hpp"
#include "risdeploy/optimizer.hpp"
#include "risdeploy/output.hpp"
#include "risdeploy/serving.hpp"
#include "risdeploy/stochastic.hpp"

namespace risdeploy {

namespace fs = std::filesystem;

namespace {

std::string region_avg(const MetricsReport& m, ServingStatus s) {
  const auto& v = m.per_region_avg[status_index(s)];
  return v ? format_value(*v) : std::string("nan");
}

std::string deg(double rad) { return format_value(rad_to_deg(rad)); }

}  // namespace

void cmd_snapshot(const ScenarioFile& scenario, const std::vector<double>& blocker_x,
                  const fs::path& out_dir, const ExecOptions& exec) {
  const SceneLayout& layout = scenario.layout;
  if (blocker_x.empty()) throw ConfigError("snapshot needs at least one blocker");
  const double lo = -layout.road_halfwidth;
  const double hi = layout.road_halfwidth - layout.blocker_length;
  for (double x : blocker_x) {
    if (!(x >= lo && x <= hi)) {
      throw ConfigError(fmt::format("blocker x = {} outside lane support [{}, {}]", x, lo, hi));
    }
  }

  const BlockerRealization realization = make_realization(layout, blocker_x);
  const LinkRaster links = compute_link_raster(layout, scenario.ris, exec);
  const FieldMap field = evaluate_field(links, layout, scenario.ris, realization);
  const MetricsReport m = metrics(field);
  const LinkRateMeans link_means = link_rate_means(links, layout.snr);

  std::string blockers;
  for (double x : blocker_x) blockers += (blockers.empty() ? "" : " ") + format_value(x);
  const std::vector<std::pair<std::string, std::string>> extra{
      {"blockers_x", blockers},
      {"status_codes", "0=Unserved 1=BsOnly 2=RisOnly 3=Both"}};

  write_text_file(out_dir / "snapshot_status.csv",
                  output_header("snapshot status", scenario, extra) + status_raster_csv(field));
  write_text_file(out_dir / "snapshot_rate.csv",
                  output_header("snapshot rate_bps_hz", scenario, extra) + rate_raster_csv(field));

  std::string summary = output_header("snapshot summary", scenario, extra);
  summary += "quantity,value\n";
  summary += "grid_points," + std::to_string(m.total_points) + "\n";
  summary += "coverage_ratio," + format_value(m.coverage_ratio) + "\n";
  summary += "area_avg_rate," + format_value(m.area_avg_rate) + "\n";
  summary += "cascade_link_area_avg_rate," + format_value(link_means.cascade) + "\n";
  summary += "direct_link_area_avg_rate," + format_value(link_means.direct) + "\n";
  for (ServingStatus s : {ServingStatus::Unserved, ServingStatus::BsOnly, ServingStatus::RisOnly,
                          ServingStatus::Both}) {
    const char* name = s == ServingStatus::Unserved ? "unserved"
                       : s == ServingStatus::BsOnly ? "bs_only"
                       : s == ServingStatus::RisOnly ? "ris_only"
                                                     : "both";
    summary += fmt::format("{}_points,{}\n", name, m.region_counts[status_index(s)]);
    summary += fmt::format("{}_avg_rate,{}\n", name, region_avg(m, s));
  }
  const RisConfig& r = scenario.ris;
  summary += "fraunhofer_distance_m," +
             format_value(fraunhofer_distance(static_cast<double>(r.element_count()), r.elem_a,
                                              r.elem_b, layout.wavelength)) +
             "\n";
  write_text_file(out_dir / "snapshot_summary.csv", summary);
}

void cmd_sweep_x(const ScenarioFile& scenario, const fs::path& out_dir, const ExecOptions& exec) {
  const SearchSpec spec = scenario.resolved_search();
  const SearchResult res = sweep_x(spec, scenario.layout, scenario.ris, exec);

  std::string out = output_header("sweep-x", scenario, {{"mode", res.mode}});
  out += "x,mean,ci,coverage_mean,coverage_ci,rate_mean,rate_ci,height,tilt_deg,"
         "baseline_mean,baseline_ci\n";
  const McEstimate& base = res.baseline->value(spec.metric);
  for (const Candidate& c : res.trace) {
    const McEstimate& v = c.value(spec.metric);
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n", format_value(c.config.x),
                       format_value(v.mean), format_value(v.half_width_ci95),
                       format_value(c.coverage.mean), format_value(c.coverage.half_width_ci95),
                       format_value(c.rate.mean), format_value(c.rate.half_width_ci95),
                       format_value(c.config.height), deg(c.config.tilt), format_value(base.mean),
                       format_value(base.half_width_ci95));
  }
  write_text_file(out_dir / "sweep_x.csv", out);
}

void cmd_optimize(const ScenarioFile& scenario, const fs::path& out_dir, const ExecOptions& exec) {
  const SearchSpec spec = scenario.resolved_search();
  const SearchResult res =
      optimize_height_tilt(spec, scenario.layout, scenario.ris, scenario.ris.x, exec);

  std::vector<std::pair<std::string, std::string>> extra{
      {"best", fmt::format("height={} tilt_deg={} mean={} ci={}",
                           format_value(res.best_config.height), deg(res.best_config.tilt),
                           format_value(res.best_value.mean),
                           format_value(res.best_value.half_width_ci95))}};
  for (const HeightOptimum& h : res.per_height) {
    if (h.skipped) extra.emplace_back("skipped_height", format_value(h.height) + " (no feasible tilt)");
  }

  std::string table = output_header("optimize", scenario, extra);
  table += "h,best_tilt_deg,mean,ci\n";
  for (const HeightOptimum& h : res.per_height) {
    if (h.skipped) continue;
    const McEstimate& v = h.best->value(spec.metric);
    table += fmt::format("{},{},{},{}\n", format_value(h.height), deg(h.best->config.tilt),
                         format_value(v.mean), format_value(v.half_width_ci95));
  }
  write_text_file(out_dir / "optimize.csv", table);

  std::string trace = output_header("optimize trace", scenario);
  trace += "h,tilt_deg,coverage_mean,coverage_ci,rate_mean,rate_ci\n";
  for (const Candidate& c : res.trace) {
    trace += fmt::format("{},{},{},{},{},{}\n", format_value(c.config.height), deg(c.config.tilt),
                         format_value(c.coverage.mean), format_value(c.coverage.half_width_ci95),
                         format_value(c.rate.mean), format_value(c.rate.half_width_ci95));
  }
  write_text_file(out_dir / "optimize_trace.csv", trace);
}

RisConfig resolve_placement(const ScenarioFile& scenario, PlacementMode placement,
                            const ExecOptions& exec) {
  if (placement == PlacementMode::AsConfigured) return scenario.ris;
  SearchSpec spec = scenario.resolved_search();
  spec.n_draws = spec.nested_draws;
  if (placement == PlacementMode::Tilt) spec.h_values = {scenario.ris.height};
  return optimize_height_tilt(spec, scenario.layout, scenario.ris, scenario.ris.x, exec)
      .best_config;
}

namespace {

std::string placement_note(const RisConfig& r) {
  return fmt::format("x={} height={} tilt_deg={}", format_value(r.x), format_value(r.height),
                     deg(r.tilt));
}

std::string cdf_table(const EmpiricalDistribution& d) {
  std::string out = "rate,cdf\n";
  for (const auto& [rate, f] : d.steps()) out += format_value(rate) + "," + format_value(f) + "\n";
  return out;
}

}  // namespace

void cmd_cdf(const ScenarioFile& scenario, PlacementMode placement, const fs::path& out_dir,
             const ExecOptions& exec) {
  const RisConfig ris = resolve_placement(scenario, placement, exec);
  const MonteCarloSpec mc = scenario.monte_carlo();

  const EmpiricalDistribution with_ris = rate_cdf(scenario.layout, ris, mc, exec);
  SceneLayout bare = scenario.layout;
  bare.ris_present = false;
  const EmpiricalDistribution without = rate_cdf(bare, ris, mc, exec);

  write_text_file(out_dir / "cdf_ris.csv",
                  output_header("cdf with-ris", scenario,
                                {{"placement", placement_note(ris)},
                                 {"median", format_value(with_ris.median())}}) +
                      cdf_table(with_ris));
  write_text_file(out_dir / "cdf_no_ris.csv",
                  output_header("cdf without-ris", scenario,
                                {{"median", format_value(without.median())}}) +
                      cdf_table(without));
}

void cmd_coverage(const ScenarioFile& scenario, PlacementMode placement, const fs::path& out_dir,
                  const ExecOptions& exec) {
  const RisConfig ris = resolve_placement(scenario, placement, exec);
  const MonteCarloSpec mc = scenario.monte_carlo();
  const ExpectedMetrics with_ris = expected_metrics(scenario.layout, ris, mc, exec);
  const Candidate without = evaluate_baseline(scenario.layout, ris, mc, exec);

  std::string out =
      output_header("coverage", scenario, {{"placement", placement_note(ris)}});
  out += "configuration,coverage_mean,coverage_ci,rate_mean,rate_ci\n";
  out += fmt::format("ris,{},{},{},{}\n", format_value(with_ris.coverage.mean),
                     format_value(with_ris.coverage.half_width_ci95),
                     format_value(with_ris.rate.mean), format_value(with_ris.rate.half_width_ci95));
  out += fmt::format("no_ris,{},{},{},{}\n", format_value(without.coverage.mean),
                     format_value(without.coverage.half_width_ci95),
                     format_value(without.rate.mean), format_value(without.rate.half_width_ci95));
  write_text_file(out_dir / "coverage.csv", out);
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"RIS deployment simulator for mmWave street cells"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(tool_version()));

  struct Common {
    std::string scenario;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> draws;
    std::optional<unsigned> threads;
  } common;
  std::vector<double> blockers;
  std::string placement = "none";

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--scenario", common.scenario, "Scenario JSON (defaults when omitted)");
    sub->add_option("--out", common.out, "Output directory (overrides run.out)");
    sub->add_option("--seed", common.seed, "Monte Carlo seed (overrides run.seed)");
    sub->add_option("--draws", common.draws, "Monte Carlo draws (overrides run.draws)");
    sub->add_option("--threads", common.threads,
                    "Worker threads (default: RISDEPLOY_THREADS or hardware concurrency)");
  };
  const std::map<std::string, PlacementMode> placements{{"none", PlacementMode::AsConfigured},
                                                        {"tilt", PlacementMode::Tilt},
                                                        {"height-tilt", PlacementMode::HeightTilt}};

  CLI::App* snapshot = app.add_subcommand("snapshot", "Serving-status and rate rasters for fixed blockers");
  add_common(snapshot);
  snapshot->add_option("--blockers", blockers, "Blocker x positions (default: blockers.snapshot_x)")
      ->delimiter(',');
  CLI::App* sweep = app.add_subcommand("sweep-x", "Expected metric versus RIS x position");
  add_common(sweep);
  CLI::App* optimize = app.add_subcommand("optimize", "Joint height and tilt grid search");
  add_common(optimize);
  CLI::App* cdf = app.add_subcommand("cdf", "Pooled user-rate distribution with and without RIS");
  add_common(cdf);
  cdf->add_option("--optimize", placement, "Placement before evaluation: none | tilt | height-tilt")
      ->check(CLI::IsMember({"none", "tilt", "height-tilt"}));
  CLI::App* coverage = app.add_subcommand("coverage", "Expected coverage and rate with and without RIS");
  add_common(coverage);
  coverage->add_option("--optimize", placement, "Placement before evaluation: none | tilt | height-tilt")
      ->check(CLI::IsMember({"none", "tilt", "height-tilt"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfigError;
  }

  try {
    ScenarioFile scenario =
        common.scenario.empty() ? default_scenario() : load_scenario(common.scenario);
    if (common.seed) scenario.run.seed = *common.seed;
    if (common.draws) scenario.run.n_draws = *common.draws;
    if (common.threads) scenario.run.threads = *common.threads;
    if (!common.out.empty()) scenario.run.out_dir = common.out;
    if (scenario.run.n_draws < 1) throw ConfigError("--draws must be at least 1");

    ExecOptions exec;
    exec.threads = scenario.run.threads;
    const fs::path out = scenario.run.out_dir;

    if (*snapshot) {
      cmd_snapshot(scenario, blockers.empty() ? scenario.snapshot_blockers : blockers, out, exec);
    } else if (*sweep) {
      cmd_sweep_x(scenario, out, exec);
    } else if (*optimize) {
      cmd_optimize(scenario, out, exec);
    } else if (*cdf) {
      cmd_cdf(scenario, placements.at(placement), out, exec);
    } else if (*coverage) {
      cmd_coverage(scenario, placements.at(placement), out, exec);
    }
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntimeError;
  }
  return kExitOk;
}

}  // namespace risdeploy
