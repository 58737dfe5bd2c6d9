#include "risdeploy/optimizer.hpp"

#include <algorithm>
#include <cmath>

#include "risdeploy/errors.hpp"

namespace risdeploy {

std::vector<double> tilt_grid(const RisConfig& ris, const SceneLayout& layout, double resolution) {
  if (!(resolution > 0.0)) throw ConfigError("tilt resolution must be positive");
  const double upper = max_feasible_tilt(ris, layout);
  std::vector<double> tilts;
  for (std::size_t k = 1;; ++k) {
    const double t = static_cast<double>(k) * resolution;
    if (!(t < upper)) break;
    tilts.push_back(t);
  }
  return tilts;
}

bool preferred(const Candidate& a, const Candidate& b, Metric metric) {
  const double ma = a.value(metric).mean;
  const double mb = b.value(metric).mean;
  if (ma != mb) return ma > mb;
  if (a.config.height != b.config.height) return a.config.height < b.config.height;
  if (a.config.tilt != b.config.tilt) return a.config.tilt < b.config.tilt;
  return std::abs(a.config.x) < std::abs(b.config.x);
}

Candidate evaluate_candidate(const SceneLayout& layout, const RisConfig& ris,
                             std::span<const ShadowSet> shadows, std::uint64_t seed,
                             const ExecOptions& exec) {
  const LinkRaster links = compute_link_raster(layout, ris, exec);
  const ExpectedMetrics em = expected_metrics(links, layout, shadows, seed);
  return {ris, em.coverage, em.rate};
}

Candidate evaluate_baseline(const SceneLayout& layout, const RisConfig& ris,
                            const MonteCarloSpec& mc, const ExecOptions& exec) {
  SceneLayout bare = layout;
  bare.ris_present = false;
  const ExpectedMetrics em = expected_metrics(bare, ris, mc, exec);
  return {ris, em.coverage, em.rate};
}

namespace {

void require_values(const std::vector<double>& v, const char* what) {
  if (v.empty()) throw ConfigError(std::string("search needs at least one ") + what);
}

}  // namespace

SearchResult optimize_height_tilt(const SearchSpec& spec, const SceneLayout& layout,
                                  const RisConfig& ris_template, double x_fixed,
                                  const ExecOptions& exec) {
  require_values(spec.h_values, "height");
  layout.validate();
  SearchResult result;
  result.metric = spec.metric;
  result.mode = "height-tilt grid";

  const DrawEnsemble ensemble(layout, spec.monte_carlo());
  const UserGrid grid = UserGrid::over(layout);
  const Vec3 bs = layout.bs_position();

  for (double h : spec.h_values) {
    RisConfig ris = ris_template;
    ris.x = x_fixed;
    ris.height = h;
    HeightOptimum row{h, false, std::nullopt};
    const std::vector<double> tilts = tilt_grid(ris, layout, spec.tilt_resolution);
    if (tilts.empty()) {
      row.skipped = true;
      result.per_height.push_back(row);
      continue;
    }
    const auto shadows = ensemble.shadows(grid, bs, ris.center(layout), exec);
    for (double tilt : tilts) {
      ris.tilt = tilt;
      Candidate c = evaluate_candidate(layout, ris, shadows, spec.seed, exec);
      if (!row.best || preferred(c, *row.best, spec.metric)) row.best = c;
      result.trace.push_back(std::move(c));
    }
    result.per_height.push_back(row);
  }

  const Candidate* best = nullptr;
  for (const Candidate& c : result.trace) {
    if (!best || preferred(c, *best, spec.metric)) best = &c;
  }
  if (!best) throw ConfigError("no feasible (height, tilt) pair on the search grid");
  result.best_config = best->config;
  result.best_value = best->value(spec.metric);
  return result;
}

SearchResult sweep_x(const SearchSpec& spec, const SceneLayout& layout,
                     const RisConfig& ris_template, const ExecOptions& exec) {
  require_values(spec.x_values, "x position");
  layout.validate();
  SearchResult result;
  result.metric = spec.metric;

  const MonteCarloSpec mc = spec.monte_carlo();
  const DrawEnsemble ensemble(layout, mc);
  const UserGrid grid = UserGrid::over(layout);
  const Vec3 bs = layout.bs_position();

  if (spec.sweep_mode == SweepMode::Fixed) {
    result.mode = "fixed height and tilt";
  } else {
    result.mode = "height and tilt optimized per x (nested search with " +
                  std::to_string(spec.nested_draws) + " draws)";
  }

  for (double x : spec.x_values) {
    RisConfig ris = ris_template;
    ris.x = x;
    if (spec.sweep_mode == SweepMode::OptimizedPlacement) {
      SearchSpec inner = spec;
      inner.n_draws = spec.nested_draws;
      SearchResult nested = optimize_height_tilt(inner, layout, ris_template, x, exec);
      ris = nested.best_config;
      result.nested.push_back(std::move(nested));
    }
    ris.validate(layout);
    const auto shadows = ensemble.shadows(grid, bs, ris.center(layout), exec);
    result.trace.push_back(evaluate_candidate(layout, ris, shadows, spec.seed, exec));
  }

  const Candidate* best = nullptr;
  for (const Candidate& c : result.trace) {
    if (!best || preferred(c, *best, spec.metric)) best = &c;
  }
  result.best_config = best->config;
  result.best_value = best->value(spec.metric);
  result.baseline = evaluate_baseline(layout, ris_template, mc, exec);
  return result;
}

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> samples)
    : sorted_(std::move(samples)) {
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalDistribution::quantile(double p) const {
  if (sorted_.empty()) throw GeometryError("quantile of an empty distribution");
  const double n = static_cast<double>(sorted_.size());
  const auto rank = static_cast<std::size_t>(std::ceil(std::clamp(p, 0.0, 1.0) * n));
  return sorted_[rank == 0 ? 0 : rank - 1];
}

double EmpiricalDistribution::median() const { return quantile(0.5); }

double EmpiricalDistribution::cdf(double r) const {
  if (sorted_.empty()) return 0.0;
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), r);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

std::vector<std::pair<double, double>> EmpiricalDistribution::steps() const {
  std::vector<std::pair<double, double>> out;
  const double n = static_cast<double>(sorted_.size());
  for (std::size_t i = 0; i < sorted_.size(); ++i) {
    if (i + 1 < sorted_.size() && sorted_[i + 1] == sorted_[i]) continue;
    out.emplace_back(sorted_[i], static_cast<double>(i + 1) / n);
  }
  return out;
}

EmpiricalDistribution rate_cdf(const SceneLayout& layout, const RisConfig& ris,
                               const MonteCarloSpec& mc, const ExecOptions& exec) {
  layout.validate();
  const LinkRaster links = compute_link_raster(layout, ris, exec);
  const OutcomeTable table = make_outcome_table(links, layout);
  const DrawEnsemble ensemble(layout, mc);
  const auto shadows =
      ensemble.shadows(links.grid, layout.bs_position(), ris.center(layout), exec);

  const std::size_t n = links.grid.size();
  std::vector<double> clear(n);
  for (std::size_t p = 0; p < n; ++p) clear[p] = table.rate[p][0];

  std::vector<double> pooled;
  pooled.reserve(n * shadows.size());
  std::vector<double> draw_rates;
  for (const ShadowSet& s : shadows) {
    draw_rates = clear;
    for (std::size_t k = 0; k < s.points.size(); ++k) {
      draw_rates[s.points[k]] = table.rate[s.points[k]][s.combo[k]];
    }
    pooled.insert(pooled.end(), draw_rates.begin(), draw_rates.end());
  }
  return EmpiricalDistribution(std::move(pooled));
}

}  // namespace risdeploy
