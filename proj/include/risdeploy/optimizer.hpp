#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "risdeploy/parallel.hpp"
#include "risdeploy/scene.hpp"
#include "risdeploy/serving.hpp"
#include "risdeploy/stochastic.hpp"

namespace risdeploy {

enum class Metric { CoverageRatio, AreaAvgRate };

enum class SweepMode {
  OptimizedPlacement,  // nested height/tilt search per x with nested_draws
  Fixed,               // (h, tilt) taken from the template at every x
};

struct SearchSpec {
  Metric metric = Metric::AreaAvgRate;
  std::vector<double> x_values;
  std::vector<double> h_values;
  double tilt_resolution = 0.017453292519943295;  // 1 degree
  std::size_t n_draws = 500;
  std::uint64_t seed = 1;
  double blocker_density = 1.0;
  SweepMode sweep_mode = SweepMode::OptimizedPlacement;
  std::size_t nested_draws = 100;

  MonteCarloSpec monte_carlo() const { return {blocker_density, n_draws, seed}; }
};

struct Candidate {
  RisConfig config;
  McEstimate coverage;
  McEstimate rate;

  const McEstimate& value(Metric m) const { return m == Metric::CoverageRatio ? coverage : rate; }
};

struct HeightOptimum {
  double height = 0.0;
  bool skipped = false;  // no feasible tilt on the grid
  std::optional<Candidate> best;
};

struct SearchResult {
  Metric metric = Metric::AreaAvgRate;
  std::string mode;
  RisConfig best_config;
  McEstimate best_value;
  // Every evaluated candidate, in grid order.
  std::vector<Candidate> trace;
  // optimize_height_tilt: optimum per height, in h_values order.
  std::vector<HeightOptimum> per_height;
  // sweep_x in OptimizedPlacement mode: the nested search behind each x.
  std::vector<SearchResult> nested;
  // No-RIS reference evaluated on the same blocker draws.
  std::optional<Candidate> baseline;
};

// Strictly positive multiples of `resolution` below max_feasible_tilt.
std::vector<double> tilt_grid(const RisConfig& ris, const SceneLayout& layout, double resolution);

// Ordering used to pick a search optimum: larger mean wins, then smaller
// height, smaller tilt, smaller |x|.
bool preferred(const Candidate& a, const Candidate& b, Metric metric);

// Evaluates one configuration on precomputed shadow sets.
Candidate evaluate_candidate(const SceneLayout& layout, const RisConfig& ris,
                             std::span<const ShadowSet> shadows, std::uint64_t seed,
                             const ExecOptions& exec = {});

Candidate evaluate_baseline(const SceneLayout& layout, const RisConfig& ris,
                            const MonteCarloSpec& mc, const ExecOptions& exec = {});

SearchResult optimize_height_tilt(const SearchSpec& spec, const SceneLayout& layout,
                                  const RisConfig& ris_template, double x_fixed,
                                  const ExecOptions& exec = {});

SearchResult sweep_x(const SearchSpec& spec, const SceneLayout& layout,
                     const RisConfig& ris_template, const ExecOptions& exec = {});

// Pooled per-user rates over all grid points and draws.
class EmpiricalDistribution {
 public:
  EmpiricalDistribution() = default;
  explicit EmpiricalDistribution(std::vector<double> samples);

  std::size_t size() const { return sorted_.size(); }
  const std::vector<double>& samples() const { return sorted_; }

  // Smallest sample r with F(r) >= p, p in (0, 1].
  double quantile(double p) const;
  double median() const;
  // Fraction of samples <= r.
  double cdf(double r) const;
  // (value, F(value)) at every distinct sample value, ascending.
  std::vector<std::pair<double, double>> steps() const;

 private:
  std::vector<double> sorted_;
};

EmpiricalDistribution rate_cdf(const SceneLayout& layout, const RisConfig& ris,
                               const MonteCarloSpec& mc, const ExecOptions& exec = {});

}  // namespace risdeploy
