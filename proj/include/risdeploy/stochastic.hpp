#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "risdeploy/parallel.hpp"
#include "risdeploy/rng.hpp"
#include "risdeploy/scene.hpp"
#include "risdeploy/serving.hpp"

namespace risdeploy {

struct MonteCarloSpec {
  double blocker_density = 1.0;  // lambda_B
  std::size_t n_draws = 500;
  std::uint64_t seed = 1;
};

struct McEstimate {
  double mean = 0.0;
  double half_width_ci95 = 0.0;  // 1.96 * sample stddev / sqrt(n)
  std::size_t n_draws = 0;
  std::uint64_t seed = 0;
};

// Poisson variate by sequential inversion of one uniform.
std::uint64_t sample_poisson(double lambda, RngStream& rng);

// M = 1 + Poisson(lambda_B) screens with left edges uniform on [-R, R - L].
BlockerRealization sample_blockers(double lambda_b, const SceneLayout& layout, RngStream& rng);

// Realization of draw `index`, from its own substream of `seed`.
BlockerRealization draw_realization(double lambda_b, const SceneLayout& layout,
                                    std::uint64_t seed, std::uint64_t index);

// Deterministic pairwise summation.
double pairwise_sum(std::span<const double> values);

McEstimate summarize(std::span<const double> samples, std::uint64_t seed);

// The blocker draws shared by every candidate in a search (common random
// numbers): realization i depends only on (seed, i, lambda_B, layout).
class DrawEnsemble {
 public:
  DrawEnsemble(const SceneLayout& layout, const MonteCarloSpec& spec);

  std::size_t size() const { return realizations_.size(); }
  const BlockerRealization& realization(std::size_t i) const { return realizations_[i]; }
  const MonteCarloSpec& spec() const { return spec_; }

  // Shadow sets of every draw for a RIS mounted at `ris_center`.
  std::vector<ShadowSet> shadows(const UserGrid& grid, const Vec3& bs, const Vec3& ris_center,
                                 const ExecOptions& exec = {}) const;

 private:
  MonteCarloSpec spec_;
  std::vector<BlockerRealization> realizations_;
};

struct ExpectedMetrics {
  McEstimate coverage;
  McEstimate rate;
  std::vector<DrawScore> draws;
};

// Scores one precomputed raster against shadow sets, one per draw.
ExpectedMetrics expected_metrics(const LinkRaster& links, const SceneLayout& layout,
                                 std::span<const ShadowSet> shadows, std::uint64_t seed);

ExpectedMetrics expected_metrics(const SceneLayout& layout, const RisConfig& ris,
                                 const MonteCarloSpec& spec, const ExecOptions& exec = {});

}  // namespace risdeploy
