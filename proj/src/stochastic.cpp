#include "risdeploy/stochastic.hpp"

#include <cmath>

#include <fmt/format.h>

#include "risdeploy/errors.hpp"

namespace risdeploy {

std::uint64_t sample_poisson(double lambda, RngStream& rng) {
  if (!(lambda >= 0.0)) throw ConfigError("blocker density must be non-negative");
  const double u = rng.next_uniform();
  if (lambda == 0.0) return 0;
  double pk = std::exp(-lambda);
  double cdf = pk;
  std::uint64_t k = 0;
  // Cap far beyond any mass representable in double.
  const std::uint64_t cap = static_cast<std::uint64_t>(lambda + 40.0 * std::sqrt(lambda) + 100.0);
  while (u >= cdf && k < cap) {
    ++k;
    pk *= lambda / static_cast<double>(k);
    cdf += pk;
  }
  return k;
}

BlockerRealization sample_blockers(double lambda_b, const SceneLayout& layout, RngStream& rng) {
  const double lo = -layout.road_halfwidth;
  const double hi = layout.road_halfwidth - layout.blocker_length;
  if (!(hi > lo)) {
    throw ConfigError(fmt::format("lane of length {} m cannot hold a {} m blocker",
                                  2.0 * layout.road_halfwidth, layout.blocker_length));
  }
  const std::uint64_t m = sample_poisson(lambda_b, rng) + 1;
  std::vector<double> xs;
  xs.reserve(m);
  for (std::uint64_t k = 0; k < m; ++k) xs.push_back(lo + (hi - lo) * rng.next_uniform());
  return make_realization(layout, xs);
}

BlockerRealization draw_realization(double lambda_b, const SceneLayout& layout,
                                    std::uint64_t seed, std::uint64_t index) {
  RngStream rng(seed, index);
  return sample_blockers(lambda_b, layout, rng);
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

McEstimate summarize(std::span<const double> samples, std::uint64_t seed) {
  McEstimate e;
  e.n_draws = samples.size();
  e.seed = seed;
  if (samples.empty()) return e;
  const double n = static_cast<double>(samples.size());
  e.mean = pairwise_sum(samples) / n;
  if (samples.size() > 1) {
    std::vector<double> sq(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const double d = samples[i] - e.mean;
      sq[i] = d * d;
    }
    const double sd = std::sqrt(pairwise_sum(sq) / (n - 1.0));
    e.half_width_ci95 = 1.96 * sd / std::sqrt(n);
  }
  return e;
}

DrawEnsemble::DrawEnsemble(const SceneLayout& layout, const MonteCarloSpec& spec) : spec_(spec) {
  if (spec.n_draws < 1) throw ConfigError("n_draws must be at least 1");
  realizations_.reserve(spec.n_draws);
  for (std::size_t i = 0; i < spec.n_draws; ++i) {
    realizations_.push_back(draw_realization(spec.blocker_density, layout, spec.seed, i));
  }
}

std::vector<ShadowSet> DrawEnsemble::shadows(const UserGrid& grid, const Vec3& bs,
                                             const Vec3& ris_center,
                                             const ExecOptions& exec) const {
  std::vector<ShadowSet> out(realizations_.size());
  parallel_for(out.size(), exec.threads, [&](std::size_t i) {
    out[i] = compute_shadows(grid, bs, ris_center, realizations_[i]);
  });
  return out;
}

ExpectedMetrics expected_metrics(const LinkRaster& links, const SceneLayout& layout,
                                 std::span<const ShadowSet> shadows, std::uint64_t seed) {
  const OutcomeTable table = make_outcome_table(links, layout);
  ExpectedMetrics em;
  em.draws.reserve(shadows.size());
  std::vector<double> cov, rate;
  cov.reserve(shadows.size());
  rate.reserve(shadows.size());
  for (const ShadowSet& s : shadows) {
    const DrawScore d = score_draw(table, s);
    em.draws.push_back(d);
    cov.push_back(d.coverage);
    rate.push_back(d.rate);
  }
  em.coverage = summarize(cov, seed);
  em.rate = summarize(rate, seed);
  return em;
}

ExpectedMetrics expected_metrics(const SceneLayout& layout, const RisConfig& ris,
                                 const MonteCarloSpec& spec, const ExecOptions& exec) {
  layout.validate();
  const LinkRaster links = compute_link_raster(layout, ris, exec);
  const DrawEnsemble ensemble(layout, spec);
  const auto shadows =
      ensemble.shadows(links.grid, layout.bs_position(), ris.center(layout), exec);
  return expected_metrics(links, layout, shadows, spec.seed);
}

}  // namespace risdeploy
