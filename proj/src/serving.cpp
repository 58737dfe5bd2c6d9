#include "risdeploy/serving.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "risdeploy/cascade.hpp"
#include "risdeploy/errors.hpp"

namespace risdeploy {

namespace {

std::size_t cell_count(double extent, double resolution) {
  return static_cast<std::size_t>(std::floor(extent / resolution + 1e-9));
}

}  // namespace

UserGrid UserGrid::over(const SceneLayout& layout) {
  UserGrid g;
  const double res = layout.grid_resolution;
  const std::size_t nx = cell_count(2.0 * layout.road_halfwidth, res);
  const std::size_t ny = cell_count(layout.ris_y, res);
  const double x_mid = static_cast<double>(nx) / 2.0;
  const double y_mid = static_cast<double>(ny) / 2.0;
  g.xs.reserve(nx);
  for (std::size_t k = 0; k < nx; ++k) g.xs.push_back((static_cast<double>(k) + 0.5 - x_mid) * res);
  g.ys.reserve(ny);
  for (std::size_t k = 0; k < ny; ++k) {
    g.ys.push_back(layout.ris_y / 2.0 + (static_cast<double>(k) + 0.5 - y_mid) * res);
  }
  return g;
}

ServingStatus classify_links(bool bs_clear, PathLoss pl_bs, bool ris_clear, PathLoss pl_ris,
                             double pl_threshold) {
  const bool bs_ok = bs_clear && pl_bs.within(pl_threshold);
  const bool ris_ok = ris_clear && pl_ris.within(pl_threshold);
  if (bs_ok && ris_ok) return ServingStatus::Both;
  if (ris_ok) return ServingStatus::RisOnly;
  if (bs_ok) return ServingStatus::BsOnly;
  return ServingStatus::Unserved;
}

ServingStatus classify(GroundPoint point, const SceneLayout& layout, const RisConfig& ris,
                       const ElementLattice& lattice, const BlockerRealization& realization) {
  const Vec3 bs = layout.bs_position();
  const Vec3 user = point.lifted();
  const bool bs_clear = !is_link_blocked(bs, user, realization);
  const PathLoss loss_bs = pl_bs(bs, user, layout);
  if (!layout.ris_present) {
    return classify_links(bs_clear, loss_bs, false, PathLoss::unservable(), layout.pl_threshold);
  }
  const bool ris_clear = !is_link_blocked(ris.center(layout), user, realization);
  const PathLoss loss_ris = pl_ris(bs, user, lattice, layout, ris.element_gain);
  return classify_links(bs_clear, loss_bs, ris_clear, loss_ris, layout.pl_threshold);
}

double rate_single(PathLoss pl, double rho) {
  if (pl.is_unservable()) return 0.0;
  return std::log2(1.0 + rho / pl.value());
}

double optimal_beta(double g_ris, double g_bs) {
  if (!(g_ris > 0.0) && !(g_bs > 0.0)) {
    throw GeometryError("power split undefined: both link gains are zero");
  }
  if (!(g_bs > 0.0)) return 1.0;
  if (!(g_ris > 0.0)) return 0.0;
  return std::clamp(0.5 * (1.0 + 1.0 / g_bs - 1.0 / g_ris), 0.0, 1.0);
}

double rate_both(PathLoss pl_ris, PathLoss pl_bs, double rho) {
  if (pl_ris.is_unservable() || pl_bs.is_unservable()) {
    throw std::logic_error("rate_both requires two finite path losses");
  }
  if (rho == 0.0) return 0.0;
  const double g_ris = rho / pl_ris.value();
  const double g_bs = rho / pl_bs.value();
  const double beta = optimal_beta(g_ris, g_bs);
  return std::log2(1.0 + g_ris * beta) + std::log2(1.0 + g_bs * (1.0 - beta));
}

double rate_for(ServingStatus status, const LinkBudget& links, double rho) {
  switch (status) {
    case ServingStatus::Both:
      return rate_both(links.pl_ris, links.pl_bs, rho);
    case ServingStatus::RisOnly:
      return rate_single(links.pl_ris, rho);
    case ServingStatus::BsOnly:
      return rate_single(links.pl_bs, rho);
    case ServingStatus::Unserved:
      return 0.0;
  }
  return 0.0;
}

LinkRaster compute_link_raster(const SceneLayout& layout, const RisConfig& ris,
                               const ElementLattice& lattice, const ExecOptions& exec) {
  LinkRaster r;
  r.grid = UserGrid::over(layout);
  const std::size_t n = r.grid.size();
  const Vec3 bs = layout.bs_position();
  r.pl_bs.resize(n);
  r.pl_ris.assign(n, PathLoss::unservable());
  for (std::size_t p = 0; p < n; ++p) r.pl_bs[p] = pl_bs(bs, r.grid.at(p).lifted(), layout);
  if (!layout.ris_present) return r;

  const CascadeTables tables = make_cascade_tables(lattice, bs);
  const double prefactor = cascade_prefactor(layout, ris.element_gain, ris.elem_a, ris.elem_b);
  parallel_for(n, exec.threads, [&](std::size_t p) {
    r.pl_ris[p] = cascade_path_loss(prefactor, cascade_amplitude(tables, r.grid.at(p), exec.kernel));
  });
  return r;
}

LinkRaster compute_link_raster(const SceneLayout& layout, const RisConfig& ris,
                               const ExecOptions& exec) {
  if (!layout.ris_present) return compute_link_raster(layout, ris, ElementLattice{}, exec);
  return compute_link_raster(layout, ris, build_lattice(ris, layout), exec);
}

ShadowSet compute_shadows(const UserGrid& grid, const Vec3& bs, const Vec3& ris_center,
                          const BlockerRealization& realization) {
  ShadowSet s;
  const std::size_t n = grid.size();
  for (std::size_t p = 0; p < n; ++p) {
    const Vec3 user = grid.at(p).lifted();
    std::uint8_t combo = 0;
    if (is_link_blocked(bs, user, realization)) combo |= kBsShadow;
    if (is_link_blocked(ris_center, user, realization)) combo |= kRisShadow;
    if (combo != 0) {
      s.points.push_back(static_cast<std::uint32_t>(p));
      s.combo.push_back(combo);
    }
  }
  return s;
}

FieldMap evaluate_field(const LinkRaster& links, const SceneLayout& layout,
                        const RisConfig& ris, const BlockerRealization& realization) {
  FieldMap f;
  f.grid = links.grid;
  f.pl_ris = links.pl_ris;
  f.pl_bs = links.pl_bs;
  const std::size_t n = f.grid.size();
  f.status.resize(n);
  f.rate.resize(n);
  const Vec3 bs = layout.bs_position();
  const Vec3 ris_center = ris.center(layout);
  for (std::size_t p = 0; p < n; ++p) {
    const Vec3 user = f.grid.at(p).lifted();
    const bool bs_clear = !is_link_blocked(bs, user, realization);
    const bool ris_clear = layout.ris_present && !is_link_blocked(ris_center, user, realization);
    f.status[p] = classify_links(bs_clear, f.pl_bs[p], ris_clear, f.pl_ris[p], layout.pl_threshold);
    f.rate[p] = rate_for(f.status[p], {f.pl_ris[p], f.pl_bs[p]}, layout.snr);
  }
  return f;
}

FieldMap evaluate_field(const SceneLayout& layout, const RisConfig& ris,
                        const ElementLattice& lattice, const BlockerRealization& realization,
                        const ExecOptions& exec) {
  return evaluate_field(compute_link_raster(layout, ris, lattice, exec), layout, ris, realization);
}

MetricsReport metrics(const FieldMap& field) {
  MetricsReport m;
  m.total_points = field.status.size();
  std::array<double, kStatusCount> sums{};
  double total = 0.0;
  for (std::size_t p = 0; p < m.total_points; ++p) {
    const std::size_t k = status_index(field.status[p]);
    ++m.region_counts[k];
    sums[k] += field.rate[p];
    total += field.rate[p];
  }
  if (m.total_points == 0) return m;
  const double n = static_cast<double>(m.total_points);
  m.coverage_ratio =
      1.0 - static_cast<double>(m.region_counts[status_index(ServingStatus::Unserved)]) / n;
  m.area_avg_rate = total / n;
  for (std::size_t k = 0; k < kStatusCount; ++k) {
    if (m.region_counts[k] > 0) m.per_region_avg[k] = sums[k] / static_cast<double>(m.region_counts[k]);
  }
  return m;
}

LinkRateMeans link_rate_means(const LinkRaster& links, double rho) {
  LinkRateMeans m;
  const std::size_t n = links.grid.size();
  if (n == 0) return m;
  for (std::size_t p = 0; p < n; ++p) {
    m.cascade += rate_single(links.pl_ris[p], rho);
    m.direct += rate_single(links.pl_bs[p], rho);
  }
  m.cascade /= static_cast<double>(n);
  m.direct /= static_cast<double>(n);
  return m;
}

OutcomeTable make_outcome_table(const LinkRaster& links, const SceneLayout& layout) {
  OutcomeTable t;
  const std::size_t n = links.grid.size();
  t.rate.resize(n);
  t.unserved.resize(n);
  for (std::size_t p = 0; p < n; ++p) {
    const LinkBudget lb{links.pl_ris[p], links.pl_bs[p]};
    for (std::uint8_t combo = 0; combo < 4; ++combo) {
      const bool bs_clear = (combo & kBsShadow) == 0;
      const bool ris_clear = layout.ris_present && (combo & kRisShadow) == 0;
      const ServingStatus s =
          classify_links(bs_clear, lb.pl_bs, ris_clear, lb.pl_ris, layout.pl_threshold);
      t.rate[p][combo] = rate_for(s, lb, layout.snr);
      t.unserved[p][combo] = s == ServingStatus::Unserved;
    }
    t.clear_rate_sum += t.rate[p][0];
    t.clear_unserved += t.unserved[p][0] ? 1 : 0;
  }
  return t;
}

DrawScore score_draw(const OutcomeTable& table, const ShadowSet& shadows) {
  double rate_sum = table.clear_rate_sum;
  long long unserved = static_cast<long long>(table.clear_unserved);
  for (std::size_t k = 0; k < shadows.points.size(); ++k) {
    const std::uint32_t p = shadows.points[k];
    const std::uint8_t c = shadows.combo[k];
    rate_sum += table.rate[p][c] - table.rate[p][0];
    unserved += static_cast<int>(table.unserved[p][c]) - static_cast<int>(table.unserved[p][0]);
  }
  const double n = static_cast<double>(table.rate.size());
  return {1.0 - static_cast<double>(unserved) / n, rate_sum / n};
}

}  // namespace risdeploy
