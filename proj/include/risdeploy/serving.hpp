#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "risdeploy/channel.hpp"
#include "risdeploy/parallel.hpp"
#include "risdeploy/scene.hpp"

namespace risdeploy {

// Integer codes are the raster encoding used in output files.
enum class ServingStatus : std::uint8_t { Unserved = 0, BsOnly = 1, RisOnly = 2, Both = 3 };

inline constexpr std::size_t kStatusCount = 4;

constexpr std::size_t status_index(ServingStatus s) { return static_cast<std::size_t>(s); }

// Cell-centered user lattice over [-R, R] x (0, y_RIS), row-major in y.
// Columns are placed symmetrically about x = 0.
struct UserGrid {
  std::vector<double> xs;
  std::vector<double> ys;

  static UserGrid over(const SceneLayout& layout);

  std::size_t size() const { return xs.size() * ys.size(); }
  GroundPoint at(std::size_t index) const {
    return {xs[index % xs.size()], ys[index / xs.size()]};
  }
};

ServingStatus classify_links(bool bs_clear, PathLoss pl_bs, bool ris_clear, PathLoss pl_ris,
                             double pl_threshold);

// Status of one user under one blocker realization. Uses the element-wise
// reference path loss; rasters go through evaluate_field.
ServingStatus classify(GroundPoint point, const SceneLayout& layout, const RisConfig& ris,
                       const ElementLattice& lattice, const BlockerRealization& realization);

// log2(1 + rho / pl); zero for the unservable sentinel.
double rate_single(PathLoss pl, double rho);

// Water-filling split of power onto the cascade link, maximizing
// log2(1 + g_ris b) + log2(1 + g_bs (1 - b)). Throws GeometryError when
// both gains vanish.
double optimal_beta(double g_ris, double g_bs);

// Requires both path losses to be finite.
double rate_both(PathLoss pl_ris, PathLoss pl_bs, double rho);

double rate_for(ServingStatus status, const LinkBudget& links, double rho);

// Realization-independent path losses for one RIS configuration.
struct LinkRaster {
  UserGrid grid;
  std::vector<PathLoss> pl_ris;
  std::vector<PathLoss> pl_bs;
};

LinkRaster compute_link_raster(const SceneLayout& layout, const RisConfig& ris,
                               const ElementLattice& lattice, const ExecOptions& exec = {});

// Same, building the lattice from the configuration.
LinkRaster compute_link_raster(const SceneLayout& layout, const RisConfig& ris,
                               const ExecOptions& exec = {});

// Grid points whose BS or RIS link is shadowed in one realization, with
// the shadow combination encoded as 2 * bs_blocked + ris_blocked.
struct ShadowSet {
  std::vector<std::uint32_t> points;
  std::vector<std::uint8_t> combo;
};

inline constexpr std::uint8_t kBsShadow = 2;
inline constexpr std::uint8_t kRisShadow = 1;

ShadowSet compute_shadows(const UserGrid& grid, const Vec3& bs, const Vec3& ris_center,
                          const BlockerRealization& realization);

struct FieldMap {
  UserGrid grid;
  std::vector<PathLoss> pl_ris;
  std::vector<PathLoss> pl_bs;
  std::vector<ServingStatus> status;
  std::vector<double> rate;
};

FieldMap evaluate_field(const LinkRaster& links, const SceneLayout& layout,
                        const RisConfig& ris, const BlockerRealization& realization);

FieldMap evaluate_field(const SceneLayout& layout, const RisConfig& ris,
                        const ElementLattice& lattice, const BlockerRealization& realization,
                        const ExecOptions& exec = {});

struct MetricsReport {
  double coverage_ratio = 0.0;
  double area_avg_rate = 0.0;
  std::array<std::optional<double>, kStatusCount> per_region_avg{};
  std::array<std::size_t, kStatusCount> region_counts{};
  std::size_t total_points = 0;
};

MetricsReport metrics(const FieldMap& field);

// Area averages of each link taken alone, ignoring blockage and the
// threshold: mean of rate_single(pl_ris) and of rate_single(pl_bs).
struct LinkRateMeans {
  double cascade = 0.0;
  double direct = 0.0;
};

LinkRateMeans link_rate_means(const LinkRaster& links, double rho);

// Per-point rate and outage for each of the four shadow combinations; lets
// Monte Carlo loops score a realization from its ShadowSet alone.
struct OutcomeTable {
  std::vector<std::array<double, 4>> rate;
  std::vector<std::array<bool, 4>> unserved;
  double clear_rate_sum = 0.0;       // sum of rate[p][0]
  std::size_t clear_unserved = 0;    // count of unserved[p][0]
};

OutcomeTable make_outcome_table(const LinkRaster& links, const SceneLayout& layout);

// Coverage ratio and area-averaged rate of one realization.
struct DrawScore {
  double coverage = 0.0;
  double rate = 0.0;
};

DrawScore score_draw(const OutcomeTable& table, const ShadowSet& shadows);

}  // namespace risdeploy
