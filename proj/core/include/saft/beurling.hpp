#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "saft/expansion.hpp"
#include "saft/pair_model.hpp"
#include "saft/point_set.hpp"
#include "saft/schedule.hpp"

namespace saft {

// Windows are closed cubes [a_i, a_i + N] per axis. A point on the boundary is
// inside when it is within kWindowTolerance * N of it.
inline constexpr double kWindowTolerance = 1e-12;

struct LowerEntry {
  std::uint64_t count = 0;
  double value = 0.0;
  Vector center;
  bool trusted = false;
};

struct DensityEntry {
  double window = 0.0;
  int level = 0;
  std::uint64_t sup_count = 0;  // sup_value * window^n
  double sup_value = 0.0;
  Vector argmax;  // center of a maximizing window
  std::optional<LowerEntry> inf;
};

struct DensityEstimate {
  int dim = 0;
  int level = 0;
  std::vector<DensityEntry> per_size;
};

/// Weighted count of `pts` in the closed cube with lower corner `corner` and
/// side `window`.
std::uint64_t count_in_window(const WeightedPointSet& pts, std::span<const double> corner, double window);

/// Exact sup over all cube placements of mu(I_N(z)) / N^n, for each N in the
/// schedule. 1-D uses a two-pointer scan, 2-D a sweep over point-anchored
/// windows with a max segment tree. Ties resolve to the lexicographically
/// smallest window center.
DensityEstimate upper_density_profile(const WeightedPointSet& pts, const Schedule& windows, int level = 0);

/// Upper profile plus, for each N, the infimum of mu(I_N(z)) / N^n over
/// windows meeting the bounding box of supp(pts).
///
/// With a `reference` (a deeper truncation of the same measure), the infimum
/// runs over windows whose count is unchanged at the reference level and the
/// entry is trusted; if no window is stable, or there is no reference, the
/// plain infimum is reported untrusted. The 2-D scan is quadratic-ish and
/// meant for a few thousand points.
DensityEstimate lower_density_profile(const WeightedPointSet& pts, const Schedule& windows,
                                      const WeightedPointSet* reference, int level = 0);

/// Fixed window, increasing level: sup_z mu_k(I_N(z)) / N^n for each k.
/// Divergence of D+ shows up here as unbounded growth.
DensityEstimate upper_density_level_sweep(const SelfAffinePair& pair, std::span<const int> levels, double window,
                                          std::uint64_t cap = kDefaultMassBudget);

/// The window sizes N_q = diam/2, N_q/2, ... (count of them, ascending), where
/// diam is the largest axis extent of supp(pts).
Schedule natural_schedule(const WeightedPointSet& pts, int count = 9);

/// Heuristic: the last three values strictly increase and the final value
/// exceeds ten times the first.
bool is_divergent(std::span<const double> values);

struct MeasureValue {
  double value = 0.0;
  bool divergent = false;
};

/// 1 / sup_value of the last entry, or 0 with the divergence flag.
MeasureValue lebesgue_from_density(const DensityEstimate& profile);

struct LebesgueReport {
  MeasureValue measure;
  DensityEstimate profile;  // fixed level over the schedule
  DensityEstimate sweep;    // fixed window (digit-set diameter) over levels
};

/// Joint truncation: the profile at `level` gives the value; a level sweep at
/// the digit-set scale decides divergence.
LebesgueReport lebesgue_measure(const SelfAffinePair& pair, int level, const Schedule& windows,
                                std::uint64_t cap = kDefaultMassBudget);

/// x -> Cx for every point, weights unchanged. Throws SingularMatrix.
WeightedPointSet rescale_points(const WeightedPointSet& pts, const Matrix& c);

}  // namespace saft
