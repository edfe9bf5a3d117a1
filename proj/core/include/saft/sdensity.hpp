#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "saft/beurling.hpp"
#include "saft/expansion.hpp"
#include "saft/pair_model.hpp"
#include "saft/point_set.hpp"
#include "saft/schedule.hpp"

namespace saft {

struct SInterval {
  std::uint64_t count = 0;
  double value = 0.0;  // count / (b - a)^s
  double a = 0.0;
  double b = 0.0;
};

struct SDensityEntry {
  double threshold = 0.0;
  int level = 0;
  std::optional<SInterval> sup;  // absent when no interval reaches the threshold
};

struct SDensityEstimate {
  double s = 0.0;
  int level = 0;
  std::vector<SDensityEntry> per_threshold;
};

/// For each threshold r: the exact sup of mu([x_i, x_j]) / (x_j - x_i)^s over
/// support points with x_j - x_i >= r. One-dimensional sets only; an interval
/// with given contents is never beaten by a longer one, so point-bounded
/// intervals suffice.
SDensityEstimate upper_s_density_profile(const WeightedPointSet& pts, double s, const Schedule& thresholds,
                                         int level = 0);

/// mu([a, b]) / (b - a)^s for a single closed interval.
double interval_s_value(const WeightedPointSet& pts, double s, double a, double b);

/// Pairwise sums with multiplied weights, merged to canonical form.
WeightedPointSet discrete_convolve(const WeightedPointSet& a, const WeightedPointSet& b);

/// 1 / sup of the last present entry, or 0 with the divergence flag.
MeasureValue hausdorff_from_sdensity(const SDensityEstimate& profile);

/// Chaos-game draws from the self-similar measure sigma.
struct MeasureSample {
  int dim = 0;
  std::uint64_t seed = 0;
  std::size_t count = 0;
  std::size_t burn_in = 0;
  std::vector<double> coords;  // flat, dim per point

  std::span<const double> point(std::size_t i) const {
    return {coords.data() + i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
  }
};

/// x_{t+1} = B^{-1}(x_t + d_t) from x_0 = 0 with d_t uniform over D. The digit
/// index is floor(m * u) with u = (g >> 11) * 2^-53 and g the next output of
/// std::mt19937_64 seeded with `seed`; both are fixed by the standard, so the
/// stream is identical on every platform. The first `burn_in` iterates are
/// discarded.
MeasureSample sample_self_similar_measure(const SelfAffinePair& pair, std::size_t count, std::uint64_t seed,
                                          std::size_t burn_in);

struct RenormalizationCheck {
  double lhs = 0.0;        // empirical sigma(B^{-N} W)
  double rhs = 0.0;        // m^{-N} sum_{p in mu_N} empirical sigma(W - p)
  double std_error = 0.0;  // worst-case binomial bound for lhs - rhs
};

/// Empirical check of sigma(B^{-N} W) = m^{-N} (mu_N * sigma)(W).
RenormalizationCheck check_renormalization(const SelfAffinePair& pair, const AxisBox& box, int level,
                                           const MeasureSample& sample, std::uint64_t cap = kDefaultMassBudget);

}  // namespace saft
