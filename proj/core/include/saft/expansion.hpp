#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>

#include "saft/pair_model.hpp"
#include "saft/point_set.hpp"

namespace saft {

/// Default budget on total mass m^k for any enumeration.
inline constexpr std::uint64_t kDefaultMassBudget = std::uint64_t{1} << 24;

/// m^k, throwing BudgetExceeded when it exceeds `cap`.
std::uint64_t checked_mass(std::size_t m, int k, std::uint64_t cap);

/// The truncated expansion measure mu_k: one unit of mass at every sum
/// d_0 + B d_1 + ... + B^{k-1} d_{k-1}, coincident sums merged. Level 0 is the
/// Dirac mass at the origin.
WeightedPointSet expand_level(const SelfAffinePair& pair, int k, std::uint64_t cap = kDefaultMassBudget);

struct ExpansionReport {
  int level = 0;
  std::size_t distinct_count = 0;
  bool has_collision = false;
  std::uint64_t max_multiplicity = 0;
  double min_separation = std::numeric_limits<double>::infinity();
};

ExpansionReport analyze_expansion(const WeightedPointSet& pts, std::size_t m, int k);

/// Smallest Euclidean distance between distinct points; +inf below two points.
/// Sorted sweep in 1-D, grid buckets otherwise.
double min_separation(const WeightedPointSet& pts);

/// Index of the first point (canonical order) carrying weight >= 2.
std::optional<std::size_t> first_collision(const WeightedPointSet& pts);

struct CollisionWitness {
  Vector point;            // z_M = sum_{j<M} B^{kj} a
  int level = 0;           // k, the level at which `a` collides
  int repetitions = 0;     // M
  std::uint64_t lower_bound = 0;  // 2^M
  bool verified = false;   // mu_{Mk}({z_M}) >= 2^M checked by enumeration
  std::uint64_t observed_multiplicity = 0;
};

/// Amplifies a collision at level k into a point of mu_{Mk} with at least 2^M
/// expansions. Throws NotACollision when `a` has weight < 2 in mu_k. The
/// verification step is skipped (verified = false) when m^{Mk} exceeds `cap`.
CollisionWitness collision_witness(const SelfAffinePair& pair, std::span<const double> a, int k, int repetitions,
                                   std::uint64_t cap = kDefaultMassBudget);

}  // namespace saft
