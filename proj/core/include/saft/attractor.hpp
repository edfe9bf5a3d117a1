#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "saft/beurling.hpp"
#include "saft/expansion.hpp"
#include "saft/pair_model.hpp"

namespace saft {

/// R with K inside the infinity-norm ball of radius R:
/// max_d |d| * (sum_{r=1..p} |M^r|) / (1 - |M^p|), M = B^{-1}, p the certified power.
double invariant_radius(const SelfAffinePair& pair);

/// A box containing K: the sum of the bounding boxes of B^{-j} D over j >= 1,
/// with the truncated tail covered by a ball.
AxisBox attractor_bounds(const SelfAffinePair& pair);

struct RasterGrid {
  int dim = 0;
  int resolution = 0;  // cells per axis
  Vector lo;
  Vector hi;
  Vector cell_size;
  double cell_volume = 0.0;
  std::vector<std::uint8_t> cells;  // 1-D: [i]; 2-D: [j * resolution + i], j along y

  bool occupied(int i) const { return cells[static_cast<std::size_t>(i)] != 0; }
  bool occupied(int i, int j) const { return cells[static_cast<std::size_t>(j) * static_cast<std::size_t>(resolution) + static_cast<std::size_t>(i)] != 0; }
  std::size_t occupied_count() const;
};

struct LebesgueEstimate {
  double outer = 0.0;
  int iterations = 0;
  int resolution = 0;
  bool converged = false;
  std::vector<double> history;  // outer volume before the first and after every iteration
};

struct RasterResult {
  RasterGrid grid;
  LebesgueEstimate estimate;
};

/// Outer approximation of K: start from the full bounding box and apply the
/// Hutchinson operator on cells until nothing changes. A cell c survives when
/// some B c - d, taken as its bounding box dilated by one cell, meets an
/// occupied cell; K stays inside the occupied set at every step.
RasterResult raster_attractor(const SelfAffinePair& pair, int resolution, int max_iters);

/// Plain PBM (P1), top row = largest y. Comment lines are written after the
/// magic number, each prefixed with "# ".
void write_pbm(const RasterGrid& grid, std::ostream& out, const std::vector<std::string>& comments = {});

/// 1-D grids: "cell_index,occupied" rows.
void write_raster_csv(const RasterGrid& grid, std::ostream& out);

enum class OriginClass { Interior, Boundary, Inconclusive };

const char* to_string(OriginClass c) noexcept;

inline constexpr double kOriginTolerance = 0.10;

struct OriginReport {
  OriginClass verdict = OriginClass::Inconclusive;
  double target = 0.0;        // 1 / |K|
  double lower_value = 0.0;   // trusted lower density at the largest trusted window
  double upper_value = 0.0;   // upper density at the largest window
  double window = 0.0;
  int level = 0;
};

/// interior: trusted lower density and upper density both within 10% of
/// 1/|K|. boundary: trusted lower density at most 10% of 1/|K|. Otherwise
/// inconclusive, including when no lower entry is trusted. Throws
/// NotATileCandidate, or NoTrustedLowerEntry when `lower` has no lower entries.
OriginReport classify_origin(const SelfAffinePair& pair, const DensityEstimate& upper, const DensityEstimate& lower,
                             double lebesgue);

enum class OscVerdict { ConsistentWithOsc, OscFails, Undetermined };

const char* to_string(OscVerdict v) noexcept;

struct CollisionSite {
  int level = 0;
  Vector point;
  std::uint64_t multiplicity = 0;
};

struct OscReport {
  int max_level = 0;
  int collision_free_up_to = 0;
  std::optional<CollisionSite> collision;
  std::optional<CollisionWitness> witness;
  std::vector<ExpansionReport> levels;
  std::vector<double> density_trend;  // sup density at the digit-set window, per level
  double density_window = 0.0;
  bool density_checked = false;
  bool density_bounded = true;
  OscVerdict verdict = OscVerdict::Undetermined;
  std::string summary;
};

/// Evidence for or against the open set condition up to level k: collisions
/// (with an amplification witness), the min-separation trend and the upper
/// density at a fixed window across levels.
OscReport osc_verdict(const SelfAffinePair& pair, int k, std::uint64_t cap = kDefaultMassBudget);

}  // namespace saft
