#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace saft {

/// Two points are the same point when their infinity-norm distance is at most
/// this. Pairs whose honest separation is below it are outside supported scale.
inline constexpr double kMergeTolerance = 1e-9;

/// A finite discrete measure: distinct points with positive integer weights,
/// kept in lexicographic coordinate order. Coordinates are stored flat,
/// `dim` doubles per point.
class WeightedPointSet {
 public:
  WeightedPointSet() = default;

  /// Sorts and merges coincident points (within kMergeTolerance), summing
  /// their weights. Zero weights are rejected.
  static WeightedPointSet canonical(int dim, std::vector<double> coords, std::vector<std::uint64_t> weights);

  static WeightedPointSet dirac(int dim, std::span<const double> at, std::uint64_t weight = 1);

  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return weights_.size(); }
  bool empty() const noexcept { return weights_.empty(); }
  std::uint64_t total_mass() const noexcept { return total_mass_; }

  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
  }
  double coord(std::size_t i, int axis) const { return coords_[i * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(axis)]; }
  std::uint64_t weight(std::size_t i) const { return weights_[i]; }

  std::span<const double> coords() const noexcept { return coords_; }
  std::span<const std::uint64_t> weights() const noexcept { return weights_; }

  /// Index of the stored point within kMergeTolerance of `p`, if any.
  std::optional<std::size_t> find(std::span<const double> p) const;
  std::uint64_t weight_at(std::span<const double> p) const;

  std::uint64_t max_weight() const noexcept;

  bool operator==(const WeightedPointSet&) const = default;

 private:
  int dim_ = 0;
  std::vector<double> coords_;
  std::vector<std::uint64_t> weights_;
  std::uint64_t total_mass_ = 0;
};

}  // namespace saft
