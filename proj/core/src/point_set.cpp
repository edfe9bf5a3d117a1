#include "saft/point_set.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "saft/error.hpp"

namespace saft {

namespace {

bool lex_less(const double* a, const double* b, int dim) {
  for (int i = 0; i < dim; ++i) {
    if (a[i] < b[i]) return true;
    if (b[i] < a[i]) return false;
  }
  return false;
}

bool within_tolerance(const double* a, const double* b, int dim) {
  for (int i = 0; i < dim; ++i)
    if (std::abs(a[i] - b[i]) > kMergeTolerance) return false;
  return true;
}

void build_1d(const std::vector<double>& coords, const std::vector<std::uint64_t>& weights, std::vector<double>& out_c,
              std::vector<std::uint64_t>& out_w) {
  std::vector<std::size_t> order(coords.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return coords[a] < coords[b]; });
  out_c.reserve(coords.size());
  out_w.reserve(coords.size());
  // Sorted order makes every tolerance-cluster contiguous; the representative
  // is the smallest member.
  double anchor = 0.0;
  for (std::size_t idx : order) {
    const double x = coords[idx];
    if (!out_c.empty() && x - anchor <= kMergeTolerance) {
      out_w.back() += weights[idx];
    } else {
      out_c.push_back(x);
      out_w.push_back(weights[idx]);
      anchor = x;
    }
  }
}

}  // namespace

WeightedPointSet WeightedPointSet::canonical(int dim, std::vector<double> coords, std::vector<std::uint64_t> weights) {
  if (dim < 1) throw Error(ErrorCode::DimensionMismatch, "dimension must be positive");
  const auto d = static_cast<std::size_t>(dim);
  if (coords.size() != weights.size() * d)
    throw Error(ErrorCode::DimensionMismatch, "coordinate count does not match weights");
  if (std::any_of(weights.begin(), weights.end(), [](std::uint64_t w) { return w == 0; }))
    throw Error(ErrorCode::InvalidArgument, "weights must be positive");

  WeightedPointSet out;
  out.dim_ = dim;
  if (dim == 1) {
    build_1d(coords, weights, out.coords_, out.weights_);
  } else {
    const std::size_t n = weights.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return lex_less(&coords[a * d], &coords[b * d], dim); });
    // Clusters are not contiguous in lexicographic order when the leading
    // coordinates differ by less than the tolerance, so look ahead while the
    // first coordinate stays in range.
    std::vector<char> merged(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (merged[i]) continue;
      const double* pi = &coords[order[i] * d];
      std::uint64_t w = weights[order[i]];
      for (std::size_t j = i + 1; j < n; ++j) {
        const double* pj = &coords[order[j] * d];
        if (pj[0] - pi[0] > kMergeTolerance) break;
        if (!merged[j] && within_tolerance(pi, pj, dim)) {
          merged[j] = 1;
          w += weights[order[j]];
        }
      }
      out.coords_.insert(out.coords_.end(), pi, pi + dim);
      out.weights_.push_back(w);
    }
  }
  out.total_mass_ = std::accumulate(out.weights_.begin(), out.weights_.end(), std::uint64_t{0});
  return out;
}

WeightedPointSet WeightedPointSet::dirac(int dim, std::span<const double> at, std::uint64_t weight) {
  return canonical(dim, std::vector<double>(at.begin(), at.end()), {weight});
}

std::optional<std::size_t> WeightedPointSet::find(std::span<const double> p) const {
  if (static_cast<int>(p.size()) != dim_) throw Error(ErrorCode::DimensionMismatch, "query point dimension");
  const auto d = static_cast<std::size_t>(dim_);
  // First point whose leading coordinate is >= p[0] - tol.
  std::size_t lo = 0, hi = size();
  const double key = p[0] - kMergeTolerance;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (coords_[mid * d] < key)
      lo = mid + 1;
    else
      hi = mid;
  }
  for (std::size_t i = lo; i < size() && coords_[i * d] <= p[0] + kMergeTolerance; ++i)
    if (within_tolerance(&coords_[i * d], p.data(), dim_)) return i;
  return std::nullopt;
}

std::uint64_t WeightedPointSet::weight_at(std::span<const double> p) const {
  const auto i = find(p);
  return i ? weights_[*i] : 0;
}

std::uint64_t WeightedPointSet::max_weight() const noexcept {
  return weights_.empty() ? 0 : *std::max_element(weights_.begin(), weights_.end());
}

}  // namespace saft
