#include "saft/sdensity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "saft/error.hpp"

namespace saft {

namespace {

void require_1d(const WeightedPointSet& pts) {
  if (pts.empty()) throw Error(ErrorCode::EmptyPointSet, "s-density of an empty point set");
  if (pts.dim() != 1)
    throw Error(ErrorCode::UnsupportedDimension, "s-density scans are one-dimensional, got dimension " +
                                                     std::to_string(pts.dim()));
}

}  // namespace

SDensityEstimate upper_s_density_profile(const WeightedPointSet& pts, double s, const Schedule& thresholds,
                                         int level) {
  require_1d(pts);
  if (!(s > 0.0)) throw Error(ErrorCode::InvalidArgument, "s must be positive");

  const std::size_t m = pts.size();
  const auto xs = pts.coords();
  std::vector<std::uint64_t> prefix(m + 1, 0);
  for (std::size_t i = 0; i < m; ++i) prefix[i + 1] = prefix[i] + pts.weight(i);

  const auto& r = thresholds.sizes();
  const std::size_t q = r.size();
  std::vector<SInterval> best(q);
  std::vector<char> seen(q, 0);
  double floor_value = 0.0;  // min over thresholds of the incumbent, 0 until all have one
  std::size_t seen_count = 0;

  for (std::size_t i = 0; i < m; ++i) {
    const double remaining = static_cast<double>(prefix[m] - prefix[i]);
    const double start = xs[i] + r.front() * (1.0 - kWindowTolerance);
    auto j = static_cast<std::size_t>(std::lower_bound(xs.begin() + static_cast<std::ptrdiff_t>(i) + 1, xs.end(),
                                                       start) -
                                      xs.begin());
    for (; j < m; ++j) {
      const double len = xs[j] - xs[i];
      const double scale = std::pow(len, s);
      if (seen_count == q && remaining / scale <= floor_value) break;
      const auto t_end = std::upper_bound(r.begin(), r.end(), len * (1.0 + kWindowTolerance)) - r.begin();
      if (t_end == 0) continue;
      const auto t = static_cast<std::size_t>(t_end - 1);
      const std::uint64_t count = prefix[j + 1] - prefix[i];
      const double value = static_cast<double>(count) / scale;
      if (!seen[t] || value > best[t].value) {
        if (!seen[t]) {
          seen[t] = 1;
          ++seen_count;
        }
        best[t] = {count, value, xs[i], xs[j]};
        if (seen_count == q) {
          floor_value = std::numeric_limits<double>::infinity();
          for (const auto& b : best) floor_value = std::min(floor_value, b.value);
        }
      }
    }
  }

  // An interval admissible at threshold t is admissible at every smaller one.
  for (std::size_t t = q - 1; t-- > 0;) {
    if (seen[t + 1] && (!seen[t] || best[t + 1].value > best[t].value)) {
      best[t] = best[t + 1];
      seen[t] = 1;
    }
  }

  SDensityEstimate out;
  out.s = s;
  out.level = level;
  for (std::size_t t = 0; t < q; ++t) {
    SDensityEntry e;
    e.threshold = r[t];
    e.level = level;
    if (seen[t]) e.sup = best[t];
    out.per_threshold.push_back(e);
  }
  return out;
}

double interval_s_value(const WeightedPointSet& pts, double s, double a, double b) {
  require_1d(pts);
  if (!(b > a)) throw Error(ErrorCode::InvalidArgument, "interval must have positive length");
  const double tol = kWindowTolerance * (b - a);
  std::uint64_t count = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double x = pts.coord(i, 0);
    if (x >= a - tol && x <= b + tol) count += pts.weight(i);
  }
  return static_cast<double>(count) / std::pow(b - a, s);
}

WeightedPointSet discrete_convolve(const WeightedPointSet& a, const WeightedPointSet& b) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::DimensionMismatch, "convolution of different dimensions");
  const auto d = static_cast<std::size_t>(a.dim());
  std::vector<double> coords;
  std::vector<std::uint64_t> weights;
  coords.reserve(a.size() * b.size() * d);
  weights.reserve(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) {
      const auto p = a.point(i);
      const auto q = b.point(j);
      for (std::size_t k = 0; k < d; ++k) coords.push_back(p[k] + q[k]);
      weights.push_back(a.weight(i) * b.weight(j));
    }
  return WeightedPointSet::canonical(a.dim(), std::move(coords), std::move(weights));
}

MeasureValue hausdorff_from_sdensity(const SDensityEstimate& profile) {
  std::vector<double> sups;
  for (const auto& e : profile.per_threshold)
    if (e.sup) sups.push_back(e.sup->value);
  if (sups.empty()) throw Error(ErrorCode::InvalidArgument, "s-density profile has no entries");
  if (is_divergent(sups)) return {0.0, true};
  return {1.0 / sups.back(), false};
}

MeasureSample sample_self_similar_measure(const SelfAffinePair& pair, std::size_t count, std::uint64_t seed,
                                          std::size_t burn_in) {
  if (count < 1) throw Error(ErrorCode::InvalidArgument, "sample count must be >= 1");
  const int n = pair.dim();
  const auto dn = static_cast<std::size_t>(n);
  const std::size_t m = pair.m();

  MeasureSample out;
  out.dim = n;
  out.seed = seed;
  out.count = count;
  out.burn_in = burn_in;
  out.coords.reserve(count * dn);

  std::mt19937_64 gen(seed);
  Vector x(dn, 0.0), shifted(dn), next(dn);
  for (std::size_t t = 0; t < burn_in + count; ++t) {
    const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    const std::size_t idx = std::min(m - 1, static_cast<std::size_t>(u * static_cast<double>(m)));
    const auto& d = pair.digits.digits[idx];
    for (std::size_t a = 0; a < dn; ++a) shifted[a] = x[a] + d[a];
    pair.matrix.inverse.apply(shifted, next);
    x.swap(next);
    if (t >= burn_in) out.coords.insert(out.coords.end(), x.begin(), x.end());
  }
  return out;
}

RenormalizationCheck check_renormalization(const SelfAffinePair& pair, const AxisBox& box, int level,
                                           const MeasureSample& sample, std::uint64_t cap) {
  const int n = pair.dim();
  const auto dn = static_cast<std::size_t>(n);
  if (box.lo.size() != dn || box.hi.size() != dn || sample.dim != n)
    throw Error(ErrorCode::DimensionMismatch, "box and sample must match the pair dimension");
  if (sample.count == 0) throw Error(ErrorCode::InvalidArgument, "empty sample");
  const std::uint64_t mass = checked_mass(pair.m(), level, cap);
  const auto mu = expand_level(pair, level, cap);
  const Matrix bn = power(pair.matrix.matrix, level);
  const double total = static_cast<double>(sample.count);

  // x in B^{-N} W  <=>  B^N x in W
  std::size_t inside = 0;
  Vector y(dn);
  for (std::size_t i = 0; i < sample.count; ++i) {
    bn.apply(sample.point(i), y);
    if (box.contains(y)) ++inside;
  }

  double shifted_mass = 0.0;
  if (n == 1) {
    std::vector<double> xs(sample.coords);
    std::sort(xs.begin(), xs.end());
    for (std::size_t k = 0; k < mu.size(); ++k) {
      const double p = mu.coord(k, 0);
      const auto a = std::lower_bound(xs.begin(), xs.end(), box.lo[0] - p);
      const auto b = std::upper_bound(xs.begin(), xs.end(), box.hi[0] - p);
      shifted_mass += static_cast<double>(mu.weight(k)) * static_cast<double>(b - a);
    }
  } else {
    for (std::size_t k = 0; k < mu.size(); ++k) {
      const auto p = mu.point(k);
      std::size_t hits = 0;
      for (std::size_t i = 0; i < sample.count; ++i) {
        const auto x = sample.point(i);
        for (std::size_t a = 0; a < dn; ++a) y[a] = x[a] + p[a];
        if (box.contains(y)) ++hits;
      }
      shifted_mass += static_cast<double>(mu.weight(k)) * static_cast<double>(hits);
    }
  }

  RenormalizationCheck out;
  out.lhs = static_cast<double>(inside) / total;
  out.rhs = shifted_mass / (static_cast<double>(mass) * total);
  out.std_error = std::sqrt(0.25 / total * (1.0 + 1.0 / static_cast<double>(mass)));
  return out;
}

}  // namespace saft
