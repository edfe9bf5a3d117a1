#include "saft/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

#include "saft/error.hpp"

namespace saft {

std::uint64_t checked_mass(std::size_t m, int k, std::uint64_t cap) {
  if (k < 0) throw Error(ErrorCode::InvalidArgument, "level must be nonnegative");
  std::uint64_t mass = 1;
  for (int i = 0; i < k; ++i) {
    if (mass > cap / m)
      throw Error(ErrorCode::BudgetExceeded, std::to_string(m) + "^" + std::to_string(k) + " exceeds budget " +
                                                 std::to_string(cap));
    mass *= m;
  }
  if (mass > cap)
    throw Error(ErrorCode::BudgetExceeded,
                std::to_string(m) + "^" + std::to_string(k) + " exceeds budget " + std::to_string(cap));
  return mass;
}

WeightedPointSet expand_level(const SelfAffinePair& pair, int k, std::uint64_t cap) {
  checked_mass(pair.m(), k, cap);
  const int n = pair.dim();
  const auto dn = static_cast<std::size_t>(n);

  WeightedPointSet current = WeightedPointSet::dirac(n, Vector(dn, 0.0));
  Matrix bpow = Matrix::identity(n);
  for (int level = 0; level < k; ++level) {
    // mu_{level+1} = mu_level * (sum_d delta_{B^level d})
    std::vector<Vector> shifts;
    shifts.reserve(pair.m());
    for (const auto& d : pair.digits.digits) shifts.push_back(bpow.apply(d));

    std::vector<double> coords;
    std::vector<std::uint64_t> weights;
    coords.reserve(current.size() * pair.m() * dn);
    weights.reserve(current.size() * pair.m());
    for (const auto& shift : shifts)
      for (std::size_t i = 0; i < current.size(); ++i) {
        const auto p = current.point(i);
        for (std::size_t a = 0; a < dn; ++a) coords.push_back(p[a] + shift[a]);
        weights.push_back(current.weight(i));
      }
    current = WeightedPointSet::canonical(n, std::move(coords), std::move(weights));
    bpow = bpow * pair.matrix.matrix;
  }
  return current;
}

namespace {

double euclid(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

struct KeyHash {
  std::size_t operator()(const std::vector<std::int64_t>& key) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (auto v : key) {
      h ^= std::hash<std::int64_t>{}(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

// Strip sweep along the first axis; points are already in lexicographic order.
double strip_sweep(const WeightedPointSet& pts, double best) {
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size() && pts.coord(j, 0) - pts.coord(i, 0) < best; ++j)
      best = std::min(best, euclid(pts.point(i), pts.point(j)));
  return best;
}

}  // namespace

double min_separation(const WeightedPointSet& pts) {
  if (pts.size() < 2) return std::numeric_limits<double>::infinity();
  const int n = pts.dim();
  if (n == 1) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < pts.size(); ++i) best = std::min(best, pts.coord(i, 0) - pts.coord(i - 1, 0));
    return best;
  }

  double delta = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < pts.size(); ++i) delta = std::min(delta, euclid(pts.point(i - 1), pts.point(i)));

  std::vector<double> lo(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
  std::vector<double> hi(static_cast<std::size_t>(n), -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (int a = 0; a < n; ++a) {
      lo[static_cast<std::size_t>(a)] = std::min(lo[static_cast<std::size_t>(a)], pts.coord(i, a));
      hi[static_cast<std::size_t>(a)] = std::max(hi[static_cast<std::size_t>(a)], pts.coord(i, a));
    }
  for (int a = 0; a < n; ++a)
    if ((hi[static_cast<std::size_t>(a)] - lo[static_cast<std::size_t>(a)]) / delta > 1e12)
      return strip_sweep(pts, delta);

  // Any pair at distance <= delta lies in the same or adjacent cells.
  std::unordered_map<std::vector<std::int64_t>, std::vector<std::size_t>, KeyHash> cells;
  std::vector<std::vector<std::int64_t>> keys(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    auto& key = keys[i];
    key.resize(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a)
      key[static_cast<std::size_t>(a)] =
          static_cast<std::int64_t>(std::floor((pts.coord(i, a) - lo[static_cast<std::size_t>(a)]) / delta));
    cells[key].push_back(i);
  }

  double best = delta;
  std::size_t neighbours = 1;
  for (int a = 0; a < n; ++a) neighbours *= 3;
  std::vector<std::int64_t> probe(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t code = 0; code < neighbours; ++code) {
      std::size_t c = code;
      for (int a = 0; a < n; ++a) {
        probe[static_cast<std::size_t>(a)] = keys[i][static_cast<std::size_t>(a)] + static_cast<std::int64_t>(c % 3) - 1;
        c /= 3;
      }
      const auto it = cells.find(probe);
      if (it == cells.end()) continue;
      for (std::size_t j : it->second)
        if (j > i) best = std::min(best, euclid(pts.point(i), pts.point(j)));
    }
  }
  return best;
}

std::optional<std::size_t> first_collision(const WeightedPointSet& pts) {
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (pts.weight(i) >= 2) return i;
  return std::nullopt;
}

ExpansionReport analyze_expansion(const WeightedPointSet& pts, std::size_t m, int k) {
  if (pts.total_mass() != checked_mass(m, k, std::numeric_limits<std::uint64_t>::max()))
    throw Error(ErrorCode::InvalidArgument, "total mass is not m^k");
  ExpansionReport r;
  r.level = k;
  r.distinct_count = pts.size();
  r.max_multiplicity = pts.max_weight();
  r.has_collision = r.max_multiplicity >= 2;
  r.min_separation = min_separation(pts);
  return r;
}

CollisionWitness collision_witness(const SelfAffinePair& pair, std::span<const double> a, int k, int repetitions,
                                   std::uint64_t cap) {
  if (repetitions < 1 || repetitions > 63) throw Error(ErrorCode::InvalidArgument, "repetitions must be in [1, 63]");
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "collision level must be positive");
  const auto level_k = expand_level(pair, k, cap);
  if (level_k.weight_at(a) < 2) throw Error(ErrorCode::NotACollision, "point has multiplicity < 2 at this level");

  CollisionWitness w;
  w.level = k;
  w.repetitions = repetitions;
  w.lower_bound = std::uint64_t{1} << repetitions;

  const Matrix step = power(pair.matrix.matrix, k);
  Matrix bpow = Matrix::identity(pair.dim());
  w.point.assign(a.size(), 0.0);
  for (int j = 0; j < repetitions; ++j) {
    const Vector term = bpow.apply(a);
    for (std::size_t i = 0; i < a.size(); ++i) w.point[i] += term[i];
    bpow = bpow * step;
  }

  try {
    checked_mass(pair.m(), repetitions * k, cap);
  } catch (const Error&) {
    return w;
  }
  const auto amplified = expand_level(pair, repetitions * k, cap);
  w.observed_multiplicity = amplified.weight_at(w.point);
  w.verified = w.observed_multiplicity >= w.lower_bound;
  return w;
}

}  // namespace saft
