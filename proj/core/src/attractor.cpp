#include "saft/attractor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

#include "saft/error.hpp"

namespace saft {

double invariant_radius(const SelfAffinePair& pair) {
  const Matrix& inv = pair.matrix.inverse;
  const int p = pair.matrix.certified_power;
  double head = 0.0;
  Matrix pw = inv;
  for (int r = 1; r <= p; ++r) {
    head += pw.inf_norm();
    pw = pw * inv;
  }
  double digit_norm = 0.0;
  for (const auto& d : pair.digits.digits)
    for (double v : d) digit_norm = std::max(digit_norm, std::abs(v));
  return digit_norm * head / (1.0 - pair.matrix.contraction);
}

namespace {

// Bounding box of M(box + d).
AxisBox map_box(const Matrix& m, const AxisBox& box, const Vector& d) {
  const auto n = box.lo.size();
  AxisBox out{Vector(n, std::numeric_limits<double>::infinity()), Vector(n, -std::numeric_limits<double>::infinity())};
  Vector corner(n), image(n);
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    for (std::size_t a = 0; a < n; ++a) corner[a] = ((mask >> a) & 1 ? box.hi[a] : box.lo[a]) + d[a];
    m.apply(corner, image);
    for (std::size_t a = 0; a < n; ++a) {
      out.lo[a] = std::min(out.lo[a], image[a]);
      out.hi[a] = std::max(out.hi[a], image[a]);
    }
  }
  return out;
}

}  // namespace

AxisBox attractor_bounds(const SelfAffinePair& pair) {
  // K = sum_{j>=1} M^j D as a Minkowski sum, so its bounding box is the sum of
  // the bounding boxes of M^j D. The tail beyond J lies in M^J K, inside the
  // ball of radius |M^J| R.
  const auto n = static_cast<std::size_t>(pair.dim());
  const double r = invariant_radius(pair);
  AxisBox box{Vector(n, 0.0), Vector(n, 0.0)};
  Matrix pw = pair.matrix.inverse;
  for (int j = 1; j <= 100000; ++j) {
    for (std::size_t a = 0; a < n; ++a) {
      double lo = std::numeric_limits<double>::infinity(), hi = -lo;
      for (const auto& d : pair.digits.digits) {
        double v = 0.0;
        for (std::size_t c = 0; c < n; ++c) v += pw(static_cast<int>(a), static_cast<int>(c)) * d[c];
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      box.lo[a] += lo;
      box.hi[a] += hi;
    }
    pw = pw * pair.matrix.inverse;
    const double tail = pw.inf_norm() * r;
    if (tail <= 1e-13 * std::max(r, 1e-300)) {
      // Rounding in the partial sums is far below this pad.
      const double pad = tail + 1e-12 * std::max(r, 1.0);
      for (std::size_t a = 0; a < n; ++a) {
        box.lo[a] -= pad;
        box.hi[a] += pad;
      }
      break;
    }
  }
  return box;
}

std::size_t RasterGrid::occupied_count() const {
  return static_cast<std::size_t>(std::count(cells.begin(), cells.end(), std::uint8_t{1}));
}

namespace {

// Inclusive index range of cells met by [lo, hi] on an axis, or empty.
bool cell_range(double lo, double hi, double origin, double h, int res, int& first, int& last) {
  const double f = std::floor((lo - origin) / h);
  const double l = std::floor((hi - origin) / h);
  if (l < 0.0 || f > static_cast<double>(res - 1)) return false;
  first = static_cast<int>(std::max(0.0, f));
  last = static_cast<int>(std::min(static_cast<double>(res - 1), l));
  return first <= last;
}

}  // namespace

RasterResult raster_attractor(const SelfAffinePair& pair, int resolution, int max_iters) {
  const int n = pair.dim();
  if (n != 1 && n != 2) throw Error(ErrorCode::UnsupportedDimension, "rasters support dimension 1 or 2");
  if (resolution < 16) throw Error(ErrorCode::ResolutionTooSmall, "resolution must be >= 16");
  if (max_iters < 1) throw Error(ErrorCode::InvalidArgument, "max_iters must be >= 1");

  AxisBox box = attractor_bounds(pair);
  double widest = 0.0;
  for (int a = 0; a < n; ++a) widest = std::max(widest, box.hi[static_cast<std::size_t>(a)] - box.lo[static_cast<std::size_t>(a)]);
  if (!(widest > 0.0)) widest = 1.0;
  // Degenerate axes (K inside a line) still need cells of positive size.
  for (int a = 0; a < n; ++a) {
    const auto i = static_cast<std::size_t>(a);
    if (box.hi[i] - box.lo[i] < 1e-6 * widest) {
      const double mid = 0.5 * (box.hi[i] + box.lo[i]);
      box.lo[i] = mid - 0.5e-6 * widest;
      box.hi[i] = mid + 0.5e-6 * widest;
    }
  }

  RasterResult result;
  RasterGrid& g = result.grid;
  g.dim = n;
  g.resolution = resolution;
  g.lo = box.lo;
  g.hi = box.hi;
  g.cell_volume = 1.0;
  for (int a = 0; a < n; ++a) {
    const auto i = static_cast<std::size_t>(a);
    g.cell_size.push_back((g.hi[i] - g.lo[i]) / resolution);
    g.cell_volume *= g.cell_size.back();
  }
  const std::size_t res = static_cast<std::size_t>(resolution);
  const std::size_t total = n == 1 ? res : res * res;
  g.cells.assign(total, 1);

  LebesgueEstimate& est = result.estimate;
  est.resolution = resolution;
  est.history.push_back(static_cast<double>(total) * g.cell_volume);

  const Matrix& b = pair.matrix.matrix;
  std::vector<std::uint8_t> next(total);
  std::vector<std::uint32_t> prefix(n == 1 ? res + 1 : (res + 1) * (res + 1));

  for (int it = 1; it <= max_iters; ++it) {
    if (n == 1) {
      prefix[0] = 0;
      for (std::size_t i = 0; i < res; ++i) prefix[i + 1] = prefix[i] + g.cells[i];
      const double h = g.cell_size[0];
      const double bb = b(0, 0);
      for (int i = 0; i < resolution; ++i) {
        const double x0 = g.lo[0] + i * h, x1 = x0 + h;
        bool hit = false;
        for (const auto& d : pair.digits.digits) {
          const double u = bb * x0 - d[0], v = bb * x1 - d[0];
          int f = 0, l = 0;
          if (!cell_range(std::min(u, v) - h, std::max(u, v) + h, g.lo[0], h, resolution, f, l)) continue;
          if (prefix[static_cast<std::size_t>(l) + 1] - prefix[static_cast<std::size_t>(f)] > 0) {
            hit = true;
            break;
          }
        }
        next[static_cast<std::size_t>(i)] = hit ? 1 : 0;
      }
    } else {
      const std::size_t w = res + 1;
      std::fill(prefix.begin(), prefix.end(), 0u);
      for (std::size_t j = 0; j < res; ++j)
        for (std::size_t i = 0; i < res; ++i)
          prefix[(j + 1) * w + i + 1] =
              g.cells[j * res + i] + prefix[j * w + i + 1] + prefix[(j + 1) * w + i] - prefix[j * w + i];
      const double hx = g.cell_size[0], hy = g.cell_size[1];
      // B c for the cell c = corner + [0,hx] x [0,hy] is B corner plus a fixed box.
      const AxisBox ext = map_box(b, AxisBox{Vector{0.0, 0.0}, Vector{hx, hy}}, Vector{0.0, 0.0});
      for (int j = 0; j < resolution; ++j)
        for (int i = 0; i < resolution; ++i) {
          const double cx = g.lo[0] + i * hx, cy = g.lo[1] + j * hy;
          const double bx = b(0, 0) * cx + b(0, 1) * cy, by = b(1, 0) * cx + b(1, 1) * cy;
          const double x_lo = bx + ext.lo[0], x_hi = bx + ext.hi[0];
          const double y_lo = by + ext.lo[1], y_hi = by + ext.hi[1];
          bool hit = false;
          for (const auto& d : pair.digits.digits) {
            int fx = 0, lx = 0, fy = 0, ly = 0;
            if (!cell_range(x_lo - d[0] - hx, x_hi - d[0] + hx, g.lo[0], hx, resolution, fx, lx)) continue;
            if (!cell_range(y_lo - d[1] - hy, y_hi - d[1] + hy, g.lo[1], hy, resolution, fy, ly)) continue;
            const auto X0 = static_cast<std::size_t>(fx), X1 = static_cast<std::size_t>(lx) + 1;
            const auto Y0 = static_cast<std::size_t>(fy), Y1 = static_cast<std::size_t>(ly) + 1;
            const std::uint32_t occ = prefix[Y1 * w + X1] - prefix[Y0 * w + X1] - prefix[Y1 * w + X0] + prefix[Y0 * w + X0];
            if (occ > 0) {
              hit = true;
              break;
            }
          }
          next[static_cast<std::size_t>(j) * res + static_cast<std::size_t>(i)] = hit ? 1 : 0;
        }
    }
    const bool changed = next != g.cells;
    g.cells.swap(next);
    est.iterations = it;
    est.history.push_back(static_cast<double>(g.occupied_count()) * g.cell_volume);
    if (!changed) {
      est.converged = true;
      break;
    }
  }
  est.outer = est.history.back();
  return result;
}

void write_pbm(const RasterGrid& grid, std::ostream& out, const std::vector<std::string>& comments) {
  if (grid.dim != 2) throw Error(ErrorCode::UnsupportedDimension, "PBM output is for 2-D grids");
  out << "P1\n";
  for (const auto& c : comments) out << "# " << c << '\n';
  out << grid.resolution << ' ' << grid.resolution << '\n';
  for (int j = grid.resolution - 1; j >= 0; --j) {
    for (int i = 0; i < grid.resolution; ++i) {
      if (i) out << ' ';
      out << (grid.occupied(i, j) ? '1' : '0');
    }
    out << '\n';
  }
}

void write_raster_csv(const RasterGrid& grid, std::ostream& out) {
  if (grid.dim != 1) throw Error(ErrorCode::UnsupportedDimension, "CSV raster output is for 1-D grids");
  out << "cell_index,occupied\n";
  for (int i = 0; i < grid.resolution; ++i) out << i << ',' << (grid.occupied(i) ? 1 : 0) << '\n';
}

const char* to_string(OriginClass c) noexcept {
  switch (c) {
    case OriginClass::Interior: return "interior";
    case OriginClass::Boundary: return "boundary";
    case OriginClass::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

OriginReport classify_origin(const SelfAffinePair& pair, const DensityEstimate& upper, const DensityEstimate& lower,
                             double lebesgue) {
  if (pair.regime != Regime::TileCandidate || !(lebesgue > 0.0))
    throw Error(ErrorCode::NotATileCandidate, "origin classification needs a tile-candidate pair with |K| > 0");
  if (upper.per_size.empty()) throw Error(ErrorCode::InvalidArgument, "empty upper density profile");

  const DensityEntry* chosen = nullptr;
  bool any_lower = false;
  for (const auto& e : lower.per_size) {
    if (!e.inf) continue;
    any_lower = true;
    if (e.inf->trusted) chosen = &e;  // per_size is ascending; keep the largest
  }
  if (!any_lower) throw Error(ErrorCode::NoTrustedLowerEntry, "lower profile has no lower-density entries");

  OriginReport r;
  r.target = 1.0 / lebesgue;
  r.upper_value = upper.per_size.back().sup_value;
  r.level = lower.level;
  if (!chosen) return r;

  r.lower_value = chosen->inf->value;
  r.window = chosen->window;
  const double tol = kOriginTolerance * r.target;
  if (r.lower_value <= tol)
    r.verdict = OriginClass::Boundary;
  else if (std::abs(r.lower_value - r.target) <= tol && std::abs(r.upper_value - r.target) <= tol)
    r.verdict = OriginClass::Interior;
  return r;
}

const char* to_string(OscVerdict v) noexcept {
  switch (v) {
    case OscVerdict::ConsistentWithOsc: return "consistent-with-OSC";
    case OscVerdict::OscFails: return "OSC-fails";
    case OscVerdict::Undetermined: return "undetermined";
  }
  return "unknown";
}

namespace {

std::string format_point(const Vector& p) {
  char buf[64];
  std::string out;
  if (p.size() > 1) out += '(';
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += ", ";
    std::snprintf(buf, sizeof buf, "%.12g", p[i]);
    out += buf;
  }
  if (p.size() > 1) out += ')';
  return out;
}

}  // namespace

OscReport osc_verdict(const SelfAffinePair& pair, int k, std::uint64_t cap) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "level must be >= 1");
  checked_mass(pair.m(), k, cap);

  OscReport rep;
  rep.max_level = k;
  double scale = 0.0;
  for (const auto& a : pair.digits.digits)
    for (const auto& b : pair.digits.digits)
      for (std::size_t i = 0; i < a.size(); ++i) scale = std::max(scale, std::abs(a[i] - b[i]));
  rep.density_window = scale > 0.0 ? scale : 1.0;
  rep.density_checked = pair.dim() <= 2;
  const Schedule window({rep.density_window});

  for (int level = 1; level <= k; ++level) {
    const auto pts = expand_level(pair, level, cap);
    rep.levels.push_back(analyze_expansion(pts, pair.m(), level));
    if (rep.density_checked)
      rep.density_trend.push_back(upper_density_profile(pts, window, level).per_size.front().sup_value);
    if (rep.levels.back().has_collision) {
      const std::size_t idx = *first_collision(pts);
      const auto p = pts.point(idx);
      rep.collision = CollisionSite{level, Vector(p.begin(), p.end()), pts.weight(idx)};
      rep.witness = collision_witness(pair, p, level, 2, cap);
      break;
    }
    rep.collision_free_up_to = level;
  }

  if (rep.density_checked) rep.density_bounded = !is_divergent(rep.density_trend);

  bool separation_stable = false;
  const auto& lv = rep.levels;
  if (!rep.collision && lv.size() >= 3) {
    const double a = lv[lv.size() - 3].min_separation, b = lv[lv.size() - 2].min_separation,
                 c = lv.back().min_separation;
    const auto same = [](double x, double y) { return x == y || std::abs(x - y) <= 1e-9; };
    separation_stable = same(a, b) && same(b, c);
  }

  if (rep.collision) {
    rep.verdict = OscVerdict::OscFails;
    rep.summary = std::string("OSC-fails: collision at point ") + format_point(rep.collision->point) + " (level " +
                  std::to_string(rep.collision->level) + ")";
  } else if (rep.density_checked && !rep.density_bounded) {
    rep.verdict = OscVerdict::OscFails;
    rep.summary = "OSC-fails: upper density diverges across levels";
  } else if (rep.density_checked && separation_stable) {
    rep.verdict = OscVerdict::ConsistentWithOsc;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", lv.back().min_separation);
    rep.summary = "consistent-with-OSC: collision-free up to level " + std::to_string(k) +
                  ", min separation stable at " + buf;
  } else {
    rep.verdict = OscVerdict::Undetermined;
    rep.summary = "undetermined: collision-free up to level " + std::to_string(k) + " without stable separation";
  }
  return rep;
}

}  // namespace saft
