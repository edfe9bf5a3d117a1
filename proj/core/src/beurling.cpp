#include "saft/beurling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "saft/error.hpp"

namespace saft {

namespace {

void require_scannable(const WeightedPointSet& pts) {
  if (pts.empty()) throw Error(ErrorCode::EmptyPointSet, "density of an empty point set");
  if (pts.dim() != 1 && pts.dim() != 2)
    throw Error(ErrorCode::UnsupportedDimension,
                "window scans support dimension 1 or 2, got " + std::to_string(pts.dim()));
}

double volume(double window, int dim) { return dim == 1 ? window : window * window; }

// Sorted coordinates with prefix weights; closed-interval counts.
struct Line {
  std::vector<double> x;
  std::vector<std::uint64_t> prefix{0};

  void push(double v, std::uint64_t w) {
    x.push_back(v);
    prefix.push_back(prefix.back() + w);
  }

  std::uint64_t count(double lo, double hi) const {
    const auto a = std::lower_bound(x.begin(), x.end(), lo) - x.begin();
    const auto b = std::upper_bound(x.begin(), x.end(), hi) - x.begin();
    return b > a ? prefix[static_cast<std::size_t>(b)] - prefix[static_cast<std::size_t>(a)] : 0;
  }
};

Line line_of(const WeightedPointSet& pts) {
  Line l;
  l.x.reserve(pts.size());
  l.prefix.reserve(pts.size() + 1);
  for (std::size_t i = 0; i < pts.size(); ++i) l.push(pts.coord(i, 0), pts.weight(i));
  return l;
}

// Range add, global max with the leftmost index among ties.
class MaxSegmentTree {
 public:
  explicit MaxSegmentTree(std::size_t n) : n_(n), max_(4 * n, 0), lazy_(4 * n, 0), arg_(4 * n, 0) { build(1, 0, n - 1); }

  void add(std::size_t lo, std::size_t hi, std::int64_t v) {
    if (lo <= hi) add(1, 0, n_ - 1, lo, hi, v);
  }
  std::int64_t max() const { return max_[1]; }
  std::size_t argmax() const { return arg_[1]; }

 private:
  void build(std::size_t node, std::size_t l, std::size_t r) {
    arg_[node] = l;
    if (l == r) return;
    const std::size_t m = (l + r) / 2;
    build(2 * node, l, m);
    build(2 * node + 1, m + 1, r);
  }

  void pull(std::size_t node) {
    const std::size_t a = 2 * node, b = 2 * node + 1;
    if (max_[a] >= max_[b]) {
      max_[node] = max_[a] + lazy_[node];
      arg_[node] = arg_[a];
    } else {
      max_[node] = max_[b] + lazy_[node];
      arg_[node] = arg_[b];
    }
  }

  void add(std::size_t node, std::size_t l, std::size_t r, std::size_t lo, std::size_t hi, std::int64_t v) {
    if (hi < l || r < lo) return;
    if (lo <= l && r <= hi) {
      max_[node] += v;
      lazy_[node] += v;
      return;
    }
    const std::size_t m = (l + r) / 2;
    add(2 * node, l, m, lo, hi, v);
    add(2 * node + 1, m + 1, r, lo, hi, v);
    pull(node);
  }

  std::size_t n_;
  std::vector<std::int64_t> max_, lazy_;
  std::vector<std::size_t> arg_;
};

DensityEntry upper_1d(const WeightedPointSet& pts, const Line& line, double window) {
  const double tol = kWindowTolerance * window;
  const std::size_t m = pts.size();
  std::size_t lo = 0, hi = 0;
  std::uint64_t best = 0;
  double best_a = line.x.front();
  for (std::size_t i = 0; i < m; ++i) {
    const double a = line.x[i];
    while (lo < m && line.x[lo] < a - tol) ++lo;
    hi = std::max(hi, lo);
    while (hi < m && line.x[hi] <= a + window + tol) ++hi;
    const std::uint64_t c = line.prefix[hi] - line.prefix[lo];
    if (c > best) {
      best = c;
      best_a = a;
    }
  }
  DensityEntry e;
  e.window = window;
  e.sup_count = best;
  e.sup_value = static_cast<double>(best) / window;
  e.argmax = {best_a + window / 2};
  return e;
}

DensityEntry upper_2d(const WeightedPointSet& pts, double window) {
  const double tol = kWindowTolerance * window;
  const std::size_t m = pts.size();

  std::vector<double> ys(m);
  for (std::size_t i = 0; i < m; ++i) ys[i] = pts.coord(i, 1);
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());

  // Point p is counted by bottom anchors y_b with p.y - N - tol <= y_b <= p.y + tol.
  std::vector<std::size_t> from(m), to(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double y = pts.coord(i, 1);
    from[i] = static_cast<std::size_t>(std::lower_bound(ys.begin(), ys.end(), y - window - tol) - ys.begin());
    to[i] = static_cast<std::size_t>(std::upper_bound(ys.begin(), ys.end(), y + tol) - ys.begin());
  }

  MaxSegmentTree tree(ys.size());
  std::size_t added = 0, removed = 0;
  std::int64_t best = -1;
  double best_x = 0.0, best_y = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double a = pts.coord(i, 0);
    if (i > 0 && a == pts.coord(i - 1, 0)) continue;
    while (added < m && pts.coord(added, 0) <= a + window + tol) {
      tree.add(from[added], to[added] - 1, static_cast<std::int64_t>(pts.weight(added)));
      ++added;
    }
    while (removed < added && pts.coord(removed, 0) < a - tol) {
      tree.add(from[removed], to[removed] - 1, -static_cast<std::int64_t>(pts.weight(removed)));
      ++removed;
    }
    if (tree.max() > best) {
      best = tree.max();
      best_x = a;
      best_y = ys[tree.argmax()];
    }
  }
  DensityEntry e;
  e.window = window;
  e.sup_count = static_cast<std::uint64_t>(best);
  e.sup_value = static_cast<double>(best) / volume(window, 2);
  e.argmax = {best_x + window / 2, best_y + window / 2};
  return e;
}

// Window lower-left corners a in [lo, hi] at which counts can change, plus the
// midpoints between them: counts are constant on each open piece.
std::vector<double> candidate_offsets(std::vector<double> breaks, double lo, double hi) {
  breaks.push_back(lo);
  breaks.push_back(hi);
  std::erase_if(breaks, [&](double v) { return v < lo || v > hi; });
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  std::vector<double> out;
  out.reserve(2 * breaks.size());
  for (std::size_t i = 0; i < breaks.size(); ++i) {
    out.push_back(breaks[i]);
    if (i + 1 < breaks.size()) out.push_back(0.5 * (breaks[i] + breaks[i + 1]));
  }
  return out;
}

struct LowerSearch {
  bool have_reference = false;
  bool found_stable = false;
  std::uint64_t stable_count = 0;
  Vector stable_corner;
  bool found_any = false;
  std::uint64_t any_count = 0;
  Vector any_corner;

  void offer(std::uint64_t c, std::uint64_t ref, const Vector& corner) {
    if (!found_any || c < any_count) {
      found_any = true;
      any_count = c;
      any_corner = corner;
    }
    if (have_reference && c == ref && (!found_stable || c < stable_count)) {
      found_stable = true;
      stable_count = c;
      stable_corner = corner;
    }
  }

  LowerEntry result(double window, int dim) const {
    LowerEntry e;
    const bool trusted = have_reference && found_stable;
    e.count = trusted ? stable_count : any_count;
    const Vector& corner = trusted ? stable_corner : any_corner;
    e.center.resize(corner.size());
    for (std::size_t i = 0; i < corner.size(); ++i) e.center[i] = corner[i] + window / 2;
    e.value = static_cast<double>(e.count) / volume(window, dim);
    e.trusted = trusted;
    return e;
  }
};

LowerEntry lower_1d(const Line& line, const Line* ref, double window) {
  const double tol = kWindowTolerance * window;
  std::vector<double> breaks;
  auto collect = [&](const Line& l) {
    for (double x : l.x) {
      breaks.push_back(x);
      breaks.push_back(x - window);
    }
  };
  collect(line);
  if (ref) collect(*ref);
  const auto offsets = candidate_offsets(std::move(breaks), line.x.front() - window, line.x.back());

  LowerSearch search;
  search.have_reference = ref != nullptr;
  Vector corner(1);
  for (double a : offsets) {
    const std::uint64_t c = line.count(a - tol, a + window + tol);
    const std::uint64_t r = ref ? ref->count(a - tol, a + window + tol) : 0;
    corner[0] = a;
    search.offer(c, r, corner);
  }
  return search.result(window, 1);
}

struct Strip {
  std::vector<std::pair<double, std::uint64_t>> items;
  Line line;

  void build() {
    std::sort(items.begin(), items.end());
    line = Line{};
    for (const auto& [y, w] : items) line.push(y, w);
  }
};

void gather_strip(const WeightedPointSet& pts, double lo, double hi, Strip& out) {
  out.items.clear();
  const auto xs = pts.coords();
  std::size_t a = 0, b = pts.size();
  while (a < b) {
    const std::size_t mid = (a + b) / 2;
    if (xs[2 * mid] < lo)
      a = mid + 1;
    else
      b = mid;
  }
  for (std::size_t i = a; i < pts.size() && xs[2 * i] <= hi; ++i) out.items.emplace_back(xs[2 * i + 1], pts.weight(i));
  out.build();
}

LowerEntry lower_2d(const WeightedPointSet& pts, const WeightedPointSet* ref, double window) {
  const double tol = kWindowTolerance * window;
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    xmin = std::min(xmin, pts.coord(i, 0));
    xmax = std::max(xmax, pts.coord(i, 0));
    ymin = std::min(ymin, pts.coord(i, 1));
    ymax = std::max(ymax, pts.coord(i, 1));
  }

  std::vector<double> xbreaks;
  auto collect_x = [&](const WeightedPointSet& s) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      xbreaks.push_back(s.coord(i, 0));
      xbreaks.push_back(s.coord(i, 0) - window);
    }
  };
  collect_x(pts);
  if (ref) collect_x(*ref);
  const auto xoffsets = candidate_offsets(std::move(xbreaks), xmin - window, xmax);

  LowerSearch search;
  search.have_reference = ref != nullptr;
  Strip strip, ref_strip;
  Vector corner(2);
  for (double a : xoffsets) {
    gather_strip(pts, a - tol, a + window + tol, strip);
    if (ref) gather_strip(*ref, a - tol, a + window + tol, ref_strip);

    std::vector<double> ybreaks;
    for (const auto& [y, w] : strip.items) {
      ybreaks.push_back(y);
      ybreaks.push_back(y - window);
    }
    if (ref)
      for (const auto& [y, w] : ref_strip.items) {
        ybreaks.push_back(y);
        ybreaks.push_back(y - window);
      }
    const auto yoffsets = candidate_offsets(std::move(ybreaks), ymin - window, ymax);
    corner[0] = a;
    for (double b : yoffsets) {
      const std::uint64_t c = strip.line.count(b - tol, b + window + tol);
      const std::uint64_t r = ref ? ref_strip.line.count(b - tol, b + window + tol) : 0;
      corner[1] = b;
      search.offer(c, r, corner);
    }
  }
  return search.result(window, 2);
}

}  // namespace

std::uint64_t count_in_window(const WeightedPointSet& pts, std::span<const double> corner, double window) {
  if (static_cast<int>(corner.size()) != pts.dim()) throw Error(ErrorCode::DimensionMismatch, "window corner");
  const double tol = kWindowTolerance * window;
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    bool inside = true;
    for (int a = 0; a < pts.dim() && inside; ++a) {
      const double v = pts.coord(i, a);
      const double lo = corner[static_cast<std::size_t>(a)];
      inside = v >= lo - tol && v <= lo + window + tol;
    }
    if (inside) total += pts.weight(i);
  }
  return total;
}

DensityEstimate upper_density_profile(const WeightedPointSet& pts, const Schedule& windows, int level) {
  require_scannable(pts);
  DensityEstimate out;
  out.dim = pts.dim();
  out.level = level;
  const Line line = pts.dim() == 1 ? line_of(pts) : Line{};
  for (double n : windows.sizes()) {
    DensityEntry e = pts.dim() == 1 ? upper_1d(pts, line, n) : upper_2d(pts, n);
    e.level = level;
    out.per_size.push_back(std::move(e));
  }
  return out;
}

DensityEstimate lower_density_profile(const WeightedPointSet& pts, const Schedule& windows,
                                      const WeightedPointSet* reference, int level) {
  if (reference && reference->dim() != pts.dim())
    throw Error(ErrorCode::DimensionMismatch, "reference point set dimension");
  DensityEstimate out = upper_density_profile(pts, windows, level);
  if (pts.dim() == 1) {
    const Line line = line_of(pts);
    std::optional<Line> ref_line;
    if (reference && !reference->empty()) ref_line = line_of(*reference);
    for (auto& e : out.per_size) e.inf = lower_1d(line, ref_line ? &*ref_line : nullptr, e.window);
  } else {
    const WeightedPointSet* ref = reference && !reference->empty() ? reference : nullptr;
    for (auto& e : out.per_size) e.inf = lower_2d(pts, ref, e.window);
  }
  return out;
}

DensityEstimate upper_density_level_sweep(const SelfAffinePair& pair, std::span<const int> levels, double window,
                                          std::uint64_t cap) {
  if (pair.dim() != 1 && pair.dim() != 2)
    throw Error(ErrorCode::UnsupportedDimension, "window scans support dimension 1 or 2");
  DensityEstimate out;
  out.dim = pair.dim();
  const Schedule single({window});
  for (int k : levels) {
    const auto pts = expand_level(pair, k, cap);
    auto profile = upper_density_profile(pts, single, k);
    out.per_size.push_back(std::move(profile.per_size.front()));
    out.level = k;
  }
  return out;
}

Schedule natural_schedule(const WeightedPointSet& pts, int count) {
  if (pts.empty()) throw Error(ErrorCode::EmptyPointSet, "natural schedule of an empty set");
  if (count < 1) throw Error(ErrorCode::InvalidArgument, "schedule count must be >= 1");
  double diam = 0.0;
  for (int a = 0; a < pts.dim(); ++a) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      lo = std::min(lo, pts.coord(i, a));
      hi = std::max(hi, pts.coord(i, a));
    }
    diam = std::max(diam, hi - lo);
  }
  if (!(diam > 0.0)) throw Error(ErrorCode::InvalidArgument, "support has zero diameter");
  std::vector<double> sizes(static_cast<std::size_t>(count));
  double n = diam / 2;
  for (int i = count - 1; i >= 0; --i) {
    sizes[static_cast<std::size_t>(i)] = n;
    n /= 2;
  }
  return Schedule(std::move(sizes));
}

bool is_divergent(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 3) return false;
  return values[n - 3] < values[n - 2] && values[n - 2] < values[n - 1] && values[n - 1] > 10.0 * values[0];
}

MeasureValue lebesgue_from_density(const DensityEstimate& profile) {
  if (profile.per_size.empty()) throw Error(ErrorCode::InvalidArgument, "empty density profile");
  std::vector<double> sups;
  sups.reserve(profile.per_size.size());
  for (const auto& e : profile.per_size) sups.push_back(e.sup_value);
  if (is_divergent(sups)) return {0.0, true};
  return {1.0 / sups.back(), false};
}

LebesgueReport lebesgue_measure(const SelfAffinePair& pair, int level, const Schedule& windows, std::uint64_t cap) {
  LebesgueReport report;
  const auto pts = expand_level(pair, level, cap);
  report.profile = upper_density_profile(pts, windows, level);

  double scale = 0.0;
  for (const auto& a : pair.digits.digits)
    for (const auto& b : pair.digits.digits)
      for (std::size_t i = 0; i < a.size(); ++i) scale = std::max(scale, std::abs(a[i] - b[i]));
  if (!(scale > 0.0)) scale = 1.0;

  std::vector<int> levels;
  for (int k = std::max(1, level - 7); k <= level; ++k) levels.push_back(k);
  if (!levels.empty()) report.sweep = upper_density_level_sweep(pair, levels, scale, cap);

  std::vector<double> sweep_sups;
  for (const auto& e : report.sweep.per_size) sweep_sups.push_back(e.sup_value);
  if (is_divergent(sweep_sups))
    report.measure = {0.0, true};
  else
    report.measure = lebesgue_from_density(report.profile);
  return report;
}

WeightedPointSet rescale_points(const WeightedPointSet& pts, const Matrix& c) {
  if (c.dim() != pts.dim()) throw Error(ErrorCode::DimensionMismatch, "rescale matrix dimension");
  inverse(c);  // SingularMatrix
  std::vector<double> coords(pts.coords().size());
  const auto d = static_cast<std::size_t>(pts.dim());
  for (std::size_t i = 0; i < pts.size(); ++i) c.apply(pts.point(i), std::span<double>(coords.data() + i * d, d));
  return WeightedPointSet::canonical(pts.dim(), std::move(coords),
                                     std::vector<std::uint64_t>(pts.weights().begin(), pts.weights().end()));
}

}  // namespace saft
