// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "../unit/oracles.hpp"
#include "saft/attractor.hpp"
#include "saft/beurling.hpp"
#include "saft/cantor.hpp"
#include "saft/error.hpp"
#include "saft/expansion.hpp"
#include "saft/sdensity.hpp"

using namespace saft;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what;
    if (!ok) {
      pass = false;
      detail += " [failed]";
    }
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string g(double v) { return fmt("%.9g", v); }

bool in(double v, double lo, double hi) { return v >= lo && v <= hi; }

struct TileRun {
  LebesgueReport lebesgue;
  DensityEstimate lower;
};

TileRun tile_run(const SelfAffinePair& pair, int level, int ref_level, const Schedule* windows = nullptr) {
  const auto pts = expand_level(pair, level);
  const auto ref = expand_level(pair, ref_level);
  const auto sched = windows ? *windows : natural_schedule(pts);
  TileRun r;
  r.lebesgue = lebesgue_measure(pair, level, sched);
  r.lower = lower_density_profile(pts, sched, &ref, level);
  return r;
}

Outcome tile_golden_values() {
  Outcome o;
  const auto binary = validate_pair_1d(2.0, {0.0, 1.0});
  const auto sched = Schedule::parse("geo:16,4096,9");
  const auto b = lebesgue_measure(binary, 16, sched);
  const double sup = b.profile.per_size.back().sup_value;
  o.require(in(sup, 1.0, 1.0005), "(2,{0,1}) sup@4096=" + g(sup));
  o.require(!b.measure.divergent && in(b.measure.value, 0.9995, 1.0), "|K|=" + g(b.measure.value));
  const auto rb = raster_attractor(binary, 4096, 200);
  o.require(in(rb.estimate.outer, 1.0, 1.01), "raster=" + g(rb.estimate.outer));

  const auto nega = validate_pair_1d(-2.0, {0.0, 1.0});
  const auto n = tile_run(nega, 16, 18);
  const auto& top = n.lebesgue.profile.per_size.back();
  const auto& low = n.lower.per_size.back().inf;
  o.require(in(top.sup_value, 0.99, 1.011), "(-2,{0,1}) sup=" + g(top.sup_value));
  o.require(low && low->trusted && in(low->value, 0.99, 1.011),
            "inf=" + (low ? g(low->value) + (low->trusted ? " trusted" : " untrusted") : std::string("absent")));
  o.require(!n.lebesgue.measure.divergent && std::abs(n.lebesgue.measure.value - 1.0) <= 0.01,
            "|K|=" + g(n.lebesgue.measure.value));
  const auto rn = raster_attractor(nega, 4096, 200);
  o.require(in(rn.estimate.outer, 1.0, 1.01) && rn.grid.lo[0] <= -2.0 / 3.0 && rn.grid.hi[0] >= 1.0 / 3.0,
            "raster=" + g(rn.estimate.outer) + " on [" + g(rn.grid.lo[0]) + "," + g(rn.grid.hi[0]) + "]");
  return o;
}

Outcome origin_dichotomy() {
  Outcome o;
  for (const auto& [b, want] : {std::pair{2.0, OriginClass::Boundary}, std::pair{-2.0, OriginClass::Interior}}) {
    const auto pair = validate_pair_1d(b, {0.0, 1.0});
    const auto r = tile_run(pair, 16, 18);
    const auto rep = classify_origin(pair, r.lebesgue.profile, r.lower, r.lebesgue.measure.value);
    o.require(rep.verdict == want, "(" + g(b) + ",{0,1}) " + to_string(rep.verdict) + " lower=" + g(rep.lower_value));
  }
  return o;
}

Outcome divergence() {
  Outcome o;
  const auto pair = validate_pair_1d(4.0, {0, 1, 2, 8});
  const std::vector<double> a{8.0};
  const auto w = collision_witness(pair, a, 2, 4);
  // Independent count of level-8 expansions landing on z.
  const auto level8 = oracle::expand({{4}}, {{0}, {1}, {2}, {8}}, 8);
  const auto it = level8.find({std::llround(w.point[0])});
  const std::uint64_t brute = it == level8.end() ? 0 : it->second;
  o.require(w.verified && w.observed_multiplicity >= 16 && brute == w.observed_multiplicity,
            "witness z=" + g(w.point[0]) + " multiplicity " + std::to_string(w.observed_multiplicity) + " (enumerated " +
                std::to_string(brute) + ", bound " + std::to_string(w.lower_bound) + ")");

  const auto leb = lebesgue_measure(pair, 10, natural_schedule(expand_level(pair, 10)));
  o.require(leb.measure.divergent && leb.measure.value == 0.0,
            "|K|=" + g(leb.measure.value) + (leb.measure.divergent ? " divergent" : " bounded"));

  const auto half = validate_pair_1d(1.5, {0.0, 1.0});
  const auto pts = expand_level(half, 20);
  const auto sched = natural_schedule(pts);
  const auto top = upper_density_profile(pts, Schedule({sched.back()}), 20).per_size[0];
  o.require(top.sup_value >= 150.0, "(3/2,{0,1}) sup@N=" + g(top.window) + " is " + g(top.sup_value));
  const auto r = raster_attractor(half, 4096, 200);
  o.require(in(r.estimate.outer, 2.0, 2.02), "raster=" + g(r.estimate.outer));
  return o;
}

Outcome cantor_closed_forms() {
  Outcome o;
  const double h = cantor_hausdorff(CantorPair(3.0, 2.0));
  o.require(fmt("%.12f", h) == "1.000000000000" && std::abs(h - 1.0) <= 1e-12, "H(3,2)=" + fmt("%.15f", h));
  std::mt19937_64 rng(20240501);
  std::uniform_real_distribution<double> ndist(3.0, 10.0), ddist(0.1, 10.0);
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const double n = ndist(rng), d = ddist(rng);
    const double s = std::log(2.0) / std::log(n);
    worst = std::max(worst, std::abs(cantor_hausdorff(CantorPair(n, d)) * std::pow((n - 1.0) / d, s) - 1.0));
  }
  o.require(worst <= 1e-12, "50 random pairs, worst |H*((N-1)/d)^s - 1| = " + g(worst));
  return o;
}

Outcome counting_oracle() {
  Outcome o;
  std::mt19937_64 rng(20240502);
  std::uniform_int_distribution<int> ndist(3, 5), ddist(0, 2), mdist(1, 10), bit(0, 1);
  const double ds[] = {0.5, 1.0, 2.0};
  int failures = 0;
  for (int t = 0; t < 200; ++t) {
    const double n = ndist(rng), d = ds[ddist(rng)];
    const CantorPair cp(n, d);
    std::vector<double> r(static_cast<std::size_t>(mdist(rng)));
    for (auto& v : r) v = bit(rng) ? d : 0.0;
    const double b = coefficient_value(cp, r);
    if (count_upto(cp, r) != oracle::cantor_count(n, d, static_cast<int>(r.size()), b)) ++failures;
  }
  o.require(failures == 0, "200 vectors, " + std::to_string(failures) + " mismatches");
  return o;
}

Outcome translation_dominance() {
  Outcome o;
  int violations = 0, brute_violations = 0;
  std::size_t checked = 0;
  for (double n : {3.0, 4.0})
    for (double d : {1.0, 2.0})
      for (int k = 0; k <= 8; ++k) {
        const CantorPair cp(n, d);
        const auto res = translation_dominance_check(cp, k);
        checked += res.intervals_checked;
        if (!res.holds) ++violations;
        // Independent all-pairs check with prefix counts.
        const auto pts = expand_level(cp.to_pair(), k);
        for (std::size_t i = 0; i < pts.size(); ++i)
          for (std::size_t j = i; j < pts.size(); ++j) {
            const double len = pts.coord(j, 0) - pts.coord(i, 0);
            const auto here = j - i + 1;
            std::size_t origin = 0;
            while (origin < pts.size() && pts.coord(origin, 0) <= len + 1e-9 * std::max(1.0, len)) ++origin;
            if (here > origin) ++brute_violations;
          }
      }
  o.require(violations == 0 && brute_violations == 0,
            std::to_string(checked) + " intervals, " + std::to_string(violations) + " counterexamples, brute " +
                std::to_string(brute_violations));
  return o;
}

Outcome sdensity_convergence() {
  Outcome o;
  const CantorPair cp(3.0, 2.0);
  const auto pts = expand_level(cp.to_pair(), 12);
  const auto prof = upper_s_density_profile(pts, cp.s(), Schedule::geometric(1000.0, 531440.0, 5), 12);
  const auto& top = prof.per_threshold.back();
  o.require(top.sup && in(top.sup->value, 1.0, 1.01), "sup@r=" + g(top.threshold) + " is " +
                                                           (top.sup ? g(top.sup->value) : std::string("absent")));
  const auto h = hausdorff_from_sdensity(prof);
  o.require(!h.divergent && in(h.value, 0.99, 1.0), "H=" + g(h.value));
  double worst = 0.0;
  for (int m = 1; m <= 12; ++m) {
    const double b = std::pow(3.0, m) - 1.0;
    const double scan = interval_s_value(pts, cp.s(), 0.0, b);
    const double closed = std::pow(2.0, m) / std::pow(b, cp.s());
    const double seq = cantor_sdensity_sequence(cp, 12).values[static_cast<std::size_t>(m - 1)];
    worst = std::max({worst, std::abs(scan - seq), std::abs(closed - seq)});
  }
  o.require(worst <= 1e-9, "v_m vs scan, m<=12, worst " + g(worst));
  return o;
}

Outcome scaling_law() {
  Outcome o;
  std::mt19937_64 rng(20240503);
  int count_mismatch = 0, value_mismatch = 0, compared = 0;
  for (int t = 0; t < 100; ++t) {
    const auto pts = t % 2 ? oracle::random_real_set(rng, 1, 200, 100.0) : oracle::random_integer_set(rng, 1, 200, 300, 3);
    for (double c : {0.5, 2.0, 3.0}) {
      const auto scaled = rescale_points(pts, Matrix::from_rows({{c}}));
      for (double n : {1.0, 2.0, 5.0, 17.0}) {
        const auto a = upper_density_profile(pts, Schedule({n})).per_size[0];
        const auto b = upper_density_profile(scaled, Schedule({c * n})).per_size[0];
        ++compared;
        if (a.sup_count != b.sup_count) ++count_mismatch;
        // count / (cN) * c reproduces count / N up to the last bit.
        if (std::abs(c * b.sup_value - a.sup_value) > 4 * std::numeric_limits<double>::epsilon() * a.sup_value)
          ++value_mismatch;
      }
    }
  }
  o.require(count_mismatch == 0 && value_mismatch == 0,
            std::to_string(compared) + " comparisons, " + std::to_string(count_mismatch) + " count and " +
                std::to_string(value_mismatch) + " value mismatches");
  return o;
}

Outcome oracle_equivalence() {
  Outcome o;
  std::mt19937_64 rng(20240504);
  int mismatches = 0, compared = 0;
  for (int t = 0; t < 100; ++t) {
    for (int dim : {1, 2}) {
      const auto pts = t % 2 ? oracle::random_real_set(rng, dim, 200, 25.0) : oracle::random_integer_set(rng, dim, 200, 40, 3);
      const auto prof = upper_density_profile(pts, Schedule({0.75, 3.0, 8.0, 20.0}));
      for (const auto& e : prof.per_size) {
        ++compared;
        if (e.sup_count != oracle::window_max(pts, e.window)) ++mismatches;
      }
    }
  }
  o.require(mismatches == 0, std::to_string(compared) + " window optima, " + std::to_string(mismatches) + " mismatches");
  return o;
}

Outcome renormalization() {
  Outcome o;
  struct Case {
    SelfAffinePair pair;
    AxisBox box;
    int level;
    const char* name;
  };
  const std::vector<Case> cases{{validate_pair_1d(3.0, {0.0, 2.0}), AxisBox{{0.0}, {2.0}}, 1, "(3,{0,2}) W=[0,2] N=1"},
                                {validate_pair_1d(2.0, {0.0, 1.0}), AxisBox{{0.0}, {1.0}}, 2, "(2,{0,1}) W=[0,1] N=2"}};
  for (const auto& c : cases) {
    int within = 0;
    for (std::uint64_t rep = 0; rep < 100; ++rep) {
      const auto smp = sample_self_similar_measure(c.pair, 100000, 1000 + rep, 64);
      const auto chk = check_renormalization(c.pair, c.box, c.level, smp);
      if (std::abs(chk.lhs - chk.rhs) <= 3 * chk.std_error) ++within;
    }
    o.require(within >= 95, std::string(c.name) + " " + std::to_string(within) + "/100 within 3 stderr");
  }
  return o;
}

Outcome sampler_statistics() {
  Outcome o;
  const auto pair = validate_pair_1d(3.0, {0.0, 2.0});
  const std::size_t n = 100000;
  const auto smp = sample_self_similar_measure(pair, n, 20240505, 64);
  struct Cylinder {
    double lo, hi, mass;
  };
  for (const auto& cyl : {Cylinder{0.0, 2.0 / 3.0, 0.5}, Cylinder{2.0 / 3.0, 1.0, 0.5}, Cylinder{0.0, 2.0 / 9.0, 0.25},
                          Cylinder{6.0 / 9.0, 8.0 / 9.0, 0.25}}) {
    std::size_t hits = 0;
    for (double x : smp.coords)
      if (x >= cyl.lo && x <= cyl.hi) ++hits;
    const double p = static_cast<double>(hits) / static_cast<double>(n);
    const double sigma = std::sqrt(cyl.mass * (1 - cyl.mass) / static_cast<double>(n));
    o.require(std::abs(p - cyl.mass) <= 3 * sigma,
              "[" + g(cyl.lo) + "," + g(cyl.hi) + "] " + fmt("%.5f", p) + " vs " + g(cyl.mass));
  }
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"tile golden values", tile_golden_values},
      {"origin dichotomy", origin_dichotomy},
      {"divergence", divergence},
      {"cantor closed forms", cantor_closed_forms},
      {"counting oracle", counting_oracle},
      {"translation dominance", translation_dominance},
      {"s-density convergence", sdensity_convergence},
      {"scaling law", scaling_law},
      {"oracle equivalence", oracle_equivalence},
      {"renormalization", renormalization},
      {"sampler statistics", sampler_statistics},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    std::printf("%s %2zu %s: %s\n", out.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, out.detail.c_str());
    std::fflush(stdout);
    failed += out.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
