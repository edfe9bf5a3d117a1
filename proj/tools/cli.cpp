#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <utility>

#include "pair_spec.hpp"
#include "saft/attractor.hpp"
#include "saft/beurling.hpp"
#include "saft/cantor.hpp"
#include "saft/error.hpp"
#include "saft/expansion.hpp"
#include "saft/schedule.hpp"
#include "saft/sdensity.hpp"
#include "saft/version.hpp"

namespace saft::cli {

namespace {

constexpr std::size_t kLowerScan2dLimit = 20000;

std::string num(double v) {
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string num_list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + num(v[i]);
  return s;
}

std::string point_cells(std::span<const double> p) {
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + num(p[i]);
  return s;
}

std::string axis_header(const char* prefix, int dim) {
  std::string s;
  for (int a = 1; a <= dim; ++a) s += (a > 1 ? "," : "") + std::string(prefix) + std::to_string(a);
  return s;
}

std::string empty_cells(int dim) { return std::string(static_cast<std::size_t>(dim > 0 ? dim - 1 : 0), ','); }

// Everything one command produces, buffered so a failure never leaves partial
// output behind.
struct Report {
  std::vector<std::pair<std::string, std::string>> meta;
  std::ostringstream body;
  bool pbm = false;

  void note(std::string key, std::string value) { meta.emplace_back(std::move(key), std::move(value)); }

  std::vector<std::string> comment_lines() const {
    std::vector<std::string> lines{std::string("saft ") + kVersion};
    for (const auto& [k, v] : meta) lines.push_back(k + ": " + v);
    return lines;
  }
};

bool needs_pair(const std::string& cmd) { return cmd != "cantor"; }

void describe_config(const RunConfig& c, Report& r) {
  r.note("command", c.command);
  if (needs_pair(c.command)) r.note("pair", c.pair_path);
  const auto& cmd = c.command;
  if (cmd == "expand" || cmd == "check" || cmd == "density" || cmd == "sdensity" || cmd == "classify-origin" ||
      cmd == "renorm-check" || (cmd == "cantor" && c.cantor_op == "dominance"))
    r.note("level", std::to_string(*c.level));
  if (cmd == "density" || cmd == "classify-origin") {
    r.note("windows", c.windows.empty() ? "natural" : c.windows);
    r.note("reference_level", c.reference_level ? std::to_string(*c.reference_level) : "auto");
  }
  if (cmd == "sdensity") {
    r.note("thresholds", c.thresholds.empty() ? "auto" : c.thresholds);
    r.note("s", c.s ? num(*c.s) : "similarity");
  }
  if (cmd == "raster") {
    r.note("resolution", std::to_string(c.resolution));
    r.note("max_iters", std::to_string(c.max_iters));
  }
  if (cmd == "renorm-check") {
    r.note("seed", std::to_string(*c.seed));
    r.note("samples", std::to_string(c.samples));
    r.note("burn_in", std::to_string(c.burn_in));
    r.note("box_lo", num_list(c.box_lo));
    r.note("box_hi", num_list(c.box_hi));
  }
  if (cmd == "cantor") {
    r.note("N", num(*c.cantor_n));
    r.note("d", num(*c.cantor_d));
    r.note("op", c.cantor_op);
    if (c.cantor_op == "count") r.note("coeffs", num_list(c.coeffs));
    if (c.cantor_op == "sequence") r.note("m_max", std::to_string(c.m_max));
  }
  if (cmd != "raster" && !(cmd == "cantor" && c.cantor_op != "dominance")) r.note("budget", std::to_string(c.budget));
  r.note("output", c.output.empty() ? "-" : c.output);
}

std::optional<WeightedPointSet> reference_points(const SelfAffinePair& pair, int level, std::optional<int> requested,
                                                 std::uint64_t budget, Report& r) {
  std::vector<int> candidates;
  if (requested)
    candidates.push_back(*requested);
  else
    candidates = {level + 2, level + 1};
  for (int ref : candidates) {
    if (ref <= level) continue;
    try {
      checked_mass(pair.m(), ref, budget);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::BudgetExceeded || requested) throw;
      continue;
    }
    r.note("resolved_reference_level", std::to_string(ref));
    return expand_level(pair, ref, budget);
  }
  r.note("resolved_reference_level", "none");
  return std::nullopt;
}

struct Profiles {
  WeightedPointSet points;
  Schedule windows;
  LebesgueReport lebesgue;
  DensityEstimate lower;
  bool lower_computed = false;
};

Profiles density_profiles(const RunConfig& c, const SelfAffinePair& pair, Report& r) {
  Profiles p;
  const int k = *c.level;
  p.points = expand_level(pair, k, c.budget);
  p.windows = c.windows.empty() ? natural_schedule(p.points) : Schedule::parse(c.windows);
  r.note("resolved_windows", num_list(p.windows.sizes()));
  p.lebesgue = lebesgue_measure(pair, k, p.windows, c.budget);

  if (pair.dim() == 1 || p.points.size() <= kLowerScan2dLimit) {
    const auto ref = reference_points(pair, k, c.reference_level, c.budget, r);
    p.lower = lower_density_profile(p.points, p.windows, ref ? &*ref : nullptr, k);
    p.lower_computed = true;
  } else {
    r.note("lower_profile", "skipped, support larger than " + std::to_string(kLowerScan2dLimit) + " points");
  }
  return p;
}

void cmd_expand(const RunConfig& c, const SelfAffinePair& pair, Report& r) {
  const auto pts = expand_level(pair, *c.level, c.budget);
  const auto rep = analyze_expansion(pts, pair.m(), *c.level);
  r.note("distinct_points", std::to_string(rep.distinct_count));
  r.note("total_mass", std::to_string(pts.total_mass()));
  r.note("max_multiplicity", std::to_string(rep.max_multiplicity));
  r.body << axis_header("x_", pts.dim()) << ",weight\n";
  for (std::size_t i = 0; i < pts.size(); ++i) r.body << point_cells(pts.point(i)) << ',' << pts.weight(i) << '\n';
}

void cmd_check(const RunConfig& c, const SelfAffinePair& pair, Report& r) {
  const auto rep = osc_verdict(pair, *c.level, c.budget);
  r.note("regime", to_string(pair.regime));
  r.note("verdict", to_string(rep.verdict));
  if (rep.density_checked) r.note("density_window", num(rep.density_window));
  if (rep.witness) {
    const auto& w = *rep.witness;
    r.note("witness_point", num_list(w.point));
    r.note("witness_repetitions", std::to_string(w.repetitions));
    r.note("witness_lower_bound", std::to_string(w.lower_bound));
    r.note("witness_verified", w.verified ? "true" : "false");
    if (w.verified) r.note("witness_multiplicity", std::to_string(w.observed_multiplicity));
  }
  r.body << "level,distinct,has_collision,max_multiplicity,min_separation,density\n";
  for (std::size_t i = 0; i < rep.levels.size(); ++i) {
    const auto& l = rep.levels[i];
    r.body << l.level << ',' << l.distinct_count << ',' << (l.has_collision ? 1 : 0) << ',' << l.max_multiplicity << ','
           << (std::isfinite(l.min_separation) ? num(l.min_separation) : "") << ','
           << (i < rep.density_trend.size() ? num(rep.density_trend[i]) : "") << '\n';
  }
  r.body << rep.summary << '\n';
}

void cmd_density(const RunConfig& c, const SelfAffinePair& pair, Report& r) {
  const auto p = density_profiles(c, pair, r);
  const auto& m = p.lebesgue.measure;
  r.note("lebesgue", num(m.value));
  r.note("divergent", m.divergent ? "true" : "false");
  std::vector<double> sweep;
  for (const auto& e : p.lebesgue.sweep.per_size) sweep.push_back(e.sup_value);
  if (!p.lebesgue.sweep.per_size.empty()) {
    r.note("sweep_window", num(p.lebesgue.sweep.per_size.front().window));
    r.note("sweep_sup", num_list(sweep));
  }

  const int n = pair.dim();
  r.body << "N,level,sup,sup_count," << axis_header("argmax_", n) << ",inf,inf_count," << axis_header("argmin_", n)
         << ",trusted\n";
  const auto& upper = p.lebesgue.profile.per_size;
  for (std::size_t i = 0; i < upper.size(); ++i) {
    const auto& e = upper[i];
    r.body << num(e.window) << ',' << e.level << ',' << num(e.sup_value) << ',' << e.sup_count << ','
           << point_cells(e.argmax) << ',';
    const LowerEntry* low = nullptr;
    if (p.lower_computed && p.lower.per_size[i].inf) low = &*p.lower.per_size[i].inf;
    if (low)
      r.body << num(low->value) << ',' << low->count << ',' << point_cells(low->center) << ','
             << (low->trusted ? "true" : "false") << '\n';
    else
      r.body << ",," << empty_cells(n) << ",\n";
  }
}

void cmd_sdensity(const RunConfig& c, const SelfAffinePair& pair, Report& r) {
  if (pair.dim() != 1) throw Error(ErrorCode::UnsupportedDimension, "s-density scans are one-dimensional");
  double s = 0.0;
  if (c.s) {
    s = *c.s;
    r.note("s_source", "user (exploratory)");
  } else {
    const auto sim = detect_similarity(pair);
    if (!sim.is_similarity) throw Error(ErrorCode::NotASimilarity, "no similarity dimension; pass --s");
    s = sim.sim_dimension;
    r.note("s_source", "similarity");
  }
  r.note("resolved_s", num(s));

  const auto pts = expand_level(pair, *c.level, c.budget);
  Schedule thresholds;
  if (!c.thresholds.empty()) {
    thresholds = Schedule::parse(c.thresholds);
  } else {
    const double diam = pts.size() > 1 ? pts.coord(pts.size() - 1, 0) - pts.coord(0, 0) : 0.0;
    if (!(diam > 0.0)) throw Error(ErrorCode::EmptyPointSet, "support is a single point; pass --thresholds");
    thresholds = Schedule::geometric(diam / 256.0, diam, 9);
  }
  r.note("resolved_thresholds", num_list(thresholds.sizes()));

  const auto prof = upper_s_density_profile(pts, s, thresholds, *c.level);
  const auto h = hausdorff_from_sdensity(prof);
  r.note("hausdorff", num(h.value));
  r.note("divergent", h.divergent ? "true" : "false");

  r.body << "r,level,sup,count,a,b\n";
  for (const auto& e : prof.per_threshold) {
    r.body << num(e.threshold) << ',' << e.level << ',';
    if (e.sup)
      r.body << num(e.sup->value) << ',' << e.sup->count << ',' << num(e.sup->a) << ',' << num(e.sup->b) << '\n';
    else
      r.body << ",,,\n";
  }
}

void cmd_cantor(const RunConfig& c, Report& r) {
  const CantorPair cp(*c.cantor_n, *c.cantor_d);
  r.note("s", num(cp.s()));
  const auto& op = c.cantor_op;
  if (op == "count") {
    r.body << "count,value\n" << count_upto(cp, c.coeffs) << ',' << num(coefficient_value(cp, c.coeffs)) << '\n';
  } else if (op == "hmeasure") {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12f", cantor_hausdorff(cp));
    r.body << "hausdorff_measure\n" << buf << '\n';
  } else if (op == "sequence") {
    const auto seq = cantor_sdensity_sequence(cp, c.m_max);
    r.note("limit", num(seq.limit));
    r.body << "m,v\n";
    for (std::size_t i = 0; i < seq.values.size(); ++i) r.body << i + 1 << ',' << num(seq.values[i]) << '\n';
  } else {
    const auto res = translation_dominance_check(cp, *c.level, c.budget);
    r.body << "holds,intervals_checked,a,b,count,origin_count\n" << (res.holds ? "true" : "false") << ','
           << res.intervals_checked << ',';
    if (res.counterexample) {
      const auto& v = *res.counterexample;
      r.body << num(v.a) << ',' << num(v.b) << ',' << v.count << ',' << v.origin_count << '\n';
    } else {
      r.body << ",,,\n";
    }
  }
}

void cmd_raster(const RunConfig& c, const SelfAffinePair& pair, Report& r) {
  if (pair.dim() > 2) throw Error(ErrorCode::UnsupportedDimension, "rasters are 1-D or 2-D");
  const auto res = raster_attractor(pair, c.resolution, c.max_iters);
  const auto& est = res.estimate;
  r.note("format", pair.dim() == 2 ? "pbm" : "csv");
  r.note("bounds_lo", num_list(res.grid.lo));
  r.note("bounds_hi", num_list(res.grid.hi));
  r.note("outer", num(est.outer));
  r.note("iterations", std::to_string(est.iterations));
  r.note("converged", est.converged ? "true" : "false");
  r.note("occupied_cells", std::to_string(res.grid.occupied_count()));
  if (pair.dim() == 2) {
    r.pbm = true;
    write_pbm(res.grid, r.body, r.comment_lines());
  } else {
    write_raster_csv(res.grid, r.body);
  }
}

void cmd_classify_origin(const RunConfig& c, const SelfAffinePair& pair, Report& r) {
  if (pair.regime != Regime::TileCandidate)
    throw Error(ErrorCode::NotATileCandidate, "origin classification needs a tile-candidate pair");
  const auto p = density_profiles(c, pair, r);
  if (!p.lower_computed) throw Error(ErrorCode::NoTrustedLowerEntry, "lower profile was not computed");
  const auto rep = classify_origin(pair, p.lebesgue.profile, p.lower, p.lebesgue.measure.value);
  r.note("lebesgue", num(p.lebesgue.measure.value));
  std::string report = to_string(rep.verdict);
  if (rep.verdict == OriginClass::Boundary) report += " (evidence at level " + std::to_string(rep.level) + ")";
  r.body << "verdict,target,lower,upper,window,level,report\n"
         << to_string(rep.verdict) << ',' << num(rep.target) << ',' << num(rep.lower_value) << ','
         << num(rep.upper_value) << ',' << num(rep.window) << ',' << rep.level << ',' << report << '\n';
}

void cmd_renorm_check(const RunConfig& c, const SelfAffinePair& pair, Report& r) {
  if (static_cast<int>(c.box_lo.size()) != pair.dim() || static_cast<int>(c.box_hi.size()) != pair.dim())
    throw Error(ErrorCode::DimensionMismatch, "box corners must have one entry per axis");
  const auto sample = sample_self_similar_measure(pair, c.samples, *c.seed, c.burn_in);
  const auto chk = check_renormalization(pair, AxisBox{c.box_lo, c.box_hi}, *c.level, sample, c.budget);
  const bool ok = std::abs(chk.lhs - chk.rhs) <= 3.0 * chk.std_error;
  r.body << "lhs,rhs,std_error,within_3se\n"
         << num(chk.lhs) << ',' << num(chk.rhs) << ',' << num(chk.std_error) << ',' << (ok ? "true" : "false") << '\n';
}

SelfAffinePair load_pair(const RunConfig& c) { return load_pair_spec(c.pair_path).pair; }

}  // namespace

void validate(const RunConfig& c) {
  static const std::vector<std::string> commands{"expand", "check",           "density",     "sdensity",
                                                 "cantor", "raster",          "classify-origin", "renorm-check"};
  if (std::find(commands.begin(), commands.end(), c.command) == commands.end())
    throw UsageError("unknown command '" + c.command + "'");
  if (needs_pair(c.command) && c.pair_path.empty()) throw UsageError(c.command + ": --pair is required");

  const bool needs_level = c.command != "raster" && c.command != "cantor";
  if (needs_level && !c.level) throw UsageError(c.command + ": --level is required");
  if (c.level && *c.level < 0) throw UsageError("--level must be non-negative");
  if (c.command == "renorm-check" && c.level && *c.level < 1) throw UsageError("--level must be positive for renorm-check");
  if (c.reference_level && c.level && *c.reference_level <= *c.level)
    throw UsageError("--reference-level must exceed --level");
  if (c.budget == 0) throw UsageError("--budget must be positive");

  auto check_schedule = [](const std::string& text, const char* flag) {
    if (text.empty()) return;
    try {
      Schedule::parse(text);
    } catch (const Error& e) {
      throw UsageError(std::string(flag) + ": " + e.what());
    }
  };
  check_schedule(c.windows, "--windows");
  check_schedule(c.thresholds, "--thresholds");
  if (c.s && !(*c.s > 0.0 && std::isfinite(*c.s))) throw UsageError("--s must be positive");

  if (c.command == "raster") {
    if (c.resolution < 16) throw UsageError("--resolution must be at least 16");
    if (c.max_iters < 1) throw UsageError("--max-iters must be positive");
  }
  if (c.command == "renorm-check") {
    if (!c.seed) throw UsageError("renorm-check: --seed is required");
    if (c.samples == 0) throw UsageError("--samples must be positive");
    if (c.box_lo.empty() || c.box_hi.empty()) throw UsageError("renorm-check: --lo and --hi are required");
    if (c.box_lo.size() != c.box_hi.size()) throw UsageError("--lo and --hi must have the same length");
    for (std::size_t i = 0; i < c.box_lo.size(); ++i)
      if (!(c.box_lo[i] <= c.box_hi[i])) throw UsageError("--lo must not exceed --hi");
  }
  if (c.command == "cantor") {
    if (!c.cantor_n || !c.cantor_d) throw UsageError("cantor: --N and --d are required");
    if (!(*c.cantor_n >= 3.0)) throw UsageError("--N must be at least 3");
    if (!(*c.cantor_d > 0.0)) throw UsageError("--d must be positive");
    const auto& op = c.cantor_op;
    if (op != "count" && op != "hmeasure" && op != "sequence" && op != "dominance")
      throw UsageError("--op must be one of count, hmeasure, sequence, dominance");
    if (op == "count" && c.coeffs.empty()) throw UsageError("cantor count: --coeffs is required");
    if (op == "sequence" && c.m_max < 1) throw UsageError("--m-max must be positive");
    if (op == "dominance" && !c.level) throw UsageError("cantor dominance: --level is required");
  }
}

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  Report r;
  try {
    describe_config(c, r);
    if (c.command == "cantor") {
      cmd_cantor(c, r);
    } else {
      const auto pair = load_pair(c);
      if (c.command == "expand") cmd_expand(c, pair, r);
      else if (c.command == "check") cmd_check(c, pair, r);
      else if (c.command == "density") cmd_density(c, pair, r);
      else if (c.command == "sdensity") cmd_sdensity(c, pair, r);
      else if (c.command == "raster") cmd_raster(c, pair, r);
      else if (c.command == "classify-origin") cmd_classify_origin(c, pair, r);
      else cmd_renorm_check(c, pair, r);
    }
  } catch (const Error& e) {
    err << "saft: " << e.what() << '\n';
    return kExitDomainError;
  }

  std::ostringstream text;
  if (!r.pbm)
    for (const auto& line : r.comment_lines()) text << "# " << line << '\n';
  text << r.body.str();

  if (c.output.empty() || c.output == "-") {
    out << text.str();
    out.flush();
  } else {
    std::ofstream file(c.output, std::ios::binary);
    if (!(file << text.str())) {
      err << "saft: cannot write '" << c.output << "'\n";
      return kExitDomainError;
    }
  }
  return kExitOk;
}

std::optional<RunConfig> parse_command_line(int argc, const char* const* argv, std::ostream& out) {
  RunConfig c;
  CLI::App app{"Measures of self-affine sets from digit expansions", "saft"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("saft ") + kVersion);

  std::optional<int> level, reference_level;
  std::optional<double> s, cantor_n, cantor_d;
  std::optional<std::uint64_t> seed;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-o,--output", c.output, "Output file (default: standard output)");
    sub->add_option("--budget", c.budget, "Maximum total mass m^k to enumerate");
  };
  auto add_pair = [&](CLI::App* sub) { sub->add_option("--pair", c.pair_path, "Pair spec file")->required(); };
  auto add_level = [&](CLI::App* sub, bool required) {
    auto* o = sub->add_option("--level", level, "Expansion level k");
    if (required) o->required();
  };

  auto* expand = app.add_subcommand("expand", "Enumerate the level-k expansion measure");
  add_pair(expand);
  add_level(expand, true);
  add_common(expand);

  auto* check = app.add_subcommand("check", "Collision and separation diagnostics");
  add_pair(check);
  add_level(check, true);
  add_common(check);

  for (auto* sub : {app.add_subcommand("density", "Upper and lower Beurling density profiles"),
                    app.add_subcommand("classify-origin", "Is the origin interior to the tile")}) {
    add_pair(sub);
    add_level(sub, true);
    sub->add_option("--windows", c.windows, "Window schedule geo:a,b,n or lin:a,b,n (default: natural)");
    sub->add_option("--reference-level", reference_level, "Level used to certify lower-density windows");
    add_common(sub);
  }

  auto* sdens = app.add_subcommand("sdensity", "Upper s-density profile over intervals");
  add_pair(sdens);
  add_level(sdens, true);
  sdens->add_option("--thresholds", c.thresholds, "Diameter thresholds geo:a,b,n or lin:a,b,n");
  sdens->add_option("--s", s, "Exponent (default: similarity dimension)");
  add_common(sdens);

  auto* cantor = app.add_subcommand("cantor", "Closed forms for the pair (N, {0, d})");
  cantor->add_option("--N", cantor_n, "Dilation N >= 3")->required();
  cantor->add_option("--d", cantor_d, "Digit d > 0")->required();
  cantor->add_option("--op", c.cantor_op, "count | hmeasure | sequence | dominance")->required();
  cantor->add_option("--coeffs", c.coeffs, "Coefficients c_1..c_m for count")->delimiter(',');
  cantor->add_option("--m-max", c.m_max, "Sequence length");
  add_level(cantor, false);
  add_common(cantor);

  auto* raster = app.add_subcommand("raster", "Outer raster approximation of the attractor");
  add_pair(raster);
  raster->add_option("--resolution", c.resolution, "Cells per axis");
  raster->add_option("--max-iters", c.max_iters, "Hutchinson iterations");
  add_common(raster);

  auto* renorm = app.add_subcommand("renorm-check", "Chaos-game check of the renormalization identity");
  add_pair(renorm);
  add_level(renorm, true);
  renorm->add_option("--seed", seed, "Random seed")->required();
  renorm->add_option("--samples", c.samples, "Sample count");
  renorm->add_option("--burn-in", c.burn_in, "Discarded initial iterates");
  renorm->add_option("--lo", c.box_lo, "Box lower corner")->delimiter(',')->required();
  renorm->add_option("--hi", c.box_hi, "Box upper corner")->delimiter(',')->required();
  add_common(renorm);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return std::nullopt;
  } catch (const CLI::CallForVersion&) {
    out << "saft " << kVersion << '\n';
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  for (auto* sub : app.get_subcommands()) c.command = sub->get_name();
  c.level = level;
  c.reference_level = reference_level;
  c.s = s;
  c.cantor_n = cantor_n;
  c.cantor_d = cantor_d;
  c.seed = seed;
  validate(c);
  return c;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::optional<RunConfig> config;
  try {
    config = parse_command_line(argc, argv, out);
  } catch (const UsageError& e) {
    err << "saft: " << e.what() << "\nRun 'saft --help' for usage.\n";
    return kExitUsageError;
  }
  if (!config) return kExitOk;
  return run(*config, out, err);
}

}  // namespace saft::cli
