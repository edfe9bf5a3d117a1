#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "cli.hpp"
#include "pair_spec.hpp"
#include "saft/error.hpp"
#include "saft/version.hpp"

using namespace saft;
using namespace saft::cli;

namespace {

struct Result {
  int status;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "saft");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int status = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

std::string pair_file(const std::string& name) { return std::string(SAFT_TEST_DATA_DIR) + "/" + name; }

std::string temp_file(const std::string& name, const std::string& contents) {
  const auto path = std::filesystem::temp_directory_path() / ("saft_test_" + name);
  std::ofstream(path) << contents;
  return path.string();
}

int parse_error_line(const std::string& text) {
  try {
    parse_pair_spec(text);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
    const std::string what = e.what();
    const auto pos = what.find("line ");
    REQUIRE(pos != std::string::npos);
    return std::stoi(what.substr(pos + 5));
  }
  FAIL("expected ParseError");
  return -1;
}

std::vector<std::string> data_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);)
    if (!l.empty() && l[0] != '#') lines.push_back(l);
  return lines;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("smallest pair spec") {
  const auto spec = parse_pair_spec("dim 1\nmatrix\n2\ndigits\n0\n1\n");
  CHECK(spec.pair.dim() == 1);
  CHECK(spec.pair.matrix.matrix(0, 0) == 2.0);
  CHECK(spec.pair.m() == 2);
  CHECK(spec.pair.regime == Regime::TileCandidate);
  CHECK_FALSE(spec.cantor);
}

TEST_CASE("twin dragon spec with comments and rationals") {
  const auto spec = parse_pair_spec("# twin dragon\ndim 2\n\nmatrix\n1 -1  # rotation by 45 degrees\n1 1\ndigits\n0 0\n2/2 0\n");
  CHECK(spec.pair.dim() == 2);
  CHECK(spec.pair.matrix.det_abs == doctest::Approx(2.0));
  CHECK(spec.pair.digits.digits[1] == Vector{1.0, 0.0});
  CHECK(detect_similarity(spec.pair).sim_dimension == doctest::Approx(2.0));

  const auto half = parse_pair_spec("dim 1\nmatrix\n3/2\ndigits\n0\n1\n");
  CHECK(half.pair.matrix.matrix(0, 0) == 1.5);
  CHECK(half.pair.regime == Regime::Overfull);
}

TEST_CASE("cantor shortcut") {
  const auto spec = parse_pair_spec("cantor 3 2\n");
  REQUIRE(spec.cantor);
  CHECK(spec.cantor->dilation == 3.0);
  CHECK(spec.cantor->digit == 2.0);
  CHECK(spec.pair.digits.digits[1] == Vector{2.0});
}

TEST_CASE("parse errors carry line numbers") {
  CHECK(parse_error_line("dim 1\nmatrix\n2\n0\n1\n") == 4);
  CHECK(parse_error_line("dim 1\nmatrix\n2\n") == 4);
  CHECK(parse_error_line("") == 1);
  CHECK(parse_error_line("dims 2\n") == 1);
  CHECK(parse_error_line("dim 2\nmatrix\n1 -1\n1\ndigits\n0 0\n") == 4);
  CHECK(parse_error_line("dim 1\nmatrix\n2\ndigits\n0\nx\n") == 6);
  CHECK(parse_error_line("dim 1\nmatrix\n1/0\ndigits\n0\n") == 3);
  CHECK(parse_error_line("dim 1\nmatrix\n2\ndigits\n") == 5);
}

TEST_CASE("validation errors pass through") {
  try {
    parse_pair_spec("dim 1\nmatrix\n2\ndigits\n1\n2\n");
    FAIL("expected MissingZeroDigit");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MissingZeroDigit);
  }
  try {
    parse_pair_spec("dim 2\nmatrix\n1 0\n0 2\ndigits\n0 0\n");
    FAIL("expected NotExpanding");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotExpanding);
  }
}

TEST_CASE("render round trip") {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> entry(-3.0, 3.0);
  int tried = 0;
  for (int t = 0; t < 200 && tried < 50; ++t) {
    const int n = 1 + t % 2;
    std::vector<Vector> b(static_cast<std::size_t>(n), Vector(static_cast<std::size_t>(n)));
    for (auto& row : b)
      for (auto& v : row) v = entry(rng);
    std::vector<Vector> digits{Vector(static_cast<std::size_t>(n), 0.0)};
    for (int d = 0; d < 3; ++d) {
      Vector v(static_cast<std::size_t>(n));
      for (auto& x : v) x = entry(rng);
      digits.push_back(v);
    }
    SelfAffinePair pair;
    try {
      pair = validate_pair(b, digits);
    } catch (const Error&) {
      continue;
    }
    ++tried;
    const auto text = render_pair_spec(pair);
    const auto back = parse_pair_spec(text).pair;
    CHECK(back.matrix.matrix == pair.matrix.matrix);
    CHECK(back.digits.digits == pair.digits.digits);
    CHECK(back.regime == pair.regime);
    CHECK(render_pair_spec(back) == text);
  }
  CHECK(tried == 50);
}

TEST_CASE("hmeasure golden output") {
  const auto r = invoke({"cantor", "--N", "3", "--d", "2", "--op", "hmeasure"});
  CHECK(r.status == 0);
  CHECK(r.out.find(std::string("# saft ") + kVersion + "\n") == 0);
  CHECK(r.out.find("# op: hmeasure\n") != std::string::npos);
  const auto lines = data_lines(r.out);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "hausdorff_measure");
  CHECK(lines[1] == "1.000000000000");
}

TEST_CASE("check reports the collision") {
  const auto r = invoke({"check", "--pair", pair_file("collision4.txt"), "--level", "4"});
  CHECK(r.status == 0);
  CHECK(r.out.find("OSC-fails: collision at point 8 (level 2)\n") != std::string::npos);
  CHECK(r.out.find("# witness_verified: true\n") != std::string::npos);
}

TEST_CASE("density command") {
  const auto r = invoke({"density", "--pair", pair_file("binary.txt"), "--level", "16", "--windows", "geo:16,4096,9"});
  CHECK(r.status == 0);
  const auto lines = data_lines(r.out);
  REQUIRE(lines.size() == 10);
  CHECK(lines[0] == "N,level,sup,sup_count,argmax_1,inf,inf_count,argmin_1,trusted");
  CHECK(lines[9].rfind("4096,16,1.00024414062,4097,", 0) == 0);
  CHECK(r.out.find("# lebesgue: 0.999755918965\n") != std::string::npos);
  CHECK(r.out.find("# windows: geo:16,4096,9\n") != std::string::npos);

  const auto again = invoke({"density", "--pair", pair_file("binary.txt"), "--level", "16", "--windows", "geo:16,4096,9"});
  CHECK(again.out == r.out);
}

TEST_CASE("expand command writes a weighted csv") {
  const auto r = invoke({"expand", "--pair", pair_file("collision4.txt"), "--level", "2"});
  CHECK(r.status == 0);
  const auto lines = data_lines(r.out);
  REQUIRE(lines.size() == 16);
  CHECK(lines[0] == "x_1,weight");
  CHECK(std::find(lines.begin(), lines.end(), "8,2") != lines.end());

  const auto twin = invoke({"expand", "--pair", pair_file("twin_dragon.txt"), "--level", "1"});
  CHECK(data_lines(twin.out) == std::vector<std::string>{"x_1,x_2,weight", "0,0,1", "1,0,1"});
}

TEST_CASE("sdensity, classify-origin and cantor subcommands") {
  const auto s = invoke({"sdensity", "--pair", pair_file("cantor3.txt"), "--level", "8"});
  CHECK(s.status == 0);
  CHECK(s.out.find("# s_source: similarity\n") != std::string::npos);
  CHECK(data_lines(s.out)[0] == "r,level,sup,count,a,b");

  const auto user = invoke({"sdensity", "--pair", pair_file("cantor3.txt"), "--level", "8", "--s", "0.5"});
  CHECK(user.out.find("# s_source: user (exploratory)\n") != std::string::npos);

  const auto twin = invoke({"sdensity", "--pair", pair_file("twin_dragon.txt"), "--level", "4"});
  CHECK(twin.status == 1);

  const auto o = invoke({"classify-origin", "--pair", pair_file("negabinary.txt"), "--level", "12"});
  CHECK(o.status == 0);
  CHECK(data_lines(o.out)[1].rfind("interior,", 0) == 0);
  const auto b = invoke({"classify-origin", "--pair", pair_file("binary.txt"), "--level", "12"});
  CHECK(data_lines(b.out)[1].find("boundary (evidence at level 12)") != std::string::npos);
  const auto f = invoke({"classify-origin", "--pair", pair_file("cantor3.txt"), "--level", "6"});
  CHECK(f.status == 1);

  const auto count = invoke({"cantor", "--N", "3", "--d", "2", "--op", "count", "--coeffs", "2,0,2"});
  CHECK(data_lines(count.out) == std::vector<std::string>{"count,value", "6,20"});
  const auto dom = invoke({"cantor", "--N", "3", "--d", "2", "--op", "dominance", "--level", "5"});
  CHECK(data_lines(dom.out)[1].rfind("true,", 0) == 0);
  const auto seq = invoke({"cantor", "--N", "3", "--d", "2", "--op", "sequence", "--m-max", "3"});
  CHECK(data_lines(seq.out).size() == 4);
  const auto bad = invoke({"cantor", "--N", "3", "--d", "2", "--op", "count", "--coeffs", "2,1"});
  CHECK(bad.status == 1);
}

TEST_CASE("raster outputs") {
  const auto pbm = invoke({"raster", "--pair", pair_file("twin_dragon.txt"), "--resolution", "32"});
  CHECK(pbm.status == 0);
  CHECK(pbm.out.rfind("P1\n# saft ", 0) == 0);
  CHECK(pbm.out.find("\n32 32\n") != std::string::npos);

  const auto csv = invoke({"raster", "--pair", pair_file("three_halves.txt"), "--resolution", "64"});
  CHECK(csv.status == 0);
  CHECK(csv.out.find("# outer: 2") != std::string::npos);
  CHECK(data_lines(csv.out).size() == 65);
}

TEST_CASE("renorm-check needs a seed and is reproducible") {
  const std::vector<std::string> base{"renorm-check", "--pair", pair_file("cantor3.txt"), "--level", "1",
                                      "--lo",         "0",      "--hi",                   "2"};
  CHECK(invoke(base).status == 2);
  auto seeded = base;
  seeded.insert(seeded.end(), {"--seed", "9", "--samples", "20000"});
  const auto a = invoke(seeded);
  const auto b = invoke(seeded);
  CHECK(a.status == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("# seed: 9\n") != std::string::npos);
  CHECK(data_lines(a.out)[0] == "lhs,rhs,std_error,within_3se");
}

TEST_CASE("exit codes") {
  CHECK(invoke({}).status == 2);
  CHECK(invoke({"frobnicate"}).status == 2);
  CHECK(invoke({"density", "--pair", pair_file("binary.txt")}).status == 2);
  CHECK(invoke({"density", "--pair", pair_file("binary.txt"), "--level", "-3"}).status == 2);
  CHECK(invoke({"density", "--pair", pair_file("binary.txt"), "--level", "4", "--windows", "geo:9,3,2"}).status == 2);
  CHECK(invoke({"raster", "--pair", pair_file("binary.txt"), "--resolution", "8"}).status == 2);
  CHECK(invoke({"cantor", "--N", "2", "--d", "1", "--op", "hmeasure"}).status == 2);
  CHECK(invoke({"cantor", "--N", "3", "--d", "1", "--op", "nothing"}).status == 2);
  CHECK(invoke({"expand", "--pair", "/nonexistent/pair.txt", "--level", "2"}).status == 1);
  CHECK(invoke({"expand", "--pair", pair_file("binary.txt"), "--level", "30"}).status == 1);

  const auto bad = temp_file("bad.txt", "dim 1\nmatrix\n2\n0\n");
  const auto r = invoke({"expand", "--pair", bad, "--level", "2"});
  CHECK(r.status == 1);
  CHECK(r.err.find("line 4") != std::string::npos);

  CHECK(invoke({"--help"}).status == 0);
  const auto v = invoke({"--version"});
  CHECK(v.status == 0);
  CHECK(v.out == std::string("saft ") + kVersion + "\n");
}

TEST_CASE("output file") {
  const auto path = (std::filesystem::temp_directory_path() / "saft_test_out.csv").string();
  std::filesystem::remove(path);
  const auto r = invoke({"expand", "--pair", pair_file("binary.txt"), "--level", "3", "-o", path});
  CHECK(r.status == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str().find("# output: " + path + "\n") != std::string::npos);
  CHECK(data_lines(buf.str()).size() == 9);
}

TEST_CASE("validate rejects configs directly") {
  RunConfig c;
  c.command = "density";
  c.pair_path = "p.txt";
  CHECK_THROWS_AS(validate(c), UsageError);
  c.level = 4;
  CHECK_NOTHROW(validate(c));
  c.reference_level = 4;
  CHECK_THROWS_AS(validate(c), UsageError);
  c.reference_level = 6;
  c.budget = 0;
  CHECK_THROWS_AS(validate(c), UsageError);
}

}
