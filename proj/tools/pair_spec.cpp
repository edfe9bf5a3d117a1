#include "pair_spec.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "saft/error.hpp"

namespace saft::cli {

namespace {

struct Line {
  int number;
  std::vector<std::string> tokens;
};

[[noreturn]] void fail(int line, const std::string& what) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what);
}

double parse_number(const std::string& tok, int line) {
  const auto slash = tok.find('/');
  auto parse_plain = [&](const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) fail(line, "not a number: '" + tok + "'");
    return v;
  };
  if (slash == std::string::npos) return parse_plain(tok);
  const double num = parse_plain(tok.substr(0, slash));
  const double den = parse_plain(tok.substr(slash + 1));
  if (den == 0.0) fail(line, "zero denominator in '" + tok + "'");
  return num / den;
}

std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> lines;
  std::istringstream in{std::string(text)};
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream words(raw);
    Line l{number, {}};
    for (std::string w; words >> w;) l.tokens.push_back(w);
    if (!l.tokens.empty()) lines.push_back(std::move(l));
  }
  return lines;
}

Vector parse_row(const Line& l, std::size_t n) {
  if (l.tokens.size() != n)
    fail(l.number, "expected " + std::to_string(n) + " values, found " + std::to_string(l.tokens.size()));
  Vector row;
  for (const auto& t : l.tokens) row.push_back(parse_number(t, l.number));
  return row;
}

}  // namespace

PairSpecFile parse_pair_spec(std::string_view text, std::string path) {
  const auto lines = tokenize(text);
  if (lines.empty()) throw Error(ErrorCode::ParseError, "line 1: empty pair spec");

  PairSpecFile out;
  out.path = std::move(path);
  const Line& head = lines.front();

  if (head.tokens[0] == "cantor") {
    if (head.tokens.size() != 3) fail(head.number, "expected 'cantor N d'");
    if (lines.size() > 1) fail(lines[1].number, "unexpected content after cantor shortcut");
    const double n = parse_number(head.tokens[1], head.number);
    const double d = parse_number(head.tokens[2], head.number);
    out.cantor = CantorShortcut{n, d};
    out.pair = validate_pair_1d(n, {0.0, d});
    return out;
  }

  if (head.tokens[0] != "dim" || head.tokens.size() != 2) fail(head.number, "expected 'dim n'");
  const double dim_value = parse_number(head.tokens[1], head.number);
  if (dim_value < 1 || dim_value != static_cast<double>(static_cast<int>(dim_value)))
    fail(head.number, "dimension must be a positive integer");
  const auto n = static_cast<std::size_t>(dim_value);

  std::size_t i = 1;
  if (i >= lines.size() || lines[i].tokens != std::vector<std::string>{"matrix"})
    fail(i < lines.size() ? lines[i].number : head.number + 1, "expected 'matrix'");
  ++i;
  std::vector<Vector> matrix;
  for (std::size_t r = 0; r < n; ++r, ++i) {
    if (i >= lines.size()) fail(lines.back().number + 1, "matrix has fewer than " + std::to_string(n) + " rows");
    matrix.push_back(parse_row(lines[i], n));
  }
  if (i >= lines.size() || lines[i].tokens != std::vector<std::string>{"digits"})
    fail(i < lines.size() ? lines[i].number : lines.back().number + 1, "expected 'digits'");
  ++i;
  std::vector<Vector> digits;
  for (; i < lines.size(); ++i) digits.push_back(parse_row(lines[i], n));
  if (digits.empty()) fail(lines.back().number + 1, "no digits listed");

  out.pair = validate_pair(matrix, digits);
  return out;
}

PairSpecFile load_pair_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open pair spec '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_pair_spec(buf.str(), path);
}

std::string render_pair_spec(const SelfAffinePair& pair) {
  const int n = pair.dim();
  std::string out = "dim " + std::to_string(n) + "\nmatrix\n";
  char buf[40];
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", pair.matrix.matrix(r, c));
      if (c) out += ' ';
      out += buf;
    }
    out += '\n';
  }
  out += "digits\n";
  for (const auto& d : pair.digits.digits) {
    for (std::size_t c = 0; c < d.size(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", d[c]);
      if (c) out += ' ';
      out += buf;
    }
    out += '\n';
  }
  return out;
}

}  // namespace saft::cli
