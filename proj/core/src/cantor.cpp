#include "saft/cantor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "saft/error.hpp"

namespace saft {

CantorPair::CantorPair(double dilation, double digit) : n_(dilation), d_(digit), s_(0.0) {
  if (!(dilation >= 3.0) || !std::isfinite(dilation))
    throw Error(ErrorCode::InvalidArgument, "Cantor dilation N must be >= 3");
  if (!(digit > 0.0) || !std::isfinite(digit)) throw Error(ErrorCode::InvalidArgument, "Cantor digit d must be > 0");
  s_ = std::log(2.0) / std::log(n_);
}

SelfAffinePair CantorPair::to_pair() const { return validate_pair_1d(n_, {0.0, d_}); }

namespace {

void check_coeffs(const CantorPair& cp, std::span<const double> coeffs) {
  if (coeffs.empty()) throw Error(ErrorCode::InvalidCoefficient, "need at least one coefficient");
  if (coeffs.size() > 62) throw Error(ErrorCode::InvalidCoefficient, "at most 62 coefficients");
  for (std::size_t j = 0; j < coeffs.size(); ++j)
    if (coeffs[j] != 0.0 && coeffs[j] != cp.digit())
      throw Error(ErrorCode::InvalidCoefficient,
                  "r_" + std::to_string(j) + " = " + std::to_string(coeffs[j]) + " is not in {0, d}");
}

}  // namespace

std::uint64_t count_upto(const CantorPair& cp, std::span<const double> coeffs) {
  check_coeffs(cp, coeffs);
  std::uint64_t count = 1;
  for (std::size_t j = 0; j < coeffs.size(); ++j)
    if (coeffs[j] != 0.0) count += std::uint64_t{1} << j;
  return count;
}

double coefficient_value(const CantorPair& cp, std::span<const double> coeffs) {
  check_coeffs(cp, coeffs);
  double b = 0.0, p = 1.0;
  for (double r : coeffs) {
    b += p * r;
    p *= cp.dilation();
  }
  return b;
}

std::uint64_t interval_count(const CantorPair& cp, int k, double a, double b, std::uint64_t cap) {
  if (b < a) throw Error(ErrorCode::InvalidArgument, "interval_count needs a <= b");
  const auto mu = expand_level(cp.to_pair(), k, cap);
  const double tol = 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
  std::uint64_t count = 0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double x = mu.coord(i, 0);
    if (x >= a - tol && x <= b + tol) count += mu.weight(i);
  }
  return count;
}

DominanceResult translation_dominance_check(const CantorPair& cp, int k, std::uint64_t cap) {
  const auto mu = expand_level(cp.to_pair(), k, cap);
  const std::size_t m = mu.size();
  std::vector<double> xs(m);
  std::vector<std::uint64_t> prefix(m + 1, 0);
  for (std::size_t i = 0; i < m; ++i) {
    xs[i] = mu.coord(i, 0);
    prefix[i + 1] = prefix[i] + mu.weight(i);
  }
  // supp(mu_k) starts at 0, so [0, L] is a prefix.
  auto origin_count = [&](double len) {
    const double tol = 1e-9 * std::max(1.0, len);
    return prefix[static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), len + tol) - xs.begin())];
  };

  DominanceResult out;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) {
      ++out.intervals_checked;
      const std::uint64_t c = prefix[j + 1] - prefix[i];
      const std::uint64_t o = origin_count(xs[j] - xs[i]);
      if (c > o) {
        out.holds = false;
        out.counterexample = DominanceViolation{xs[i], xs[j], c, o};
        return out;
      }
    }
  return out;
}

SDensitySequence cantor_sdensity_sequence(const CantorPair& cp, int m_max) {
  if (m_max < 1) throw Error(ErrorCode::InvalidArgument, "m_max must be >= 1");
  const double n = cp.dilation(), d = cp.digit(), s = cp.s();
  SDensitySequence out;
  for (int m = 1; m <= m_max; ++m) {
    const double len = (std::pow(n, m) - 1.0) / (n - 1.0) * d;
    out.values.push_back(std::pow(2.0, m) / std::pow(len, s));
  }
  out.limit = std::pow((n - 1.0) / d, s);
  return out;
}

double cantor_hausdorff(const CantorPair& cp) { return std::pow((cp.dilation() - 1.0) / cp.digit(), -cp.s()); }

}  // namespace saft
