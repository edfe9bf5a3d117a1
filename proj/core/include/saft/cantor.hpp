#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "saft/expansion.hpp"
#include "saft/pair_model.hpp"

namespace saft {

/// The two-digit family N K = K u (K + d) with N >= 3 and d > 0.
class CantorPair {
 public:
  CantorPair(double dilation, double digit);  // throws InvalidArgument

  double dilation() const noexcept { return n_; }
  double digit() const noexcept { return d_; }
  /// ln 2 / ln N
  double s() const noexcept { return s_; }

  SelfAffinePair to_pair() const;

 private:
  double n_;
  double d_;
  double s_;
};

/// Size of D_inf n [0, b] for b = sum_j N^j r_j, r_j in {0, d}:
/// sum_j 2^j (r_j / d) + 1. Throws InvalidCoefficient.
std::uint64_t count_upto(const CantorPair& cp, std::span<const double> coeffs);

/// b = sum_j N^j r_j
double coefficient_value(const CantorPair& cp, std::span<const double> coeffs);

/// mu_k([a, b]) by enumeration.
std::uint64_t interval_count(const CantorPair& cp, int k, double a, double b, std::uint64_t cap = kDefaultMassBudget);

struct DominanceViolation {
  double a = 0.0;
  double b = 0.0;
  std::uint64_t count = 0;         // mu_k([a, b])
  std::uint64_t origin_count = 0;  // mu_k([0, b - a])
};

struct DominanceResult {
  bool holds = true;
  std::optional<DominanceViolation> counterexample;
  std::size_t intervals_checked = 0;
};

/// mu_k([a, b]) <= mu_k([0, b - a]) over every interval with endpoints in
/// supp(mu_k); that family covers all intervals since counts only depend on
/// the minimal point-bounded shrink.
DominanceResult translation_dominance_check(const CantorPair& cp, int k, std::uint64_t cap = kDefaultMassBudget);

struct SDensitySequence {
  std::vector<double> values;  // v_1 .. v_{m_max}
  double limit = 0.0;          // ((N - 1) / d)^s
};

/// v_m = 2^m / (((N^m - 1) / (N - 1)) d)^s, the s-density of [0, d (N^m - 1)/(N - 1)].
SDensitySequence cantor_sdensity_sequence(const CantorPair& cp, int m_max);

/// ((N - 1) / d)^{-s}
double cantor_hausdorff(const CantorPair& cp);

}  // namespace saft
