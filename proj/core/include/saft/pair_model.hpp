#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace saft {

using Vector = std::vector<double>;

/// Square real matrix stored row-major. Small and copyable; dimensions in this
/// library are single digits.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int dim, std::vector<double> entries);

  static Matrix identity(int dim);
  static Matrix from_rows(const std::vector<Vector>& rows);

  int dim() const noexcept { return dim_; }
  double operator()(int row, int col) const { return entries_[static_cast<std::size_t>(row * dim_ + col)]; }
  std::span<const double> entries() const noexcept { return entries_; }

  Matrix operator*(const Matrix& rhs) const;
  Matrix transpose() const;

  void apply(std::span<const double> x, std::span<double> out) const;
  Vector apply(std::span<const double> x) const;

  /// Induced infinity norm (maximum absolute row sum).
  double inf_norm() const;

  bool operator==(const Matrix&) const = default;

 private:
  int dim_ = 0;
  std::vector<double> entries_;
};

/// Closed axis-aligned box.
struct AxisBox {
  Vector lo;
  Vector hi;

  bool contains(std::span<const double> x) const;
};

double determinant(const Matrix& m);

/// Throws Error{SingularMatrix} when `m` is not invertible.
Matrix inverse(const Matrix& m);

Matrix power(const Matrix& m, int p);

inline constexpr double kDetIntegerTolerance = 1e-9;
inline constexpr double kSimilarityTolerance = 1e-9;
inline constexpr int kMaxCertifiedPower = 64;

/// An invertible matrix certified expanding: some power p <= 64 of its inverse
/// has induced infinity norm below one.
struct ExpandingMatrix {
  Matrix matrix;
  Matrix inverse;
  double det_abs = 0.0;
  int certified_power = 0;
  double contraction = 0.0;  // ||inverse^certified_power||_inf < 1

  int dim() const noexcept { return matrix.dim(); }
};

/// Throws NotInvertible or NotExpanding.
ExpandingMatrix certify_expanding(const Matrix& b);

struct DigitSet {
  int dim = 0;
  std::vector<Vector> digits;

  std::size_t size() const noexcept { return digits.size(); }
};

enum class Regime { TileCandidate, Fractal, Overfull };

const char* to_string(Regime r) noexcept;

struct SelfAffinePair {
  ExpandingMatrix matrix;
  DigitSet digits;
  Regime regime = Regime::TileCandidate;

  int dim() const noexcept { return matrix.dim(); }
  std::size_t m() const noexcept { return digits.size(); }
};

/// Classifies m against |det B|; |det B| counts as an integer when it lies
/// within kDetIntegerTolerance of one.
Regime classify_regime(double det_abs, std::size_t m);

/// Builds a validated pair. Errors, in the order checked: DimensionMismatch,
/// NotInvertible, NotExpanding, MissingZeroDigit, DuplicateDigit.
SelfAffinePair validate_pair(const std::vector<Vector>& matrix_rows,
                             const std::vector<Vector>& digit_rows);

/// Convenience for the one-dimensional case.
SelfAffinePair validate_pair_1d(double b, const std::vector<double>& digits);

struct SimilarityInfo {
  bool is_similarity = false;
  double rho = 0.0;
  double sim_dimension = 0.0;
};

SimilarityInfo detect_similarity(const SelfAffinePair& pair);

}  // namespace saft
