#include "saft/pair_model.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

#include "saft/error.hpp"
#include "saft/point_set.hpp"

namespace saft {

namespace {

Eigen::MatrixXd to_eigen(const Matrix& m) {
  const int n = m.dim();
  Eigen::MatrixXd out(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) out(r, c) = m(r, c);
  return out;
}

Matrix from_eigen(const Eigen::MatrixXd& e) {
  const int n = static_cast<int>(e.rows());
  std::vector<double> entries(static_cast<std::size_t>(n * n));
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) entries[static_cast<std::size_t>(r * n + c)] = e(r, c);
  return Matrix(n, std::move(entries));
}

double inf_distance(const Vector& a, const Vector& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

Matrix::Matrix(int dim, std::vector<double> entries) : dim_(dim), entries_(std::move(entries)) {
  if (dim < 1 || entries_.size() != static_cast<std::size_t>(dim * dim))
    throw Error(ErrorCode::DimensionMismatch, "matrix needs dim*dim entries");
}

Matrix Matrix::identity(int dim) {
  std::vector<double> e(static_cast<std::size_t>(dim * dim), 0.0);
  for (int i = 0; i < dim; ++i) e[static_cast<std::size_t>(i * dim + i)] = 1.0;
  return Matrix(dim, std::move(e));
}

Matrix Matrix::from_rows(const std::vector<Vector>& rows) {
  const int n = static_cast<int>(rows.size());
  std::vector<double> e;
  e.reserve(static_cast<std::size_t>(n * n));
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != n)
      throw Error(ErrorCode::DimensionMismatch,
                  "matrix row has " + std::to_string(row.size()) + " entries, expected " + std::to_string(n));
    e.insert(e.end(), row.begin(), row.end());
  }
  return Matrix(n, std::move(e));
}

Matrix Matrix::operator*(const Matrix& rhs) const {
  if (rhs.dim_ != dim_) throw Error(ErrorCode::DimensionMismatch, "matrix product");
  std::vector<double> out(entries_.size(), 0.0);
  for (int r = 0; r < dim_; ++r)
    for (int k = 0; k < dim_; ++k) {
      const double a = (*this)(r, k);
      for (int c = 0; c < dim_; ++c) out[static_cast<std::size_t>(r * dim_ + c)] += a * rhs(k, c);
    }
  return Matrix(dim_, std::move(out));
}

Matrix Matrix::transpose() const {
  std::vector<double> out(entries_.size());
  for (int r = 0; r < dim_; ++r)
    for (int c = 0; c < dim_; ++c) out[static_cast<std::size_t>(c * dim_ + r)] = (*this)(r, c);
  return Matrix(dim_, std::move(out));
}

void Matrix::apply(std::span<const double> x, std::span<double> out) const {
  for (int r = 0; r < dim_; ++r) {
    double acc = 0.0;
    for (int c = 0; c < dim_; ++c) acc += (*this)(r, c) * x[static_cast<std::size_t>(c)];
    out[static_cast<std::size_t>(r)] = acc;
  }
}

Vector Matrix::apply(std::span<const double> x) const {
  Vector out(static_cast<std::size_t>(dim_));
  apply(x, out);
  return out;
}

double Matrix::inf_norm() const {
  double best = 0.0;
  for (int r = 0; r < dim_; ++r) {
    double row = 0.0;
    for (int c = 0; c < dim_; ++c) row += std::abs((*this)(r, c));
    best = std::max(best, row);
  }
  return best;
}

bool AxisBox::contains(std::span<const double> x) const {
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] < lo[i] || x[i] > hi[i]) return false;
  return true;
}

double determinant(const Matrix& m) { return to_eigen(m).fullPivLu().determinant(); }

Matrix inverse(const Matrix& m) {
  const auto lu = to_eigen(m).fullPivLu();
  if (!lu.isInvertible()) throw Error(ErrorCode::SingularMatrix, "matrix is not invertible");
  return from_eigen(lu.inverse());
}

Matrix power(const Matrix& m, int p) {
  Matrix out = Matrix::identity(m.dim());
  for (int i = 0; i < p; ++i) out = out * m;
  return out;
}

ExpandingMatrix certify_expanding(const Matrix& b) {
  const auto lu = to_eigen(b).fullPivLu();
  if (!lu.isInvertible()) throw Error(ErrorCode::NotInvertible, "|det B| = 0");

  ExpandingMatrix out;
  out.matrix = b;
  out.inverse = from_eigen(lu.inverse());
  out.det_abs = std::abs(lu.determinant());

  Matrix p = out.inverse;
  for (int k = 1; k <= kMaxCertifiedPower; ++k) {
    const double norm = p.inf_norm();
    if (norm < 1.0) {
      out.certified_power = k;
      out.contraction = norm;
      return out;
    }
    p = p * out.inverse;
  }
  throw Error(ErrorCode::NotExpanding,
              "no power of B^-1 up to " + std::to_string(kMaxCertifiedPower) + " is a contraction");
}

const char* to_string(Regime r) noexcept {
  switch (r) {
    case Regime::TileCandidate: return "tile-candidate";
    case Regime::Fractal: return "fractal";
    case Regime::Overfull: return "overfull";
  }
  return "unknown";
}

Regime classify_regime(double det_abs, std::size_t m) {
  const double md = static_cast<double>(m);
  const double nearest = std::round(det_abs);
  if (std::abs(det_abs - nearest) <= kDetIntegerTolerance) {
    if (md == nearest) return Regime::TileCandidate;
    return md < nearest ? Regime::Fractal : Regime::Overfull;
  }
  return md < det_abs ? Regime::Fractal : Regime::Overfull;
}

SelfAffinePair validate_pair(const std::vector<Vector>& matrix_rows, const std::vector<Vector>& digit_rows) {
  if (matrix_rows.empty()) throw Error(ErrorCode::DimensionMismatch, "empty matrix");
  if (digit_rows.empty()) throw Error(ErrorCode::DimensionMismatch, "empty digit set");
  const Matrix b = Matrix::from_rows(matrix_rows);
  const int n = b.dim();
  for (const auto& d : digit_rows)
    if (static_cast<int>(d.size()) != n)
      throw Error(ErrorCode::DimensionMismatch,
                  "digit has " + std::to_string(d.size()) + " coordinates, matrix is " + std::to_string(n) + "x" +
                      std::to_string(n));

  SelfAffinePair pair;
  pair.matrix = certify_expanding(b);

  const Vector zero(static_cast<std::size_t>(n), 0.0);
  const bool has_zero = std::any_of(digit_rows.begin(), digit_rows.end(),
                                    [&](const Vector& d) { return inf_distance(d, zero) <= kMergeTolerance; });
  if (!has_zero) throw Error(ErrorCode::MissingZeroDigit, "digit set must contain 0");

  for (std::size_t i = 0; i < digit_rows.size(); ++i)
    for (std::size_t j = i + 1; j < digit_rows.size(); ++j)
      if (inf_distance(digit_rows[i], digit_rows[j]) <= kMergeTolerance)
        throw Error(ErrorCode::DuplicateDigit,
                    "digits " + std::to_string(i) + " and " + std::to_string(j) + " coincide");

  pair.digits.dim = n;
  pair.digits.digits = digit_rows;
  pair.regime = classify_regime(pair.matrix.det_abs, digit_rows.size());
  return pair;
}

SelfAffinePair validate_pair_1d(double b, const std::vector<double>& digits) {
  std::vector<Vector> rows;
  rows.reserve(digits.size());
  for (double d : digits) rows.push_back({d});
  return validate_pair({{b}}, rows);
}

SimilarityInfo detect_similarity(const SelfAffinePair& pair) {
  const Matrix& b = pair.matrix.matrix;
  const Matrix gram = b.transpose() * b;
  const int n = b.dim();
  const double scale = gram(0, 0);
  SimilarityInfo info;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      const double expected = r == c ? scale : 0.0;
      if (std::abs(gram(r, c) - expected) > kSimilarityTolerance) return info;
    }
  if (!(scale > 0.0)) return info;
  info.is_similarity = true;
  info.rho = std::sqrt(scale);
  info.sim_dimension = std::log(static_cast<double>(pair.m())) / std::log(info.rho);
  return info;
}

}  // namespace saft
