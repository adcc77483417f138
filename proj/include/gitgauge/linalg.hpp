#pragma once

#include "gitgauge/rational.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace gitgauge {

using RationalMatrix = std::vector<RationalVector>;

inline void require_dimension(const RationalVector& v, std::size_t r, const char* what) {
  if (v.size() != r)
    throw input_error(std::string(what) + ": expected dimension " + std::to_string(r) + ", got " +
                      std::to_string(v.size()));
}

inline Rational dot(const RationalVector& a, const RationalVector& b) {
  if (a.size() != b.size()) throw input_error("dot: dimension mismatch");
  Rational s;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline RationalVector add(const RationalVector& a, const RationalVector& b) {
  if (a.size() != b.size()) throw input_error("add: dimension mismatch");
  RationalVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

inline RationalVector sub(const RationalVector& a, const RationalVector& b) {
  if (a.size() != b.size()) throw input_error("sub: dimension mismatch");
  RationalVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

inline RationalVector scale(const RationalVector& a, const Rational& s) {
  RationalVector out(a);
  for (auto& x : out) x *= s;
  return out;
}

inline bool is_zero(const RationalVector& v) {
  for (const auto& x : v)
    if (!x.is_zero()) return false;
  return true;
}

inline RationalVector mat_vec(const RationalMatrix& m, const RationalVector& v) {
  RationalVector out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) out[i] = dot(m[i], v);
  return out;
}

/// In-place Gauss-Jordan elimination; returns the pivot columns.
inline std::vector<std::size_t> row_reduce(RationalMatrix& a) {
  std::vector<std::size_t> pivots;
  if (a.empty()) return pivots;
  const std::size_t rows = a.size();
  const std::size_t cols = a.front().size();
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < rows; ++col) {
    std::size_t sel = row;
    while (sel < rows && a[sel][col].is_zero()) ++sel;
    if (sel == rows) continue;
    std::swap(a[sel], a[row]);
    Rational inv = Rational(1) / a[row][col];
    for (auto& x : a[row]) x *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == row || a[i][col].is_zero()) continue;
      Rational f = a[i][col];
      for (std::size_t j = col; j < cols; ++j) a[i][j] -= f * a[row][j];
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

inline std::size_t rank(RationalMatrix a) { return row_reduce(a).size(); }

/// Solves the square system a·x = b; empty optional when singular.
inline std::optional<RationalVector> solve(const RationalMatrix& a, const RationalVector& b) {
  const std::size_t n = a.size();
  RationalMatrix aug(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].size() != n) throw input_error("solve: matrix is not square");
    aug[i] = a[i];
    aug[i].push_back(b.at(i));
  }
  auto piv = row_reduce(aug);
  if (piv.size() != n || (n > 0 && piv.back() != n - 1)) return std::nullopt;
  RationalVector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = aug[i][n];
  return x;
}

inline std::optional<RationalMatrix> inverse(const RationalMatrix& a) {
  const std::size_t n = a.size();
  RationalMatrix aug(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].size() != n) throw input_error("inverse: matrix is not square");
    aug[i] = a[i];
    for (std::size_t j = 0; j < n; ++j) aug[i].push_back(Rational(i == j ? 1 : 0));
  }
  auto piv = row_reduce(aug);
  if (piv.size() != n || (n > 0 && piv.back() != n - 1)) return std::nullopt;
  RationalMatrix inv(n, RationalVector(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
  return inv;
}

inline Rational determinant(RationalMatrix a) {
  const std::size_t n = a.size();
  Rational det(1);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t sel = col;
    while (sel < n && a[sel][col].is_zero()) ++sel;
    if (sel == n) return Rational(0);
    if (sel != col) {
      std::swap(a[sel], a[col]);
      det = -det;
    }
    det *= a[col][col];
    for (std::size_t i = col + 1; i < n; ++i) {
      if (a[i][col].is_zero()) continue;
      Rational f = a[i][col] / a[col][col];
      for (std::size_t j = col; j < n; ++j) a[i][j] -= f * a[col][j];
    }
  }
  return det;
}

/// Dimension of the affine hull of a nonempty point set.
inline std::size_t affine_dimension(const std::vector<RationalVector>& points) {
  if (points.empty()) throw input_error("affine_dimension: empty point set");
  RationalMatrix diffs;
  for (std::size_t i = 1; i < points.size(); ++i) diffs.push_back(sub(points[i], points[0]));
  if (diffs.empty() || points[0].empty()) return 0;
  return rank(std::move(diffs));
}

/// Dimension of the linear span of a point set.
inline std::size_t span_dimension(const std::vector<RationalVector>& points) {
  if (points.empty() || points[0].empty()) return 0;
  return rank(RationalMatrix(points.begin(), points.end()));
}

/// Symmetric positive definite bilinear form on Q^r.
class InnerProduct {
public:
  InnerProduct() = default;

  explicit InnerProduct(RationalMatrix m) : matrix_(std::move(m)) {
    const std::size_t r = matrix_.size();
    for (std::size_t i = 0; i < r; ++i) {
      if (matrix_[i].size() != r) throw input_error("metric: matrix is not square");
      for (std::size_t j = 0; j < i; ++j)
        if (matrix_[i][j] != matrix_[j][i]) throw input_error("metric: matrix is not symmetric");
    }
    // Sylvester: all leading principal minors positive.
    for (std::size_t k = 1; k <= r; ++k) {
      RationalMatrix minor(k, RationalVector(k));
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) minor[i][j] = matrix_[i][j];
      if (determinant(std::move(minor)).sign() <= 0) throw input_error("metric: matrix is not positive definite");
    }
  }

  static InnerProduct identity(std::size_t r) {
    RationalMatrix m(r, RationalVector(r));
    for (std::size_t i = 0; i < r; ++i) m[i][i] = 1;
    return InnerProduct(std::move(m));
  }

  std::size_t dimension() const { return matrix_.size(); }
  const RationalMatrix& matrix() const { return matrix_; }

  bool is_identity() const {
    for (std::size_t i = 0; i < matrix_.size(); ++i)
      for (std::size_t j = 0; j < matrix_.size(); ++j)
        if (matrix_[i][j] != Rational(i == j ? 1 : 0)) return false;
    return true;
  }

  Rational operator()(const RationalVector& x, const RationalVector& y) const { return dot(x, mat_vec(matrix_, y)); }
  Rational norm2(const RationalVector& x) const { return (*this)(x, x); }

  /// x ↦ x^∨, the covector paired with x through the form.
  RationalVector lower(const RationalVector& x) const { return mat_vec(matrix_, x); }

  /// The induced form on the dual space (matrix inverse).
  InnerProduct dual() const {
    auto inv = inverse(matrix_);
    if (!inv) throw input_error("metric: singular matrix");
    InnerProduct out;
    out.matrix_ = std::move(*inv);
    return out;
  }

  friend bool operator==(const InnerProduct&, const InnerProduct&) = default;

private:
  RationalMatrix matrix_;
};

}  // namespace gitgauge
