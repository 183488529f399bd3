#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "fls/error.hpp"
#include "fls/scalar.hpp"

namespace fls {

/// Dense matrix over an exact field. Row-major; matrices act on column
/// vectors from the left.
template <ExactField K>
class Matrix {
public:
  Matrix() : rows_(0), cols_(0) {}
  Matrix(std::size_t r, std::size_t c, const K& fill) : rows_(r), cols_(c), e_(r * c, fill) {}

  static Matrix identity(std::size_t n, const K& proto) {
    Matrix m(n, n, proto.zero());
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = proto.one();
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  K& at(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }
  const K& at(std::size_t i, std::size_t j) const { return e_[i * cols_ + j]; }

  /// Field context for constructing fresh scalars; matrix must be nonempty.
  const K& proto() const {
    if (e_.empty()) fail_pre("empty matrix has no field context");
    return e_[0];
  }

  bool is_square() const { return rows_ == cols_; }

  bool is_identity() const {
    if (!is_square()) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) {
        if (i == j && !at(i, j).is_one()) return false;
        if (i != j && !at(i, j).is_zero()) return false;
      }
    return true;
  }

  bool is_zero() const {
    for (const auto& v : e_)
      if (!v.is_zero()) return false;
    return true;
  }

  Matrix transpose() const {
    if (e_.empty()) return Matrix(cols_, rows_, K());
    Matrix t(cols_, rows_, proto().zero());
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
    return t;
  }

  Matrix row(std::size_t i) const {
    Matrix r(1, cols_, proto().zero());
    for (std::size_t j = 0; j < cols_; ++j) r.at(0, j) = at(i, j);
    return r;
  }

  /// Rows [lo, hi) as a new matrix.
  Matrix row_slice(std::size_t lo, std::size_t hi) const {
    Matrix r(hi - lo, cols_, e_.empty() ? K() : proto().zero());
    for (std::size_t i = lo; i < hi; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r.at(i - lo, j) = at(i, j);
    return r;
  }

  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    check_same_shape(a, b);
    Matrix r = a;
    for (std::size_t i = 0; i < r.e_.size(); ++i) r.e_[i] += b.e_[i];
    return r;
  }

  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    check_same_shape(a, b);
    Matrix r = a;
    for (std::size_t i = 0; i < r.e_.size(); ++i) r.e_[i] -= b.e_[i];
    return r;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) fail_pre("matrix product shape mismatch");
    Matrix r(a.rows_, b.cols_, a.proto().zero());
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const K& aik = a.at(i, k);
        if (aik.is_zero()) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) r.at(i, j) += aik * b.at(k, j);
      }
    return r;
  }

  friend Matrix operator*(const K& s, const Matrix& a) {
    Matrix r = a;
    for (auto& v : r.e_) v = s * v;
    return r;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.e_ == b.e_;
  }
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

  /// Lexicographic by shape then entries; used for canonical ordering only.
  friend bool operator<(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_) return a.rows_ < b.rows_;
    if (a.cols_ != b.cols_) return a.cols_ < b.cols_;
    for (std::size_t i = 0; i < a.e_.size(); ++i) {
      if (a.e_[i] < b.e_[i]) return true;
      if (b.e_[i] < a.e_[i]) return false;
    }
    return false;
  }

  std::string str() const {
    std::string s = "[";
    for (std::size_t i = 0; i < rows_; ++i) {
      s += i ? "; " : "";
      for (std::size_t j = 0; j < cols_; ++j) s += (j ? "," : "") + at(i, j).str();
    }
    return s + "]";
  }

private:
  static void check_same_shape(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) fail_pre("matrix shape mismatch");
  }

  std::size_t rows_, cols_;
  std::vector<K> e_;
};

template <ExactField K>
struct RrefResult {
  Matrix<K> mat;
  std::size_t rank;
  std::vector<std::size_t> pivots;  // pivot column per nonzero row
};

/// Unique reduced row-echelon form by Gauss-Jordan elimination.
template <ExactField K>
RrefResult<K> rref(Matrix<K> m) {
  std::size_t rank = 0;
  std::vector<std::size_t> pivots;
  for (std::size_t col = 0; col < m.cols() && rank < m.rows(); ++col) {
    std::size_t sel = rank;
    while (sel < m.rows() && m.at(sel, col).is_zero()) ++sel;
    if (sel == m.rows()) continue;
    if (sel != rank)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m.at(sel, j), m.at(rank, j));
    K piv = m.at(rank, col).inv();
    for (std::size_t j = col; j < m.cols(); ++j) m.at(rank, j) = piv * m.at(rank, j);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == rank || m.at(i, col).is_zero()) continue;
      K f = m.at(i, col);
      for (std::size_t j = col; j < m.cols(); ++j) m.at(i, j) -= f * m.at(rank, j);
    }
    pivots.push_back(col);
    ++rank;
  }
  return {std::move(m), rank, std::move(pivots)};
}

template <ExactField K>
std::size_t rank(const Matrix<K>& m) {
  return rref(m).rank;
}

/// Basis of {x : m x^T = 0}, one kernel vector per row, in RREF.
template <ExactField K>
Matrix<K> kernel_basis(const Matrix<K>& m) {
  auto r = rref(m);
  const K proto = (m.rows() > 0 && m.cols() > 0) ? m.proto() : K();
  std::size_t n = m.cols();
  std::vector<bool> is_pivot(n, false);
  for (auto p : r.pivots) is_pivot[p] = true;
  Matrix<K> ker(n - r.rank, n, proto.zero());
  std::size_t row = 0;
  for (std::size_t free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    ker.at(row, free) = proto.one();
    for (std::size_t i = 0; i < r.rank; ++i) ker.at(row, r.pivots[i]) = -r.mat.at(i, free);
    ++row;
  }
  return rref(std::move(ker)).mat;
}

template <ExactField K>
K det(Matrix<K> m) {
  if (!m.is_square()) fail_pre("determinant of non-square matrix");
  if (m.rows() == 0) fail_pre("determinant of empty matrix");
  K d = m.proto().one();
  std::size_t n = m.rows();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t sel = col;
    while (sel < n && m.at(sel, col).is_zero()) ++sel;
    if (sel == n) return m.proto().zero();
    if (sel != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m.at(sel, j), m.at(col, j));
      d = -d;
    }
    d *= m.at(col, col);
    K piv = m.at(col, col).inv();
    for (std::size_t i = col + 1; i < n; ++i) {
      if (m.at(i, col).is_zero()) continue;
      K f = piv * m.at(i, col);
      for (std::size_t j = col; j < n; ++j) m.at(i, j) -= f * m.at(col, j);
    }
  }
  return d;
}

template <ExactField K>
std::optional<Matrix<K>> try_inverse(const Matrix<K>& m) {
  if (!m.is_square()) fail_pre("inverse of non-square matrix");
  std::size_t n = m.rows();
  if (n == 0) fail_pre("inverse of empty matrix");
  Matrix<K> aug(n, 2 * n, m.proto().zero());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug.at(i, j) = m.at(i, j);
    aug.at(i, n + i) = m.proto().one();
  }
  auto r = rref(std::move(aug));
  // invertible iff every pivot sits in the left block (columns 0..n-1)
  if (r.rank < n || r.pivots[n - 1] >= n) return std::nullopt;
  Matrix<K> inv(n, n, m.proto().zero());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv.at(i, j) = r.mat.at(i, n + j);
  return inv;
}

template <ExactField K>
Matrix<K> inverse(const Matrix<K>& m) {
  auto inv = try_inverse(m);
  if (!inv) fail_pre("singular matrix");
  return *inv;
}

template <ExactField K>
bool is_invertible(const Matrix<K>& m) {
  // the empty matrix is the identity of GL_0
  return m.is_square() && rank(m) == m.rows();
}

/// Solve A X = B exactly; nullopt when inconsistent. When underdetermined
/// the free coordinates are set to zero.
template <ExactField K>
std::optional<Matrix<K>> solve(const Matrix<K>& a, const Matrix<K>& b) {
  if (a.rows() != b.rows()) fail_pre("solve: shape mismatch");
  std::size_t n = a.cols(), m = b.cols();
  Matrix<K> aug(a.rows(), n + m, a.proto().zero());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < n; ++j) aug.at(i, j) = a.at(i, j);
    for (std::size_t j = 0; j < m; ++j) aug.at(i, n + j) = b.at(i, j);
  }
  auto r = rref(std::move(aug));
  Matrix<K> x(n, m, a.proto().zero());
  for (std::size_t i = 0; i < r.rank; ++i) {
    if (r.pivots[i] >= n) return std::nullopt;  // pivot in RHS block: inconsistent
    for (std::size_t j = 0; j < m; ++j) x.at(r.pivots[i], j) = r.mat.at(i, n + j);
  }
  return x;
}

/// A B A^-1 B^-1.
template <ExactField K>
Matrix<K> commutator(const Matrix<K>& a, const Matrix<K>& b) {
  return a * b * inverse(a) * inverse(b);
}

}  // namespace fls
