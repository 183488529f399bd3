#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "fls/matrix.hpp"

namespace fls {

/// Subspace of k^n represented by its unique reduced-echelon row basis.
/// Canonical form makes subspaces directly comparable and sortable.
template <ExactField K>
class Subspace {
public:
  static Subspace zero(std::size_t ambient, const K& proto) {
    return Subspace(ambient, Matrix<K>(0, ambient, proto.zero()), proto);
  }

  static Subspace full(std::size_t ambient, const K& proto) {
    return Subspace(ambient, Matrix<K>::identity(ambient, proto), proto);
  }

  /// Span of the rows of m.
  static Subspace span_rows(const Matrix<K>& m, const K& proto) {
    auto r = rref(m);
    return Subspace(m.cols(), r.mat.row_slice(0, r.rank), proto);
  }

  std::size_t ambient() const { return ambient_; }
  std::size_t dim() const { return basis_.rows(); }
  const Matrix<K>& basis() const { return basis_; }
  const K& proto() const { return proto_; }

  bool is_zero() const { return dim() == 0; }
  bool is_full() const { return dim() == ambient_; }

  bool contains_vector(const Matrix<K>& v) const {
    if (v.rows() != 1 || v.cols() != ambient_) fail_pre("contains_vector: bad vector shape");
    if (is_zero()) return v.is_zero();
    Matrix<K> st(dim() + 1, ambient_, proto_.zero());
    copy_rows(st, 0, basis_);
    copy_rows(st, dim(), v);
    return rank(st) == dim();
  }

  bool contains(const Subspace& other) const {
    check_ambient(other);
    if (other.dim() > dim()) return false;
    if (other.is_zero()) return true;
    Matrix<K> st(dim() + other.dim(), ambient_, proto_.zero());
    copy_rows(st, 0, basis_);
    copy_rows(st, dim(), other.basis_);
    return rank(st) == dim();
  }

  Subspace sum(const Subspace& other) const {
    check_ambient(other);
    Matrix<K> st(dim() + other.dim(), ambient_, proto_.zero());
    copy_rows(st, 0, basis_);
    copy_rows(st, dim(), other.basis_);
    return span_rows(st, proto_);
  }

  /// Zassenhaus: rref of [A|A; B|0]; rows with zero left half carry the
  /// intersection on the right.
  Subspace intersect(const Subspace& other) const {
    check_ambient(other);
    std::size_t da = dim(), db = other.dim(), n = ambient_;
    if (da == 0 || db == 0) return zero(n, proto_);
    Matrix<K> z(da + db, 2 * n, proto_.zero());
    for (std::size_t i = 0; i < da; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        z.at(i, j) = basis_.at(i, j);
        z.at(i, n + j) = basis_.at(i, j);
      }
    for (std::size_t i = 0; i < db; ++i)
      for (std::size_t j = 0; j < n; ++j) z.at(da + i, j) = other.basis_.at(i, j);
    auto r = rref(std::move(z));
    Matrix<K> out(da + db, n, proto_.zero());
    std::size_t cnt = 0;
    for (std::size_t i = 0; i < r.rank; ++i) {
      if (r.pivots[i] < n) continue;
      for (std::size_t j = 0; j < n; ++j) out.at(cnt, j) = r.mat.at(i, n + j);
      ++cnt;
    }
    return span_rows(out.row_slice(0, cnt), proto_);
  }

  /// Image g(W) for invertible g acting on column vectors.
  Subspace apply(const Matrix<K>& g) const {
    if (g.rows() != ambient_ || g.cols() != ambient_) fail_pre("apply: size mismatch");
    if (is_zero()) return *this;
    return span_rows(basis_ * g.transpose(), proto_);
  }

  bool is_invariant_under(const Matrix<K>& g) const { return apply(g) == *this; }

  /// Span of the coordinate vectors not hitting a pivot column: a canonical
  /// complement.
  Subspace coordinate_complement() const {
    std::vector<bool> piv(ambient_, false);
    for (std::size_t i = 0; i < dim(); ++i) {
      std::size_t j = 0;
      while (j < ambient_ && basis_.at(i, j).is_zero()) ++j;
      piv[j] = true;
    }
    Matrix<K> m(ambient_ - dim(), ambient_, proto_.zero());
    std::size_t row = 0;
    for (std::size_t j = 0; j < ambient_; ++j)
      if (!piv[j]) m.at(row++, j) = proto_.one();
    return Subspace(ambient_, std::move(m), proto_);
  }

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
  }
  friend bool operator!=(const Subspace& a, const Subspace& b) { return !(a == b); }
  friend bool operator<(const Subspace& a, const Subspace& b) {
    if (a.dim() != b.dim()) return a.dim() < b.dim();
    return a.basis_ < b.basis_;
  }

  std::string str() const { return basis_.str(); }

private:
  Subspace(std::size_t ambient, Matrix<K> basis, const K& proto)
      : ambient_(ambient), basis_(std::move(basis)), proto_(proto) {}

  void check_ambient(const Subspace& o) const {
    if (ambient_ != o.ambient_) fail_pre("ambient dimension mismatch");
  }

  static void copy_rows(Matrix<K>& dst, std::size_t at_row, const Matrix<K>& src) {
    for (std::size_t i = 0; i < src.rows(); ++i)
      for (std::size_t j = 0; j < src.cols(); ++j) dst.at(at_row + i, j) = src.at(i, j);
  }

  std::size_t ambient_;
  Matrix<K> basis_;
  K proto_;
};

/// All subspaces of F_p^n by direct enumeration of reduced-echelon bases.
inline std::vector<Subspace<Fp>> all_subspaces(std::size_t n, const Fp& proto) {
  std::vector<Subspace<Fp>> out;
  out.push_back(Subspace<Fp>::zero(n, proto));
  std::uint32_t p = proto.modulus();
  for (std::size_t r = 1; r <= n; ++r) {
    // choose pivot columns
    std::vector<std::size_t> piv(r);
    for (std::size_t i = 0; i < r; ++i) piv[i] = i;
    while (true) {
      // free positions: (i, j) with j > piv[i], j not a pivot
      std::vector<std::pair<std::size_t, std::size_t>> free_pos;
      std::vector<bool> is_piv(n, false);
      for (auto c : piv) is_piv[c] = true;
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = piv[i] + 1; j < n; ++j)
          if (!is_piv[j]) free_pos.emplace_back(i, j);
      std::vector<std::uint32_t> vals(free_pos.size(), 0);
      while (true) {
        Matrix<Fp> m(r, n, proto.zero());
        for (std::size_t i = 0; i < r; ++i) m.at(i, piv[i]) = proto.one();
        for (std::size_t k = 0; k < free_pos.size(); ++k)
          m.at(free_pos[k].first, free_pos[k].second) = Fp(p, vals[k]);
        out.push_back(Subspace<Fp>::span_rows(m, proto));
        // odometer
        std::size_t k = 0;
        while (k < vals.size() && ++vals[k] == p) vals[k++] = 0;
        if (k == vals.size()) break;
        if (vals.empty()) break;
      }
      // next pivot combination
      std::size_t i = r;
      while (i > 0) {
        --i;
        if (piv[i] + (r - i) < n) {
          ++piv[i];
          for (std::size_t k = i + 1; k < r; ++k) piv[k] = piv[k - 1] + 1;
          break;
        }
        if (i == 0) { i = r + 1; break; }
      }
      if (i == r + 1 || r == 0) break;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace fls
