#pragma once

#include <utility>
#include <vector>

#include "fls/matrix.hpp"

namespace fls {

/// Dense univariate polynomial over an exact field; coefficients low to
/// high, no trailing zeros. The zero polynomial has an empty vector.
template <ExactField K>
class Poly {
public:
  explicit Poly(const K& proto) : proto_(proto.zero()) {}
  Poly(const K& proto, std::vector<K> coeffs) : proto_(proto.zero()), c_(std::move(coeffs)) {
    trim();
  }

  static Poly constant(const K& v) { return Poly(v, {v}); }
  static Poly x_minus(const K& v) { return Poly(v, {-v, v.one()}); }

  bool is_zero() const { return c_.empty(); }
  long degree() const { return static_cast<long>(c_.size()) - 1; }  // -1 for zero
  const K& proto() const { return proto_; }
  const std::vector<K>& coeffs() const { return c_; }

  K coeff(std::size_t i) const { return i < c_.size() ? c_[i] : proto_; }
  K lead() const {
    if (is_zero()) fail_pre("leading coefficient of zero polynomial");
    return c_.back();
  }

  bool is_unit() const { return degree() == 0; }
  bool is_monic() const { return !is_zero() && c_.back().is_one(); }

  Poly monic() const {
    if (is_zero()) return *this;
    K inv = lead().inv();
    Poly r = *this;
    for (auto& v : r.c_) v = inv * v;
    return r;
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    std::vector<K> c(std::max(a.c_.size(), b.c_.size()), a.proto_);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) + b.coeff(i);
    return Poly(a.proto_, std::move(c));
  }

  friend Poly operator-(const Poly& a, const Poly& b) {
    std::vector<K> c(std::max(a.c_.size(), b.c_.size()), a.proto_);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) - b.coeff(i);
    return Poly(a.proto_, std::move(c));
  }

  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly(a.proto_);
    std::vector<K> c(a.c_.size() + b.c_.size() - 1, a.proto_);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i].is_zero()) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    }
    return Poly(a.proto_, std::move(c));
  }

  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  /// (quotient, remainder) with deg r < deg b.
  friend std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
    if (b.is_zero()) fail_pre("polynomial division by zero");
    Poly q(a.proto_), r = a;
    K lead_inv = b.lead().inv();
    while (!r.is_zero() && r.degree() >= b.degree()) {
      long shift = r.degree() - b.degree();
      K f = r.lead() * lead_inv;
      std::vector<K> qc(static_cast<std::size_t>(shift) + 1, a.proto_);
      qc.back() = f;
      Poly term(a.proto_, std::move(qc));
      q = q + term;
      r = r - term * b;
    }
    return {q, r};
  }

  K eval(const K& x) const {
    K acc = proto_;
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
    return acc;
  }

  std::string str() const {
    if (is_zero()) return "0";
    std::string s;
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (!s.empty()) s += " + ";
      s += c_[i].str() + "*x^" + std::to_string(i);
    }
    return s;
  }

private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }

  K proto_;
  std::vector<K> c_;
};

template <ExactField K>
Poly<K> poly_gcd(Poly<K> a, Poly<K> b) {
  while (!b.is_zero()) {
    auto [q, r] = divmod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

/// Invariant factors of xI - A: the monic diagonal of the Smith normal form
/// over K[x] in divisibility order, units dropped. Two square matrices are
/// conjugate over K iff these lists coincide.
template <ExactField K>
std::vector<Poly<K>> invariant_factors(const Matrix<K>& a) {
  if (!a.is_square()) fail_pre("invariant factors of non-square matrix");
  std::size_t n = a.rows();
  const K proto = a.proto().zero();
  std::vector<std::vector<Poly<K>>> m(n, std::vector<Poly<K>>(n, Poly<K>(proto)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<K> c{-a.at(i, j)};
      if (i == j) c.push_back(proto.one());
      m[i][j] = Poly<K>(proto, std::move(c));
    }

  auto row_sub = [&](std::size_t dst, std::size_t src, const Poly<K>& f, std::size_t from) {
    for (std::size_t j = from; j < n; ++j) m[dst][j] = m[dst][j] - f * m[src][j];
  };
  auto col_sub = [&](std::size_t dst, std::size_t src, const Poly<K>& f, std::size_t from) {
    for (std::size_t i = from; i < n; ++i) m[i][dst] = m[i][dst] - f * m[i][src];
  };

  for (std::size_t t = 0; t < n; ++t) {
    while (true) {
      // minimal-degree nonzero entry in the trailing block
      long best = -1;
      std::size_t bi = t, bj = t;
      for (std::size_t i = t; i < n; ++i)
        for (std::size_t j = t; j < n; ++j)
          if (!m[i][j].is_zero() && (best < 0 || m[i][j].degree() < best)) {
            best = m[i][j].degree();
            bi = i;
            bj = j;
          }
      if (best < 0) goto done;  // trailing block vanished
      std::swap(m[t], m[bi]);
      for (std::size_t i = t; i < n; ++i) std::swap(m[i][t], m[i][bj]);

      bool reduced = true;
      for (std::size_t i = t + 1; i < n; ++i) {
        if (m[i][t].is_zero()) continue;
        auto [q, r] = divmod(m[i][t], m[t][t]);
        row_sub(i, t, q, t);
        if (!m[i][t].is_zero()) reduced = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (m[t][j].is_zero()) continue;
        auto [q, r] = divmod(m[t][j], m[t][t]);
        col_sub(j, t, q, t);
        if (!m[t][j].is_zero()) reduced = false;
      }
      if (!reduced) continue;

      // enforce divisibility of the whole trailing block by the pivot
      bool divides_all = true;
      for (std::size_t i = t + 1; i < n && divides_all; ++i)
        for (std::size_t j = t + 1; j < n && divides_all; ++j) {
          auto [q, r] = divmod(m[i][j], m[t][t]);
          if (!r.is_zero()) {
            // fold that row into row t and restart the reduction
            for (std::size_t jj = t; jj < n; ++jj) m[t][jj] = m[t][jj] + m[i][jj];
            divides_all = false;
          }
        }
      if (divides_all) break;
    }
    m[t][t] = m[t][t].monic();
  }
done:
  std::vector<Poly<K>> factors;
  for (std::size_t t = 0; t < n; ++t)
    if (!m[t][t].is_zero() && m[t][t].degree() > 0) factors.push_back(m[t][t].monic());
  return factors;
}

template <ExactField K>
Poly<K> char_poly(const Matrix<K>& a) {
  auto f = invariant_factors(a);
  Poly<K> c = Poly<K>::constant(a.proto().one());
  for (const auto& g : f) c = c * g;
  return c;
}

template <ExactField K>
Matrix<K> companion(const Poly<K>& f) {
  if (!f.is_monic() || f.degree() < 1) fail_pre("companion of non-monic polynomial");
  std::size_t m = static_cast<std::size_t>(f.degree());
  Matrix<K> c(m, m, f.proto().zero());
  for (std::size_t i = 1; i < m; ++i) c.at(i, i - 1) = f.proto().one();
  for (std::size_t i = 0; i < m; ++i) c.at(i, m - 1) = -f.coeff(i);
  return c;
}

/// Block-diagonal of companion matrices of the invariant factors, in
/// divisibility order: the canonical representative of the conjugacy class.
template <ExactField K>
Matrix<K> rational_canonical_form(const Matrix<K>& a) {
  if (!a.is_square()) fail_pre("canonical form of non-square matrix");
  auto factors = invariant_factors(a);
  std::size_t n = a.rows();
  Matrix<K> out(n, n, a.proto().zero());
  std::size_t off = 0;
  for (const auto& f : factors) {
    auto c = companion(f);
    for (std::size_t i = 0; i < c.rows(); ++i)
      for (std::size_t j = 0; j < c.cols(); ++j) out.at(off + i, off + j) = c.at(i, j);
    off += c.rows();
  }
  if (off != n) fail_pre("invariant factor degrees do not sum to n");
  return out;
}

template <ExactField K>
bool conjugate_over_field(const Matrix<K>& a, const Matrix<K>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  if (a.rows() == 0) return true;
  auto fa = invariant_factors(a);
  auto fb = invariant_factors(b);
  if (fa.size() != fb.size()) return false;
  for (std::size_t i = 0; i < fa.size(); ++i)
    if (fa[i] != fb[i]) return false;
  return true;
}

}  // namespace fls
