#pragma once

#include <cstddef>
#include <vector>

#include "fls/subspace.hpp"

namespace fls {

/// Extend the row basis of `inner` to one of `outer` by greedily taking
/// rows of outer's canonical basis. Returns the added rows.
template <ExactField K>
Matrix<K> extend_basis(const Subspace<K>& inner, const Subspace<K>& outer) {
  if (!outer.contains(inner)) fail_pre("extend_basis: inner not contained in outer");
  std::size_t n = inner.ambient();
  std::size_t want = outer.dim() - inner.dim();
  Matrix<K> added(want, n, inner.proto().zero());
  Matrix<K> work(inner.dim() + want, n, inner.proto().zero());
  for (std::size_t i = 0; i < inner.dim(); ++i)
    for (std::size_t j = 0; j < n; ++j) work.at(i, j) = inner.basis().at(i, j);
  std::size_t have = inner.dim(), got = 0;
  for (std::size_t r = 0; r < outer.dim() && got < want; ++r) {
    for (std::size_t j = 0; j < n; ++j) work.at(have, j) = outer.basis().at(r, j);
    if (rank(work.row_slice(0, have + 1)) == have + 1) {
      for (std::size_t j = 0; j < n; ++j) added.at(got, j) = outer.basis().at(r, j);
      ++have;
      ++got;
    }
  }
  if (got != want) fail_pre("extend_basis: failed to complete basis");
  return added;
}

/// Strictly decreasing chain V_1 = k^n > V_2 > ... > V_{n'} > 0. The full
/// space is stored as step 0; the zero space is implicit.
template <ExactField K>
class Flag {
public:
  static Flag trivial(std::size_t ambient, const K& proto) {
    return Flag(ambient, {Subspace<K>::full(ambient, proto)}, proto);
  }

  /// steps must begin with the full space, be strictly decreasing and
  /// nonzero.
  static Flag from_steps(std::vector<Subspace<K>> steps) {
    if (steps.empty()) fail_pre("flag needs at least the full step");
    if (!steps.front().is_full()) fail_pre("first flag step must be the full space");
    for (std::size_t i = 0; i + 1 < steps.size(); ++i) {
      if (!steps[i].contains(steps[i + 1]) || steps[i].dim() == steps[i + 1].dim())
        fail_pre("flag steps must strictly decrease");
    }
    if (steps.back().is_zero()) fail_pre("flag steps must be nonzero (zero step is implicit)");
    K proto = steps.front().proto();
    std::size_t n = steps.front().ambient();
    return Flag(n, std::move(steps), proto);
  }

  /// Two-step flag k^n > w > 0 (or the trivial flag when w is full/zero).
  static Flag through(const Subspace<K>& w) {
    if (w.is_zero() || w.is_full()) return trivial(w.ambient(), w.proto());
    return from_steps({Subspace<K>::full(w.ambient(), w.proto()), w});
  }

  std::size_t ambient() const { return ambient_; }
  const K& proto() const { return proto_; }

  /// Number of nonzero steps n' (the trivial flag has 1).
  std::size_t num_steps() const { return steps_.size(); }

  /// 1-based indexing: step(1) = full, step(n'+1) = 0.
  const Subspace<K>& step(std::size_t i) const {
    if (i < 1 || i > steps_.size()) fail_pre("flag step index out of range");
    return steps_[i - 1];
  }
  Subspace<K> step_or_zero(std::size_t i) const {
    if (i == steps_.size() + 1) return Subspace<K>::zero(ambient_, proto_);
    return step(i);
  }

  bool is_trivial() const { return steps_.size() == 1; }

  /// lambda_i = dim V_i - dim V_{i+1}, a composition of n.
  std::vector<std::size_t> partition() const {
    std::vector<std::size_t> lam(steps_.size());
    for (std::size_t i = 0; i < steps_.size(); ++i) {
      std::size_t next = i + 1 < steps_.size() ? steps_[i + 1].dim() : 0;
      lam[i] = steps_[i].dim() - next;
    }
    return lam;
  }

  /// Invertible matrix whose columns are grouped deepest step first:
  /// block b spans step n'-b over step n'-b+1. Prefix column spans
  /// recover the flag from the deep end.
  Matrix<K> adapted_basis() const {
    std::size_t n = ambient_;
    Matrix<K> cols(n, n, proto_.zero());
    std::size_t filled = 0;
    Subspace<K> inner = Subspace<K>::zero(n, proto_);
    for (std::size_t s = steps_.size(); s-- > 0;) {
      Matrix<K> add = extend_basis(inner, steps_[s]);
      for (std::size_t i = 0; i < add.rows(); ++i)
        for (std::size_t j = 0; j < n; ++j) cols.at(j, filled + i) = add.at(i, j);
      filled += add.rows();
      inner = steps_[s];
    }
    return cols;
  }

  /// Block index (0-based, deepest first) of the 1-based step i.
  std::size_t block_of_step(std::size_t i) const { return steps_.size() - i; }

  Flag apply(const Matrix<K>& g) const {
    std::vector<Subspace<K>> steps;
    steps.reserve(steps_.size());
    for (const auto& s : steps_) steps.push_back(s.apply(g));
    return Flag(ambient_, std::move(steps), proto_);
  }

  friend bool operator==(const Flag& a, const Flag& b) {
    return a.ambient_ == b.ambient_ && a.steps_ == b.steps_;
  }
  friend bool operator!=(const Flag& a, const Flag& b) { return !(a == b); }

private:
  Flag(std::size_t ambient, std::vector<Subspace<K>> steps, const K& proto)
      : ambient_(ambient), steps_(std::move(steps)), proto_(proto) {}

  std::size_t ambient_;
  std::vector<Subspace<K>> steps_;
  K proto_;
};

/// Parabolic subgroup of GL_n stored as the flag it stabilizes.
template <ExactField K>
class ParabolicGL {
public:
  explicit ParabolicGL(Flag<K> flag) : flag_(std::move(flag)) {}

  const Flag<K>& flag() const { return flag_; }
  std::size_t ambient() const { return flag_.ambient(); }
  std::vector<std::size_t> type() const { return flag_.partition(); }
  std::size_t num_blocks() const { return flag_.num_steps(); }
  bool is_full_group() const { return flag_.is_trivial(); }

  bool contains(const Matrix<K>& g) const {
    if (g.rows() != ambient() || g.cols() != ambient()) fail_pre("parabolic membership: size mismatch");
    for (std::size_t i = 1; i <= flag_.num_steps(); ++i)
      if (!flag_.step(i).is_invariant_under(g)) return false;
    return true;
  }

  /// dim of block b (0-based, deepest step first).
  std::size_t block_dim(std::size_t b) const {
    auto lam = flag_.partition();
    return lam[flag_.num_steps() - 1 - b];
  }

  /// Start offset of block b in the adapted basis.
  std::size_t block_offset(std::size_t b) const {
    std::size_t off = 0;
    for (std::size_t k = 0; k < b; ++k) off += block_dim(k);
    return off;
  }

  /// Coordinate subspace of block b transported into the ambient space.
  Subspace<K> block_subspace(std::size_t b) const {
    ensure_adapted();
    std::size_t off = block_offset(b), sz = block_dim(b);
    Matrix<K> rows(sz, ambient(), flag_.proto().zero());
    for (std::size_t i = 0; i < sz; ++i)
      for (std::size_t j = 0; j < ambient(); ++j) rows.at(i, j) = adapted_->at(j, off + i);
    return Subspace<K>::span_rows(rows, flag_.proto());
  }

  /// Induced map on the associated graded, written back in ambient
  /// coordinates; equals p iff p already lies in the Levi.
  Matrix<K> levi_factor(const Matrix<K>& p) const {
    if (!contains(p)) fail_pre("levi_factor: element not in the parabolic");
    ensure_adapted();
    Matrix<K> conj = (*adapted_inv_) * p * (*adapted_);
    std::size_t nb = num_blocks();
    Matrix<K> diag(ambient(), ambient(), flag_.proto().zero());
    for (std::size_t b = 0; b < nb; ++b) {
      std::size_t off = block_offset(b), sz = block_dim(b);
      for (std::size_t i = 0; i < sz; ++i)
        for (std::size_t j = 0; j < sz; ++j) diag.at(off + i, off + j) = conj.at(off + i, off + j);
    }
    return (*adapted_) * diag * (*adapted_inv_);
  }

  bool in_levi(const Matrix<K>& g) const { return contains(g) && levi_factor(g) == g; }

  /// Diagonal block of an element already conjugated to adapted
  /// coordinates.
  Matrix<K> block_of_adapted(const Matrix<K>& conj, std::size_t b) const {
    std::size_t off = block_offset(b), sz = block_dim(b);
    Matrix<K> blk(sz, sz, flag_.proto().zero());
    for (std::size_t i = 0; i < sz; ++i)
      for (std::size_t j = 0; j < sz; ++j) blk.at(i, j) = conj.at(off + i, off + j);
    return blk;
  }

  const Matrix<K>& adapted() const { ensure_adapted(); return *adapted_; }
  const Matrix<K>& adapted_inv() const { ensure_adapted(); return *adapted_inv_; }

private:
  void ensure_adapted() const {
    if (!adapted_) {
      adapted_ = flag_.adapted_basis();
      adapted_inv_ = inverse(*adapted_);
    }
  }

  Flag<K> flag_;
  mutable std::optional<Matrix<K>> adapted_;
  mutable std::optional<Matrix<K>> adapted_inv_;
};

/// Diagonalized one-parameter subgroup: strictly decreasing integer
/// weights with multiplicities and an explicit eigenbasis (columns grouped
/// by weight, largest weight first).
template <ExactField K>
class GradedCocharacter {
public:
  GradedCocharacter(std::vector<std::pair<long, std::size_t>> wm, Matrix<K> basis)
      : wm_(std::move(wm)), basis_(std::move(basis)), basis_inv_(inverse(basis_)) {
    std::size_t total = 0;
    for (std::size_t k = 0; k + 1 < wm_.size(); ++k)
      if (wm_[k].first <= wm_[k + 1].first) fail_pre("cocharacter weights must strictly decrease");
    for (auto& [w, m] : wm_) total += m;
    if (total != basis_.rows()) fail_pre("cocharacter multiplicities must sum to n");
  }

  static GradedCocharacter central(std::size_t n, long weight, const K& proto) {
    return GradedCocharacter({{weight, n}}, Matrix<K>::identity(n, proto));
  }

  /// Weights are listed deepest flag step first and must strictly
  /// decrease; weight k goes to the adapted-basis block k.
  static GradedCocharacter from_flag(const Flag<K>& f, const std::vector<long>& weights) {
    if (weights.size() != f.num_steps()) fail_pre("one weight per flag step required");
    auto lam = f.partition();
    std::vector<std::pair<long, std::size_t>> wm;
    for (std::size_t k = 0; k < weights.size(); ++k)
      wm.emplace_back(weights[k], lam[f.num_steps() - 1 - k]);
    return GradedCocharacter(std::move(wm), f.adapted_basis());
  }

  std::size_t n() const { return basis_.rows(); }
  const std::vector<std::pair<long, std::size_t>>& weight_groups() const { return wm_; }
  const Matrix<K>& basis() const { return basis_; }
  const Matrix<K>& basis_inv() const { return basis_inv_; }
  bool is_central() const { return wm_.size() == 1; }

  long weight_of_position(std::size_t pos) const {
    std::size_t off = 0;
    for (auto& [w, m] : wm_) {
      if (pos < off + m) return w;
      off += m;
    }
    fail_pre("cocharacter position out of range");
  }

  /// Eigenspace of the k-th weight group.
  Subspace<K> eigenspace(std::size_t k) const {
    std::size_t off = 0;
    for (std::size_t i = 0; i < k; ++i) off += wm_[i].second;
    Matrix<K> rows(wm_[k].second, n(), basis_.proto().zero());
    for (std::size_t i = 0; i < wm_[k].second; ++i)
      for (std::size_t j = 0; j < n(); ++j) rows.at(i, j) = basis_.at(j, off + i);
    return Subspace<K>::span_rows(rows, basis_.proto());
  }

  /// Flag of accumulated eigenspaces, deepest = highest weight.
  Flag<K> to_flag() const {
    std::size_t m = wm_.size();
    std::vector<Subspace<K>> steps;
    Subspace<K> acc = Subspace<K>::zero(n(), basis_.proto());
    std::vector<Subspace<K>> prefixes;
    for (std::size_t k = 0; k < m; ++k) {
      acc = acc.sum(eigenspace(k));
      prefixes.push_back(acc);
    }
    for (std::size_t k = m; k-- > 0;) steps.push_back(prefixes[k]);
    return Flag<K>::from_steps(std::move(steps));
  }

  /// Step-indexed weights d'_j indexed by 1-based flag step, increasing
  /// with depth: d'_j = weight of step j's graded piece.
  std::vector<long> step_weights() const {
    std::size_t m = wm_.size();
    std::vector<long> d(m);
    for (std::size_t j = 1; j <= m; ++j) d[j - 1] = wm_[m - j].first;
    return d;
  }

  GradedCocharacter conjugated(const Matrix<K>& g) const {
    return GradedCocharacter(wm_, g * basis_);
  }

  GradedCocharacter scaled(long s) const {
    if (s <= 0) fail_pre("cocharacter scaling must be positive");
    auto wm = wm_;
    for (auto& [w, m] : wm) w *= s;
    return GradedCocharacter(std::move(wm), basis_);
  }

  GradedCocharacter shifted(long s) const {
    auto wm = wm_;
    for (auto& [w, m] : wm) w += s;
    return GradedCocharacter(std::move(wm), basis_);
  }

  /// True when every eigenspace splits along the parabolic's Levi blocks,
  /// i.e. the cocharacter lands in the Levi as a subgroup of GL_n.
  bool lands_in_levi(const ParabolicGL<K>& p) const {
    for (std::size_t k = 0; k < wm_.size(); ++k) {
      Subspace<K> e = eigenspace(k);
      std::size_t total = 0;
      for (std::size_t b = 0; b < p.num_blocks(); ++b)
        total += e.intersect(p.block_subspace(b)).dim();
      if (total != e.dim()) return false;
    }
    return true;
  }

  friend bool operator==(const GradedCocharacter& a, const GradedCocharacter& b) {
    return a.wm_ == b.wm_ && a.basis_ == b.basis_;
  }

private:
  std::vector<std::pair<long, std::size_t>> wm_;
  Matrix<K> basis_;
  Matrix<K> basis_inv_;
};

/// Entrywise t-degree test: lim_{t->0} mu_t(t) g mu_s(t)^-1 exists iff no
/// entry sits in a negative-degree position; the limit keeps degree-0
/// entries. Returns nullopt when the limit does not exist.
template <ExactField K>
std::optional<Matrix<K>> conjugation_limit(const GradedCocharacter<K>& mu_target,
                                           const GradedCocharacter<K>& mu_source,
                                           const Matrix<K>& g) {
  Matrix<K> c = mu_target.basis_inv() * g * mu_source.basis();
  std::size_t n = c.rows();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (c.at(i, j).is_zero()) continue;
      long deg = mu_target.weight_of_position(i) - mu_source.weight_of_position(j);
      if (deg < 0) return std::nullopt;
      if (deg > 0) c.at(i, j) = c.at(i, j).zero();
    }
  return mu_target.basis() * c * mu_source.basis_inv();
}

/// Membership in P_mu = {g : lim mu(t) g mu(t)^-1 exists}.
template <ExactField K>
bool limit_exists_conj(const GradedCocharacter<K>& mu, const Matrix<K>& g) {
  return conjugation_limit(mu, mu, g).has_value();
}

}  // namespace fls
