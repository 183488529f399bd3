#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fls/flag.hpp"
#include "fls/surface.hpp"

namespace fls {

/// Flag at a puncture with one rational weight per step. Weights are
/// pairwise distinct but otherwise unconstrained (no ordering, no [0,1)
/// normalization).
template <ExactField K>
struct WeightedFlag {
  Flag<K> flag;
  std::vector<Rat> weights;

  WeightedFlag(Flag<K> f, std::vector<Rat> w) : flag(std::move(f)), weights(std::move(w)) {
    if (weights.size() != flag.num_steps()) fail_pre("one weight per flag step required");
    for (std::size_t i = 0; i < weights.size(); ++i)
      for (std::size_t j = i + 1; j < weights.size(); ++j)
        if (weights[i] == weights[j]) fail_pre("weights at a puncture must be pairwise distinct");
  }

  static WeightedFlag trivial(std::size_t ambient, const K& proto) {
    return WeightedFlag(Flag<K>::trivial(ambient, proto), {Rat(0)});
  }

  /// Weight of step i (1-based).
  const Rat& weight(std::size_t i) const { return weights.at(i - 1); }

  Rat local_degree() const {
    Rat d(0);
    auto lam = flag.partition();
    for (std::size_t i = 0; i < weights.size(); ++i) d += weights[i] * Rat(static_cast<long>(lam[i]));
    return d;
  }

  WeightedFlag apply(const Matrix<K>& g) const { return WeightedFlag(flag.apply(g), weights); }

  bool operator==(const WeightedFlag& o) const { return flag == o.flag && weights == o.weights; }
};

template <ExactField K>
struct StabilityVerdict {
  enum class Class { stable, semistable_not_stable, unstable };
  Class cls;
  std::optional<Subspace<K>> witness;
  Rat witness_degree{0};
  std::size_t witness_rank = 0;
  bool certificate_complete = true;

  bool is_stable() const { return cls == Class::stable; }
  bool is_semistable() const { return cls != Class::unstable; }

  std::string class_name() const {
    switch (cls) {
      case Class::stable: return "stable";
      case Class::semistable_not_stable: return "semistable-not-stable";
      case Class::unstable: return "unstable";
    }
    return "?";
  }
};

/// Filtered (parabolic) local system: a surface representation plus one
/// weighted flag per puncture, with rho(c_x) stabilizing every step.
template <ExactField K>
class FilteredLocalSystem {
public:
  FilteredLocalSystem(SurfaceRep<K> rep, std::map<std::string, WeightedFlag<K>> flags)
      : rep_(std::move(rep)), flags_(std::move(flags)) {
    for (const auto& x : rep_.presentation().punctures) {
      auto it = flags_.find(x);
      if (it == flags_.end()) fail_pre("missing weighted flag at puncture " + x);
      const Flag<K>& f = it->second.flag;
      if (f.ambient() != rep_.rank()) fail_pre("flag ambient dimension mismatch at " + x);
      for (std::size_t i = 1; i <= f.num_steps(); ++i)
        if (!f.step(i).is_invariant_under(rep_.C(x)))
          fail_pre("monodromy at " + x + " does not stabilize flag step " + std::to_string(i));
    }
    if (flags_.size() != rep_.presentation().punctures.size())
      fail_pre("flags present for unknown punctures");
  }

  const SurfaceRep<K>& rep() const { return rep_; }
  std::size_t rank() const { return rep_.rank(); }
  const K& proto() const { return rep_.proto(); }
  const std::vector<std::string>& punctures() const { return rep_.presentation().punctures; }
  const WeightedFlag<K>& flag_at(const std::string& x) const { return flags_.at(x); }

  /// deg^loc = sum over punctures and steps of weight * graded dimension.
  Rat degree() const {
    Rat d(0);
    for (const auto& [x, wf] : flags_) d += wf.local_degree();
    return d;
  }

  Rat slope() const { return degree() / Rat(static_cast<long>(rank())); }

  FilteredLocalSystem conjugated(const Matrix<K>& g) const {
    std::map<std::string, WeightedFlag<K>> flags;
    for (const auto& [x, wf] : flags_) flags.emplace(x, wf.apply(g));
    return FilteredLocalSystem(rep_.conjugated(g), std::move(flags));
  }

  bool operator==(const FilteredLocalSystem& o) const {
    return rep_ == o.rep_ && flags_ == o.flags_;
  }

private:
  SurfaceRep<K> rep_;
  std::map<std::string, WeightedFlag<K>> flags_;
};

namespace detail {

/// Coordinates of sub ⊆ w in the row basis of w.
template <ExactField K>
Subspace<K> in_sub_coordinates(const Subspace<K>& sub, const Subspace<K>& w) {
  if (sub.is_zero()) return Subspace<K>::zero(w.dim(), w.proto());
  auto x = solve(w.basis().transpose(), sub.basis().transpose());
  if (!x) fail_pre("subspace not contained in the carrier");
  return Subspace<K>::span_rows(x->transpose(), w.proto());
}

}  // namespace detail

/// Induced filtered sub-local system on an invariant subspace w: the flag
/// at x is the chain of distinct w ∩ L_{x,i}, a step S carrying the weight
/// of the largest i with S ⊆ L_{x,i}.
template <ExactField K>
FilteredLocalSystem<K> induced_sub(const FilteredLocalSystem<K>& fls, const Subspace<K>& w) {
  if (w.is_zero()) fail_pre("induced_sub of the zero subspace");
  SurfaceRep<K> rep = fls.rep().restrict(w);  // rejects non-invariant w with witness
  std::map<std::string, WeightedFlag<K>> flags;
  for (const auto& x : fls.punctures()) {
    const WeightedFlag<K>& wf = fls.flag_at(x);
    std::size_t nx = wf.flag.num_steps();
    std::vector<Subspace<K>> steps;
    std::vector<Rat> weights;
    for (std::size_t i = 1; i <= nx; ++i) {
      Subspace<K> s = w.intersect(wf.flag.step(i));
      if (s.is_zero()) break;
      if (!steps.empty() && steps.back() == s) continue;
      // weight: largest j with s inside L_{x,j}
      std::size_t jmax = i;
      for (std::size_t j = i + 1; j <= nx; ++j)
        if (wf.flag.step(j).contains(s)) jmax = j;
      steps.push_back(s);
      weights.push_back(wf.weight(jmax));
    }
    std::vector<Subspace<K>> insub;
    insub.reserve(steps.size());
    for (const auto& s : steps) insub.push_back(detail::in_sub_coordinates(s, w));
    flags.emplace(x, WeightedFlag<K>(Flag<K>::from_steps(std::move(insub)), std::move(weights)));
  }
  return FilteredLocalSystem<K>(std::move(rep), std::move(flags));
}

/// Degree of the induced sub-system evaluated by the independent
/// intersection-dimension formula: sum theta_{x,i} * dim(w∩L_i / w∩L_{i+1}).
template <ExactField K>
Rat sub_degree_by_intersections(const FilteredLocalSystem<K>& fls, const Subspace<K>& w) {
  Rat total(0);
  for (const auto& x : fls.punctures()) {
    const WeightedFlag<K>& wf = fls.flag_at(x);
    std::size_t nx = wf.flag.num_steps();
    for (std::size_t i = 1; i <= nx; ++i) {
      std::size_t di = w.intersect(wf.flag.step(i)).dim();
      std::size_t dn = w.intersect(wf.flag.step_or_zero(i + 1)).dim();
      total += wf.weight(i) * Rat(static_cast<long>(di - dn));
    }
  }
  return total;
}

/// Induced quotient system on k^n / w. The flag at x is the chain of
/// distinct images of the L_{x,i}; an image step T carries the weight of
/// the largest i with image(L_{x,i}) = T, which makes
/// deg(sub) + deg(quotient) = deg(total) hold exactly.
template <ExactField K>
FilteredLocalSystem<K> induced_quotient(const FilteredLocalSystem<K>& fls, const Subspace<K>& w) {
  if (w.is_full()) fail_pre("induced_quotient by the full space");
  SurfaceRep<K> rep = fls.rep().quotient(w);
  Matrix<K> proj = fls.rep().quotient_projection(w);
  std::size_t q = rep.rank();
  std::map<std::string, WeightedFlag<K>> flags;
  for (const auto& x : fls.punctures()) {
    const WeightedFlag<K>& wf = fls.flag_at(x);
    std::size_t nx = wf.flag.num_steps();
    std::vector<Subspace<K>> images(nx, Subspace<K>::zero(q, fls.proto()));
    for (std::size_t i = 1; i <= nx; ++i)
      images[i - 1] =
          Subspace<K>::span_rows(wf.flag.step(i).basis() * proj.transpose(), fls.proto());
    std::vector<Subspace<K>> steps;
    std::vector<Rat> weights;
    for (std::size_t i = 1; i <= nx; ++i) {
      const Subspace<K>& t = images[i - 1];
      if (t.is_zero()) break;
      if (!steps.empty() && steps.back() == t) {
        weights.back() = wf.weight(i);  // largest index with the same image wins
        continue;
      }
      steps.push_back(t);
      weights.push_back(wf.weight(i));
    }
    flags.emplace(x, WeightedFlag<K>(Flag<K>::from_steps(std::move(steps)), std::move(weights)));
  }
  return FilteredLocalSystem<K>(std::move(rep), std::move(flags));
}

namespace detail {

template <ExactField K>
struct SlopeScan {
  bool complete = true;
  std::optional<Subspace<K>> max_witness;  // extremal proper subspace
  Rat max_excess{0};                       // deg(w)*rank - deg*rank(w), positive = violation
  bool any_equal = false;
  std::optional<Subspace<K>> equal_witness;
};

/// Scan all proper invariant subspaces, tracking the maximal normalized
/// slope excess deg(w)*n - deg*dim(w) (sign as in the slope inequality).
template <ExactField K>
SlopeScan<K> scan_slopes(const FilteredLocalSystem<K>& fls, const InvariantLattice<K>& lat) {
  SlopeScan<K> out;
  Rat total = fls.degree();
  Rat n(static_cast<long>(fls.rank()));
  for (const auto& w : lat.proper()) {
    Rat dw = sub_degree_by_intersections(fls, w);
    Rat excess = dw * n - total * Rat(static_cast<long>(w.dim()));
    if (!out.max_witness || excess > out.max_excess ||
        (excess == out.max_excess && (w.dim() < out.max_witness->dim() ||
                                      (w.dim() == out.max_witness->dim() && w < *out.max_witness)))) {
      out.max_witness = w;
      out.max_excess = excess;
    }
    if (excess.is_zero() && !out.any_equal) {
      out.any_equal = true;
      out.equal_witness = w;
    }
  }
  return out;
}

template <ExactField K>
bool all_weights_zero(const FilteredLocalSystem<K>& fls) {
  for (const auto& x : fls.punctures())
    for (const auto& w : fls.flag_at(x).weights)
      if (!w.is_zero()) return false;
  return true;
}

}  // namespace detail

/// Slope stability: compare deg/rk of every nontrivial proper invariant
/// sub-system with the total slope. Verdicts carry extremal witnesses.
template <ExactField K>
StabilityVerdict<K> slope_stability(const FilteredLocalSystem<K>& fls) {
  if (fls.rank() < 1) fail_pre("stability needs rank >= 1");
  auto lat = fls.rep().invariant_lattice();

  if (detail::all_weights_zero(fls)) {
    // every sub has degree 0: semistable, stable iff irreducible
    StabilityVerdict<K> v;
    auto wit = lat.some_proper();
    if (wit) {
      v.cls = StabilityVerdict<K>::Class::semistable_not_stable;
      v.witness = *wit;
      v.witness_degree = Rat(0);
      v.witness_rank = wit->dim();
      v.certificate_complete = true;  // a zero-degree witness decides regardless
      return v;
    }
    if (!lat.complete) fail_incomplete("invariant lattice incomplete; verdict withheld");
    v.cls = StabilityVerdict<K>::Class::stable;
    return v;
  }

  auto scan = detail::scan_slopes(fls, lat);
  StabilityVerdict<K> v;
  // a definite violator settles instability even without a completeness
  // certificate for the lattice
  if (scan.max_witness && scan.max_excess > Rat(0)) {
    v.cls = StabilityVerdict<K>::Class::unstable;
    v.witness = scan.max_witness;
    v.witness_degree = sub_degree_by_intersections(fls, *v.witness);
    v.witness_rank = v.witness->dim();
    return v;
  }
  if (!lat.complete) fail_incomplete("invariant lattice incomplete; verdict withheld");
  if (!scan.max_witness) {
    v.cls = StabilityVerdict<K>::Class::stable;  // irreducible
    return v;
  }
  if (scan.any_equal) {
    v.cls = StabilityVerdict<K>::Class::semistable_not_stable;
    v.witness = scan.equal_witness;
    v.witness_degree = Rat(0) + sub_degree_by_intersections(fls, *v.witness);
    v.witness_rank = v.witness->dim();
    return v;
  }
  v.cls = StabilityVerdict<K>::Class::stable;
  return v;
}

/// Sign-only test, valid exactly when deg^loc = 0: semistable iff every
/// proper invariant sub has deg <= 0.
template <ExactField K>
StabilityVerdict<K> degree_zero_simplified_stability(const FilteredLocalSystem<K>& fls) {
  if (!fls.degree().is_zero()) fail_pre("simplified test requires total degree zero");
  auto lat = fls.rep().invariant_lattice();

  if (detail::all_weights_zero(fls)) return slope_stability(fls);

  StabilityVerdict<K> v;
  std::optional<Subspace<K>> pos_witness, zero_witness;
  Rat pos_deg(0);
  for (const auto& w : lat.proper()) {
    Rat dw = sub_degree_by_intersections(fls, w);
    if (dw > Rat(0) && (!pos_witness || dw > pos_deg)) {
      pos_witness = w;
      pos_deg = dw;
    } else if (dw.is_zero() && !zero_witness) {
      zero_witness = w;
    }
  }
  if (!pos_witness && !lat.complete)
    fail_incomplete("invariant lattice incomplete; verdict withheld");
  if (pos_witness) {
    v.cls = StabilityVerdict<K>::Class::unstable;
    v.witness = pos_witness;
    v.witness_degree = pos_deg;
    v.witness_rank = pos_witness->dim();
  } else if (zero_witness) {
    v.cls = StabilityVerdict<K>::Class::semistable_not_stable;
    v.witness = zero_witness;
    v.witness_degree = Rat(0);
    v.witness_rank = zero_witness->dim();
  } else {
    v.cls = StabilityVerdict<K>::Class::stable;
  }
  return v;
}

// ---------------------------------------------------------------------------
// isomorphism of filtered local systems
// ---------------------------------------------------------------------------

namespace detail {

/// Matrices intertwining the two representations and mapping flags onto
/// flags, as a basis of the solution space of the linear system.
template <ExactField K>
std::vector<Matrix<K>> intertwiner_space(const FilteredLocalSystem<K>& f1,
                                         const FilteredLocalSystem<K>& f2) {
  std::size_t n = f1.rank();
  const K proto = f1.proto();
  std::vector<std::vector<K>> rows;
  auto push_row = [&](const std::vector<K>& r) { rows.push_back(r); };

  auto g1 = f1.rep().generators();
  auto g2 = f2.rep().generators();
  for (std::size_t t = 0; t < g1.size(); ++t) {
    // g * rho1(gen) - rho2(gen) * g = 0, entry (i,j)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        std::vector<K> row(n * n, proto.zero());
        for (std::size_t k = 0; k < n; ++k) {
          row[i * n + k] += g1[t].at(k, j);
          row[k * n + j] -= g2[t].at(i, k);
        }
        push_row(row);
      }
  }
  for (const auto& x : f1.punctures()) {
    const auto& fl1 = f1.flag_at(x).flag;
    const auto& fl2 = f2.flag_at(x).flag;
    for (std::size_t s = 2; s <= fl1.num_steps(); ++s) {
      // g maps step s into step s: ann(L2_s) * g * basis(L1_s)^T = 0
      Matrix<K> ann = kernel_basis(fl2.step(s).basis());
      const Matrix<K>& bas = fl1.step(s).basis();
      for (std::size_t u = 0; u < ann.rows(); ++u)
        for (std::size_t v = 0; v < bas.rows(); ++v) {
          std::vector<K> row(n * n, proto.zero());
          for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) row[a * n + b] = ann.at(u, a) * bas.at(v, b);
          push_row(row);
        }
    }
  }

  Matrix<K> sys(rows.size(), n * n, proto.zero());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < n * n; ++j) sys.at(i, j) = rows[i][j];
  Matrix<K> ker = rows.empty() ? Matrix<K>::identity(n * n, proto.one()) : kernel_basis(sys);

  std::vector<Matrix<K>> out;
  for (std::size_t r = 0; r < ker.rows(); ++r) {
    Matrix<K> m(n, n, proto.zero());
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) m.at(a, b) = ker.at(r, a * n + b);
    out.push_back(m);
  }
  return out;
}

/// Search the span of the basis matrices for an invertible element by a
/// full grid scan: det has per-variable degree <= n, so vanishing on
/// {0..n}^d means vanishing identically.
template <ExactField K>
std::optional<Matrix<K>> invertible_in_span(const std::vector<Matrix<K>>& basis, std::size_t n,
                                            const K& proto) {
  if (basis.empty()) return std::nullopt;
  if constexpr (std::is_same_v<K, Fp>) {
    if (proto.modulus() < n + 2) fail_pre("field too small for the determinant grid test");
  }
  std::size_t d = basis.size();
  double grid = 1;
  for (std::size_t i = 0; i < d; ++i) grid *= (n + 1);
  if (grid > 2e6) fail_pre("intertwiner grid search budget exceeded");
  std::vector<std::size_t> c(d, 0);
  while (true) {
    Matrix<K> m(n, n, proto.zero());
    for (std::size_t i = 0; i < d; ++i) {
      if (c[i] == 0) continue;
      m = m + embed_int(proto, static_cast<long>(c[i])) * basis[i];
    }
    if (!m.is_zero() && is_invertible(m)) return m;
    std::size_t k = 0;
    while (k < d && ++c[k] == n + 2) c[k++] = 0;
    if (k == d) return std::nullopt;
  }
}

}  // namespace detail

/// Isomorphism test for filtered local systems: same presentation, same
/// stepwise weights/dimensions, and a single invertible matrix conjugating
/// the representation and transporting every flag step. Returns a witness.
template <ExactField K>
std::optional<Matrix<K>> filtered_isomorphism(const FilteredLocalSystem<K>& f1,
                                              const FilteredLocalSystem<K>& f2) {
  if (!(f1.rep().presentation() == f2.rep().presentation())) return std::nullopt;
  if (f1.rank() != f2.rank()) return std::nullopt;
  for (const auto& x : f1.punctures()) {
    const auto& w1 = f1.flag_at(x);
    const auto& w2 = f2.flag_at(x);
    if (w1.weights != w2.weights) return std::nullopt;
    if (w1.flag.partition() != w2.flag.partition()) return std::nullopt;
  }
  auto basis = detail::intertwiner_space(f1, f2);
  auto g = detail::invertible_in_span(basis, f1.rank(), f1.proto());
  return g;
}

// ---------------------------------------------------------------------------
// Jordan–Hölder and S-equivalence
// ---------------------------------------------------------------------------

template <ExactField K>
struct JordanHolder {
  /// Decreasing filtration of the original space: full = F_1 > F_2 > ... >
  /// F_m > 0, each step invariant, successive quotients stable of degree 0.
  std::vector<Subspace<K>> filtration;
  /// Quotient factors F_j / F_{j+1}, deepest last.
  std::vector<FilteredLocalSystem<K>> factors;
};

namespace detail {

/// Minimal-rank invariant subspace of degree zero whose induced system is
/// stable; ties broken by the canonical subspace order.
template <ExactField K>
std::optional<Subspace<K>> minimal_stable_sub(const FilteredLocalSystem<K>& fls,
                                              const InvariantLattice<K>& lat) {
  std::optional<Subspace<K>> best;
  for (const auto& w : lat.proper()) {
    if (!sub_degree_by_intersections(fls, w).is_zero()) continue;
    if (best && (w.dim() > best->dim() || (w.dim() == best->dim() && *best < w))) continue;
    auto sub = induced_sub(fls, w);
    if (slope_stability(sub).is_stable()) best = w;
  }
  return best;
}

template <ExactField K>
Subspace<K> preimage_under_projection(const SurfaceRep<K>& rep, const Subspace<K>& w,
                                      const Subspace<K>& t) {
  // span of w and the section lifts of t
  Matrix<K> sect = rep.quotient_section(w);  // n x q
  if (t.is_zero()) return w;
  Matrix<K> lift = t.basis() * sect.transpose();
  Matrix<K> st(w.dim() + lift.rows(), rep.rank(), rep.proto().zero());
  for (std::size_t i = 0; i < w.dim(); ++i)
    for (std::size_t j = 0; j < rep.rank(); ++j) st.at(i, j) = w.basis().at(i, j);
  for (std::size_t i = 0; i < lift.rows(); ++i)
    for (std::size_t j = 0; j < rep.rank(); ++j) st.at(w.dim() + i, j) = lift.at(i, j);
  return Subspace<K>::span_rows(st, rep.proto());
}

}  // namespace detail

/// Jordan–Hölder filtration of a degree-zero semistable system, built by
/// repeatedly splitting off a minimal stable degree-zero sub.
template <ExactField K>
JordanHolder<K> jordan_holder(const FilteredLocalSystem<K>& fls) {
  if (!fls.degree().is_zero()) fail_pre("Jordan–Hölder requires degree zero");
  auto verdict = slope_stability(fls);
  if (!verdict.is_semistable()) fail_pre("Jordan–Hölder requires a semistable input");

  JordanHolder<K> out;
  out.filtration.push_back(Subspace<K>::full(fls.rank(), fls.proto()));
  if (verdict.is_stable()) {
    out.factors.push_back(fls);
    return out;
  }

  auto lat = fls.rep().invariant_lattice();
  if (!lat.complete && !detail::all_weights_zero(fls))
    fail_incomplete("invariant lattice incomplete; Jordan–Hölder withheld");
  std::optional<Subspace<K>> s;
  if (lat.complete) {
    s = detail::minimal_stable_sub(fls, lat);
  } else {
    // trivial-weight incomplete case: any minimal invariant line works
    auto wit = lat.some_proper();
    if (!wit) fail_incomplete("no invariant subspace available");
    // shrink the witness to a stable sub by recursion on the witness
    Subspace<K> cur = *wit;
    while (true) {
      auto sub = induced_sub(fls, cur);
      auto v = slope_stability(sub);
      if (v.is_stable()) break;
      auto sublat = sub.rep().invariant_lattice();
      auto subwit = sublat.some_proper();
      if (!subwit) fail_incomplete("could not refine to a stable sub");
      // lift back into the ambient coordinates
      cur = Subspace<K>::span_rows(subwit->basis() * cur.basis(), fls.proto());
    }
    s = cur;
  }
  if (!s) fail_pre("semistable degree-zero system without a stable sub (internal)");

  FilteredLocalSystem<K> bottom = induced_sub(fls, *s);
  FilteredLocalSystem<K> quot = induced_quotient(fls, *s);
  JordanHolder<K> rest = jordan_holder(quot);

  // lift the quotient filtration back and append the bottom step
  out.factors = std::move(rest.factors);
  out.filtration.clear();
  for (const auto& t : rest.filtration)
    out.filtration.push_back(detail::preimage_under_projection(fls.rep(), *s, t));
  out.filtration.push_back(*s);
  out.factors.push_back(std::move(bottom));
  return out;
}

namespace detail {

/// Conjugation-invariant sort key so gr comparison is order-independent.
template <ExactField K>
std::string factor_key(const FilteredLocalSystem<K>& f) {
  std::string key = "r" + std::to_string(f.rank());
  for (const auto& x : f.punctures()) {
    key += "|" + x + ":";
    for (const auto& w : f.flag_at(x).weights) key += w.str() + ",";
    for (auto l : f.flag_at(x).flag.partition()) key += "d" + std::to_string(l);
  }
  for (const auto& g : f.rep().generators()) {
    key += "#";
    for (const auto& p : invariant_factors(g)) key += p.str() + ";";
  }
  return key;
}

}  // namespace detail

/// gr as a canonically sorted list of stable factors.
template <ExactField K>
std::vector<FilteredLocalSystem<K>> graded_object(const FilteredLocalSystem<K>& fls) {
  auto jh = jordan_holder(fls);
  std::sort(jh.factors.begin(), jh.factors.end(),
            [](const FilteredLocalSystem<K>& a, const FilteredLocalSystem<K>& b) {
              return detail::factor_key(a) < detail::factor_key(b);
            });
  return jh.factors;
}

/// S-equivalence: matching of the gr multisets under filtered isomorphism.
template <ExactField K>
bool s_equivalent(const FilteredLocalSystem<K>& f1, const FilteredLocalSystem<K>& f2) {
  if (f1.rank() != f2.rank()) fail_pre("s_equivalent requires equal rank");
  if (!f1.degree().is_zero() || !f2.degree().is_zero())
    fail_pre("s_equivalent requires degree zero");
  auto a = graded_object(f1);
  auto b = graded_object(f2);
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  // greedy matching is enough: filtered isomorphism is an equivalence
  for (const auto& fa : a) {
    bool matched = false;
    for (std::size_t j = 0; j < b.size() && !matched; ++j) {
      if (used[j]) continue;
      if (filtered_isomorphism(fa, b[j])) {
        used[j] = true;
        matched = true;
      }
    }
    if (!matched) return false;
  }
  return true;
}

}  // namespace fls
