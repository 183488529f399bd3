#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "fls/filtered.hpp"
#include "fls/quiver.hpp"

namespace fls {

using QVec = std::vector<Rat>;

inline Rat pair_vec(const QVec& cochar, const QVec& character) {
  if (cochar.size() != character.size()) fail_pre("pairing of vectors of different length");
  Rat acc(0);
  for (std::size_t i = 0; i < cochar.size(); ++i) acc += cochar[i] * character[i];
  return acc;
}

inline QVec scale_vec(const QVec& v, const Rat& s) {
  QVec out = v;
  for (auto& e : out) e *= s;
  return out;
}

inline QVec add_vec(const QVec& a, const QVec& b) {
  QVec out = a;
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return out;
}

/// Root datum with explicit coordinates: cocharacters and characters live
/// in dual ambient lattices with the dot-product pairing. Two built-in
/// flavors: GL_n in the epsilon basis (dim n, rank n-1) and the abstract
/// semisimple A_r datum (dim = rank = r, coroot and fundamental-weight
/// coordinates dual by construction).
struct RootDatum {
  std::size_t rank = 0;  // number of simple roots
  std::size_t dim = 0;   // coordinate dimension
  bool semisimple = false;
  std::vector<QVec> simple_coroots;       // rank vectors
  std::vector<QVec> fundamental_weights;  // rank vectors
  std::vector<QVec> simple_roots;         // rank character vectors
  std::vector<QVec> roots;                // all roots, closed under negation

  static RootDatum gl(std::size_t n) {
    if (n < 1) fail_pre("gl root datum needs n >= 1");
    RootDatum rd;
    rd.rank = n - 1;
    rd.dim = n;
    rd.semisimple = false;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      QVec coroot(n, Rat(0)), weight(n, Rat(0)), root(n, Rat(0));
      coroot[i] = Rat(1);
      coroot[i + 1] = Rat(-1);
      for (std::size_t j = 0; j <= i; ++j) weight[j] = Rat(1);
      root[i] = Rat(1);
      root[i + 1] = Rat(-1);
      rd.simple_coroots.push_back(coroot);
      rd.fundamental_weights.push_back(weight);
      rd.simple_roots.push_back(root);
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        QVec r(n, Rat(0));
        r[i] = Rat(1);
        r[j] = Rat(-1);
        rd.roots.push_back(r);
      }
    return rd;
  }

  /// Abstract A_r (the SL_{r+1} flavor): simple coroots are the standard
  /// basis, fundamental weights the dual basis, roots written in
  /// fundamental-weight coordinates via the Cartan matrix.
  static RootDatum a(std::size_t r) {
    if (r < 1) fail_pre("A_r root datum needs r >= 1");
    RootDatum rd;
    rd.rank = r;
    rd.dim = r;
    rd.semisimple = true;
    auto cartan = [&](std::size_t i, std::size_t j) -> long {
      if (i == j) return 2;
      if (i + 1 == j || j + 1 == i) return -1;
      return 0;
    };
    for (std::size_t i = 0; i < r; ++i) {
      QVec coroot(r, Rat(0)), weight(r, Rat(0)), root(r, Rat(0));
      coroot[i] = Rat(1);
      weight[i] = Rat(1);
      for (std::size_t k = 0; k < r; ++k) root[k] = Rat(cartan(k, i));
      rd.simple_coroots.push_back(coroot);
      rd.fundamental_weights.push_back(weight);
      rd.simple_roots.push_back(root);
    }
    // positive roots of A_r: alpha_i + ... + alpha_j
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = i; j < r; ++j) {
        QVec root(r, Rat(0));
        for (std::size_t k = i; k <= j; ++k) root = add_vec(root, rd.simple_roots[k]);
        rd.roots.push_back(root);
        rd.roots.push_back(scale_vec(root, Rat(-1)));
      }
    return rd;
  }

  /// Determinant direction of the GL flavor (the all-ones character).
  QVec det_char() const {
    if (semisimple) fail_pre("det character only exists in the GL flavor");
    return QVec(dim, Rat(1));
  }
};

/// Root trichotomy of a rational weight: P_theta is cut out by the roots
/// pairing >= 0, its Levi by the roots pairing to zero.
struct ParabolicFromWeight {
  QVec theta;
  std::vector<QVec> roots_parabolic, roots_levi, roots_unipotent;
  std::vector<std::size_t> levi_simple, cut_simple, outside_simple;

  bool is_full_group() const { return roots_unipotent.empty() && outside_simple.empty(); }
};

inline ParabolicFromWeight parabolic_from_weight(const RootDatum& rd, const QVec& theta) {
  if (theta.size() != rd.dim) fail_pre("weight has wrong dimension");
  ParabolicFromWeight p;
  p.theta = theta;
  for (const auto& r : rd.roots) {
    Rat v = pair_vec(theta, r);
    if (v > Rat(0)) {
      p.roots_parabolic.push_back(r);
      p.roots_unipotent.push_back(r);
    } else if (v.is_zero()) {
      p.roots_parabolic.push_back(r);
      p.roots_levi.push_back(r);
    }
  }
  for (std::size_t i = 0; i < rd.rank; ++i) {
    Rat v = pair_vec(theta, rd.simple_roots[i]);
    if (v.is_zero())
      p.levi_simple.push_back(i);
    else if (v > Rat(0))
      p.cut_simple.push_back(i);
    else
      p.outside_simple.push_back(i);
  }
  return p;
}

/// Coefficients of chi in the fundamental-weight basis, read off by
/// pairing with the simple coroots.
inline QVec fundamental_coefficients(const RootDatum& rd, const QVec& chi) {
  QVec c(rd.rank, Rat(0));
  for (std::size_t i = 0; i < rd.rank; ++i) c[i] = pair_vec(rd.simple_coroots[i], chi);
  return c;
}

/// chi is anti-dominant for P iff it is a nonpositive combination of the
/// fundamental weights of the simple roots outside the Levi of P (and
/// involves nothing else).
inline bool is_antidominant(const RootDatum& rd, const QVec& chi, const ParabolicFromWeight& p) {
  if (chi.size() != rd.dim) fail_pre("character has wrong dimension");
  QVec c = fundamental_coefficients(rd, chi);
  QVec rebuilt(rd.dim, Rat(0));
  for (std::size_t i = 0; i < rd.rank; ++i)
    rebuilt = add_vec(rebuilt, scale_vec(rd.fundamental_weights[i], c[i]));
  if (!(rebuilt == chi))
    fail_input("character not expressible in the fundamental-weight basis");
  for (std::size_t i : p.levi_simple)
    if (!c[i].is_zero()) return false;
  for (std::size_t i : p.cut_simple)
    if (c[i] > Rat(0)) return false;
  for (std::size_t i : p.outside_simple)
    if (c[i] > Rat(0)) return false;
  return true;
}

/// Mirror of is_antidominant: nonpositive coefficients on the cut
/// fundamental weights become nonnegative ones.
inline bool is_dominant(const RootDatum& rd, const QVec& chi, const ParabolicFromWeight& p) {
  return is_antidominant(rd, scale_vec(chi, Rat(-1)), p);
}

/// Dominance in the sense of the duality lemma: chi is a nonnegative
/// combination of the fundamental weights of roots of P (Levi or cut), with
/// no component on the simple roots outside P.
inline bool is_dominant_on(const RootDatum& rd, const QVec& chi, const ParabolicFromWeight& p) {
  if (chi.size() != rd.dim) fail_pre("character has wrong dimension");
  QVec c = fundamental_coefficients(rd, chi);
  QVec rebuilt(rd.dim, Rat(0));
  for (std::size_t i = 0; i < rd.rank; ++i)
    rebuilt = add_vec(rebuilt, scale_vec(rd.fundamental_weights[i], c[i]));
  if (!(rebuilt == chi))
    fail_input("character not expressible in the fundamental-weight basis");
  for (std::size_t i : p.outside_simple)
    if (!c[i].is_zero()) return false;
  for (std::size_t i : p.levi_simple)
    if (c[i] < Rat(0)) return false;
  for (std::size_t i : p.cut_simple)
    if (c[i] < Rat(0)) return false;
  return true;
}

/// chi_mu: the character with <e_i, chi_mu> = <mu, e_i^*>; mu_chi dually.
inline QVec dual_char_of_cochar(const RootDatum& rd, const QVec& mu) {
  QVec out(rd.dim, Rat(0));
  for (std::size_t i = 0; i < rd.rank; ++i) {
    Rat c = pair_vec(mu, rd.fundamental_weights[i]);
    out = add_vec(out, scale_vec(rd.fundamental_weights[i], c));
  }
  return out;
}

inline QVec dual_cochar_of_char(const RootDatum& rd, const QVec& chi) {
  QVec out(rd.dim, Rat(0));
  for (std::size_t i = 0; i < rd.rank; ++i) {
    Rat c = pair_vec(rd.simple_coroots[i], chi);
    out = add_vec(out, scale_vec(rd.simple_coroots[i], c));
  }
  return out;
}

// ---------------------------------------------------------------------------
// R-stability for GL_n / SL_n realized on filtered local systems
// ---------------------------------------------------------------------------

enum class GroupKind { gl, sl };

namespace detail {

template <ExactField K>
Rat local_degree_of_sub(const FilteredLocalSystem<K>& fls, const std::string& x,
                        const Subspace<K>& w) {
  const WeightedFlag<K>& wf = fls.flag_at(x);
  Rat total(0);
  for (std::size_t i = 1; i <= wf.flag.num_steps(); ++i) {
    std::size_t di = w.intersect(wf.flag.step(i)).dim();
    std::size_t dn = w.intersect(wf.flag.step_or_zero(i + 1)).dim();
    total += wf.weight(i) * Rat(static_cast<long>(di - dn));
  }
  return total;
}

}  // namespace detail

/// <theta, chi> for the anti-dominant cone generator of the cut at
/// dimension k of a 2-step invariant flag: chi = -omega_k + (k/n) det in
/// the flag-aligned epsilon coordinates (the det correction makes chi
/// trivial on the center; it vanishes against traceless SL weights). The
/// per-puncture pairing is evaluated through the bigraded intersection
/// numbers of the invariant subspace against the weighted flag.
template <ExactField K>
Rat cone_generator_pairing(const FilteredLocalSystem<K>& fls, const Subspace<K>& w) {
  Rat total(0);
  long k = static_cast<long>(w.dim());
  long n = static_cast<long>(fls.rank());
  for (const auto& x : fls.punctures()) {
    Rat sw = detail::local_degree_of_sub(fls, x, w);            // theta-trace on the w block
    Rat sall = fls.flag_at(x).local_degree();                   // theta-trace overall
    total += Rat(-1) * sw + Rat(k, n) * sall;                   // (-1 + k/n) sw + (k/n)(sall - sw)
  }
  return total;
}

/// R-stability of a theta-filtered system for G in {GL_n, SL_n}: over all
/// compatible proper parabolics (stabilizers of invariant flags) and all
/// anti-dominant cone generators that are trivial on the center, demand
/// <theta, chi> >= 0 (semistable) or > 0 (stable). Linearity in the cone
/// coefficients reduces the scan to one generator per invariant subspace.
template <ExactField K>
StabilityVerdict<K> r_stability(const FilteredLocalSystem<K>& fls, GroupKind g) {
  if (g == GroupKind::sl) {
    for (const auto& x : fls.punctures())
      if (!fls.flag_at(x).local_degree().is_zero())
        fail_pre("SL weights must be traceless at every puncture");
  }
  auto lat = fls.rep().invariant_lattice();

  bool trivial = detail::all_weights_zero(fls);
  if (trivial) {
    StabilityVerdict<K> v;
    auto wit = lat.some_proper();
    if (wit) {
      v.cls = StabilityVerdict<K>::Class::semistable_not_stable;
      v.witness = *wit;
      v.witness_rank = wit->dim();
      return v;
    }
    if (!lat.complete) fail_incomplete("invariant lattice incomplete; verdict withheld");
    v.cls = StabilityVerdict<K>::Class::stable;
    return v;
  }
  StabilityVerdict<K> v;
  std::optional<Subspace<K>> neg_witness, zero_witness;
  Rat neg_val(0);
  for (const auto& w : lat.proper()) {
    Rat p = cone_generator_pairing(fls, w);
    if (p < Rat(0) && (!neg_witness || p < neg_val)) {
      neg_witness = w;
      neg_val = p;
    } else if (p.is_zero() && !zero_witness) {
      zero_witness = w;
    }
  }
  if (!neg_witness && !lat.complete)
    fail_incomplete("invariant lattice incomplete; verdict withheld");
  if (neg_witness) {
    v.cls = StabilityVerdict<K>::Class::unstable;
    v.witness = neg_witness;
    v.witness_degree = neg_val;
    v.witness_rank = neg_witness->dim();
    return v;
  }
  if (zero_witness) {
    v.cls = StabilityVerdict<K>::Class::semistable_not_stable;
    v.witness = zero_witness;
    v.witness_rank = zero_witness->dim();
    return v;
  }
  v.cls = StabilityVerdict<K>::Class::stable;
  return v;
}

/// Degree zero in the G sense: <sum theta_x, chi> = 0 for every character
/// chi of G. For GL_n the character lattice is generated by det, so this
/// is the vanishing of the total weighted dimension sum; for semisimple G
/// there is nothing to check.
template <ExactField K>
bool degree_zero_g(const FilteredLocalSystem<K>& fls, GroupKind g) {
  if (g == GroupKind::sl) return true;
  return fls.degree().is_zero();
}

/// theta-filtered membership for the quiver point: c_in * c_out must land
/// in P_{-theta_x}, the stabilizer of the flag re-sorted by increasing
/// weight (deepest step = smallest weight). Returns the standard witnesses.
template <ExactField K>
std::optional<std::map<std::string, Matrix<K>>> g_quiver_membership(
    const QuiverPoint<K>& pt, const FilteredLocalSystem<K>& fls) {
  std::map<std::string, Matrix<K>> witnesses;
  TypeData<K> std_type = standard_type(fls);
  for (const auto& x : fls.punctures()) {
    const WeightedFlag<K>& wf = fls.flag_at(x);
    const ParabolicGL<K>& base = std_type.at(x);  // standard coordinates
    // order graded pieces by increasing weight and accumulate: deepest step
    // of the resorted flag carries the smallest weight
    std::vector<std::size_t> order(wf.weights.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i + 1;  // 1-based steps
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return wf.weight(a) < wf.weight(b); });
    std::vector<Subspace<K>> prefixes;
    Subspace<K> acc = Subspace<K>::zero(fls.rank(), fls.proto());
    for (std::size_t k = 0; k < order.size(); ++k) {
      acc = acc.sum(base.block_subspace(wf.flag.block_of_step(order[k])));
      prefixes.push_back(acc);
    }
    std::vector<Subspace<K>> steps;
    for (std::size_t k = prefixes.size(); k-- > 0;) steps.push_back(prefixes[k]);
    ParabolicGL<K> p_minus(Flag<K>::from_steps(std::move(steps)));
    Matrix<K> composite = pt.c_in.at(x) * pt.c_out.at(x);
    if (!p_minus.contains(composite)) return std::nullopt;
    witnesses.emplace(x, pt.c_in.at(x));
  }
  return witnesses;
}

/// The G-side character of G_theta for the GL_n flavor: blockwise
/// det^{-d theta_{x,i}}, which coincides with the quiver-side chi_theta.
/// For the semisimple flavor use dual_char_of_cochar(-d theta) directly.
template <ExactField K>
CharacterChiTheta g_chi_theta(const FilteredLocalSystem<K>& fls) {
  return chi_theta_of(fls);
}

}  // namespace fls
