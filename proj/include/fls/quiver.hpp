#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fls/filtered.hpp"

namespace fls {

struct QuiverArrow {
  std::string name, src, tgt;
};

/// The punctured-surface quiver: one central vertex v0 with 2g loops, and
/// per puncture x a vertex v_x with arrows c_<x>_in : v0 -> v_x and
/// c_<x>_out : v_x -> v0. The composite loop is c_x = c_out * c_in, and the
/// single relation is prod [a_i,b_i] * prod_x c_x = v0.
struct PuncturedQuiver {
  std::size_t genus = 0;
  std::vector<std::string> punctures;
  std::vector<std::string> vertices;
  std::vector<QuiverArrow> arrows;

  static PuncturedQuiver build(std::size_t g, std::vector<std::string> xs) {
    PuncturedQuiver q;
    q.genus = g;
    q.punctures = std::move(xs);
    q.vertices.push_back("v0");
    for (const auto& x : q.punctures) q.vertices.push_back("v_" + x);
    for (std::size_t i = 1; i <= g; ++i)
      q.arrows.push_back({"a" + std::to_string(i), "v0", "v0"});
    for (std::size_t i = 1; i <= g; ++i)
      q.arrows.push_back({"b" + std::to_string(i), "v0", "v0"});
    for (const auto& x : q.punctures) {
      q.arrows.push_back({"c_" + x + "_in", "v0", "v_" + x});
      q.arrows.push_back({"c_" + x + "_out", "v_" + x, "v0"});
    }
    return q;
  }

  bool connected() const { return true; }  // by construction: every v_x touches v0

  std::string relation_descriptor() const {
    std::string s;
    for (std::size_t i = 1; i <= genus; ++i) {
      std::string a = "a" + std::to_string(i), b = "b" + std::to_string(i);
      s += "[" + a + "," + b + "]";
    }
    for (const auto& x : punctures) s += "(c_" + x + "_out c_" + x + "_in)";
    return s + " - v0";
  }
};

/// Invertible matrix for every arrow of Q^D, satisfying the relation.
template <ExactField K>
struct QuiverPoint {
  SurfacePresentation pres;
  std::vector<Matrix<K>> A, B;
  std::map<std::string, Matrix<K>> c_in, c_out;

  std::size_t n() const {
    if (!A.empty()) return A[0].rows();
    return c_in.begin()->second.rows();
  }
  const K& proto() const { return A.empty() ? c_in.begin()->second.proto() : A[0].proto(); }

  Matrix<K> monodromy(const std::string& x) const { return c_out.at(x) * c_in.at(x); }

  bool relation_holds() const {
    GeneratorImages<K> gen;
    gen.A = A;
    gen.B = B;
    for (const auto& x : pres.punctures) gen.C.emplace(x, monodromy(x));
    return verify_relation(pres, gen);
  }

  bool operator==(const QuiverPoint& o) const {
    return pres == o.pres && A == o.A && B == o.B && c_in == o.c_in && c_out == o.c_out;
  }

  std::string key() const {
    std::string s;
    auto app = [&s](const Matrix<K>& m) {
      for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
          if constexpr (std::is_same_v<K, Fp>) {
            std::uint32_t v = m.at(i, j).value();
            s.push_back(static_cast<char>(v & 0xff));
            s.push_back(static_cast<char>((v >> 8) & 0xff));
          } else {
            s += m.at(i, j).str();
            s.push_back(',');
          }
        }
      s.push_back('|');
    };
    for (const auto& m : A) app(m);
    for (const auto& m : B) app(m);
    for (const auto& [x, m] : c_in) app(m);
    for (const auto& [x, m] : c_out) app(m);
    return s;
  }
};

/// The fixed parabolic type [P]: one standard parabolic per puncture.
template <ExactField K>
using TypeData = std::map<std::string, ParabolicGL<K>>;

/// Standard-position parabolic of the same composition as the flag at each
/// puncture: step j becomes the span of the first dim(step j) coordinates.
template <ExactField K>
TypeData<K> standard_type(const FilteredLocalSystem<K>& fls) {
  TypeData<K> type;
  const K proto = fls.proto();
  for (const auto& x : fls.punctures()) {
    const Flag<K>& f = fls.flag_at(x).flag;
    std::vector<Subspace<K>> steps;
    for (std::size_t j = 1; j <= f.num_steps(); ++j) {
      std::size_t d = f.step(j).dim();
      Matrix<K> rows(d, f.ambient(), proto.zero());
      for (std::size_t i = 0; i < d; ++i) rows.at(i, i) = proto.one();
      steps.push_back(Subspace<K>::span_rows(rows, proto));
    }
    type.emplace(x, ParabolicGL<K>(Flag<K>::from_steps(std::move(steps))));
  }
  return type;
}

/// Canonical lift of a filtered local system into the quiver-point space:
/// c_in = h_x (the flag-standardizing conjugator) and c_out = rho(c_x) h_x^-1,
/// so that c_out * c_in = rho(c_x) exactly.
template <ExactField K>
QuiverPoint<K> rep_to_point(const FilteredLocalSystem<K>& fls) {
  QuiverPoint<K> pt;
  pt.pres = fls.rep().presentation();
  pt.A = fls.rep().A();
  pt.B = fls.rep().B();
  for (const auto& x : pt.pres.punctures) {
    Matrix<K> s = fls.flag_at(x).flag.adapted_basis();
    Matrix<K> h = inverse(s);  // maps the flag to standard position
    pt.c_in.emplace(x, h);
    pt.c_out.emplace(x, fls.rep().C(x) * s);
  }
  if (!pt.relation_holds()) fail_pre("canonical lift violated the relation (internal)");
  return pt;
}

/// rho(a_i) = phi_{a_i}, rho(b_j) = phi_{b_j}, rho(c_x) = c_out * c_in.
template <ExactField K>
SurfaceRep<K> point_to_rep(const QuiverPoint<K>& pt) {
  GeneratorImages<K> gen;
  gen.A = pt.A;
  gen.B = pt.B;
  for (const auto& x : pt.pres.punctures) gen.C.emplace(x, pt.monodromy(x));
  return SurfaceRep<K>(pt.pres, gen);  // throws if the relation fails
}

/// Membership in R(Q^D, I^D, [P]) at x reduces to c_in * c_out in P_x; the
/// Levi-normalized witness is g_x = c_in.
template <ExactField K>
std::optional<std::map<std::string, Matrix<K>>> membership_in_type(const QuiverPoint<K>& pt,
                                                                   const TypeData<K>& type) {
  std::map<std::string, Matrix<K>> witnesses;
  for (const auto& x : pt.pres.punctures) {
    const Matrix<K>& in = pt.c_in.at(x);
    const Matrix<K>& out = pt.c_out.at(x);
    if (!type.at(x).contains(in * out)) return std::nullopt;
    witnesses.emplace(x, in);
  }
  return witnesses;
}

// ---------------------------------------------------------------------------
// gauge group
// ---------------------------------------------------------------------------

template <ExactField K>
struct GaugeElement {
  Matrix<K> g0;
  std::map<std::string, Matrix<K>> gx;
};

template <ExactField K>
bool gauge_is_member(const GaugeElement<K>& g, const TypeData<K>& type) {
  if (!is_invertible(g.g0)) return false;
  for (const auto& [x, p] : type) {
    auto it = g.gx.find(x);
    if (it == g.gx.end()) return false;
    if (!p.in_levi(it->second)) return false;
  }
  return true;
}

/// a,b conjugated at v0; c_in' = g_x c_in g0^-1; c_out' = g0 c_out g_x^-1.
template <ExactField K>
QuiverPoint<K> gauge_act(const GaugeElement<K>& g, const QuiverPoint<K>& pt) {
  QuiverPoint<K> out = pt;
  Matrix<K> g0i = inverse(g.g0);
  for (auto& m : out.A) m = g.g0 * m * g0i;
  for (auto& m : out.B) m = g.g0 * m * g0i;
  for (const auto& x : pt.pres.punctures) {
    Matrix<K> gxi = inverse(g.gx.at(x));
    out.c_in.at(x) = g.gx.at(x) * pt.c_in.at(x) * g0i;
    out.c_out.at(x) = g.g0 * pt.c_out.at(x) * gxi;
  }
  return out;
}

// ---------------------------------------------------------------------------
// the character chi_theta
// ---------------------------------------------------------------------------

/// chi_theta = prod_x prod_i det(l_{x,i})^{-d_{x,i}} with theta_{x,i} =
/// d_{x,i}/d, trivial at v0. Exponents are stored by 1-based flag step.
struct CharacterChiTheta {
  long d = 1;
  std::map<std::string, std::vector<long>> exps;

  bool trivial() const {
    for (const auto& [x, e] : exps)
      for (long v : e)
        if (v != 0) return false;
    return true;
  }
};

inline CharacterChiTheta chi_theta(const std::map<std::string, std::vector<Rat>>& weights) {
  CharacterChiTheta chi;
  mpz_class lcm = 1;
  for (const auto& [x, ws] : weights)
    for (const auto& w : ws) {
      mpz_class den = w.den();
      lcm = lcm / gcd(lcm, den) * den;
    }
  if (!lcm.fits_slong_p()) fail_pre("common denominator too large");
  chi.d = lcm.get_si();
  for (const auto& [x, ws] : weights) {
    std::vector<long> e;
    for (const auto& w : ws) {
      Rat scaled = w * Rat(chi.d);
      if (!(scaled.den() == 1)) fail_pre("weight scaling failed (internal)");
      if (!scaled.num().fits_slong_p()) fail_pre("weight numerator too large");
      e.push_back(scaled.num().get_si());
    }
    chi.exps.emplace(x, std::move(e));
  }
  return chi;
}

template <ExactField K>
CharacterChiTheta chi_theta_of(const FilteredLocalSystem<K>& fls) {
  std::map<std::string, std::vector<Rat>> weights;
  for (const auto& x : fls.punctures()) weights.emplace(x, fls.flag_at(x).weights);
  return chi_theta(weights);
}

/// chi evaluated on a gauge element (trivial at v0).
template <ExactField K>
K evaluate_chi(const CharacterChiTheta& chi, const TypeData<K>& type, const GaugeElement<K>& g) {
  K val = g.g0.proto().one();
  for (const auto& [x, p] : type) {
    const Matrix<K>& l = g.gx.at(x);
    if (!p.in_levi(l)) fail_pre("evaluate_chi: element not in the Levi at " + x);
    Matrix<K> conj = p.adapted_inv() * l * p.adapted();
    const auto& e = chi.exps.at(x);
    for (std::size_t step = 1; step <= p.num_blocks(); ++step) {
      long ex = -e.at(step - 1);  // chi uses det^{-d_{x,i}}
      if (ex == 0) continue;
      K dv = det(p.block_of_adapted(conj, p.flag().block_of_step(step)));
      K powv = dv.one();
      long reps = ex < 0 ? -ex : ex;
      K base = ex < 0 ? dv.inv() : dv;
      for (long i = 0; i < reps; ++i) powv *= base;
      val *= powv;
    }
  }
  return val;
}

// ---------------------------------------------------------------------------
// cocharacters of the gauge group, limits, pairings
// ---------------------------------------------------------------------------

template <ExactField K>
struct GaugeCocharacter {
  GradedCocharacter<K> v0;
  std::map<std::string, GradedCocharacter<K>> vx;
};

/// <mu, chi> as the exponent of chi(mu(t)): per puncture, minus d_{x,i}
/// times the weight trace of mu_{v_x} on the Levi block of step i.
template <ExactField K>
long pairing(const GaugeCocharacter<K>& mu, const CharacterChiTheta& chi, const TypeData<K>& type) {
  long total = 0;
  for (const auto& [x, p] : type) {
    const GradedCocharacter<K>& m = mu.vx.at(x);
    if (!m.lands_in_levi(p)) fail_pre("pairing: mu_{v_x} is not a cocharacter of L_x at " + x);
    const auto& e = chi.exps.at(x);
    for (std::size_t step = 1; step <= p.num_blocks(); ++step) {
      if (e.at(step - 1) == 0) continue;
      Subspace<K> block = p.block_subspace(p.flag().block_of_step(step));
      long trace = 0;
      for (std::size_t k = 0; k < m.weight_groups().size(); ++k)
        trace += m.weight_groups()[k].first *
                 static_cast<long>(block.intersect(m.eigenspace(k)).dim());
      total += -e.at(step - 1) * trace;
    }
  }
  return total;
}

/// Limit of the gauge-cocharacter action on a point; nullopt when some
/// arrow has a negative-degree component.
template <ExactField K>
std::optional<QuiverPoint<K>> point_limit(const GaugeCocharacter<K>& mu, const QuiverPoint<K>& pt) {
  QuiverPoint<K> out = pt;
  for (std::size_t i = 0; i < pt.A.size(); ++i) {
    auto l = conjugation_limit(mu.v0, mu.v0, pt.A[i]);
    if (!l) return std::nullopt;
    out.A[i] = *l;
  }
  for (std::size_t i = 0; i < pt.B.size(); ++i) {
    auto l = conjugation_limit(mu.v0, mu.v0, pt.B[i]);
    if (!l) return std::nullopt;
    out.B[i] = *l;
  }
  for (const auto& x : pt.pres.punctures) {
    auto lin = conjugation_limit(mu.vx.at(x), mu.v0, pt.c_in.at(x));
    if (!lin) return std::nullopt;
    auto lout = conjugation_limit(mu.v0, mu.vx.at(x), pt.c_out.at(x));
    if (!lout) return std::nullopt;
    out.c_in.at(x) = *lin;
    out.c_out.at(x) = *lout;
  }
  // arrow matrices must stay invertible for the limit to lie in the locus
  for (const auto& m : out.A)
    if (!is_invertible(m)) return std::nullopt;
  for (const auto& m : out.B)
    if (!is_invertible(m)) return std::nullopt;
  for (const auto& [x, m] : out.c_in)
    if (!is_invertible(m)) return std::nullopt;
  for (const auto& [x, m] : out.c_out)
    if (!is_invertible(m)) return std::nullopt;
  return out;
}

template <ExactField K>
bool limit_exists(const GaugeCocharacter<K>& mu, const QuiverPoint<K>& pt) {
  return point_limit(mu, pt).has_value();
}

/// The cross-check value -d * sum_j (d'_j - d'_{j-1}) deg(L_{j,.}) from the
/// flag of mu_{v0}; equals the pairing exactly whenever the limit exists.
template <ExactField K>
Rat pairing_via_degree_formula(const GaugeCocharacter<K>& mu, const FilteredLocalSystem<K>& fls,
                               const CharacterChiTheta& chi) {
  Flag<K> f = mu.v0.to_flag();
  for (std::size_t j = 2; j <= f.num_steps(); ++j)
    if (!fls.rep().is_invariant(f.step(j)))
      fail_pre("pairing_via_degree_formula: flag of mu is not rho-invariant");
  auto dw = mu.v0.step_weights();  // increasing with depth, 1-based
  Rat total(0);
  long prev = 0;
  for (std::size_t j = 1; j <= f.num_steps(); ++j) {
    Rat degj = j == 1 ? fls.degree() : sub_degree_by_intersections(fls, f.step(j));
    total += Rat(dw[j - 1] - prev) * degj;
    prev = dw[j - 1];
  }
  return Rat(-chi.d) * total;
}

// ---------------------------------------------------------------------------
// King's numerical criterion
// ---------------------------------------------------------------------------

namespace detail {

/// Build the gauge cocharacter determined by an invariant subspace w
/// (weight 1) and a complement c (weight 0): mu_{v_x} = c_in mu_{v0} c_in^-1.
template <ExactField K>
GaugeCocharacter<K> two_step_cocharacter(const QuiverPoint<K>& pt, const Subspace<K>& w,
                                         const Subspace<K>& c) {
  std::size_t n = pt.n();
  const K proto = pt.proto();
  Matrix<K> basis(n, n, proto.zero());
  for (std::size_t i = 0; i < w.dim(); ++i)
    for (std::size_t j = 0; j < n; ++j) basis.at(j, i) = w.basis().at(i, j);
  for (std::size_t i = 0; i < c.dim(); ++i)
    for (std::size_t j = 0; j < n; ++j) basis.at(j, w.dim() + i) = c.basis().at(i, j);
  GradedCocharacter<K> mu0({{1, w.dim()}, {0, n - w.dim()}}, std::move(basis));
  GaugeCocharacter<K> mu{mu0, {}};
  for (const auto& x : pt.pres.punctures) mu.vx.emplace(x, mu0.conjugated(pt.c_in.at(x)));
  return mu;
}

/// Pairing of the two-step cocharacter of w via the bigraded intersection
/// numbers of the transported subspace against the standard flags:
/// sum_x sum_i -d_{x,i} * dim(w_x ∩ V_{x,i} / w_x ∩ V_{x,i+1}). Independent
/// of the complement choice.
template <ExactField K>
long two_step_pairing(const QuiverPoint<K>& pt, const TypeData<K>& type,
                      const CharacterChiTheta& chi, const Subspace<K>& w) {
  long total = 0;
  for (const auto& [x, p] : type) {
    Subspace<K> tw = w.apply(pt.c_in.at(x));
    const auto& e = chi.exps.at(x);
    std::size_t ns = p.flag().num_steps();
    for (std::size_t i = 1; i <= ns; ++i) {
      if (e.at(i - 1) == 0) continue;
      long di = static_cast<long>(tw.intersect(p.flag().step(i)).dim());
      long dn = static_cast<long>(tw.intersect(p.flag().step_or_zero(i + 1)).dim());
      total += -e.at(i - 1) * (di - dn);
    }
  }
  return total;
}

template <ExactField K>
bool admissible_pair(const QuiverPoint<K>& pt, const TypeData<K>& type, const Subspace<K>& w,
                     const Subspace<K>& c) {
  if (w.intersect(c).dim() != 0 || w.dim() + c.dim() != pt.n()) return false;
  auto mu = two_step_cocharacter(pt, w, c);
  for (const auto& [x, p] : type)
    if (!mu.vx.at(x).lands_in_levi(p)) return false;
  return limit_exists(mu, pt);
}

}  // namespace detail

/// King's criterion at a point: semistable iff <mu, chi_theta> >= 0 for
/// every relevant cocharacter, stable iff only Delta-valued ones pair to
/// zero. Every relevant mu is determined by a rho-invariant flag with
/// strictly increasing step weights, and by linearity in the weight gaps
/// the scan reduces to two-step flags with gap one, one per invariant
/// subspace; the pairing is evaluated through the quiver data (transported
/// block intersections), not through the degree formula.
template <ExactField K>
StabilityVerdict<K> king_check(const QuiverPoint<K>& pt, const TypeData<K>& type,
                               const CharacterChiTheta& chi) {
  auto witnesses = membership_in_type(pt, type);
  if (!witnesses) fail_pre("king_check: point is not in the membership locus");
  SurfaceRep<K> rep = point_to_rep(pt);

  // chi must kill the diagonal scalars: sum d_{x,i} lambda_{x,i} = 0
  long delta_exp = 0;
  for (const auto& [x, p] : type) {
    auto lam = p.flag().partition();
    const auto& e = chi.exps.at(x);
    for (std::size_t i = 0; i < lam.size(); ++i) delta_exp += e.at(i) * static_cast<long>(lam[i]);
  }
  if (delta_exp != 0)
    fail_pre("king_check requires degree zero (chi nontrivial on the scalar kernel)");

  auto lat = rep.invariant_lattice();
  StabilityVerdict<K> v;

  if (chi.trivial()) {
    auto wit = lat.some_proper();
    if (wit) {
      // every pairing vanishes; a proper invariant flag denies stability
      v.cls = StabilityVerdict<K>::Class::semistable_not_stable;
      v.witness = *wit;
      v.witness_rank = wit->dim();
      return v;
    }
    if (!lat.complete) fail_incomplete("invariant lattice incomplete; verdict withheld");
    v.cls = StabilityVerdict<K>::Class::stable;
    return v;
  }

  std::optional<Subspace<K>> neg_witness, zero_witness;
  long neg_pairing = 0;
  for (const auto& w : lat.proper()) {
    long p = detail::two_step_pairing(pt, type, chi, w);
    if (p < 0 && (!neg_witness || p < neg_pairing)) {
      neg_witness = w;
      neg_pairing = p;
    } else if (p == 0 && !zero_witness) {
      zero_witness = w;
    }
  }
  if (!neg_witness && !lat.complete)
    fail_incomplete("invariant lattice incomplete; verdict withheld");

  if (neg_witness) {
    v.cls = StabilityVerdict<K>::Class::unstable;
    v.witness = neg_witness;
    v.witness_rank = neg_witness->dim();
    v.witness_degree = Rat(neg_pairing);
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

// ---------------------------------------------------------------------------
// GIT equivalence over a finite field
// ---------------------------------------------------------------------------

inline std::vector<Matrix<Fp>> all_invertible(std::size_t n, const Fp& proto) {
  std::vector<Matrix<Fp>> out;
  std::uint32_t p = proto.modulus();
  std::vector<std::uint32_t> v(n * n, 0);
  while (true) {
    Matrix<Fp> m(n, n, proto.zero());
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m.at(i, j) = Fp(p, v[i * n + j]);
    if (is_invertible(m)) out.push_back(m);
    std::size_t k = 0;
    while (k < v.size() && ++v[k] == p) v[k++] = 0;
    if (k == v.size()) break;
  }
  return out;
}

/// All elements of the Levi of a parabolic over F_p.
inline std::vector<Matrix<Fp>> all_levi_elements(const ParabolicGL<Fp>& p, const Fp& proto) {
  std::vector<std::vector<Matrix<Fp>>> per_block;
  for (std::size_t b = 0; b < p.num_blocks(); ++b)
    per_block.push_back(all_invertible(p.block_dim(b), proto));
  std::vector<Matrix<Fp>> out;
  std::vector<std::size_t> idx(per_block.size(), 0);
  std::size_t n = p.ambient();
  while (true) {
    Matrix<Fp> m(n, n, proto.zero());
    for (std::size_t b = 0; b < per_block.size(); ++b) {
      std::size_t off = p.block_offset(b);
      const auto& blk = per_block[b][idx[b]];
      for (std::size_t i = 0; i < blk.rows(); ++i)
        for (std::size_t j = 0; j < blk.cols(); ++j) m.at(off + i, off + j) = blk.at(i, j);
    }
    out.push_back(p.adapted() * m * p.adapted_inv());
    std::size_t k = 0;
    while (k < idx.size() && ++idx[k] == per_block[k].size()) idx[k++] = 0;
    if (k == idx.size()) break;
  }
  return out;
}

namespace detail {

/// Serialized keys of the whole gauge orbit of a point. Inverses of the
/// Levi elements are precomputed once; the v0 conjugations once per g0.
inline std::set<std::string> orbit_keys(const QuiverPoint<Fp>& pt, const TypeData<Fp>& type,
                                        double budget) {
  const Fp proto = pt.proto();
  auto gl = all_invertible(pt.n(), proto);
  std::vector<std::string> xs;
  std::vector<std::vector<Matrix<Fp>>> levi, levi_inv;
  double size = static_cast<double>(gl.size());
  for (const auto& [x, p] : type) {
    xs.push_back(x);
    levi.push_back(all_levi_elements(p, proto));
    levi_inv.emplace_back();
    for (const auto& l : levi.back()) levi_inv.back().push_back(inverse(l));
    size *= static_cast<double>(levi.back().size());
  }
  if (size > budget) fail_pre("git_equivalent: gauge-orbit enumeration budget exceeded");

  std::set<std::string> keys;
  QuiverPoint<Fp> cur = pt;
  std::vector<std::size_t> idx(xs.size(), 0);
  for (const auto& g0 : gl) {
    Matrix<Fp> g0i = inverse(g0);
    for (std::size_t i = 0; i < pt.A.size(); ++i) cur.A[i] = g0 * pt.A[i] * g0i;
    for (std::size_t i = 0; i < pt.B.size(); ++i) cur.B[i] = g0 * pt.B[i] * g0i;
    std::vector<Matrix<Fp>> in_right, out_left;
    for (const auto& x : xs) {
      in_right.push_back(pt.c_in.at(x) * g0i);
      out_left.push_back(g0 * pt.c_out.at(x));
    }
    std::fill(idx.begin(), idx.end(), 0);
    while (true) {
      for (std::size_t i = 0; i < xs.size(); ++i) {
        cur.c_in.at(xs[i]) = levi[i][idx[i]] * in_right[i];
        cur.c_out.at(xs[i]) = out_left[i] * levi_inv[i][idx[i]];
      }
      keys.insert(cur.key());
      std::size_t k = 0;
      while (k < idx.size() && ++idx[k] == levi[k].size()) idx[k++] = 0;
      if (k == idx.size()) break;
    }
  }
  return keys;
}

/// Drive the point into its closed orbit: keep taking limits along
/// admissible zero-pairing cocharacters until every such limit stays in
/// the current orbit (King's closedness criterion).
inline QuiverPoint<Fp> closed_orbit_representative(QuiverPoint<Fp> pt, const TypeData<Fp>& type,
                                                   const CharacterChiTheta& chi, double budget,
                                                   std::set<std::string>* final_orbit) {
  const Fp proto = pt.proto();
  for (std::size_t round = 0; round <= 2 * pt.n() + 2; ++round) {
    auto keys = orbit_keys(pt, type, budget);
    SurfaceRep<Fp> rep = point_to_rep(pt);
    auto lat = rep.invariant_lattice();
    bool moved = false;
    for (const auto& w : lat.proper()) {
      if (two_step_pairing(pt, type, chi, w) != 0) continue;
      for (const auto& c : all_subspaces(pt.n(), proto)) {
        if (c.dim() != pt.n() - w.dim()) continue;
        if (!admissible_pair(pt, type, w, c)) continue;
        auto mu = two_step_cocharacter(pt, w, c);
        auto lim = point_limit(mu, pt);
        if (!lim) continue;
        if (keys.count(lim->key())) continue;
        pt = *lim;
        moved = true;
        break;
      }
      if (moved) break;
    }
    if (!moved) {
      if (final_orbit) *final_orbit = std::move(keys);
      return pt;
    }
  }
  fail_pre("closed-orbit descent did not converge (internal)");
}

}  // namespace detail

/// GIT equivalence of two semistable points over F_p: drive both to their
/// closed orbits along zero-pairing cocharacters, then compare gauge
/// orbits by direct enumeration.
inline bool git_equivalent(const QuiverPoint<Fp>& p1, const QuiverPoint<Fp>& p2,
                           const TypeData<Fp>& type, const CharacterChiTheta& chi,
                           double budget = 5e7) {
  for (const auto* p : {&p1, &p2}) {
    auto verdict = king_check(*p, type, chi);
    if (!verdict.is_semistable()) fail_pre("git_equivalent requires semistable points");
  }
  std::set<std::string> orbit1;
  QuiverPoint<Fp> r1 = detail::closed_orbit_representative(p1, type, chi, budget, &orbit1);
  QuiverPoint<Fp> r2 = detail::closed_orbit_representative(p2, type, chi, budget, nullptr);
  return orbit1.count(r2.key()) > 0;
}

/// Orbit dimension via the stabilizer Lie algebra: a diagnostic, not a
/// verdict source. dim G_P - dim{(X0, X_x): X_x c_in = c_in X0,
/// X0 c_out = c_out X_x, [X0, a] = [X0, b] = 0} with X_x ranging over the
/// Levi Lie algebra.
template <ExactField K>
std::size_t orbit_dimension(const QuiverPoint<K>& pt, const TypeData<K>& type) {
  std::size_t n = pt.n();
  const K proto = pt.proto();
  // unknowns: X0 (n^2) then for each puncture the block entries of X_x
  std::vector<std::pair<std::string, std::vector<std::pair<std::size_t, std::size_t>>>> levi_coords;
  std::size_t unknowns = n * n;
  for (const auto& [x, p] : type) {
    std::vector<std::pair<std::size_t, std::size_t>> coords;
    for (std::size_t b = 0; b < p.num_blocks(); ++b) {
      std::size_t off = p.block_offset(b), sz = p.block_dim(b);
      for (std::size_t i = 0; i < sz; ++i)
        for (std::size_t j = 0; j < sz; ++j) coords.emplace_back(off + i, off + j);
    }
    levi_coords.emplace_back(x, std::move(coords));
    unknowns += levi_coords.back().second.size();
  }

  std::vector<std::vector<K>> rows;
  auto fresh = [&]() { return std::vector<K>(unknowns, proto.zero()); };
  // [X0, m] = 0 for loop arrows
  auto add_commutator = [&](const Matrix<K>& m) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        auto row = fresh();
        for (std::size_t k = 0; k < n; ++k) {
          row[i * n + k] += m.at(k, j);
          row[k * n + j] -= m.at(i, k);
        }
        rows.push_back(std::move(row));
      }
  };
  for (const auto& m : pt.A) add_commutator(m);
  for (const auto& m : pt.B) add_commutator(m);

  std::size_t offset = n * n;
  for (const auto& [x, coords] : levi_coords) {
    const auto& p = type.at(x);
    const Matrix<K>& ad = p.adapted();
    const Matrix<K>& adi = p.adapted_inv();
    const Matrix<K>& cin = pt.c_in.at(x);
    const Matrix<K>& cout = pt.c_out.at(x);
    // X_x = ad * Y * ad^-1 with Y supported on the Levi block coordinates
    // equations: X_x cin - cin X0 = 0 and X0 cout - cout X_x = 0
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        auto row = fresh();
        for (std::size_t t = 0; t < coords.size(); ++t) {
          auto [a, b] = coords[t];
          // (ad E_ab ad^-1 cin)_{ij} = ad_{ia} (ad^-1 cin)_{bj}
          row[offset + t] += ad.at(i, a) * (adi * cin).at(b, j);
        }
        for (std::size_t k = 0; k < n; ++k) row[k * n + j] -= cin.at(i, k);
        rows.push_back(std::move(row));
      }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        auto row = fresh();
        for (std::size_t k = 0; k < n; ++k) row[i * n + k] += cout.at(k, j);
        for (std::size_t t = 0; t < coords.size(); ++t) {
          auto [a, b] = coords[t];
          row[offset + t] -= (cout * ad).at(i, a) * adi.at(b, j);
        }
        rows.push_back(std::move(row));
      }
    offset += coords.size();
  }

  Matrix<K> sys(rows.size(), unknowns, proto.zero());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < unknowns; ++j) sys.at(i, j) = rows[i][j];
  std::size_t stab_dim = unknowns - rank(sys);
  return unknowns - stab_dim;  // dim of the orbit = dim G_P - dim Stab
}

}  // namespace fls
