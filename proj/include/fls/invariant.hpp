#pragma once

#include <algorithm>
#include <set>
#include <type_traits>
#include <vector>

#include "fls/flag.hpp"
#include "fls/poly.hpp"
#include "fls/subspace.hpp"

namespace fls {

template <ExactField K>
struct EigenResult {
  std::vector<K> values;  // distinct eigenvalues found in the field
  bool split;             // char poly splits into linear factors over the field
  bool certified;         // the root search itself was exhaustive
};

namespace detail {

struct ZFactorization {
  bool complete;
  std::vector<std::pair<mpz_class, int>> primes;
};

inline ZFactorization factor_mpz(mpz_class v, unsigned long bound = 1000000) {
  ZFactorization f{true, {}};
  if (v < 0) v = -v;
  if (v <= 1) return f;
  for (mpz_class d = 2; d * d <= v && d <= bound; ++d) {
    if (v % d == 0) {
      int e = 0;
      while (v % d == 0) {
        v /= d;
        ++e;
      }
      f.primes.emplace_back(d, e);
    }
  }
  if (v > 1) {
    // leftover is prime if below bound^2, otherwise unresolved
    if (v <= mpz_class(bound) * bound)
      f.primes.emplace_back(v, 1);
    else
      f.complete = false;
  }
  return f;
}

inline std::vector<mpz_class> divisors(const ZFactorization& f, std::size_t cap = 100000) {
  std::vector<mpz_class> out{1};
  for (const auto& [p, e] : f.primes) {
    std::size_t base = out.size();
    mpz_class pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) {
        out.push_back(out[i] * pk);
        if (out.size() > cap) return out;  // caller treats overflow as uncertified
      }
    }
  }
  return out;
}

}  // namespace detail

/// Rational eigenvalues via rational-root search on the characteristic
/// polynomial (candidates u/v with v | lead, u | constant after clearing
/// denominators).
inline EigenResult<Rat> find_eigenvalues(const Matrix<Rat>& a) {
  Poly<Rat> cp = char_poly(a);
  EigenResult<Rat> res{{}, false, true};

  mpz_class den_lcm = 1;
  for (const auto& c : cp.coeffs()) {
    mpz_class d = c.den();
    den_lcm = den_lcm / gcd(den_lcm, d) * d;
  }
  Poly<Rat> work = cp;

  // strip roots at zero first
  {
    std::size_t z = 0;
    auto cs = work.coeffs();
    while (z < cs.size() && cs[z].is_zero()) ++z;
    if (z > 0) {
      res.values.push_back(Rat(0));
      work = Poly<Rat>(Rat(0), std::vector<Rat>(cs.begin() + z, cs.end()));
    }
  }
  if (work.degree() <= 0) {
    res.split = true;
    return res;
  }

  mpz_class lead_i = work.lead().num() * (den_lcm / work.lead().den());
  mpz_class const_i = work.coeff(0).num() * (den_lcm / work.coeff(0).den());
  auto f_lead = detail::factor_mpz(lead_i);
  auto f_const = detail::factor_mpz(const_i);
  if (!f_lead.complete || !f_const.complete) res.certified = false;
  auto dl = detail::divisors(f_lead);
  auto dc = detail::divisors(f_const);
  if (dl.size() >= 100000 || dc.size() >= 100000) res.certified = false;

  std::set<Rat> roots;
  for (const auto& u : dc)
    for (const auto& v : dl) {
      Rat cand(mpq_class(u, v));
      for (int s = 0; s < 2; ++s) {
        Rat r = s ? -cand : cand;
        if (work.eval(r).is_zero()) roots.insert(r);
      }
    }
  Poly<Rat> rem = work;
  for (const auto& r : roots) {
    res.values.push_back(r);
    while (true) {
      auto [q, rr] = divmod(rem, Poly<Rat>::x_minus(r));
      if (!rr.is_zero()) break;
      rem = q;
    }
  }
  res.split = res.certified && rem.degree() <= 0;
  std::sort(res.values.begin(), res.values.end());
  return res;
}

/// Over F_p every root is found by scanning the field (guarded).
inline EigenResult<Fp> find_eigenvalues(const Matrix<Fp>& a) {
  Poly<Fp> cp = char_poly(a);
  EigenResult<Fp> res{{}, false, true};
  std::uint32_t p = a.proto().modulus();
  if (p > 200000) {
    res.certified = false;
    return res;
  }
  Poly<Fp> rem = cp;
  for (std::uint32_t v = 0; v < p; ++v) {
    Fp r(p, v);
    if (!rem.is_zero() && rem.eval(r).is_zero()) {
      res.values.push_back(r);
      while (true) {
        auto [q, rr] = divmod(rem, Poly<Fp>::x_minus(r));
        if (!rr.is_zero()) break;
        rem = q;
      }
    }
  }
  res.split = rem.degree() <= 0;
  return res;
}

template <ExactField K>
Subspace<K> eigenspace_of(const Matrix<K>& a, const K& lambda) {
  std::size_t n = a.rows();
  Matrix<K> shifted = a;
  for (std::size_t i = 0; i < n; ++i) shifted.at(i, i) -= lambda;
  return Subspace<K>::span_rows(kernel_basis(shifted), a.proto());
}

/// Largest subspace T of S with g(T) <= T (iterated T ∩ g^{-1} T).
template <ExactField K>
Subspace<K> stable_core(Subspace<K> s, const Matrix<K>& g) {
  Matrix<K> ginv = inverse(g);
  while (true) {
    Subspace<K> next = s.intersect(s.apply(ginv));
    if (next == s) return s;
    s = std::move(next);
  }
}

/// Restriction of g to an invariant subspace w, in the basis given by w's
/// canonical rows: solve B^T R = (g B^T).
template <ExactField K>
Matrix<K> restrict_to(const Matrix<K>& g, const Subspace<K>& w) {
  if (w.dim() == 0) return Matrix<K>(0, 0, w.proto().zero());
  Matrix<K> bt = w.basis().transpose();               // n x k
  auto r = solve(bt, g * bt);                          // k x k
  if (!r) fail_pre("restrict_to: subspace not invariant");
  return *r;
}

template <ExactField K>
struct EigenlineScan {
  std::vector<Subspace<K>> lines;     // all rational common eigenlines
  std::vector<Subspace<K>> plateaus;  // joint scalar eigenspaces of dim >= 2
  bool certified_split = true;        // every restriction's char poly split
  bool roots_certified = true;        // every root search was exhaustive
};

namespace detail {

template <ExactField K>
void eigenline_recurse(const std::vector<Matrix<K>>& gens, std::size_t k, const Subspace<K>& space,
                       EigenlineScan<K>& out) {
  if (space.is_zero()) return;
  if (k == gens.size()) {
    if (space.dim() == 1)
      out.lines.push_back(space);
    else
      out.plateaus.push_back(space);
    return;
  }
  Subspace<K> core = stable_core(space, gens[k]);
  if (core.is_zero()) return;
  Matrix<K> r = restrict_to(gens[k], core);
  auto eig = find_eigenvalues(r);
  if (!eig.split) out.certified_split = false;
  if (!eig.certified) out.roots_certified = false;
  for (const auto& lam : eig.values) {
    // lift ker(r - lam) back into the ambient space
    Subspace<K> small = eigenspace_of(r, lam);
    if (small.is_zero()) continue;
    Matrix<K> lifted = small.basis() * core.basis();
    eigenline_recurse(gens, k + 1, Subspace<K>::span_rows(lifted, space.proto()), out);
  }
}

}  // namespace detail

/// All Q-rational (resp. F_p-rational) common eigenlines of a generator
/// set, plus the joint scalar eigenspaces of dimension >= 2 ("plateaus",
/// inside which every line is invariant).
template <ExactField K>
EigenlineScan<K> common_eigenlines(const std::vector<Matrix<K>>& gens, std::size_t n, const K& proto) {
  EigenlineScan<K> out;
  detail::eigenline_recurse(gens, 0, Subspace<K>::full(n, proto), out);
  return out;
}

/// Dimension of the unital algebra generated by the matrices (Burnside:
/// equal to n^2 iff the module is absolutely irreducible).
template <ExactField K>
std::size_t algebra_dimension(const std::vector<Matrix<K>>& gens, std::size_t n, const K& proto) {
  auto flatten = [&](const Matrix<K>& m) {
    Matrix<K> row(1, n * n, proto.zero());
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) row.at(0, i * n + j) = m.at(i, j);
    return row;
  };
  std::vector<Matrix<K>> basis_mats{Matrix<K>::identity(n, proto)};
  Matrix<K> span(1, n * n, proto.zero());
  span = flatten(basis_mats[0]);
  auto add = [&](const Matrix<K>& m) -> bool {
    Matrix<K> st(span.rows() + 1, n * n, proto.zero());
    for (std::size_t i = 0; i < span.rows(); ++i)
      for (std::size_t j = 0; j < n * n; ++j) st.at(i, j) = span.at(i, j);
    Matrix<K> f = flatten(m);
    for (std::size_t j = 0; j < n * n; ++j) st.at(span.rows(), j) = f.at(0, j);
    auto r = rref(st);
    if (r.rank == span.rows()) return false;
    span = r.mat.row_slice(0, r.rank);
    basis_mats.push_back(m);
    return true;
  };
  std::size_t frontier = 0;
  while (frontier < basis_mats.size() && span.rows() < n * n) {
    std::size_t end = basis_mats.size();
    for (std::size_t i = frontier; i < end; ++i)
      for (const auto& g : gens) {
        add(basis_mats[i] * g);
        if (span.rows() == n * n) return n * n;
      }
    frontier = end;
  }
  return span.rows();
}

template <ExactField K>
bool all_scalar(const std::vector<Matrix<K>>& gens, std::size_t n) {
  for (const auto& g : gens) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j && !g.at(i, j).is_zero()) return false;
        if (i != j) continue;
        if (!(g.at(i, i) == g.at(0, 0))) return false;
      }
  }
  return true;
}

template <ExactField K>
struct InvariantLattice {
  std::size_t ambient = 0;
  std::vector<Matrix<K>> generators;
  std::vector<Subspace<K>> subspaces;  // canonical sorted list, includes 0 and full
  bool complete = false;               // list provably exhaustive (over the closure)
  std::vector<Subspace<K>> plateaus;   // joint scalar eigenspaces of dim >= 2
  bool scalar_algebra = false;         // all generators scalar

  bool has_proper() const {
    for (const auto& s : subspaces)
      if (!s.is_zero() && !s.is_full()) return true;
    return !plateaus.empty() || (scalar_algebra && ambient >= 2);
  }

  std::vector<Subspace<K>> proper() const {
    std::vector<Subspace<K>> out;
    for (const auto& s : subspaces)
      if (!s.is_zero() && !s.is_full()) out.push_back(s);
    return out;
  }

  /// Any proper nonzero invariant subspace, also in the incomplete cases
  /// that only carry a plateau.
  std::optional<Subspace<K>> some_proper() const {
    auto pr = proper();
    if (!pr.empty()) return pr.front();
    for (const auto& p : plateaus) {
      if (p.is_full()) {
        // every line is invariant; take the first coordinate line
        Matrix<K> e1(1, ambient, p.proto().zero());
        e1.at(0, 0) = p.proto().one();
        return Subspace<K>::span_rows(e1, p.proto());
      }
      return p;
    }
    return std::nullopt;
  }
};

namespace detail {

template <ExactField K>
void insert_sorted(std::vector<Subspace<K>>& v, const Subspace<K>& s) {
  auto it = std::lower_bound(v.begin(), v.end(), s);
  if (it == v.end() || !(*it == s)) v.insert(it, s);
}

}  // namespace detail

/// Closure of a subspace list under pairwise sum and intersection.
/// Idempotent; the budget guards against pathological growth.
template <ExactField K>
std::vector<Subspace<K>> lattice_meet_join(std::vector<Subspace<K>> subs, std::size_t budget = 4096) {
  std::sort(subs.begin(), subs.end());
  subs.erase(std::unique(subs.begin(), subs.end()), subs.end());
  bool grew = true;
  while (grew) {
    grew = false;
    std::size_t sz = subs.size();
    for (std::size_t i = 0; i < sz; ++i)
      for (std::size_t j = i + 1; j < sz; ++j) {
        for (const Subspace<K>& c : {subs[i].sum(subs[j]), subs[i].intersect(subs[j])}) {
          auto it = std::lower_bound(subs.begin(), subs.end(), c);
          if (it == subs.end() || !(*it == c)) {
            subs.insert(it, c);
            grew = true;
            if (subs.size() > budget) fail_pre("lattice closure budget exceeded");
          }
        }
      }
  }
  return subs;
}

/// Spin a vector: smallest subspace containing v closed under all
/// generators.
template <ExactField K>
Subspace<K> spin(const Matrix<K>& v, const std::vector<Matrix<K>>& gens, const K& proto) {
  Subspace<K> s = Subspace<K>::span_rows(v, proto);
  while (true) {
    Subspace<K> next = s;
    for (const auto& g : gens) next = next.sum(s.apply(g));
    if (next == s) return s;
    s = std::move(next);
  }
}

/// Exhaustive backend: scan every subspace of F_p^n.
inline InvariantLattice<Fp> invariant_subspaces_exhaustive(const std::vector<Matrix<Fp>>& gens,
                                                           std::size_t n, const Fp& proto) {
  double budget = 1;
  for (std::size_t i = 0; i < n; ++i) budget *= proto.modulus();
  if (budget > 1e7) fail_pre("exhaustive F_p budget exceeded (p^n > 10^7)");
  for (const auto& g : gens)
    if (!is_invertible(g)) fail_pre("singular generator");
  InvariantLattice<Fp> lat;
  lat.ambient = n;
  lat.generators = gens;
  lat.scalar_algebra = all_scalar(gens, n);
  for (const auto& s : all_subspaces(n, proto)) {
    bool inv = true;
    for (const auto& g : gens)
      if (!s.is_invariant_under(g)) {
        inv = false;
        break;
      }
    if (inv) lat.subspaces.push_back(s);
  }
  std::sort(lat.subspaces.begin(), lat.subspaces.end());
  lat.complete = true;
  return lat;
}

/// Spin backend over any exact field: eigenvectors of the generators and
/// of deterministic words of length <= 3, spun and closed under meet/join.
/// For n <= 3 the rational eigenline/eigenplane analysis makes the list
/// provably complete unless a plateau or a non-split restriction shows up.
template <ExactField K>
InvariantLattice<K> invariant_subspaces_spin(const std::vector<Matrix<K>>& gens, std::size_t n,
                                             const K& proto) {
  for (const auto& g : gens)
    if (!is_invertible(g)) fail_pre("singular generator");
  InvariantLattice<K> lat;
  lat.ambient = n;
  lat.generators = gens;
  lat.scalar_algebra = all_scalar(gens, n);
  std::vector<Subspace<K>> subs{Subspace<K>::zero(n, proto), Subspace<K>::full(n, proto)};

  // deterministic words of length <= 3
  std::vector<Matrix<K>> words;
  for (const auto& g : gens) words.push_back(g);
  std::size_t m = gens.size();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) words.push_back(gens[i] * gens[j]);
  if (n <= 4) {  // cubic words only while matrices are small
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        for (std::size_t k = 0; k < m; ++k) words.push_back(gens[i] * (gens[j] * gens[k]));
  }

  bool roots_certified = true;
  for (const auto& w : words) {
    auto eig = find_eigenvalues(w);
    if (!eig.certified) roots_certified = false;
    for (const auto& lam : eig.values) {
      Subspace<K> es = eigenspace_of(w, lam);
      for (std::size_t r = 0; r < es.dim(); ++r)
        detail::insert_sorted(subs, spin(es.basis().row(r), gens, proto));
    }
  }

  // exact line (and for n = 3, plane) enumeration
  auto primal = common_eigenlines(gens, n, proto);
  for (const auto& l : primal.lines) detail::insert_sorted(subs, l);
  EigenlineScan<K> dual;
  if (n == 3) {
    std::vector<Matrix<K>> tg;
    for (const auto& g : gens) tg.push_back(g.transpose());
    dual = common_eigenlines(tg, n, proto);
    for (const auto& l : dual.lines)
      detail::insert_sorted(subs, Subspace<K>::span_rows(kernel_basis(l.basis()), proto));
  }

  lat.subspaces = lattice_meet_join(std::move(subs));
  lat.plateaus = primal.plateaus;

  bool commuting = true;
  for (std::size_t i = 0; i < m && commuting; ++i)
    for (std::size_t j = i + 1; j < m && commuting; ++j)
      if (!(gens[i] * gens[j] == gens[j] * gens[i])) commuting = false;

  bool burnside = n >= 1 && algebra_dimension(gens, n, proto) == n * n;
  bool no_plateau = primal.plateaus.empty();
  bool rc = roots_certified && primal.roots_certified && dual.roots_certified;
  if (n <= 1)
    lat.complete = true;
  else if (burnside)
    lat.complete = true;
  else if (n == 2 && no_plateau && rc && (primal.certified_split || !commuting))
    lat.complete = true;
  else if (n == 3 && no_plateau && dual.plateaus.empty() && rc && primal.certified_split &&
           dual.certified_split)
    lat.complete = true;
  else
    lat.complete = false;
  return lat;
}

/// Lattice invariance transport: the set of subspaces of g . lat.
template <ExactField K>
std::vector<Subspace<K>> transport(const std::vector<Subspace<K>>& subs, const Matrix<K>& g) {
  std::vector<Subspace<K>> out;
  out.reserve(subs.size());
  for (const auto& s : subs) out.push_back(s.apply(g));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace fls
