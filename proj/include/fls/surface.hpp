#pragma once

#include <map>
#include <string>
#include <vector>

#include "fls/invariant.hpp"
#include "fls/matrix.hpp"

namespace fls {

/// Genus-g curve minus an ordered finite set of punctures. Generators are
/// a_1..a_g, b_1..b_g and one loop c_x per puncture, subject to the single
/// relation prod [a_i,b_i] * prod c_x = id (punctures in list order).
struct SurfacePresentation {
  std::size_t genus = 0;
  std::vector<std::string> punctures;

  SurfacePresentation() = default;
  SurfacePresentation(std::size_t g, std::vector<std::string> xs)
      : genus(g), punctures(std::move(xs)) {
    for (std::size_t i = 0; i < punctures.size(); ++i)
      for (std::size_t j = i + 1; j < punctures.size(); ++j)
        if (punctures[i] == punctures[j]) fail_input("duplicate puncture label " + punctures[i]);
  }

  bool operator==(const SurfacePresentation& o) const {
    return genus == o.genus && punctures == o.punctures;
  }
};

template <ExactField K>
struct GeneratorImages {
  std::vector<Matrix<K>> A;
  std::vector<Matrix<K>> B;
  std::map<std::string, Matrix<K>> C;
};

/// prod [A_i, B_i] * prod_x C_x == id, punctures multiplied in
/// presentation order.
template <ExactField K>
bool verify_relation(const SurfacePresentation& pres, const GeneratorImages<K>& gen) {
  if (gen.A.size() != pres.genus || gen.B.size() != pres.genus)
    fail_pre("generator count does not match genus");
  std::size_t n = 0;
  auto take_size = [&](const Matrix<K>& m) {
    if (!m.is_square()) fail_pre("generator matrices must be square");
    if (n == 0) n = m.rows();
    if (m.rows() != n) fail_pre("generator matrices must share one size");
    if (!is_invertible(m)) fail_pre("singular generator matrix");
  };
  for (const auto& m : gen.A) take_size(m);
  for (const auto& m : gen.B) take_size(m);
  for (const auto& x : pres.punctures) {
    auto it = gen.C.find(x);
    if (it == gen.C.end()) fail_pre("missing matrix for puncture " + x);
    take_size(it->second);
  }
  if (n == 0) return true;  // empty fundamental group, nothing to check
  Matrix<K> acc = Matrix<K>::identity(n, gen.A.empty() ? gen.C.begin()->second.proto() : gen.A[0].proto());
  for (std::size_t i = 0; i < pres.genus; ++i) acc = acc * commutator(gen.A[i], gen.B[i]);
  for (const auto& x : pres.punctures) acc = acc * gen.C.at(x);
  return acc.is_identity();
}

/// Matrix representation of the punctured-surface group. The defining
/// relation and invertibility are enforced at construction.
template <ExactField K>
class SurfaceRep {
public:
  SurfaceRep(SurfacePresentation pres, GeneratorImages<K> gen)
      : pres_(std::move(pres)), gen_(std::move(gen)) {
    if (!verify_relation(pres_, gen_)) fail_pre("surface relation not satisfied");
    n_ = 0;
    if (!gen_.A.empty())
      n_ = gen_.A[0].rows();
    else if (!gen_.C.empty())
      n_ = gen_.C.begin()->second.rows();
  }

  const SurfacePresentation& presentation() const { return pres_; }
  std::size_t rank() const { return n_; }
  const K& proto() const {
    if (!gen_.A.empty()) return gen_.A[0].proto();
    return gen_.C.begin()->second.proto();
  }

  const std::vector<Matrix<K>>& A() const { return gen_.A; }
  const std::vector<Matrix<K>>& B() const { return gen_.B; }
  const Matrix<K>& C(const std::string& x) const { return gen_.C.at(x); }

  /// All generator matrices in a fixed order: a_1..a_g, b_1..b_g, c_x in
  /// puncture order.
  std::vector<Matrix<K>> generators() const {
    std::vector<Matrix<K>> out;
    for (const auto& m : gen_.A) out.push_back(m);
    for (const auto& m : gen_.B) out.push_back(m);
    for (const auto& x : pres_.punctures) out.push_back(gen_.C.at(x));
    return out;
  }

  std::vector<std::string> generator_names() const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < pres_.genus; ++i) out.push_back("a" + std::to_string(i + 1));
    for (std::size_t i = 0; i < pres_.genus; ++i) out.push_back("b" + std::to_string(i + 1));
    for (const auto& x : pres_.punctures) out.push_back("c_" + x);
    return out;
  }

  bool is_invariant(const Subspace<K>& w) const {
    for (const auto& g : generators())
      if (!w.is_invariant_under(g)) return false;
    return true;
  }

  /// Representation on an invariant subspace, in the basis of w's
  /// canonical rows. A non-invariant subspace is rejected with a witness
  /// generator and vector.
  SurfaceRep restrict(const Subspace<K>& w) const {
    auto names = generator_names();
    auto gens = generators();
    for (std::size_t i = 0; i < gens.size(); ++i) {
      if (!w.is_invariant_under(gens[i])) {
        std::string witness;
        for (std::size_t r = 0; r < w.dim(); ++r) {
          Matrix<K> v = w.basis().row(r);
          Matrix<K> gv = v * gens[i].transpose();
          if (!w.contains_vector(gv)) {
            witness = " witness generator " + names[i] + ", vector " + v.str();
            break;
          }
        }
        fail_pre("subspace not invariant under the representation;" + witness);
      }
    }
    GeneratorImages<K> out;
    for (const auto& m : gen_.A) out.A.push_back(restrict_to(m, w));
    for (const auto& m : gen_.B) out.B.push_back(restrict_to(m, w));
    for (const auto& [x, m] : gen_.C) out.C.emplace(x, restrict_to(m, w));
    return SurfaceRep(pres_, std::move(out));
  }

  /// Representation on k^n / w in the canonical coordinates given by the
  /// non-pivot columns of w.
  SurfaceRep quotient(const Subspace<K>& w) const {
    if (!is_invariant(w)) fail_pre("quotient by non-invariant subspace");
    Matrix<K> proj = quotient_projection(w);
    Matrix<K> sect = quotient_section(w);
    GeneratorImages<K> out;
    for (const auto& m : gen_.A) out.A.push_back(proj * m * sect);
    for (const auto& m : gen_.B) out.B.push_back(proj * m * sect);
    for (const auto& [x, m] : gen_.C) out.C.emplace(x, proj * m * sect);
    return SurfaceRep(pres_, std::move(out));
  }

  /// Projection k^n -> k^(n-dim w) along w onto the coordinate complement.
  Matrix<K> quotient_projection(const Subspace<K>& w) const {
    // rows of [w-basis; complement] form a basis; quotient coordinates are
    // the complement coefficients
    Subspace<K> comp = w.coordinate_complement();
    std::size_t q = comp.dim();
    Matrix<K> change(n_, n_, proto().zero());
    for (std::size_t i = 0; i < w.dim(); ++i)
      for (std::size_t j = 0; j < n_; ++j) change.at(j, i) = w.basis().at(i, j);
    for (std::size_t i = 0; i < q; ++i)
      for (std::size_t j = 0; j < n_; ++j) change.at(j, w.dim() + i) = comp.basis().at(i, j);
    Matrix<K> inv = inverse(change);
    Matrix<K> proj(q, n_, proto().zero());
    for (std::size_t i = 0; i < q; ++i)
      for (std::size_t j = 0; j < n_; ++j) proj.at(i, j) = inv.at(w.dim() + i, j);
    return proj;
  }

  /// Section of the projection: complement basis vectors as columns.
  Matrix<K> quotient_section(const Subspace<K>& w) const {
    Subspace<K> comp = w.coordinate_complement();
    Matrix<K> sect(n_, comp.dim(), proto().zero());
    for (std::size_t i = 0; i < comp.dim(); ++i)
      for (std::size_t j = 0; j < n_; ++j) sect.at(j, i) = comp.basis().at(i, j);
    return sect;
  }

  SurfaceRep conjugated(const Matrix<K>& g) const {
    Matrix<K> gi = inverse(g);
    GeneratorImages<K> out;
    for (const auto& m : gen_.A) out.A.push_back(g * m * gi);
    for (const auto& m : gen_.B) out.B.push_back(g * m * gi);
    for (const auto& [x, m] : gen_.C) out.C.emplace(x, g * m * gi);
    return SurfaceRep(pres_, std::move(out));
  }

  InvariantLattice<K> invariant_lattice() const {
    if constexpr (std::is_same_v<K, Fp>) {
      double budget = 1;
      for (std::size_t i = 0; i < n_; ++i) budget *= proto().modulus();
      if (budget <= 1e7) return invariant_subspaces_exhaustive(generators(), n_, proto());
    }
    return invariant_subspaces_spin(generators(), n_, proto());
  }

  bool operator==(const SurfaceRep& o) const {
    return pres_ == o.pres_ && gen_.A == o.gen_.A && gen_.B == o.gen_.B && gen_.C == o.gen_.C;
  }

private:
  SurfacePresentation pres_;
  GeneratorImages<K> gen_;
  std::size_t n_ = 0;
};

/// True iff the only invariant subspaces are 0 and the full space; needs a
/// complete lattice certificate.
template <ExactField K>
bool is_irreducible(const SurfaceRep<K>& rep) {
  if (rep.rank() < 1) fail_pre("is_irreducible needs rank >= 1");
  auto lat = rep.invariant_lattice();
  if (lat.has_proper()) return false;
  if (!lat.complete)
    fail_incomplete("invariant-subspace backend could not certify completeness");
  return true;
}

}  // namespace fls
