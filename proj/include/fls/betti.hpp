#pragma once

#include <map>
#include <string>

#include "fls/poly.hpp"
#include "fls/quiver.hpp"

namespace fls {

/// Fixed monodromy data: one Levi element per puncture, block-diagonal
/// with respect to the flag of its weight.
template <ExactField K>
struct MonodromyDatum {
  std::map<std::string, Matrix<K>> levi;

  void validate(const TypeData<K>& gamma) const {
    for (const auto& [x, p] : gamma) {
      auto it = levi.find(x);
      if (it == levi.end()) fail_pre("missing monodromy datum at " + x);
      if (!p.in_levi(it->second)) fail_pre("monodromy datum at " + x + " is not in the Levi");
    }
  }
};

/// Levi factors of the monodromies: with the standard witnesses g_x = c_in
/// the conjugated monodromy g_x (c_out c_in) g_x^{-1} = c_in c_out lies in
/// P_x, and its block-diagonal part is the Levi monodromy.
template <ExactField K>
std::map<std::string, Matrix<K>> levi_monodromy_map(const QuiverPoint<K>& pt,
                                                    const TypeData<K>& gamma) {
  auto witnesses = membership_in_type(pt, gamma);
  if (!witnesses) fail_pre("levi_monodromy_map: point is not in the membership locus");
  std::map<std::string, Matrix<K>> out;
  for (const auto& [x, p] : gamma)
    out.emplace(x, p.levi_factor(pt.c_in.at(x) * pt.c_out.at(x)));
  return out;
}

namespace detail {

/// Blockwise conjugacy inside the Levi, decided by rational canonical
/// forms block by block.
template <ExactField K>
bool levi_conjugate(const ParabolicGL<K>& p, const Matrix<K>& a, const Matrix<K>& b) {
  Matrix<K> ca = p.adapted_inv() * a * p.adapted();
  Matrix<K> cb = p.adapted_inv() * b * p.adapted();
  for (std::size_t blk = 0; blk < p.num_blocks(); ++blk) {
    if (!conjugate_over_field(p.block_of_adapted(ca, blk), p.block_of_adapted(cb, blk)))
      return false;
  }
  return true;
}

}  // namespace detail

/// Membership in the fixed-monodromy Betti locus: at each puncture the
/// Levi monodromy must match M_x, up to L-conjugacy by default (the
/// G-action only preserves the conjugacy class) or on the nose with
/// strict_equality.
template <ExactField K>
bool in_betti_locus(const QuiverPoint<K>& pt, const TypeData<K>& gamma,
                    const MonodromyDatum<K>& m, bool strict_equality = false) {
  if (!pt.relation_holds()) fail_pre("in_betti_locus: relation violated");
  m.validate(gamma);
  auto levis = levi_monodromy_map(pt, gamma);
  for (const auto& [x, p] : gamma) {
    const Matrix<K>& got = levis.at(x);
    const Matrix<K>& want = m.levi.at(x);
    if (strict_equality) {
      if (!(got == want)) return false;
    } else {
      if (!detail::levi_conjugate(p, got, want)) return false;
    }
  }
  return true;
}

}  // namespace fls
