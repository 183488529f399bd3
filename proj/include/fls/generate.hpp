#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fls/filtered.hpp"
#include "fls/quiver.hpp"

namespace fls {

/// SplitMix64: fully specified, so seeded runs are byte-identical across
/// platforms and standard libraries.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : s_(seed) {}

  std::uint64_t next() {
    s_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = s_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t below(std::uint64_t n) { return n ? next() % n : 0; }

private:
  std::uint64_t s_;
};

template <ExactField K>
K random_scalar(const K& proto, Rng& rng) {
  if constexpr (std::is_same_v<K, Fp>) {
    return Fp(proto.modulus(), static_cast<long long>(rng.below(proto.modulus())));
  } else {
    return embed_int(proto, static_cast<long>(rng.below(9)) - 4);
  }
}

template <ExactField K>
Matrix<K> random_matrix(std::size_t n, const K& proto, Rng& rng) {
  Matrix<K> m(n, n, proto.zero());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m.at(i, j) = random_scalar(proto, rng);
  return m;
}

template <ExactField K>
Matrix<K> random_invertible(std::size_t n, const K& proto, Rng& rng) {
  while (true) {
    Matrix<K> m = random_matrix(n, proto, rng);
    if (is_invertible(m)) return m;
  }
}

/// Random element of a parabolic: block upper-triangular in the adapted
/// coordinates, blocks invertible.
template <ExactField K>
Matrix<K> random_parabolic_element(const ParabolicGL<K>& p, Rng& rng) {
  std::size_t n = p.ambient();
  const K proto = p.flag().proto();
  Matrix<K> m(n, n, proto.zero());
  for (std::size_t b = 0; b < p.num_blocks(); ++b) {
    std::size_t off = p.block_offset(b), sz = p.block_dim(b);
    Matrix<K> blk = random_invertible(sz, proto, rng);
    for (std::size_t i = 0; i < sz; ++i)
      for (std::size_t j = 0; j < sz; ++j) m.at(off + i, off + j) = blk.at(i, j);
    for (std::size_t i = off; i < off + sz; ++i)
      for (std::size_t j = off + sz; j < n; ++j) m.at(i, j) = random_scalar(proto, rng);
  }
  return p.adapted() * m * p.adapted_inv();
}

template <ExactField K>
Matrix<K> random_levi_element(const ParabolicGL<K>& p, Rng& rng) {
  std::size_t n = p.ambient();
  const K proto = p.flag().proto();
  Matrix<K> m(n, n, proto.zero());
  for (std::size_t b = 0; b < p.num_blocks(); ++b) {
    std::size_t off = p.block_offset(b), sz = p.block_dim(b);
    Matrix<K> blk = random_invertible(sz, proto, rng);
    for (std::size_t i = 0; i < sz; ++i)
      for (std::size_t j = 0; j < sz; ++j) m.at(off + i, off + j) = blk.at(i, j);
  }
  return p.adapted() * m * p.adapted_inv();
}

/// Random relation-satisfying representation: every generator but the last
/// puncture loop is drawn freely; the last is solved from the relation.
/// Needs at least one puncture.
template <ExactField K>
SurfaceRep<K> random_rep(const SurfacePresentation& pres, std::size_t n, const K& proto, Rng& rng) {
  if (pres.punctures.empty()) fail_pre("random_rep needs at least one puncture");
  GeneratorImages<K> gen;
  Matrix<K> acc = Matrix<K>::identity(n, proto);
  for (std::size_t i = 0; i < pres.genus; ++i) {
    gen.A.push_back(random_invertible(n, proto, rng));
    gen.B.push_back(random_invertible(n, proto, rng));
    acc = acc * commutator(gen.A[i], gen.B[i]);
  }
  for (std::size_t i = 0; i + 1 < pres.punctures.size(); ++i) {
    Matrix<K> c = random_invertible(n, proto, rng);
    gen.C.emplace(pres.punctures[i], c);
    acc = acc * c;
  }
  gen.C.emplace(pres.punctures.back(), inverse(acc));
  return SurfaceRep<K>(pres, gen);
}

/// Random filtered local system with the given weighted-flag data: the
/// puncture loops are drawn inside the flag stabilizers so the solved last
/// loop is automatically compatible.
template <ExactField K>
FilteredLocalSystem<K> random_compatible_fls(const SurfacePresentation& pres, std::size_t n,
                                             const std::map<std::string, WeightedFlag<K>>& flags,
                                             const K& proto, Rng& rng, bool parabolic_loops = true) {
  if (pres.punctures.empty()) fail_pre("needs at least one puncture");
  while (true) {
    GeneratorImages<K> gen;
    Matrix<K> acc = Matrix<K>::identity(n, proto);
    for (std::size_t i = 0; i < pres.genus; ++i) {
      gen.A.push_back(random_invertible(n, proto, rng));
      gen.B.push_back(random_invertible(n, proto, rng));
      acc = acc * commutator(gen.A[i], gen.B[i]);
    }
    for (std::size_t i = 0; i + 1 < pres.punctures.size(); ++i) {
      const auto& x = pres.punctures[i];
      ParabolicGL<K> p(flags.at(x).flag);
      Matrix<K> c = parabolic_loops ? random_parabolic_element(p, rng)
                                    : random_invertible(n, proto, rng);
      gen.C.emplace(x, c);
      acc = acc * c;
    }
    Matrix<K> last = inverse(acc);
    const auto& xl = pres.punctures.back();
    bool ok = true;
    const Flag<K>& fl = flags.at(xl).flag;
    for (std::size_t j = 1; j <= fl.num_steps() && ok; ++j)
      ok = fl.step(j).is_invariant_under(last);
    if (!ok) continue;
    gen.C.emplace(xl, last);
    SurfaceRep<K> rep(pres, gen);
    bool compatible = true;
    for (std::size_t i = 0; i + 1 < pres.punctures.size() && compatible; ++i) {
      const auto& x = pres.punctures[i];
      const Flag<K>& f = flags.at(x).flag;
      for (std::size_t j = 1; j <= f.num_steps() && compatible; ++j)
        compatible = f.step(j).is_invariant_under(rep.C(x));
    }
    if (!compatible) continue;
    return FilteredLocalSystem<K>(std::move(rep), flags);
  }
}

}  // namespace fls
