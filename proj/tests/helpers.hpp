#pragma once

#include <initializer_list>
#include <vector>

#include "fls/matrix.hpp"
#include "fls/scalar.hpp"
#include "fls/subspace.hpp"

namespace flstest {

using fls::Fp;
using fls::Matrix;
using fls::Rat;
using fls::Subspace;

inline Matrix<Rat> matQ(std::initializer_list<std::initializer_list<long>> rows) {
  std::size_t r = rows.size(), c = rows.begin()->size();
  Matrix<Rat> m(r, c, Rat(0));
  std::size_t i = 0;
  for (const auto& row : rows) {
    std::size_t j = 0;
    for (long v : row) m.at(i, j++) = Rat(v);
    ++i;
  }
  return m;
}

inline Matrix<Rat> matQs(std::initializer_list<std::initializer_list<const char*>> rows) {
  std::size_t r = rows.size(), c = rows.begin()->size();
  Matrix<Rat> m(r, c, Rat(0));
  std::size_t i = 0;
  for (const auto& row : rows) {
    std::size_t j = 0;
    for (const char* v : row) m.at(i, j++) = Rat::parse(v);
    ++i;
  }
  return m;
}

inline Matrix<Fp> matF(std::uint32_t p, std::initializer_list<std::initializer_list<long>> rows) {
  std::size_t r = rows.size(), c = rows.begin()->size();
  Matrix<Fp> m(r, c, Fp(p, 0));
  std::size_t i = 0;
  for (const auto& row : rows) {
    std::size_t j = 0;
    for (long v : row) m.at(i, j++) = Fp(p, v);
    ++i;
  }
  return m;
}

template <fls::ExactField K>
Subspace<K> spanOf(const Matrix<K>& rows) {
  return Subspace<K>::span_rows(rows, rows.proto());
}

/// Deterministic xorshift-style generator for reproducible tests.
class TestRng {
public:
  explicit TestRng(std::uint64_t seed) : s_(seed ? seed : 0x9e3779b97f4a7c15ull) {}
  std::uint64_t next() {
    s_ ^= s_ << 13;
    s_ ^= s_ >> 7;
    s_ ^= s_ << 17;
    return s_;
  }
  std::uint32_t below(std::uint32_t n) { return static_cast<std::uint32_t>(next() % n); }

private:
  std::uint64_t s_;
};

inline Matrix<Fp> random_invertible(TestRng& rng, std::uint32_t p, std::size_t n) {
  while (true) {
    Matrix<Fp> m(n, n, Fp(p, 0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m.at(i, j) = Fp(p, rng.below(p));
    if (fls::is_invertible(m)) return m;
  }
}

inline Matrix<Rat> random_invertibleQ(TestRng& rng, std::size_t n, long lo = -3, long hi = 3) {
  while (true) {
    Matrix<Rat> m(n, n, Rat(0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        m.at(i, j) = Rat(lo + static_cast<long>(rng.below(static_cast<std::uint32_t>(hi - lo + 1))));
    if (fls::is_invertible(m)) return m;
  }
}

}  // namespace flstest
