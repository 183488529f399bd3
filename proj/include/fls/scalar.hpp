#pragma once

#include <gmpxx.h>

#include <concepts>
#include <cstdint>
#include <string>

#include "fls/error.hpp"

namespace fls {

/// Arbitrary-precision rational, always kept in lowest terms with positive
/// denominator (mpq_class canonical form).
class Rat {
public:
  Rat() : v_(0) {}
  Rat(long n) : v_(n) {}  // NOLINT: implicit on purpose, matches int literals
  Rat(long num, long den) : v_(num, den) {
    if (den == 0) fail_input("rational with zero denominator");
    v_.canonicalize();
  }
  explicit Rat(const mpq_class& v) : v_(v) { v_.canonicalize(); }

  /// Accepts "p", "-p", "p/q".
  static Rat parse(const std::string& s) {
    mpq_class v;
    if (v.set_str(s, 10) != 0) fail_input("bad rational literal: " + s);
    if (v.get_den() == 0) fail_input("rational with zero denominator: " + s);
    v.canonicalize();
    return Rat(v);
  }

  Rat zero() const { return Rat(0); }
  Rat one() const { return Rat(1); }
  bool is_zero() const { return v_ == 0; }
  bool is_one() const { return v_ == 1; }

  Rat inv() const {
    if (is_zero()) fail_pre("inverse of zero");
    return Rat(mpq_class(1) / v_);
  }

  Rat operator-() const { return Rat(mpq_class(-v_)); }
  Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
  Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
  Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }
  Rat& operator/=(const Rat& o) {
    if (o.is_zero()) fail_pre("division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend Rat operator+(Rat a, const Rat& b) { return a += b; }
  friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
  friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
  friend Rat operator/(Rat a, const Rat& b) { return a /= b; }
  friend bool operator==(const Rat& a, const Rat& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rat& a, const Rat& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rat& a, const Rat& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Rat& a, const Rat& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Rat& a, const Rat& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Rat& a, const Rat& b) { return a.v_ >= b.v_; }

  int sign() const { return sgn(v_); }
  mpz_class num() const { return v_.get_num(); }
  mpz_class den() const { return v_.get_den(); }

  /// "p/q", or just "p" when q = 1.
  std::string str() const {
    if (v_.get_den() == 1) return v_.get_num().get_str();
    return v_.get_str();
  }

private:
  mpq_class v_;
};

/// Residue mod an odd prime p <= 2^31. The modulus travels with the value;
/// mixing moduli is a hard error.
class Fp {
public:
  Fp() : p_(0), v_(0) {}
  Fp(std::uint32_t p, long long v) : p_(p) {
    long long r = v % static_cast<long long>(p);
    if (r < 0) r += p;
    v_ = static_cast<std::uint32_t>(r);
  }

  std::uint32_t modulus() const { return p_; }
  std::uint32_t value() const { return v_; }

  Fp zero() const { return Fp(p_, 0); }
  Fp one() const { return Fp(p_, 1); }
  bool is_zero() const { return v_ == 0; }
  bool is_one() const { return v_ == 1; }

  Fp inv() const {
    if (v_ == 0) fail_pre("inverse of zero in F_p");
    // extended Euclid
    long long a = v_, m = p_, x0 = 1, x1 = 0;
    while (m != 0) {
      long long q = a / m;
      long long t = a - q * m; a = m; m = t;
      t = x0 - q * x1; x0 = x1; x1 = t;
    }
    return Fp(p_, x0);
  }

  Fp operator-() const { return Fp(p_, -static_cast<long long>(v_)); }
  Fp& operator+=(const Fp& o) { check(o); v_ = add(v_, o.v_); return *this; }
  Fp& operator-=(const Fp& o) { check(o); v_ = add(v_, o.v_ == 0 ? 0 : p_ - o.v_); return *this; }
  Fp& operator*=(const Fp& o) {
    check(o);
    v_ = static_cast<std::uint32_t>((static_cast<std::uint64_t>(v_) * o.v_) % p_);
    return *this;
  }
  Fp& operator/=(const Fp& o) { return (*this) *= o.inv(); }

  friend Fp operator+(Fp a, const Fp& b) { return a += b; }
  friend Fp operator-(Fp a, const Fp& b) { return a -= b; }
  friend Fp operator*(Fp a, const Fp& b) { return a *= b; }
  friend Fp operator/(Fp a, const Fp& b) { return a /= b; }
  friend bool operator==(const Fp& a, const Fp& b) { return a.p_ == b.p_ && a.v_ == b.v_; }
  friend bool operator!=(const Fp& a, const Fp& b) { return !(a == b); }
  friend bool operator<(const Fp& a, const Fp& b) { return a.v_ < b.v_; }

  std::string str() const { return std::to_string(v_); }

private:
  void check(const Fp& o) const {
    if (p_ != o.p_) fail_pre("mixed moduli in F_p arithmetic");
  }
  std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
    std::uint64_t s = static_cast<std::uint64_t>(a) + b;
    if (s >= p_) s -= p_;
    return static_cast<std::uint32_t>(s);
  }

  std::uint32_t p_;
  std::uint32_t v_;
};

template <typename K>
concept ExactField = requires(const K& a, const K& b) {
  { a + b } -> std::convertible_to<K>;
  { a - b } -> std::convertible_to<K>;
  { a * b } -> std::convertible_to<K>;
  { -a } -> std::convertible_to<K>;
  { a.inv() } -> std::convertible_to<K>;
  { a.zero() } -> std::convertible_to<K>;
  { a.one() } -> std::convertible_to<K>;
  { a.is_zero() } -> std::convertible_to<bool>;
  { a == b } -> std::convertible_to<bool>;
  { a < b } -> std::convertible_to<bool>;
  { a.str() } -> std::convertible_to<std::string>;
};

/// k * v for small integer k, derived from the field context of v.
template <ExactField K>
K scale_int(const K& v, long k) {
  K acc = v.zero();
  K step = k >= 0 ? v : -v;
  long reps = k >= 0 ? k : -k;
  for (long i = 0; i < reps; ++i) acc += step;
  return acc;
}

/// Image of an integer in the field of `proto`.
template <ExactField K>
K embed_int(const K& proto, long k) {
  return scale_int(proto.one(), k);
}

}  // namespace fls
