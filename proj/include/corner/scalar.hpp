#pragma once
#include <gmpxx.h>

#include <concepts>
#include <cstdint>
#include <string>

#include "corner/base.hpp"

namespace corner {

/// Exact rational scalar. Always kept in lowest terms with positive
/// denominator (the canonical form maintained by GMP).
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(long n) : v_(n) {}
  Rational(long num, long den) {
    require(den != 0, "arith", "rational with zero denominator");
    v_ = mpq_class(num, den);
    v_.canonicalize();
  }

  static Rational parse(const std::string& s) {
    try {
      mpq_class v(s);
      require(v.get_den() != 0, "parse", "zero denominator in '" + s + "'");
      v.canonicalize();
      Rational r;
      r.v_ = v;
      return r;
    } catch (const std::invalid_argument&) {
      fail("parse", "not a rational literal: '" + s + "'");
    }
  }

  std::string str() const { return v_.get_str(); }
  bool is_zero() const { return sgn(v_) == 0; }
  bool is_one() const { return v_ == 1; }

  std::string num_str() const { return v_.get_num().get_str(); }
  std::string den_str() const { return v_.get_den().get_str(); }

  Rational operator-() const { return wrap(-v_); }
  Rational operator+(const Rational& o) const { return wrap(v_ + o.v_); }
  Rational operator-(const Rational& o) const { return wrap(v_ - o.v_); }
  Rational operator*(const Rational& o) const { return wrap(v_ * o.v_); }
  Rational operator/(const Rational& o) const {
    require(!o.is_zero(), "arith", "division by zero");
    return wrap(v_ / o.v_);
  }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }

  bool operator==(const Rational& o) const { return v_ == o.v_; }
  bool operator!=(const Rational& o) const { return v_ != o.v_; }

 private:
  static Rational wrap(mpq_class v) {
    Rational r;
    r.v_ = std::move(v);
    return r;
  }
  mpq_class v_;
};

namespace detail {

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod_u64(r, a, m);
    a = mulmod_u64(a, a, m);
    e >>= 1;
  }
  return r;
}

// Deterministic Miller-Rabin for 64-bit inputs.
inline bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) { d >>= 1; ++s; }
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 0; i + 1 < s; ++i) {
      x = mulmod_u64(x, x, n);
      if (x == n - 1) { witness = false; break; }
    }
    if (witness) return false;
  }
  return true;
}

}  // namespace detail

/// Prime-field residue. One global modulus per computation, set before any
/// arithmetic; results over a prime field are advisory next to the rational
/// ones (ranks can drop under reduction).
class Fp {
 public:
  static void set_modulus(std::uint64_t p) {
    require(detail::is_prime_u64(p), "modulus", "modulus " + std::to_string(p) + " is not prime");
    mod_ = p;
  }
  static std::uint64_t modulus() {
    require(mod_ != 0, "modulus", "prime-field modulus not set");
    return mod_;
  }

  Fp() : r_(0) {}
  Fp(long n) {
    std::uint64_t p = modulus();
    long m = n % static_cast<long>(p);
    if (m < 0) m += static_cast<long>(p);
    r_ = static_cast<std::uint64_t>(m);
  }

  static Fp parse(const std::string& s) {
    // Accepts the same "n" / "p/q" literals as the rational field.
    auto slash = s.find('/');
    if (slash == std::string::npos) return parse_int(s);
    return parse_int(s.substr(0, slash)) / parse_int(s.substr(slash + 1));
  }

  std::string str() const { return std::to_string(r_); }
  bool is_zero() const { return r_ == 0; }
  bool is_one() const { return r_ == 1; }
  std::uint64_t residue() const { return r_; }

  Fp operator-() const { return wrap(r_ == 0 ? 0 : modulus() - r_); }
  Fp operator+(const Fp& o) const {
    std::uint64_t p = modulus(), s = r_ + o.r_;
    return wrap(s >= p ? s - p : s);
  }
  Fp operator-(const Fp& o) const { return *this + (-o); }
  Fp operator*(const Fp& o) const { return wrap(detail::mulmod_u64(r_, o.r_, modulus())); }
  Fp operator/(const Fp& o) const {
    require(!o.is_zero(), "arith", "division by zero");
    return *this * wrap(detail::powmod_u64(o.r_, modulus() - 2, modulus()));
  }
  Fp& operator+=(const Fp& o) { return *this = *this + o; }
  Fp& operator-=(const Fp& o) { return *this = *this - o; }
  Fp& operator*=(const Fp& o) { return *this = *this * o; }

  bool operator==(const Fp& o) const { return r_ == o.r_; }
  bool operator!=(const Fp& o) const { return r_ != o.r_; }

 private:
  static Fp wrap(std::uint64_t r) {
    Fp x;
    x.r_ = r;
    return x;
  }
  static Fp parse_int(const std::string& s) {
    require(!s.empty(), "parse", "empty scalar literal");
    bool neg = s[0] == '-';
    std::uint64_t p = modulus(), acc = 0;
    for (std::size_t i = neg ? 1 : 0; i < s.size(); ++i) {
      require(s[i] >= '0' && s[i] <= '9', "parse", "not an integer literal: '" + s + "'");
      acc = (detail::mulmod_u64(acc, 10, p) + static_cast<std::uint64_t>(s[i] - '0')) % p;
    }
    require(s.size() > (neg ? 1u : 0u), "parse", "not an integer literal: '" + s + "'");
    Fp x = wrap(acc);
    return neg ? -x : x;
  }
  std::uint64_t r_;
  inline static std::uint64_t mod_ = 0;
};

template <class F>
concept Field = std::regular<F> && requires(F a, F b, const std::string& s) {
  { a + b } -> std::convertible_to<F>;
  { a - b } -> std::convertible_to<F>;
  { a* b } -> std::convertible_to<F>;
  { a / b } -> std::convertible_to<F>;
  { -a } -> std::convertible_to<F>;
  { a.is_zero() } -> std::convertible_to<bool>;
  { a.str() } -> std::convertible_to<std::string>;
  { F::parse(s) } -> std::convertible_to<F>;
  F(1);
};

}  // namespace corner
