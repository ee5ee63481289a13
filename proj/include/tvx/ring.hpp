// Copyright (c) 2026 the tvx authors
// SPDX-License-Identifier: Apache-2.0
#ifndef TVX_RING_HPP
#define TVX_RING_HPP

// Exact coefficient rings: F_p (machine-word prime fields), Z/p^k (GMP),
// Q, and the quadratic field Q(sqrt d). Everything is exact; there is no
// floating point anywhere in the tower.

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <string>
#include <utility>

#include "tvx/errors.hpp"

namespace tvx {

// ---------------------------------------------------------------------------
// Modulus p^k. Cheap to copy (shared rep); equality is by value of (p, k).

class Modulus {
 public:
  Modulus() = default;
  Modulus(mpz_class p, unsigned k);

  const mpz_class& p() const { return rep_->p; }
  unsigned k() const { return rep_->k; }
  const mpz_class& pk() const { return rep_->pk; }
  bool valid() const { return rep_ != nullptr; }

  Modulus with_k(unsigned k2) const { return Modulus(rep_->p, k2); }

  friend bool operator==(const Modulus& x, const Modulus& y) {
    if (x.rep_ == y.rep_) return true;
    if (!x.rep_ || !y.rep_) return false;
    return x.rep_->k == y.rep_->k && x.rep_->p == y.rep_->p;
  }
  friend bool operator!=(const Modulus& x, const Modulus& y) {
    return !(x == y);
  }

 private:
  struct Rep {
    mpz_class p;
    unsigned k;
    mpz_class pk;
  };
  std::shared_ptr<const Rep> rep_;
};

// ---------------------------------------------------------------------------
// Element of Z/p^k.

class ZMod {
 public:
  ZMod() = default;
  ZMod(mpz_class v, Modulus m) : v_(std::move(v)), m_(std::move(m)) {
    mpz_fdiv_r(v_.get_mpz_t(), v_.get_mpz_t(), m_.pk().get_mpz_t());
  }

  const mpz_class& value() const { return v_; }
  const Modulus& modulus() const { return m_; }
  bool is_zero() const { return v_ == 0; }
  bool is_unit() const;

  ZMod inv() const;  // throws NonUnit
  ZMod pow(unsigned long e) const;
  // Truncates to a smaller precision of the same p (tower coherence).
  ZMod reduced_to(const Modulus& smaller) const;

  friend ZMod operator+(const ZMod& x, const ZMod& y) {
    x.check(y);
    return ZMod(x.v_ + y.v_, x.m_);
  }
  friend ZMod operator-(const ZMod& x, const ZMod& y) {
    x.check(y);
    return ZMod(x.v_ - y.v_, x.m_);
  }
  friend ZMod operator-(const ZMod& x) { return ZMod(-x.v_, x.m_); }
  friend ZMod operator*(const ZMod& x, const ZMod& y) {
    x.check(y);
    return ZMod(x.v_ * y.v_, x.m_);
  }
  friend ZMod operator/(const ZMod& x, const ZMod& y) { return x * y.inv(); }
  friend bool operator==(const ZMod& x, const ZMod& y) {
    x.check(y);
    return x.v_ == y.v_;
  }
  friend bool operator!=(const ZMod& x, const ZMod& y) { return !(x == y); }

 private:
  void check(const ZMod& o) const {
    if (m_ != o.m_) throw ModulusMismatch("ZMod: mixed moduli");
  }
  mpz_class v_;
  Modulus m_;
};

// ---------------------------------------------------------------------------
// Element of F_p for machine-word p. The workhorse of the dense paths; the
// modulus rides along in the element so the type needs no global context.

struct Fp {
  std::uint64_t v = 0;
  std::uint64_t p = 0;  // 0 marks an uninitialized exemplar

  Fp() = default;
  Fp(std::uint64_t value, std::uint64_t prime) : v(value % prime), p(prime) {}
  static Fp from_int(long long value, std::uint64_t prime) {
    long long r = value % static_cast<long long>(prime);
    if (r < 0) r += static_cast<long long>(prime);
    return Fp(static_cast<std::uint64_t>(r), prime);
  }

  bool is_zero() const { return v == 0; }
  Fp inv() const;  // throws DivideByZero
  Fp pow(std::uint64_t e) const;

  friend Fp operator+(Fp x, Fp y) {
    x.check(y);
    std::uint64_t s = x.v + y.v;
    return Fp{s >= x.p ? s - x.p : s, x.p, 0};
  }
  friend Fp operator-(Fp x, Fp y) {
    x.check(y);
    std::uint64_t s = x.v + x.p - y.v;
    return Fp{s >= x.p ? s - x.p : s, x.p, 0};
  }
  friend Fp operator-(Fp x) { return Fp{x.v == 0 ? 0 : x.p - x.v, x.p, 0}; }
  friend Fp operator*(Fp x, Fp y) {
    x.check(y);
    using u128 = unsigned __int128;
    return Fp{static_cast<std::uint64_t>(u128(x.v) * y.v % x.p), x.p, 0};
  }
  friend Fp operator/(Fp x, Fp y) { return x * y.inv(); }
  friend bool operator==(Fp x, Fp y) {
    x.check(y);
    return x.v == y.v;
  }
  friend bool operator!=(Fp x, Fp y) { return !(x == y); }

 private:
  // Internal fast constructor: value already reduced.
  Fp(std::uint64_t value, std::uint64_t prime, int) : v(value), p(prime) {}
  void check(const Fp& o) const {
    if (p != o.p) throw ModulusMismatch("Fp: mixed primes");
  }
};

// ---------------------------------------------------------------------------
// Rational numbers. Thin wrapper over mpq_class with plain value semantics
// (no expression templates leaking into generic code).

class Rat {
 public:
  Rat() : v_(0) {}
  Rat(long n) : v_(n) {}
  Rat(long n, long d) : v_(n, d) { v_.canonicalize(); }
  explicit Rat(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }
  explicit Rat(const mpz_class& z) : v_(z) {}

  const mpq_class& value() const { return v_; }
  mpz_class num() const { return v_.get_num(); }
  mpz_class den() const { return v_.get_den(); }
  bool is_zero() const { return v_ == 0; }
  bool is_integer() const { return v_.get_den() == 1; }
  Rat inv() const {
    if (v_ == 0) throw DivideByZero("Rat: division by zero");
    return Rat(mpq_class(1) / v_);
  }

  friend Rat operator+(const Rat& x, const Rat& y) { return Rat(mpq_class(x.v_ + y.v_)); }
  friend Rat operator-(const Rat& x, const Rat& y) { return Rat(mpq_class(x.v_ - y.v_)); }
  friend Rat operator-(const Rat& x) { return Rat(mpq_class(-x.v_)); }
  friend Rat operator*(const Rat& x, const Rat& y) { return Rat(mpq_class(x.v_ * y.v_)); }
  friend Rat operator/(const Rat& x, const Rat& y) { return x * y.inv(); }
  friend bool operator==(const Rat& x, const Rat& y) { return x.v_ == y.v_; }
  friend bool operator!=(const Rat& x, const Rat& y) { return !(x == y); }
  friend bool operator<(const Rat& x, const Rat& y) { return x.v_ < y.v_; }

 private:
  mpq_class v_;
};

// ---------------------------------------------------------------------------
// Element (a + b sqrt(d)) / c of Q(sqrt d), d squarefree, d not in {0, 1},
// kept normalized with gcd(a, b, c) = 1 and c > 0. Default d is -7.

inline constexpr long kDefaultD = -7;

bool is_squarefree(long d);

class Quad {
 public:
  Quad() : a_(0), b_(0), c_(1), d_(kDefaultD) {}
  Quad(mpz_class a, mpz_class b, mpz_class c, long d = kDefaultD);
  explicit Quad(long a, long d = kDefaultD) : Quad(mpz_class(a), 0, 1, d) {}
  static Quad from_rat(const Rat& r, long d = kDefaultD) {
    return Quad(r.num(), 0, r.den(), d);
  }

  const mpz_class& a() const { return a_; }
  const mpz_class& b() const { return b_; }
  const mpz_class& c() const { return c_; }
  long d() const { return d_; }

  bool is_zero() const { return a_ == 0 && b_ == 0; }
  bool is_rational() const { return b_ == 0; }
  Rat rational_part() const { return Rat(mpq_class(a_, c_)); }
  Quad conj() const { return Quad(a_, -b_, c_, d_); }
  Rat norm() const;         // (a^2 - d b^2) / c^2
  Quad inv() const;         // throws DivideByZero
  mpz_class height() const; // max(|a|, |b|, c)

  friend Quad operator+(const Quad& x, const Quad& y);
  friend Quad operator-(const Quad& x, const Quad& y);
  friend Quad operator-(const Quad& x) { return Quad(-x.a_, -x.b_, x.c_, x.d_); }
  friend Quad operator*(const Quad& x, const Quad& y);
  friend Quad operator/(const Quad& x, const Quad& y) { return x * y.inv(); }
  friend bool operator==(const Quad& x, const Quad& y) {
    x.check(y);
    return x.a_ == y.a_ && x.b_ == y.b_ && x.c_ == y.c_;
  }
  friend bool operator!=(const Quad& x, const Quad& y) { return !(x == y); }

 private:
  void check(const Quad& o) const {
    if (d_ != o.d_) throw ModulusMismatch("Quad: mixed fields (different d)");
  }
  mpz_class a_, b_, c_;
  long d_;
};

// ---------------------------------------------------------------------------
// Square roots and reductions.

// Canonical square root of a in Z/p^k: the root s with s <= p^k / 2.
// Throws EvenPrime (p = 2), NonResidue, NonUnit (p | a, a != 0 mod p^k).
ZMod sqrt_mod(const mpz_class& a, const Modulus& m);

// Newton-lifts a known root of x^2 = a (mod p^j) to the target precision
// without re-canonicalizing, so the branch mod p is preserved across a tower.
ZMod lift_root(const mpz_class& a, const ZMod& root, const Modulus& target);

// Ring homomorphism Q(sqrt d)_(p) -> Z/p^k determined by sqrt(d) |-> s.
// Throws DenominatorNotUnit if p divides c, ModulusMismatch if s^2 != d.
ZMod reduce_quad(const Quad& q, const ZMod& s);

// Rational reduction mod p^k (denominator must be a unit).
ZMod reduce_rat(const Rat& r, const Modulus& m);

// Extended gcd helpers on machine words.
std::uint64_t inv_mod_u64(std::uint64_t a, std::uint64_t m);  // throws NonUnit

// ---------------------------------------------------------------------------
// Uniform access for generic code. K ranges over Fp, ZMod, Rat, Quad.

struct RingDesc {
  enum Cls { kQ, kFp, kZpk, kQuad } cls = kQ;
  mpz_class p = 0;
  unsigned k = 1;
  long d = 0;
  std::string text() const;
};

template <class K>
struct RingOps;

template <>
struct RingOps<Fp> {
  static Fp zero(const Fp& like) { return Fp(0, like.p); }
  static Fp one(const Fp& like) { return Fp(1 % like.p, like.p); }
  static bool is_zero(const Fp& x) { return x.is_zero(); }
  static bool is_unit(const Fp& x) { return !x.is_zero(); }
  static Fp inv(const Fp& x) { return x.inv(); }
  static Fp from_rat(const Fp& like, const Rat& r);
  // Coefficient a + b*r; only the rational part is representable here.
  static Fp from_parts(const Fp& like, const Rat& a, const Rat& b) {
    if (!b.is_zero())
      throw CoefficientNotInRing("Fp: coefficient has a sqrt(d) part");
    return from_rat(like, a);
  }
  static std::string str(const Fp& x) { return std::to_string(x.v); }
  static RingDesc desc(const Fp& like) {
    return RingDesc{RingDesc::kFp, mpz_class(static_cast<unsigned long>(like.p)), 1, 0};
  }
};

template <>
struct RingOps<ZMod> {
  static ZMod zero(const ZMod& like) { return ZMod(0, like.modulus()); }
  static ZMod one(const ZMod& like) { return ZMod(1, like.modulus()); }
  static bool is_zero(const ZMod& x) { return x.is_zero(); }
  static bool is_unit(const ZMod& x) { return x.is_unit(); }
  static ZMod inv(const ZMod& x) { return x.inv(); }
  static ZMod from_rat(const ZMod& like, const Rat& r) {
    return reduce_rat(r, like.modulus());
  }
  static ZMod from_parts(const ZMod& like, const Rat& a, const Rat& b) {
    if (!b.is_zero())
      throw CoefficientNotInRing("Z/p^k: coefficient has a sqrt(d) part");
    return from_rat(like, a);
  }
  static std::string str(const ZMod& x) { return x.value().get_str(); }
  static RingDesc desc(const ZMod& like) {
    return RingDesc{RingDesc::kZpk, like.modulus().p(), like.modulus().k(), 0};
  }
};

template <>
struct RingOps<Rat> {
  static Rat zero(const Rat&) { return Rat(0); }
  static Rat one(const Rat&) { return Rat(1); }
  static bool is_zero(const Rat& x) { return x.is_zero(); }
  static bool is_unit(const Rat& x) { return !x.is_zero(); }
  static Rat inv(const Rat& x) { return x.inv(); }
  static Rat from_rat(const Rat&, const Rat& r) { return r; }
  static Rat from_parts(const Rat&, const Rat& a, const Rat& b) {
    if (!b.is_zero())
      throw CoefficientNotInRing("Q: coefficient has a sqrt(d) part");
    return a;
  }
  static std::string str(const Rat& x) { return x.value().get_str(); }
  static RingDesc desc(const Rat&) { return RingDesc{RingDesc::kQ, 0, 1, 0}; }
};

template <>
struct RingOps<Quad> {
  static Quad zero(const Quad& like) { return Quad(0, 0, 1, like.d()); }
  static Quad one(const Quad& like) { return Quad(1, 0, 1, like.d()); }
  static bool is_zero(const Quad& x) { return x.is_zero(); }
  static bool is_unit(const Quad& x) { return !x.is_zero(); }
  static Quad inv(const Quad& x) { return x.inv(); }
  static Quad from_rat(const Quad& like, const Rat& r) {
    return Quad::from_rat(r, like.d());
  }
  static Quad from_parts(const Quad& like, const Rat& a, const Rat& b) {
    return Quad(a.num() * b.den(), b.num() * a.den(), a.den() * b.den(),
                like.d());
  }
  static std::string str(const Quad& x);
  static RingDesc desc(const Quad& like) {
    return RingDesc{RingDesc::kQuad, 0, 1, like.d()};
  }
};

}  // namespace tvx

#endif
