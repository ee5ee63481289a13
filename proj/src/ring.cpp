// Copyright (c) 2026 the tvx authors
// SPDX-License-Identifier: Apache-2.0
#include "tvx/ring.hpp"

namespace tvx {

// ---------------------------------------------------------------------------
// Modulus

Modulus::Modulus(mpz_class p, unsigned k) {
  if (p < 2) throw InputError("Modulus: p must be at least 2");
  if (k < 1) throw InputError("Modulus: k must be at least 1");
  if (mpz_probab_prime_p(p.get_mpz_t(), 25) == 0)
    throw InputError("Modulus: p = " + p.get_str() + " is not prime");
  mpz_class pk;
  mpz_pow_ui(pk.get_mpz_t(), p.get_mpz_t(), k);
  auto rep = std::make_shared<Rep>();
  rep->p = std::move(p);
  rep->k = k;
  rep->pk = std::move(pk);
  rep_ = std::move(rep);
}

// ---------------------------------------------------------------------------
// ZMod

bool ZMod::is_unit() const {
  if (v_ == 0) return false;
  return mpz_divisible_p(v_.get_mpz_t(), m_.p().get_mpz_t()) == 0;
}

ZMod ZMod::inv() const {
  mpz_class r;
  if (mpz_invert(r.get_mpz_t(), v_.get_mpz_t(), m_.pk().get_mpz_t()) == 0)
    throw NonUnit("ZMod: " + v_.get_str() + " is not a unit mod " +
                  m_.pk().get_str());
  return ZMod(std::move(r), m_);
}

ZMod ZMod::pow(unsigned long e) const {
  mpz_class r;
  mpz_powm_ui(r.get_mpz_t(), v_.get_mpz_t(), e, m_.pk().get_mpz_t());
  return ZMod(std::move(r), m_);
}

ZMod ZMod::reduced_to(const Modulus& smaller) const {
  if (smaller.p() != m_.p() || smaller.k() > m_.k())
    throw ModulusMismatch("ZMod: invalid truncation target");
  return ZMod(v_, smaller);
}

// ---------------------------------------------------------------------------
// Machine-word helpers

std::uint64_t inv_mod_u64(std::uint64_t a, std::uint64_t m) {
  // Iterative extended Euclid; coefficients stay below m in magnitude.
  std::int64_t t = 0, newt = 1;
  std::uint64_t r = m, newr = a % m;
  while (newr != 0) {
    std::uint64_t q = r / newr;
    std::int64_t tmpt = t - static_cast<std::int64_t>(q) * newt;
    t = newt;
    newt = tmpt;
    std::uint64_t tmpr = r - q * newr;
    r = newr;
    newr = tmpr;
  }
  if (r != 1)
    throw NonUnit("inv_mod_u64: " + std::to_string(a) +
                  " is not a unit mod " + std::to_string(m));
  return t < 0 ? static_cast<std::uint64_t>(t + static_cast<std::int64_t>(m))
               : static_cast<std::uint64_t>(t);
}

Fp Fp::inv() const {
  if (v == 0) throw DivideByZero("Fp: division by zero");
  return Fp{inv_mod_u64(v, p), p};
}

Fp Fp::pow(std::uint64_t e) const {
  Fp base = *this, acc(1 % p, p);
  while (e) {
    if (e & 1) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  return acc;
}

Fp RingOps<Fp>::from_rat(const Fp& like, const Rat& r) {
  const std::uint64_t p = like.p;
  mpz_class num = r.num(), den = r.den();
  mpz_class pz(static_cast<unsigned long>(p));
  if (mpz_divisible_p(den.get_mpz_t(), pz.get_mpz_t()))
    throw CoefficientNotInRing("denominator " + den.get_str() +
                               " is divisible by p = " + std::to_string(p));
  mpz_class nm = num % pz, dm = den % pz;
  if (nm < 0) nm += pz;
  Fp fn(nm.get_ui(), p), fd(dm.get_ui(), p);
  return fn / fd;
}

// ---------------------------------------------------------------------------
// Quad

bool is_squarefree(long d) {
  unsigned long n = d < 0 ? static_cast<unsigned long>(-(d + 1)) + 1
                          : static_cast<unsigned long>(d);
  if (n == 0) return false;
  for (unsigned long q = 2; q * q <= n && q < 100000; ++q) {
    if (n % q == 0) {
      n /= q;
      if (n % q == 0) return false;
    }
  }
  mpz_class rest(n);
  if (rest > 1 && mpz_perfect_square_p(rest.get_mpz_t())) return false;
  return true;
}

Quad::Quad(mpz_class a, mpz_class b, mpz_class c, long d)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(d) {
  if (c_ == 0) throw DivideByZero("Quad: zero denominator");
  if (d_ == 0 || d_ == 1 || !is_squarefree(d_))
    throw NotSquarefree("Quad: d = " + std::to_string(d_) +
                        " must be squarefree and distinct from 0, 1");
  if (c_ < 0) {
    a_ = -a_;
    b_ = -b_;
    c_ = -c_;
  }
  if (a_ == 0 && b_ == 0) {
    c_ = 1;
    return;
  }
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), a_.get_mpz_t(), b_.get_mpz_t());
  mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c_.get_mpz_t());
  if (g > 1) {
    a_ /= g;
    b_ /= g;
    c_ /= g;
  }
}

Rat Quad::norm() const {
  mpz_class num = a_ * a_ - d_ * b_ * b_;
  return Rat(mpq_class(num, c_ * c_));
}

Quad Quad::inv() const {
  if (is_zero()) throw DivideByZero("Quad: division by zero");
  mpz_class n = a_ * a_ - d_ * b_ * b_;  // nonzero: d is not a square
  return Quad(c_ * a_, -(c_ * b_), n, d_);
}

mpz_class Quad::height() const {
  mpz_class h = abs(a_);
  mpz_class hb = abs(b_);
  if (hb > h) h = hb;
  if (c_ > h) h = c_;
  return h;
}

Quad operator+(const Quad& x, const Quad& y) {
  x.check(y);
  return Quad(x.a_ * y.c_ + y.a_ * x.c_, x.b_ * y.c_ + y.b_ * x.c_,
              x.c_ * y.c_, x.d_);
}

Quad operator-(const Quad& x, const Quad& y) {
  x.check(y);
  return Quad(x.a_ * y.c_ - y.a_ * x.c_, x.b_ * y.c_ - y.b_ * x.c_,
              x.c_ * y.c_, x.d_);
}

Quad operator*(const Quad& x, const Quad& y) {
  x.check(y);
  return Quad(x.a_ * y.a_ + x.d_ * x.b_ * y.b_, x.a_ * y.b_ + x.b_ * y.a_,
              x.c_ * y.c_, x.d_);
}

std::string RingOps<Quad>::str(const Quad& x) {
  if (x.b() == 0) {
    std::string s = x.a().get_str();
    if (x.c() != 1) s += "/" + x.c().get_str();
    return s;
  }
  std::string s = "(" + x.a().get_str();
  mpz_class babs = abs(x.b());
  s += (x.b() < 0) ? "-" : "+";
  if (babs != 1) s += babs.get_str() + "*";
  s += "r)";
  if (x.c() != 1) s += "/" + x.c().get_str();
  return s;
}

// ---------------------------------------------------------------------------
// Square roots

namespace {

// Tonelli-Shanks mod an odd prime; a must be a unit residue.
mpz_class tonelli_prime(const mpz_class& a, const mpz_class& p) {
  if (mpz_fdiv_ui(p.get_mpz_t(), 4) == 3) {
    mpz_class e = (p + 1) / 4, r;
    mpz_powm(r.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
    return r;
  }
  // p = 1 mod 4: write p - 1 = q * 2^e with q odd.
  mpz_class q = p - 1;
  unsigned long e = mpz_scan1(q.get_mpz_t(), 0);
  mpz_fdiv_q_2exp(q.get_mpz_t(), q.get_mpz_t(), e);
  // Least quadratic nonresidue; the scan is deterministic.
  mpz_class z = 2, half = (p - 1) / 2, t;
  for (;; ++z) {
    mpz_powm(t.get_mpz_t(), z.get_mpz_t(), half.get_mpz_t(), p.get_mpz_t());
    if (t == p - 1) break;
  }
  mpz_class m(static_cast<unsigned long>(e)), c, r, x, b;
  mpz_powm(c.get_mpz_t(), z.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
  mpz_powm(t.get_mpz_t(), a.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
  mpz_class qp1 = (q + 1) / 2;
  mpz_powm(r.get_mpz_t(), a.get_mpz_t(), qp1.get_mpz_t(), p.get_mpz_t());
  while (t != 1) {
    mpz_class tt = t;
    unsigned long i = 0;
    while (tt != 1) {
      tt = tt * tt % p;
      ++i;
    }
    mpz_class exp;
    mpz_ui_pow_ui(exp.get_mpz_t(), 2, mpz_get_ui(m.get_mpz_t()) - i - 1);
    mpz_powm(b.get_mpz_t(), c.get_mpz_t(), exp.get_mpz_t(), p.get_mpz_t());
    m = static_cast<unsigned long>(i);
    c = b * b % p;
    t = t * c % p;
    r = r * b % p;
  }
  return r;
}

}  // namespace

ZMod lift_root(const mpz_class& a, const ZMod& root, const Modulus& target) {
  const mpz_class& p = target.p();
  if (root.modulus().p() != p)
    throw ModulusMismatch("lift_root: mixed primes");
  unsigned kcur = root.modulus().k();
  if (kcur > target.k()) return root.reduced_to(target);
  mpz_class x = root.value();
  while (kcur < target.k()) {
    unsigned knext = std::min(2 * kcur, target.k());
    mpz_class mod;
    mpz_pow_ui(mod.get_mpz_t(), p.get_mpz_t(), knext);
    mpz_class fx = (x * x - a) % mod;
    mpz_class den = 2 * x, deninv;
    if (mpz_invert(deninv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t()) == 0)
      throw NonUnit("lift_root: derivative not a unit");
    x = (x - fx * deninv) % mod;
    if (x < 0) x += mod;
    kcur = knext;
  }
  ZMod out(x, target);
  if (out * out != ZMod(a, target))
    throw Inconsistent("lift_root: lifted value is not a root");
  return out;
}

ZMod sqrt_mod(const mpz_class& a, const Modulus& m) {
  const mpz_class& p = m.p();
  if (p == 2) throw EvenPrime("sqrt_mod: p = 2 is not supported");
  mpz_class a0 = a % m.pk();
  if (a0 < 0) a0 += m.pk();
  if (a0 == 0) return ZMod(0, m);
  if (mpz_divisible_p(a0.get_mpz_t(), p.get_mpz_t()))
    throw NonUnit("sqrt_mod: a is divisible by p but nonzero mod p^k");
  mpz_class ap = a0 % p, ls, half = (p - 1) / 2;
  mpz_powm(ls.get_mpz_t(), ap.get_mpz_t(), half.get_mpz_t(), p.get_mpz_t());
  if (ls != 1)
    throw NonResidue("sqrt_mod: " + ap.get_str() +
                     " is not a square mod " + p.get_str());
  mpz_class s0 = tonelli_prime(ap, p);
  ZMod root = lift_root(a0, ZMod(s0, m.with_k(1)), m);
  // Canonical representative: the root at most p^k / 2.
  if (2 * root.value() > m.pk()) root = -root;
  return root;
}

ZMod reduce_quad(const Quad& q, const ZMod& s) {
  const Modulus& m = s.modulus();
  ZMod d(q.d(), m);
  if (s * s != d)
    throw ModulusMismatch("reduce_quad: s^2 != d mod p^k");
  ZMod c(q.c(), m);
  if (!c.is_unit())
    throw DenominatorNotUnit("reduce_quad: p divides denominator " +
                             q.c().get_str());
  return (ZMod(q.a(), m) + ZMod(q.b(), m) * s) * c.inv();
}

ZMod reduce_rat(const Rat& r, const Modulus& m) {
  ZMod den(r.den(), m);
  if (!den.is_unit())
    throw DenominatorNotUnit("reduce_rat: p divides denominator " +
                             r.den().get_str());
  return ZMod(r.num(), m) * den.inv();
}

std::string RingDesc::text() const {
  switch (cls) {
    case kQ: return "Q";
    case kFp: return "Fp p=" + p.get_str();
    case kZpk: return "Zpk p=" + p.get_str() + " k=" + std::to_string(k);
    case kQuad: return "Quad d=" + std::to_string(d);
  }
  return "?";
}

}  // namespace tvx
