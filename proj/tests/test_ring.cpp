// Copyright (c) 2026 the tvx authors
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "tvx/ring.hpp"

using namespace tvx;

namespace {

// Independent extended Euclid, used as the oracle for the inverse helpers.
long long egcd(long long a, long long b, long long& x, long long& y) {
  if (b == 0) {
    x = 1;
    y = 0;
    return a;
  }
  long long x1, y1;
  long long g = egcd(b, a % b, x1, y1);
  x = y1;
  y = x1 - (a / b) * y1;
  return g;
}

long long inv_oracle(long long a, long long m) {
  long long x, y;
  long long g = egcd(a % m, m, x, y);
  REQUIRE(g == 1);
  return ((x % m) + m) % m;
}

// Brute-force square root oracle over small p^k.
std::vector<unsigned long> sqrt_oracle(long a, unsigned long pk) {
  std::vector<unsigned long> roots;
  long long aa = ((a % (long long)pk) + (long long)pk) % (long long)pk;
  for (unsigned long x = 0; x < pk; ++x)
    if ((unsigned long long)x * x % pk == (unsigned long long)aa)
      roots.push_back(x);
  return roots;
}

}  // namespace

TEST_CASE("canonical square roots of -7 at the three working primes") {
  CHECK(sqrt_mod(-7, Modulus(43, 1)).value() == 6);
  CHECK(sqrt_mod(-7, Modulus(37, 1)).value() == 17);
  CHECK(sqrt_mod(-7, Modulus(1327, 1)).value() == 103);
}

TEST_CASE("sqrt_mod basics and errors") {
  CHECK(sqrt_mod(0, Modulus(43, 3)).value() == 0);
  CHECK(sqrt_mod(2, Modulus(7, 1)).value() == 3);
  CHECK_THROWS_AS(sqrt_mod(5, Modulus(7, 1)), NonResidue);
  CHECK_THROWS_AS(sqrt_mod(1, Modulus(2, 3)), EvenPrime);
  CHECK_THROWS_AS(sqrt_mod(43, Modulus(43, 2)), NonUnit);
}

TEST_CASE("sqrt_mod matches the brute-force oracle at prime powers") {
  for (auto [p, k] : {std::pair<long, unsigned>{43, 2},
                      {7, 3},
                      {37, 2},
                      {5, 4}}) {
    unsigned long pk = 1;
    for (unsigned i = 0; i < k; ++i) pk *= (unsigned long)p;
    Modulus m(p, k);
    for (long a : {-7L, 2L, 11L, 1L}) {
      auto roots = sqrt_oracle(a, pk);
      if (roots.empty() || roots[0] == 0) continue;
      ZMod s = sqrt_mod(a, m);
      bool found = false;
      for (auto r : roots)
        if (s.value() == (long)r) found = true;
      CHECK(found);
      CHECK(2 * s.value() <= m.pk());
      CHECK(s * s == ZMod(a, m));
    }
  }
}

TEST_CASE("sqrt_mod picks the representative at most p^k/2") {
  // mod 43 the roots of -7 are 6 and 37; 6 is canonical.
  Modulus m(43, 1);
  ZMod s = sqrt_mod(-7, m);
  CHECK(s.value() == 6);
  CHECK((-s).value() == 37);
}

TEST_CASE("lift_root keeps the branch and the tower is coherent") {
  Modulus m1(43, 1), m4(43, 4), m2(43, 2);
  ZMod base = sqrt_mod(-7, m1);
  ZMod r4 = lift_root(-7, base, m4);
  CHECK(r4 * r4 == ZMod(-7, m4));
  CHECK(r4.reduced_to(m1) == base);
  ZMod r2 = lift_root(-7, base, m2);
  CHECK(r4.reduced_to(m2) == r2);
}

TEST_CASE("modular inverse against the extended-Euclid oracle") {
  std::mt19937_64 rng(12345);
  for (unsigned long p : {5ul, 7ul, 37ul, 43ul, 1327ul, 65521ul}) {
    for (int trial = 0; trial < 200; ++trial) {
      unsigned long a = rng() % p;
      if (a == 0) continue;
      CHECK(inv_mod_u64(a, p) ==
            (unsigned long long)inv_oracle((long long)a, (long long)p));
    }
  }
  CHECK_THROWS_AS(inv_mod_u64(6, 12), NonUnit);
}

TEST_CASE("ZMod arithmetic and units") {
  Modulus m(43, 1);
  CHECK(ZMod(2, m).inv().value() == 22);
  Modulus m2(43, 2);
  CHECK_THROWS_AS(ZMod(43, m2).inv(), NonUnit);
  CHECK(ZMod(43, m2).is_unit() == false);
  CHECK(ZMod(44, m2).is_unit() == true);
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    mpz_class v(static_cast<unsigned long>(rng()));
    ZMod x(v, m2);
    if (!x.is_unit()) continue;
    CHECK(x * x.inv() == ZMod(1, m2));
  }
  Modulus other(7, 1);
  CHECK_THROWS_AS(ZMod(1, m) + ZMod(1, other), ModulusMismatch);
}

TEST_CASE("Fp matches ZMod semantics") {
  std::mt19937_64 rng(7);
  for (std::uint64_t p : {5ull, 43ull, 1327ull, 4294967291ull}) {
    Modulus m(mpz_class(std::to_string(p)), 1);
    for (int trial = 0; trial < 100; ++trial) {
      std::uint64_t a = rng() % p, b = rng() % p;
      Fp x(a, p), y(b, p);
      ZMod zx(mpz_class(std::to_string(a)), m),
          zy(mpz_class(std::to_string(b)), m);
      CHECK(mpz_class((x + y).v) == (zx + zy).value());
      CHECK(mpz_class((x - y).v) == (zx - zy).value());
      CHECK(mpz_class((x * y).v) == (zx * zy).value());
      if (b != 0) CHECK(mpz_class((x / y).v) == (zx * zy.inv()).value());
    }
  }
  CHECK_THROWS_AS(Fp(1, 5) + Fp(1, 7), ModulusMismatch);
  CHECK_THROWS_AS(Fp(0, 5).inv(), DivideByZero);
}

TEST_CASE("Quad normalization and arithmetic") {
  Quad q(2, 4, 6, -7);
  CHECK(q.a() == 1);
  CHECK(q.b() == 2);
  CHECK(q.c() == 3);
  Quad neg(1, 1, -2, -7);
  CHECK(neg.c() == 2);
  CHECK(neg.a() == -1);
  CHECK_THROWS_AS(Quad(1, 1, 0, -7), DivideByZero);
  CHECK_THROWS_AS(Quad(1, 0, 1, 12), NotSquarefree);
  CHECK_THROWS_AS(Quad(1, 0, 1, 0), NotSquarefree);
  CHECK_THROWS_AS(Quad(1, 0, 1, 1), NotSquarefree);

  Quad half(-1, 1, 2, -7);  // (-1 + r)/2
  CHECK(half.norm() == Rat(2));
  CHECK(half.conj() == Quad(-1, -1, 2, -7));
  CHECK(half * half.inv() == Quad(1, -7));
  CHECK(half + half.conj() == Quad(-1, -7));
  CHECK(half * half.conj() == Quad(2, -7));

  std::mt19937_64 rng(5);
  auto rnd = [&](long d) {
    return Quad((long)(rng() % 41) - 20, (long)(rng() % 41) - 20,
                (long)(rng() % 20) + 1, d);
  };
  for (int trial = 0; trial < 200; ++trial) {
    Quad x = rnd(-7), y = rnd(-7), z = rnd(-7);
    CHECK((x + y) * z == x * z + y * z);
    CHECK(x * y == y * x);
    if (!x.is_zero()) CHECK(x * x.inv() == Quad(1, -7));
    // norm is multiplicative
    CHECK((x * y).norm() == x.norm() * y.norm());
  }
  CHECK_THROWS_AS(Quad(1, -7) + Quad(1, 5), ModulusMismatch);
  CHECK_THROWS_AS(Quad(0, 0, 1, -7).inv(), DivideByZero);
}

TEST_CASE("reduce_quad reproduces the worked residues at p = 43, s = 6") {
  Modulus m(43, 1);
  ZMod s = sqrt_mod(-7, m);
  REQUIRE(s.value() == 6);
  CHECK(reduce_quad(Quad(-1, 1, 2, -7), s).value() == 24);
  CHECK(reduce_quad(Quad(272, -848, 7, -7), s).value() == 0);
  CHECK(reduce_quad(Quad(832, -192, 7, -7), s).value() == 28);
  CHECK_THROWS_AS(reduce_quad(Quad(1, 0, 43, -7), s), DenominatorNotUnit);
  // s must actually square to d.
  CHECK_THROWS_AS(reduce_quad(Quad(1, 0, 1, -7), ZMod(5, m)),
                  ModulusMismatch);
}

TEST_CASE("reduce_quad is a ring homomorphism") {
  Modulus m(43, 3);
  ZMod s = sqrt_mod(-7, m);
  std::mt19937_64 rng(11);
  auto rnd = [&]() {
    long c = 1 + (long)(rng() % 30);
    while (c % 43 == 0) c = 1 + (long)(rng() % 30);
    return Quad((long)(rng() % 201) - 100, (long)(rng() % 201) - 100, c, -7);
  };
  for (int trial = 0; trial < 200; ++trial) {
    Quad x = rnd(), y = rnd();
    CHECK(reduce_quad(x + y, s) == reduce_quad(x, s) + reduce_quad(y, s));
    CHECK(reduce_quad(x * y, s) == reduce_quad(x, s) * reduce_quad(y, s));
  }
  CHECK(reduce_quad(Quad(1, 0, 1, -7), s) == ZMod(1, m));
}

TEST_CASE("rational reduction and Rat basics") {
  Modulus m(43, 1);
  CHECK(reduce_rat(Rat(1, 2), m).value() == 22);
  CHECK_THROWS_AS(reduce_rat(Rat(1, 43), m), DenominatorNotUnit);
  CHECK(Rat(6, 4) == Rat(3, 2));
  CHECK(Rat(3, 2).inv() == Rat(2, 3));
  CHECK_THROWS_AS(Rat(0).inv(), DivideByZero);
}

TEST_CASE("quad height and squarefree checks") {
  CHECK(Quad(272, -848, 7, -7).height() == 848);
  CHECK(is_squarefree(-7));
  CHECK(is_squarefree(-1));
  CHECK(is_squarefree(10));
  CHECK(!is_squarefree(12));
  CHECK(!is_squarefree(-4));
  CHECK(!is_squarefree(49));
}
