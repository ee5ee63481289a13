// Copyright (c) 2026 the tvx authors
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "tvx/linalg.hpp"
#include "tvx/recog.hpp"

#include <random>

using namespace tvx;

namespace {

mpz_class norm2(const std::vector<mpz_class>& v) {
  mpz_class s = 0;
  for (const auto& x : v) s += x * x;
  return s;
}

// Independent rational Gram-Schmidt; checks size reduction and the Lovasz
// condition at delta = 99/100 without touching the library's integer data.
void check_reduced(const std::vector<std::vector<mpz_class>>& b) {
  const std::size_t n = b.size(), m = b[0].size();
  std::vector<std::vector<mpq_class>> star(n, std::vector<mpq_class>(m));
  std::vector<std::vector<mpq_class>> mu(n, std::vector<mpq_class>(n, 0));
  std::vector<mpq_class> bb(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) star[i][j] = b[i][j];
    for (std::size_t j = 0; j < i; ++j) {
      mpq_class num = 0;
      for (std::size_t t = 0; t < m; ++t) num += b[i][t] * star[j][t];
      mu[i][j] = num / bb[j];
      mu[i][j].canonicalize();
      for (std::size_t t = 0; t < m; ++t) star[i][t] -= mu[i][j] * star[j][t];
    }
    bb[i] = 0;
    for (std::size_t t = 0; t < m; ++t) bb[i] += star[i][t] * star[i][t];
    REQUIRE(bb[i] != 0);
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j)
      CHECK(2 * abs(mu[i][j]) <= 1);
  const mpq_class delta(99, 100);
  for (std::size_t k = 1; k < n; ++k)
    CHECK(bb[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * bb[k - 1]);
}

Rat det_rat(const std::vector<std::vector<mpz_class>>& rows) {
  std::vector<std::vector<Rat>> m(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (const auto& x : rows[i]) m[i].push_back(Rat(mpz_class(x)));
  return generic_det(m, Rat(0));
}

// Random unimodular scramble of the identity: row additions and swaps only.
std::vector<std::vector<mpz_class>> scramble(std::size_t n, std::uint64_t seed,
                                             int ops) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<mpz_class>> b(n, std::vector<mpz_class>(n, 0));
  for (std::size_t i = 0; i < n; ++i) b[i][i] = 1;
  for (int o = 0; o < ops; ++o) {
    std::size_t i = rng() % n, j = rng() % n;
    if (i == j) {
      std::swap(b[i], b[(i + 1) % n]);
      continue;
    }
    long q = static_cast<long>(rng() % 11) - 5;
    for (std::size_t t = 0; t < n; ++t) b[i][t] += q * b[j][t];
  }
  return b;
}

}  // namespace

TEST_CASE("ascending orthogonal bases pass through lll unchanged") {
  LatticeBasis id3{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  auto r = lll_reduce(id3);
  CHECK(r.basis.rows == id3.rows);

  LatticeBasis diag{{{2, 0, 0}, {0, 3, 0}, {0, 0, 5}}};
  CHECK(lll_reduce(diag).basis.rows == diag.rows);
}

TEST_CASE("two-dimensional reduction matches gauss reduction") {
  mpz_class M("1000000000000000000000000000000");
  LatticeBasis b{{{1, 0}, {M, 1}}};
  auto r = lll_reduce(b);
  // The lattice is all of Z^2, so both reduced rows are signed units.
  CHECK(norm2(r.basis.rows[0]) == 1);
  CHECK(norm2(r.basis.rows[1]) == 1);
  CHECK(abs(det_rat(r.basis.rows).value()) == 1);
  check_reduced(r.basis.rows);
}

TEST_CASE("unimodular scrambles reduce back to short bases") {
  for (std::uint64_t seed : {11u, 22u, 33u, 44u}) {
    for (std::size_t n : {3u, 5u, 8u}) {
      auto rows = scramble(n, seed * 1000 + n, 40);
      auto r = lll_reduce(LatticeBasis{rows});
      check_reduced(r.basis.rows);
      // Determinant preserved up to sign, and +-1 here.
      CHECK(abs(det_rat(r.basis.rows).value()) == abs(det_rat(rows).value()));
      CHECK(abs(det_rat(r.basis.rows).value()) == 1);
      CHECK(abs(det_rat(r.transform).value()) == 1);
      // The transform reproduces the output from the input.
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          mpz_class acc = 0;
          for (std::size_t t = 0; t < n; ++t)
            acc += r.transform[i][t] * rows[t][j];
          CHECK(acc == r.basis.rows[i][j]);
        }
      // All successive minima of Z^n are 1, so no reduced row is long.
      for (const auto& row : r.basis.rows) CHECK(norm2(row) <= 4);
    }
  }
}

TEST_CASE("degenerate inputs are rejected") {
  CHECK_THROWS_AS(lll_reduce(LatticeBasis{{{1, 2, 3}, {2, 4, 6}, {0, 0, 1}}}),
                  DependentRows);
  CHECK_THROWS_AS(lll_reduce(LatticeBasis{{{0, 0}}}), DependentRows);
  CHECK_THROWS_AS(lll_reduce(LatticeBasis{{{1, 0}, {0, 1, 2}}}), InputError);
  LatticeBasis ok{{{1, 0}, {0, 1}}};
  CHECK_THROWS_AS(lll_reduce(ok, Rat(1, 4)), InputError);
  CHECK_THROWS_AS(lll_reduce(ok, Rat(1)), InputError);
  CHECK_THROWS_AS(lll_reduce(ok, Rat(101, 100)), InputError);
  CHECK(lll_reduce(LatticeBasis{}).basis.rows.empty());
}

TEST_CASE("worked coefficients recognize at 43^40") {
  Modulus m(mpz_class(43), 40);
  ZMod s = sqrt_mod(mpz_class(-7), m);

  const Quad alpha(-1, 1, 2, -7);
  const Quad curve(272, -848, 7, -7);
  const Quad third(832, -192, 7, -7);

  SUBCASE("single values round-trip") {
    auto got = recognize_quad(reduce_quad(alpha, s), s, 1000000);
    REQUIRE(got.has_value());
    CHECK(*got == alpha);

    got = recognize_quad(reduce_quad(curve, s), s, 1000000);
    REQUIRE(got.has_value());
    CHECK(*got == curve);

    got = recognize_quad(ZMod(5, m), s, 1000000);
    REQUIRE(got.has_value());
    CHECK(*got == Quad(5, -7));

    got = recognize_quad(ZMod(0, m), s, 1000000);
    REQUIRE(got.has_value());
    CHECK(got->is_zero());
  }

  SUBCASE("vectors recognize element-wise and fail atomically") {
    std::vector<ZMod> xs = {reduce_quad(alpha, s), reduce_quad(curve, s),
                            reduce_quad(third, s)};
    auto got = recognize_vector(xs, s, 1000000);
    REQUIRE(got.size() == 3);
    CHECK(got[0] == alpha);
    CHECK(got[1] == curve);
    CHECK(got[2] == third);

    std::vector<ZMod> zeros(4, ZMod(0, m));
    for (const auto& q : recognize_vector(zeros, s, 1000000))
      CHECK(q.is_zero());

    // Unrecognizable entry in the middle: atomic failure names the index.
    xs[1] = reduce_quad(Quad(104729, 99991, 104723, -7), s);
    try {
      recognize_vector(xs, s, 10);
      FAIL("expected NotFound");
    } catch (const NotFound& e) {
      CHECK(e.index == 1);
    }
  }

  SUBCASE("residues of tall numbers come back empty instead of wrong") {
    // The preimage has height ~1e5; a second preimage of height <= 1e3
    // would force an integer relation far shorter than the lattice allows,
    // so below the cap nothing can verify.
    ZMod tall = reduce_quad(Quad(104729, 99991, 104723, -7), s);
    CHECK_FALSE(recognize_quad(tall, s, 10).has_value());
    CHECK_FALSE(recognize_quad(tall, s, 1000).has_value());
    // pk/3 on the other hand is a genuine rational: 43^40 = 1 mod 3.
    auto third = recognize_quad(ZMod(m.pk() / 3, m), s, 10);
    REQUIRE(third.has_value());
    CHECK(*third == Quad(-1, 0, 3, -7));
  }

  SUBCASE("insufficient precision refuses instead of guessing") {
    Modulus low(mpz_class(43), 10);
    ZMod slow = sqrt_mod(mpz_class(-7), low);
    CHECK_THROWS_AS(recognize_quad(reduce_quad(alpha, slow), slow, 1000000),
                    PrecisionTooLow);
    // The same request fits once the cap matches what 43^10 can support.
    auto got = recognize_quad(reduce_quad(alpha, slow), slow, 100);
    REQUIRE(got.has_value());
    CHECK(*got == alpha);
  }

  SUBCASE("mismatched inputs are rejected") {
    CHECK_THROWS_AS(recognize_quad(ZMod(5, m), ZMod(5, m), 1000),
                    ModulusMismatch);
    Modulus other(mpz_class(37), 40);
    CHECK_THROWS_AS(recognize_quad(ZMod(5, m), sqrt_mod(mpz_class(-7), other),
                                   1000),
                    ModulusMismatch);
    CHECK_THROWS_AS(recognize_quad(ZMod(5, m), s, 0), InputError);
  }
}

TEST_CASE("residue-column weight defaults keep the target short") {
  Modulus m(mpz_class(43), 40);
  ZMod s = sqrt_mod(mpz_class(-7), m);
  const Quad curve(272, -848, 7, -7);
  ZMod x = reduce_quad(curve, s);

  RecogOptions opt;
  auto got = recognize_quad(x, s, 1000, opt);
  REQUIRE(got.has_value());
  CHECK(*got == curve);

  // Scaling the residue column by p^k / H^2 multiplies the target's first
  // coordinate by the numerator 272, pushing it past the generic short
  // vectors; only numerators of size <= 1 would survive such a weight.
  opt.weight = m.pk() / mpz_class(1000000);
  CHECK_FALSE(recognize_quad(x, s, 1000, opt).has_value());
}

TEST_CASE("random quadratic numbers round-trip through reduce and recognize") {
  Modulus m(mpz_class(43), 40);
  ZMod s = sqrt_mod(mpz_class(-7), m);
  std::mt19937_64 rng(20260814);
  std::uniform_int_distribution<long> coef(-1000000, 1000000);
  std::uniform_int_distribution<long> den(1, 1000000);

  int n = 0;
  while (n < 300) {
    long a = coef(rng), b = coef(rng), c = den(rng);
    if (c % 43 == 0) continue;
    ++n;
    Quad q(a, b, c, -7);
    ZMod x = reduce_quad(q, s);
    auto got = recognize_quad(x, s, 1000000);
    REQUIRE(got.has_value());
    CHECK(*got == q);
    // Soundness gate: what came back re-verifies through the embedding.
    CHECK(reduce_quad(*got, s) == x);
  }
}
