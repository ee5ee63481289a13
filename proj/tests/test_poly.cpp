// Copyright (c) 2026 the tvx authors
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "tvx/poly.hpp"

using namespace tvx;

namespace {

mpz_class binom(unsigned long n, unsigned long k) {
  mpz_class b;
  mpz_bin_uiui(b.get_mpz_t(), n, k);
  return b;
}

template <class K>
Polynomial<K> random_poly(std::mt19937_64& rng, const AmbientPtr& amb,
                          const K& like, unsigned max_deg, unsigned nterms) {
  Polynomial<K> f(amb, like);
  for (unsigned t = 0; t < nterms; ++t) {
    Monomial m(amb->nvars());
    unsigned d = rng() % (max_deg + 1);
    for (unsigned j = 0; j < d; ++j) m.e[rng() % amb->nvars()]++;
    long c = (long)(rng() % 19) - 9;
    f.add_term(m, RingOps<K>::from_rat(like, Rat(c)));
  }
  return f;
}

}  // namespace

TEST_CASE("monomial enumeration is complete, distinct, and sorted") {
  for (std::size_t n : {1u, 2u, 3u, 5u}) {
    for (unsigned d : {0u, 1u, 2u, 4u}) {
      auto ms = monomials_of_degree(n, d);
      CHECK(mpz_class(ms.size()) == binom(d + n - 1, n - 1));
      for (std::size_t i = 0; i < ms.size(); ++i) {
        CHECK(ms[i].degree() == d);
        if (i + 1 < ms.size())
          CHECK(monomial_less(ms[i], ms[i + 1], MonomialOrder::kDegRevLex));
      }
    }
  }
}

TEST_CASE("degrevlex ranks the degree-2 monomials of P^2 classically") {
  // Descending: x0^2 > x0*x1 > x1^2 > x0*x2 > x1*x2 > x2^2.
  auto ms = monomials_of_degree(3, 2);
  auto mk = [](int a, int b, int c) {
    Monomial m(3);
    m.e[0] = a;
    m.e[1] = b;
    m.e[2] = c;
    return m;
  };
  std::vector<Monomial> expect = {mk(0, 0, 2), mk(0, 1, 1), mk(1, 0, 1),
                                  mk(0, 2, 0), mk(1, 1, 0), mk(2, 0, 0)};
  CHECK(ms == expect);
  // lex puts x0*x2 above x1^2.
  CHECK(monomial_less(mk(0, 2, 0), mk(1, 0, 1), MonomialOrder::kLex));
  CHECK(monomial_less(mk(1, 0, 1), mk(0, 2, 0), MonomialOrder::kDegRevLex));
  // deglex sorts by degree first, then lex.
  CHECK(monomial_less(mk(2, 0, 0), mk(1, 1, 1), MonomialOrder::kDegLex));
  CHECK(monomial_less(mk(0, 2, 0), mk(1, 0, 1), MonomialOrder::kDegLex));
}

TEST_CASE("monomial divisibility, quotient, lcm") {
  Monomial a(3), b(3);
  a.e = {2, 1, 0};
  b.e = {1, 1, 0};
  CHECK(b.divides(a));
  CHECK(!a.divides(b));
  CHECK((a / b).e == std::vector<std::uint16_t>{1, 0, 0});
  b.e = {0, 2, 1};
  CHECK(Monomial::lcm(a, b).e == std::vector<std::uint16_t>{2, 2, 1});
}

TEST_CASE("weight classes partition each graded piece") {
  CyclicAction<Rat> act;
  act.n = 7;
  act.weights = {0, 1, 2, 4};
  act.validate(4, Rat(0));
  for (unsigned d : {1u, 2u, 3u}) {
    std::size_t total = 0;
    for (unsigned w = 0; w < act.n; ++w)
      total += weight_component_basis(4, d, w, act).size();
    CHECK(total == monomials_of_degree(4, d).size());
  }
  Monomial m(4);
  m.e = {0, 1, 1, 0};
  CHECK(monomial_weight(m, act) == 3);
  m.e = {0, 0, 2, 1};
  CHECK(monomial_weight(m, act) == 1);  // 2*2 + 4 = 8 = 1 mod 7
}

TEST_CASE("cyclic action validation rejects malformed data") {
  CyclicAction<Rat> act;
  act.n = 3;
  act.weights = {0, 0};
  CHECK_THROWS_AS(act.validate(3, Rat(0)), DimensionMismatch);
  act.weights = {0, 0, 0};
  act.perm = {1, 2, 0};
  act.perm_order = 2;  // wrong: the 3-cycle has order 3
  CHECK_THROWS_AS(act.validate(3, Rat(0)), InputError);
  act.perm_order = 3;
  act.validate(3, Rat(0));
  act.character = {Rat(1), Rat(1), Rat(-1)};  // orbit product is -1, not 1
  CHECK_THROWS_AS(act.validate(3, Rat(0)), InputError);
  act.character = {Rat(1), Rat(1), Rat(1)};
  act.validate(3, Rat(0));
}

TEST_CASE("permutation action on polynomials") {
  auto amb = make_ambient("x", 3);
  Rat like(0);
  auto f = parse_poly<Rat>("x0^2*x1 + 5*x2", amb, like);
  CyclicAction<Rat> act;
  act.n = 1;
  act.weights = {0, 0, 0};
  act.perm = {1, 2, 0};
  act.perm_order = 3;
  auto g = act_on_poly(f, act);
  CHECK(g == parse_poly<Rat>("x1^2*x2 + 5*x0", amb, like));
  // Orbit of length 3 returns to the start.
  CHECK(act_on_poly(act_on_poly(g, act), act) == f);
  // With a character the coefficient picks up the orbit scalars.
  act.character = {Rat(2), Rat(3), Rat(1, 6)};
  act.validate(3, like);
  auto h = act_on_poly(parse_poly<Rat>("x0*x1", amb, like), act);
  CHECK(h == parse_poly<Rat>("6*x1*x2", amb, like));
}

TEST_CASE("polynomial arithmetic identities over Q") {
  auto amb = make_ambient("x", 3);
  Rat like(0);
  auto x = Polynomial<Rat>::variable(amb, 0, like);
  auto y = Polynomial<Rat>::variable(amb, 1, like);
  CHECK((x + y) * (x - y) == x * x - y * y);
  CHECK((x + y).pow(2) == x * x + Rat(2) * (x * y) + y * y);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 30; ++t) {
    auto f = random_poly<Rat>(rng, amb, like, 3, 4);
    auto g = random_poly<Rat>(rng, amb, like, 3, 4);
    auto h = random_poly<Rat>(rng, amb, like, 2, 3);
    CHECK(f * (g + h) == f * g + f * h);
    CHECK(f * g == g * f);
    CHECK(f - f == Polynomial<Rat>::zero(amb, like));
  }
}

TEST_CASE("degree, homogeneity, truncation, leading terms") {
  auto amb = make_ambient("x", 2);
  Rat like(0);
  auto f = parse_poly<Rat>("x0^3 + x0*x1 - 2", amb, like);
  CHECK(f.degree() == 3);
  CHECK(!f.is_homogeneous());
  CHECK(parse_poly<Rat>("x0^2 + x0*x1", amb, like).is_homogeneous());
  CHECK(Polynomial<Rat>::zero(amb, like).degree() == -1);
  CHECK(f.truncated(2) == parse_poly<Rat>("x0*x1 - 2", amb, like));

  auto g = parse_poly<Rat>("x0 + x1^2", amb, like);
  CHECK(g.leading(MonomialOrder::kDegRevLex).first.e ==
        std::vector<std::uint16_t>{0, 2});
  CHECK(g.leading(MonomialOrder::kLex).first.e ==
        std::vector<std::uint16_t>{1, 0});

  auto one_plus_x = parse_poly<Rat>("1 + x0", amb, like);
  CHECK(one_plus_x.pow(5, 2) ==
        parse_poly<Rat>("1 + 5*x0 + 10*x0^2", amb, like));
}

TEST_CASE("evaluation and composition") {
  auto amb = make_ambient("x", 2);
  Rat like(0);
  auto f = parse_poly<Rat>("x0^2 + x1", amb, like);
  CHECK(f.evaluate({Rat(2), Rat(3)}) == Rat(7));

  auto uvamb = make_ambient(std::vector<std::string>{"u", "v"});
  auto u = Polynomial<Rat>::variable(uvamb, 0, like);
  auto v = Polynomial<Rat>::variable(uvamb, 1, like);
  auto g = parse_poly<Rat>("x0*x1", amb, like);
  CHECK(g.compose({u + v, u - v}) == parse_poly<Rat>("u^2 - v^2", uvamb, like));
  // Truncated composition drops everything above the bound.
  CHECK(f.compose({u + v, u}, 1) == parse_poly<Rat>("u", uvamb, like));
}

TEST_CASE("derivatives, classical and divided-power") {
  auto amb = make_ambient("x", 1);
  Fp like(0, 5);
  auto f = Polynomial<Fp>::variable(amb, 0, like).pow(5);
  CHECK(f.partial(0).is_zero());  // 5 x^4 = 0 in char 5
  Monomial a5(1), a1(1);
  a5.e = {5};
  a1.e = {1};
  CHECK(f.hasse_derivative(a5) ==
        Polynomial<Fp>::constant(amb, Fp(1, 5)));
  CHECK(f.hasse_derivative(a1).is_zero());

  Rat rl(0);
  auto g = Polynomial<Rat>::variable(amb, 0, rl).pow(4);
  Monomial a2(1);
  a2.e = {2};
  CHECK(g.hasse_derivative(a2) ==
        parse_poly<Rat>("6*x0^2", amb, rl));
  CHECK(g.partial(0) == parse_poly<Rat>("4*x0^3", amb, rl));
}

TEST_CASE("parser handles the coefficient grammar") {
  auto amb = make_ambient("x", 3);
  SUBCASE("rationals") {
    Rat like(0);
    auto f = parse_poly<Rat>("-x0 + 3/2*x1*x2 - 7", amb, like);
    CHECK(f.terms().size() == 3);
    CHECK(f.evaluate({Rat(1), Rat(2), Rat(2)}) == Rat(-2));
  }
  SUBCASE("quadratic coefficients") {
    Quad like(0, -7);
    auto f = parse_poly<Quad>("(-1+r)/2*x0 + sqrt(-7)*x1 - 2*r*x2", amb, like);
    auto it = f.terms().begin();
    // ascending degrevlex: x2, x1, x0
    CHECK(it->second == Quad(0, -2, 1, -7));
    ++it;
    CHECK(it->second == Quad(0, 1, 1, -7));
    ++it;
    CHECK(it->second == Quad(-1, 1, 2, -7));
    CHECK(parse_poly<Quad>("r*r", amb, like) ==
          Polynomial<Quad>::constant(amb, Quad(-7, -7)));
    CHECK(parse_poly<Quad>("(1+r)*(1-r)/8", amb, like) ==
          Polynomial<Quad>::constant(amb, Quad(1, -7)));
  }
  SUBCASE("a variable named r shadows the root") {
    auto ramb = make_ambient(std::vector<std::string>{"r", "s"});
    Quad like(0, -7);
    auto f = parse_poly<Quad>("r*s", ramb, like);
    CHECK(f.terms().begin()->first.e == std::vector<std::uint16_t>{1, 1});
    CHECK(f.terms().begin()->second == Quad(1, -7));
  }
  SUBCASE("errors") {
    Rat like(0);
    CHECK_THROWS_AS(parse_poly<Rat>("x9", amb, like), UnknownVariable);
    CHECK_THROWS_AS(parse_poly<Rat>("x0 +", amb, like), SyntaxError);
    CHECK_THROWS_AS(parse_poly<Rat>("", amb, like), SyntaxError);
    CHECK_THROWS_AS(parse_poly<Rat>("x0 x1", amb, like), SyntaxError);
    CHECK_THROWS_AS(parse_poly<Rat>("1/0*x0", amb, like), SyntaxError);
    CHECK_THROWS_AS(parse_poly<Rat>("(1+r)*x0", amb, like),
                    CoefficientNotInRing);
    CHECK_THROWS_AS(parse_poly<Rat>("r*x0", amb, like), UnknownVariable);
    Quad qlike(0, -7);
    CHECK_THROWS_AS(parse_poly<Quad>("sqrt(-5)*x0", amb, qlike),
                    CoefficientNotInRing);
    Fp flike(0, 5);
    CHECK_THROWS_AS(parse_poly<Fp>("1/5*x0", amb, flike),
                    CoefficientNotInRing);
  }
}

TEST_CASE("printing is canonical and round-trips through the parser") {
  auto amb = make_ambient("x", 3);
  SUBCASE("fixed forms") {
    Rat like(0);
    CHECK(parse_poly<Rat>("x1 + x0^2 - 1/2", amb, like).to_string() ==
          "x0^2 + x1 - 1/2");
    CHECK(Polynomial<Rat>::zero(amb, like).to_string() == "0");
    CHECK(parse_poly<Rat>("-x0", amb, like).to_string() == "-x0");
    Quad qlike(0, -7);
    CHECK(parse_poly<Quad>("(-1+r)/2*x0*x2 + x1^2", amb, qlike).to_string() ==
          "x1^2 + (-1+r)/2*x0*x2");
  }
  SUBCASE("round trip over four rings") {
    std::mt19937_64 rng(17);
    Rat rl(0);
    Fp fl(0, 43);
    ZMod zl(0, Modulus(43, 3));
    Quad ql(0, -7);
    for (int t = 0; t < 40; ++t) {
      auto f = random_poly<Rat>(rng, amb, rl, 4, 5);
      CHECK(parse_poly<Rat>(f.to_string(), amb, rl) == f);
      auto g = random_poly<Fp>(rng, amb, fl, 4, 5);
      CHECK(parse_poly<Fp>(g.to_string(), amb, fl) == g);
      auto h = random_poly<ZMod>(rng, amb, zl, 4, 5);
      CHECK(parse_poly<ZMod>(h.to_string(), amb, zl) == h);
      auto q = random_poly<Quad>(rng, amb, ql, 4, 5);
      // Inject root parts so the quadratic printer is exercised.
      Polynomial<Quad> qq = q;
      qq.add_term(Monomial(3), Quad(3, -5, 7, -7));
      CHECK(parse_poly<Quad>(qq.to_string(), amb, ql) == qq);
    }
  }
}
