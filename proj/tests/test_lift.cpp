// Copyright (c) 2026 the tvx authors
// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "tvx/lift.hpp"

using namespace tvx;

TEST_CASE("fnv1a64 matches the published test vectors") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ull);
}

TEST_CASE("newton point lift follows the classical iteration") {
  auto amb = make_ambient({"x", "y"});
  Ideal<Rat> I(amb, Rat(0), {parse_poly("x^2 + 7*y^2", amb, Rat(0))});
  auto pt = ProjPoint<Fp>::normalized({Fp(6, 43), Fp(1, 43)});

  SUBCASE("one doubling step lands on the hand-computed value") {
    auto lifted = lift_point(I, pt, 2);
    CHECK(lifted.coords[0].value() == 1081);  // 6 - f(6)/f'(6) mod 43^2
    CHECK(lifted.coords[1].value() == 1);
    CHECK(lifted.pivot == 1);
  }

  SUBCASE("deep lift squares to -7 and stays on the 6-branch") {
    auto lifted = lift_point(I, pt, 40);
    const mpz_class& x = lifted.coords[0].value();
    mpz_class pk = lifted.coords[0].modulus().pk();
    CHECK(lifted.coords[0].modulus().k() == 40);
    CHECK((x * x + 7) % pk == 0);
    CHECK(x % 43 == 6);
  }

  SUBCASE("the tower is coherent") {
    auto deep = lift_point(I, pt, 4);
    auto shallow = lift_point(I, pt, 2);
    Modulus m2(mpz_class(43), 2);
    CHECK(deep.coords[0].reduced_to(m2) == shallow.coords[0]);
    // And reduction to k = 1 recovers the input.
    Modulus m1(mpz_class(43), 1);
    CHECK(deep.coords[0].reduced_to(m1).value() == 6);
  }

  SUBCASE("the plus-one schedule reaches the same branch") {
    auto a = lift_point(I, pt, 5, LiftSchedule::kPlusOne);
    auto b = lift_point(I, pt, 5, LiftSchedule::kDouble);
    CHECK(a.coords[0] == b.coords[0]);
  }
}

TEST_CASE("exact points lift unchanged") {
  auto amb = make_ambient({"x", "y"});
  Ideal<Rat> I(amb, Rat(0), {parse_poly("x - 5*y", amb, Rat(0))});
  auto pt = ProjPoint<Fp>::normalized({Fp(5, 43), Fp(1, 43)});
  auto lifted = lift_point(I, pt, 6);
  CHECK(lifted.coords[0].value() == 5);
  CHECK(lifted.coords[1].value() == 1);
}

TEST_CASE("point lift screens its input") {
  SUBCASE("singular reduction is rejected") {
    auto amb = make_ambient({"x", "y", "z", "w"});
    Ideal<Rat> I(amb, Rat(0), {parse_poly("x*z - y^2", amb, Rat(0))});
    auto vertex =
        ProjPoint<Fp>::normalized({Fp(0, 7), Fp(0, 7), Fp(0, 7), Fp(1, 7)});
    CHECK_THROWS_AS(lift_point(I, vertex, 3), SingularJacobian);
  }
  SUBCASE("off-variety points are rejected") {
    auto amb = make_ambient({"x", "y"});
    Ideal<Rat> I(amb, Rat(0), {parse_poly("x^2 + 7*y^2", amb, Rat(0))});
    auto off = ProjPoint<Fp>::normalized({Fp(1, 43), Fp(1, 43)});
    CHECK_THROWS_AS(lift_point(I, off, 2), InputError);
  }
  SUBCASE("a double point is singular even where the set is smooth") {
    auto amb = make_ambient({"x", "y"});
    Ideal<Rat> I(amb, Rat(0), {parse_poly("x^2", amb, Rat(0))});
    auto pt = ProjPoint<Fp>::normalized({Fp(0, 7), Fp(1, 7)});
    CHECK_THROWS_AS(lift_point(I, pt, 2), SingularJacobian);
  }
}

TEST_CASE("quadratic-integer models lift through the residue of sqrt d") {
  // alpha = (-1+sqrt(-7))/2 reduces to 24 mod 43 with s = 6. The line
  // x - alpha*y pins x to the full tower of reductions of alpha.
  auto amb = make_ambient({"x", "y"});
  const Quad like(0);
  Quad alpha(-1, 1, 2);
  Polynomial<Quad> g(amb, like);
  {
    Monomial mx(2), my(2);
    mx.e[0] = 1;
    my.e[1] = 1;
    g.add_term(mx, Quad(1));
    g.add_term(my, -alpha);
  }
  Ideal<Quad> I(amb, like, {g});
  auto pt = ProjPoint<Fp>::normalized({Fp(24, 43), Fp(1, 43)});
  auto lifted = lift_point(I, pt, 6, 3, LiftSchedule::kDouble);

  Modulus m3(mpz_class(43), 3);
  ZMod s3 = lift_root(mpz_class(-7), ZMod(mpz_class(6), Modulus(mpz_class(43), 1)), m3);
  CHECK(lifted.coords[0] == reduce_quad(alpha, s3));
}

TEST_CASE("params-only constrained lift is classical hensel") {
  LiftState st = lift_state_from_fp(43, {}, {}, {Fp(6, 43)});
  auto lamb = make_lift_ambient(st);
  REQUIRE(lamb->names == std::vector<std::string>{"c0"});
  std::vector<Polynomial<Rat>> cons = {parse_poly("c0^2 + 7", lamb, Rat(0))};

  auto out = lift_constrained(st, cons, 5);
  CHECK(out.state.modulus.k() == 5);
  CHECK(!out.underdetermined);
  mpz_class pk = out.state.modulus.pk();
  const mpz_class& c = out.state.params[0].value();
  CHECK((c * c + 7) % pk == 0);
  CHECK(c % 43 == 6);

  // Agrees with lift_point on the graph ideal.
  auto amb = make_ambient({"x", "y"});
  Ideal<Rat> I(amb, Rat(0), {parse_poly("x^2 + 7*y^2", amb, Rat(0))});
  auto viaPoint = lift_point(I, ProjPoint<Fp>::normalized({Fp(6, 43), Fp(1, 43)}), 5);
  CHECK(viaPoint.coords[0].value() == c);

  // Schedules agree where the correction is unique.
  auto plus = lift_constrained(st, cons, 5, LiftSchedule::kPlusOne);
  CHECK(plus.state.params[0].value() == c);
  CHECK(!plus.underdetermined);
}

TEST_CASE("coupled point tangent and cut lift holds every constraint") {
  // Conic x*z - y^2 over Z, point (1:1:1), a tangent vector, and a cut.
  const std::uint64_t p = 7;
  auto pt = ProjPoint<Fp>::normalized({Fp(1, p), Fp(1, p), Fp(1, p)});
  std::vector<std::vector<std::vector<Fp>>> tangents = {
      {{Fp(1, p), Fp(1, p), Fp(1, p)}}};
  std::vector<Fp> cut = {Fp(1, p), Fp(2, p), Fp(4, p)};
  LiftState st = lift_state_from_fp(p, {pt}, tangents, cut);
  REQUIRE(st.nfree() == 8);

  auto amb = make_ambient({"x", "y", "z"});
  Ideal<Rat> I(amb, Rat(0), {parse_poly("x*z - y^2", amb, Rat(0))});
  auto lamb = make_lift_ambient(st);
  std::vector<Polynomial<Rat>> cons =
      point_membership_constraints(I.gens(), st, lamb, 0);
  for (auto& c : tangent_orthogonality_constraints(I.gens(), st, lamb, 0, 0))
    cons.push_back(c);
  cons.push_back(cut_vanishing_constraint(st, lamb, 0, Rat(0)));
  REQUIRE(cons.size() == 3);

  auto out = lift_constrained(st, cons, 6);
  CHECK(out.underdetermined);  // 3 constraints on 8 free variables
  const LiftState& up = out.state;
  CHECK(up.modulus.k() == 6);

  // Independent recomputation of every constraint over the integers.
  mpz_class pk = up.modulus.pk();
  const mpz_class& x = up.points[0].coords[0].value();
  const mpz_class& y = up.points[0].coords[1].value();
  const mpz_class& z = up.points[0].coords[2].value();
  CHECK(z == 1);  // pivot pinned for the whole tower
  CHECK((x * z - y * y) % pk == 0);
  const auto& t = up.tangents[0][0];
  mpz_class ortho = z * t[0].value() - 2 * y * t[1].value() + x * t[2].value();
  CHECK(ortho % pk == 0);
  mpz_class cutv = up.params[0].value() * x + up.params[1].value() * y +
                   up.params[2].value() * z;
  CHECK(cutv % pk == 0);

  // Tower coherence block by block.
  Modulus m1(mpz_class(7), 1);
  CHECK(up.points[0].coords[0].reduced_to(m1).value() == 1);
  CHECK(up.tangents[0][0][1].reduced_to(m1).value() == 1);
  CHECK(up.params[0].reduced_to(m1).value() == 1);
  CHECK(up.params[2].reduced_to(m1).value() == 4);
}

TEST_CASE("constrained lift reports obstructions") {
  SUBCASE("a state violating its constraints is bad input") {
    LiftState st = lift_state_from_fp(7, {}, {}, {Fp(1, 7)});
    auto lamb = make_lift_ambient(st);
    std::vector<Polynomial<Rat>> cons = {parse_poly("c0 - 3", lamb, Rat(0))};
    CHECK_THROWS_AS(lift_constrained(st, cons, 2), InputError);
  }
  SUBCASE("an obstructed lift is inconsistent") {
    // 7c^2 + 7 = 0 holds mod 7 for any c but needs c^2 = -1 mod 7: impossible.
    LiftState st = lift_state_from_fp(7, {}, {}, {Fp(0, 7)});
    auto lamb = make_lift_ambient(st);
    std::vector<Polynomial<Rat>> cons = {
        parse_poly("7*c0^2 + 7", lamb, Rat(0))};
    CHECK_THROWS_AS(lift_constrained(st, cons, 2), Inconsistent);
  }
  SUBCASE("constraints over the wrong ambient are rejected") {
    LiftState st = lift_state_from_fp(7, {}, {}, {Fp(0, 7)});
    auto amb2 = make_ambient({"c0", "c1"});
    std::vector<Polynomial<Rat>> cons = {parse_poly("c0", amb2, Rat(0))};
    CHECK_THROWS_AS(lift_constrained(st, cons, 2), DimensionMismatch);
  }
  SUBCASE("target below the current precision is rejected") {
    LiftState st = lift_state_from_fp(7, {}, {}, {Fp(0, 7)});
    auto out = lift_constrained(st, {}, 3);
    CHECK_THROWS_AS(lift_constrained(out.state, {}, 2), InputError);
  }
}

TEST_CASE("lift state serializes with decimal strings and hashes") {
  LiftState st = lift_state_from_fp(43, {}, {}, {Fp(6, 43)});
  auto lamb = make_lift_ambient(st);
  std::vector<Polynomial<Rat>> cons = {parse_poly("c0^2 + 7", lamb, Rat(0))};
  auto out = lift_constrained(st, cons, 4);

  auto text = out.state.to_json();
  CHECK(text.find("\"p\":\"43\"") != std::string::npos);
  CHECK(text.find("\"k\":4") != std::string::npos);
  CHECK(text.find("\"modulus\":\"3418801\"") != std::string::npos);

  auto back = LiftState::from_json(text);
  CHECK(back.modulus == out.state.modulus);
  CHECK(back.params.size() == 1);
  CHECK(back.params[0] == out.state.params[0]);
  CHECK(back.constraint_hashes == out.state.constraint_hashes);

  SUBCASE("resuming with the same system continues the tower") {
    auto more = lift_constrained(back, cons, 8);
    CHECK(more.state.modulus.k() == 8);
    Modulus m4(mpz_class(43), 4);
    CHECK(more.state.params[0].reduced_to(m4) == out.state.params[0]);
  }
  SUBCASE("resuming with a different system is rejected") {
    std::vector<Polynomial<Rat>> other = {parse_poly("c0^2 - 2", lamb, Rat(0))};
    CHECK_THROWS_AS(lift_constrained(back, other, 8), InputError);
  }
  SUBCASE("malformed json is an input error") {
    CHECK_THROWS_AS(LiftState::from_json("{"), InputError);
    CHECK_THROWS_AS(LiftState::from_json("{\"p\":\"43\"}"), InputError);
  }
}

TEST_CASE("flatten and unflatten are inverse on the free block") {
  const std::uint64_t p = 5;
  auto pt = ProjPoint<Fp>::normalized({Fp(2, p), Fp(1, p), Fp(0, p)});
  LiftState st = lift_state_from_fp(p, {pt}, {{{Fp(1, p), Fp(2, p), Fp(3, p)}}},
                                    {Fp(4, p)});
  CHECK(st.points[0].pivot == 1);
  CHECK(st.nfree() == 2 + 3 + 1);
  CHECK(lift_var_point(st, 0, 0) == 0);
  CHECK(lift_var_point(st, 0, 2) == 1);
  CHECK_THROWS_AS(lift_var_point(st, 0, 1), InputError);  // the pivot
  CHECK(lift_var_tangent(st, 0, 0, 2) == 4);
  CHECK(lift_var_param(st, 0) == 5);
  auto names = make_lift_ambient(st)->names;
  CHECK(names == std::vector<std::string>{"p0_0", "p0_2", "t0_0_0", "t0_0_1",
                                          "t0_0_2", "c0"});

  auto vals = st.flatten();
  LiftState st2 = st;
  st2.unflatten(vals, st.modulus);
  CHECK(st2.points[0].coords[0] == st.points[0].coords[0]);
  CHECK(st2.points[0].coords[1].value() == 1);
  CHECK(st2.tangents[0][0][2] == st.tangents[0][0][2]);
  CHECK(st2.params[0] == st.params[0]);
}
