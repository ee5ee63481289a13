// Copyright (c) 2026 the tvx authors
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite. One criterion per run() call, one [PASS]/[FAIL] line
// each, wall-clock limits pinned next to the checks. The process exit code
// is the number of failed criteria. Oracles here are written independently
// of the library paths they check: rank-one cuts are enumerated from
// (u,v,w) directly, jet conditions are recomputed from a global polynomial
// parametrization, and every emitted artifact is re-verified from scratch.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>

#include "tvx/io.hpp"
#include "tvx/lift.hpp"
#include "tvx/linalg.hpp"
#include "tvx/recog.hpp"
#include "tvx/search.hpp"

using namespace tvx;

namespace {

int g_failures = 0;

void run(int id, const std::string& name, double limit_s,
         const std::function<void(std::string&)>& body) {
  std::string note;
  bool ok = true;
  auto t0 = std::chrono::steady_clock::now();
  try {
    body(note);
  } catch (const std::exception& e) {
    ok = false;
    note = std::string("exception: ") + e.what();
  }
  double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                            t0)
                  .count();
  if (ok && !note.empty()) ok = false;  // body reports problems via note
  if (ok && dt > limit_s) {
    ok = false;
    note = "over time limit";
  }
  std::ostringstream line;
  line << (ok ? "[PASS] " : "[FAIL] ") << id << ". " << name << " ("
       << std::fixed << std::setprecision(2) << dt << " s, limit "
       << std::setprecision(0) << limit_s << " s)";
  if (!ok) line << "  -- " << note;
  std::cout << line.str() << "\n" << std::flush;
  if (!ok) ++g_failures;
}

PolyFileData dataset(const std::string& name) {
  for (const auto& s : bundled_datasets())
    if (s.name == name) return parse_poly_file(s.content);
  throw InputError("missing bundled dataset " + name);
}

const Quad kOne(1, 0, 1, -7);
const Quad kAlpha(-1, 1, 2, -7);  // (-1 + sqrt(-7))/2

// Rank-one hyperplane cuts of the degree-2 embedding, enumerated straight
// from the squares (u x + v y + w z)^2 and normalized the way the scan
// reports hits: coefficient at the pinned slot (0) scaled to 1 when nonzero,
// otherwise the last nonzero coefficient is 1.
std::set<std::vector<std::uint64_t>> square_cut_oracle(std::uint64_t p) {
  std::set<std::vector<std::uint64_t>> out;
  for (std::uint64_t u = 0; u < p; ++u)
    for (std::uint64_t v = 0; v < p; ++v)
      for (std::uint64_t w = 0; w < p; ++w) {
        if (u == 0 && v == 0 && w == 0) continue;
        std::vector<Fp> t = {Fp(u * u, p), Fp(2 * u * v, p), Fp(2 * u * w, p),
                             Fp(v * v, p), Fp(2 * v * w, p), Fp(w * w, p)};
        std::size_t last = 0;
        for (std::size_t i = 0; i < t.size(); ++i)
          if (t[i].v != 0) last = i;
        Fp scale = t[0].v != 0 ? t[0].inv() : t[last].inv();
        std::vector<std::uint64_t> key;
        for (const auto& x : t) key.push_back((x * scale).v);
        out.insert(key);
      }
  return out;
}

// Shared artifacts re-verified by the final soundness gate.
std::optional<Ideal<Fp>> g_surface5;
std::vector<std::vector<Fp>> g_hits5;
std::vector<std::pair<ZMod, Quad>> g_recognized;
std::vector<Polynomial<Rat>> g_order3_ansatz;
std::vector<std::vector<Rat>> g_order3_rows;

void c1_square_roots(std::string& note) {
  const struct {
    unsigned long p, root;
  } cases[] = {{43, 6}, {37, 17}, {1327, 103}};
  for (const auto& c : cases) {
    ZMod s = sqrt_mod(mpz_class(-7), Modulus(mpz_class(c.p), 1));
    if (s.value() != c.root) {
      note = "sqrt(-7) mod " + std::to_string(c.p) + " = " +
             s.value().get_str() + ", want " + std::to_string(c.root);
      return;
    }
  }
}

void c2_reduction_consistency(std::string& note) {
  const ZMod s(6, Modulus(mpz_class(43), 1));
  const struct {
    Quad q;
    unsigned long want;
  } cases[] = {{Quad(-1, 1, 2, -7), 24},
               {Quad(272, -848, 7, -7), 0},
               {Quad(832, -192, 7, -7), 28}};
  for (const auto& c : cases) {
    ZMod r = reduce_quad(c.q, s);
    if (r.value() != c.want) {
      note = RingOps<Quad>::str(c.q) + " reduces to " + r.value().get_str() +
             ", want " + std::to_string(c.want);
      return;
    }
  }
}

void c3_cut_scan(std::string& note) {
  PolyFileData f = dataset("veronese.ideal");
  for (std::uint64_t p : {7ull, 5ull}) {
    Ideal<Fp> I = ideal_as_fp(f, p);
    InvariantCutPattern pat;
    for (std::size_t i = 0; i < I.nvars(); ++i) pat.orbits.push_back({i});
    SearchReport rep = search_nonreduced_cuts(I, pat);
    auto oracle = square_cut_oracle(p);
    if (oracle.size() != p * p + p + 1) {
      note = "oracle size " + std::to_string(oracle.size()) + " at p = " +
             std::to_string(p);
      return;
    }
    std::set<std::vector<std::uint64_t>> got;
    for (const auto& h : rep.hits) {
      std::vector<std::uint64_t> key;
      for (const auto& x : h) key.push_back(x.v);
      got.insert(key);
    }
    if (got != oracle || rep.hits.size() != oracle.size()) {
      note = "scan found " + std::to_string(rep.hits.size()) + " cuts at p = " +
             std::to_string(p) + ", oracle has " +
             std::to_string(oracle.size());
      return;
    }
    if (p == 5) {
      g_surface5 = I;
      g_hits5 = rep.hits;
    }
  }
}

void c4_round_trip(std::string& note) {
  std::mt19937_64 rng(20260814);
  const Modulus m(mpz_class(43), 40);
  const ZMod s = sqrt_mod(mpz_class(-7), m);
  const mpz_class cap = 1000000;
  const int total = 10000;
  int exact = 0, refused = 0;
  for (int i = 0; i < total; ++i) {
    long a = static_cast<long>(rng() % 2000001) - 1000000;
    long b = static_cast<long>(rng() % 2000001) - 1000000;
    long c = static_cast<long>(rng() % 1000000) + 1;
    Quad q(a, b, c, -7);
    if (q.c() % 43 == 0) {
      --i;  // not reducible mod 43 at all; resample
      continue;
    }
    ZMod r = reduce_quad(q, s);
    std::optional<Quad> back;
    try {
      back = recognize_quad(r, s, cap);
    } catch (const PrecisionTooLow&) {
      ++refused;
      continue;
    }
    if (back && *back == q) {
      ++exact;
      if (g_recognized.size() < 500) g_recognized.push_back({r, *back});
    } else {
      note = "wrong recovery of " + RingOps<Quad>::str(q) + " -> " +
             (back ? RingOps<Quad>::str(*back) : std::string("none"));
      return;
    }
  }
  if (exact * 1000 < total * 999)
    note = "only " + std::to_string(exact) + "/" + std::to_string(total) +
           " exact recoveries (" + std::to_string(refused) + " refusals)";
}

void c5_hilbert_oracles(std::string& note) {
  auto check = [&](const std::string& name, std::uint64_t p,
                   const std::vector<Rat>& want) {
    HilbertData hd = hilbert_polynomial(ideal_as_fp(dataset(name), p));
    if (hd.fitted != want) {
      std::string got;
      for (const auto& c : hd.fitted) got += RingOps<Rat>::str(c) + " ";
      note = name + " fitted to " + got;
      return false;
    }
    return true;
  };
  if (!check("twisted_cubic.ideal", 101, {Rat(1), Rat(3)})) return;
  if (!check("veronese.ideal", 7, {Rat(1), Rat(3), Rat(2)})) return;
  if (!check("planted_threepoints.ideal", 37, {Rat(3)})) return;
}

void c6_guided_solve(std::string& note) {
  unsigned k = 200;
  if (const char* env = std::getenv("TVX_ACCEPT_K"))
    k = static_cast<unsigned>(std::strtoul(env, nullptr, 10));
  Ideal<Quad> J = ideal_as_quad(dataset("planted_threepoints.ideal"));
  SolveOptions opt;
  opt.seed = 20260814;
  SolveOutcome out = hilbert_guided_solve(J, 37, k, mpz_class(1000), opt);
  if (out.hilbert_constant != 3 || out.solutions.size() != 3 ||
      !out.failures.empty()) {
    note = "constant " + std::to_string(out.hilbert_constant) + ", " +
           std::to_string(out.solutions.size()) + " solutions, " +
           std::to_string(out.failures.size()) + " failures at 37^" +
           std::to_string(k);
    return;
  }
  std::set<std::string> got, want;
  for (const auto& sol : out.solutions) {
    std::string s;
    for (const auto& q : sol) s += RingOps<Quad>::str(q) + ";";
    got.insert(s);
    // independent symbolic re-verification against every generator
    for (const auto& g : J.gens())
      if (!g.evaluate(sol).is_zero()) {
        note = "solution fails a generator symbolically";
        return;
      }
  }
  const std::vector<std::vector<Quad>> planted = {
      {kAlpha, kOne, kOne}, {kOne, kAlpha, kOne}, {kOne, kOne, kOne}};
  for (const auto& sol : planted) {
    std::string s;
    for (const auto& q : sol) s += RingOps<Quad>::str(q) + ";";
    want.insert(s);
  }
  if (got != want) note = "solution set differs from the planted points";
}

void c7_jet_conditions(std::string& note) {
  auto amb = make_ambient("x", 4);
  Ideal<Rat> I(amb, Rat(0));
  I.add(parse_poly("x0*x3 - x1*x2", amb, Rat(0)));
  ProjPoint<Rat> pt =
      ProjPoint<Rat>::normalized({Rat(0), Rat(0), Rat(0), Rat(1)});

  std::vector<Polynomial<Rat>> ansatz;
  for (const auto& m : monomials_of_degree(4, 3)) {
    Polynomial<Rat> f(amb, Rat(0));
    f.add_term(m, Rat(1));
    ansatz.push_back(f);
  }
  auto A = vanish_to_order_conditions(ansatz, jets_at_point(I, pt, 3), 3);

  // Oracle: the surface is globally the image of (s, t) -> (st, s, t, 1);
  // composing each ansatz member and reading the coefficients of every
  // parameter monomial of degree < 3 gives the same conditions.
  auto pamb = make_ambient(std::vector<std::string>{"s", "t"});
  std::vector<Polynomial<Rat>> images;
  images.push_back(parse_poly("s*t", pamb, Rat(0)));
  images.push_back(parse_poly("s", pamb, Rat(0)));
  images.push_back(parse_poly("t", pamb, Rat(0)));
  images.push_back(Polynomial<Rat>::constant(pamb, Rat(1)));
  std::vector<Monomial> low;
  for (unsigned dd = 0; dd < 3; ++dd)
    for (const auto& m : monomials_of_degree(2, dd)) low.push_back(m);
  std::vector<std::vector<Rat>> B(low.size(),
                                  std::vector<Rat>(ansatz.size(), Rat(0)));
  for (std::size_t j = 0; j < ansatz.size(); ++j) {
    Polynomial<Rat> g = ansatz[j].compose(images);
    for (std::size_t r = 0; r < low.size(); ++r) {
      auto it = g.terms().find(low[r]);
      if (it != g.terms().end()) B[r][j] = it->second;
    }
  }

  std::size_t ra = generic_rank(A, Rat(0));
  std::size_t rb = generic_rank(B, Rat(0));
  auto stacked = A;
  stacked.insert(stacked.end(), B.begin(), B.end());
  std::size_t rs = generic_rank(stacked, Rat(0));
  if (ra != rb || rb != rs) {
    note = "condition ranks " + std::to_string(ra) + "/" + std::to_string(rb) +
           "/stacked " + std::to_string(rs);
    return;
  }
  g_order3_ansatz = ansatz;
  g_order3_rows = A;
}

void c8_equivariance(std::string& note) {
  std::mt19937_64 rng(97);
  const std::vector<Quad> pool = {kOne,
                                  Quad(2, 0, 1, -7),
                                  Quad(1, 0, 2, -7),
                                  kAlpha,
                                  Quad(3, -1, 1, -7),
                                  Quad(-2, 0, 1, -7),
                                  Quad(0, 1, 1, -7)};
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t nv = 2 + rng() % 7;
    auto amb = make_ambient("z", nv);
    CyclicAction<Quad> act;
    act.n = 1 + static_cast<unsigned>(rng() % 7);
    for (std::size_t i = 0; i < nv; ++i)
      act.weights.push_back(static_cast<unsigned>(rng() % act.n));
    std::vector<std::size_t> orbit_of(nv);
    std::vector<std::vector<std::size_t>> orbits;
    if (rng() % 2 == 0) {
      // random permutation; weights must be constant on its cycles
      std::vector<std::size_t> perm(nv);
      for (std::size_t i = 0; i < nv; ++i) perm[i] = i;
      std::shuffle(perm.begin(), perm.end(), rng);
      act.perm = perm;
      std::vector<bool> seen(nv, false);
      std::size_t order = 1;
      for (std::size_t i = 0; i < nv; ++i) {
        if (seen[i]) continue;
        std::vector<std::size_t> cyc;
        std::size_t j = i;
        while (!seen[j]) {
          seen[j] = true;
          cyc.push_back(j);
          j = perm[j];
        }
        for (auto v : cyc) {
          act.weights[v] = act.weights[i];
          orbit_of[v] = orbits.size();
        }
        if (cyc.size() > 1) order = std::lcm(order, cyc.size());
        orbits.push_back(cyc);
      }
      act.perm_order = order;
    } else {
      for (std::size_t i = 0; i < nv; ++i) {
        orbit_of[i] = i;
        orbits.push_back({i});
      }
    }
    act.validate(nv, kOne);

    // planted per-orbit scalars and target coefficients
    std::vector<Quad> lambda, tau;
    bool any = false;
    for (std::size_t o = 0; o < orbits.size(); ++o) {
      lambda.push_back(pool[rng() % pool.size()]);
      if (rng() % 3 == 0) {
        tau.push_back(Quad(0, 0, 1, -7));
      } else {
        tau.push_back(pool[rng() % pool.size()]);
        any = true;
      }
    }
    if (!any) tau[0] = kOne;

    Polynomial<Quad> src(amb, kOne), tgt(amb, kOne);
    for (std::size_t i = 0; i < nv; ++i) {
      if (tau[orbit_of[i]].is_zero()) continue;
      Monomial m(nv);
      m.e[i] = 1;
      tgt.add_term(m, tau[orbit_of[i]]);
      src.add_term(m, lambda[orbit_of[i]] * tau[orbit_of[i]]);
    }

    auto M = equivariant_coordinate_change(act, src, tgt);

    // (a) commutes with the weight diagonal: mixing only within a class
    for (std::size_t i = 0; i < nv; ++i)
      for (std::size_t j = 0; j < nv; ++j)
        if (!M[i][j].is_zero() &&
            act.weights[i] % act.n != act.weights[j] % act.n) {
          note = "trial " + std::to_string(trial) + ": mixes weight classes";
          return;
        }
    // (b) commutes with the permutation generator exactly
    if (act.has_perm()) {
      std::vector<std::size_t> ip(nv);
      for (std::size_t i = 0; i < nv; ++i) ip[act.perm[i]] = i;
      for (std::size_t r = 0; r < nv; ++r)
        for (std::size_t col = 0; col < nv; ++col)
          if (!(M[r][act.perm[col]] == M[ip[r]][col])) {
            note = "trial " + std::to_string(trial) +
                   ": does not commute with the permutation";
            return;
          }
    }
    // (c) moves the source onto a scalar multiple of the target
    auto inv = generic_inverse(M, kOne);
    if (!inv) {
      note = "trial " + std::to_string(trial) + ": singular matrix";
      return;
    }
    std::vector<Polynomial<Quad>> imgs;
    for (std::size_t i = 0; i < nv; ++i) {
      Polynomial<Quad> xi(amb, kOne);
      for (std::size_t j = 0; j < nv; ++j) {
        if ((*inv)[i][j].is_zero()) continue;
        Monomial m(nv);
        m.e[j] = 1;
        xi.add_term(m, (*inv)[i][j]);
      }
      imgs.push_back(xi);
    }
    Polynomial<Quad> moved = src.compose(imgs);
    auto lead = tgt.terms().begin();
    auto it = moved.terms().find(lead->first);
    if (it == moved.terms().end()) {
      note = "trial " + std::to_string(trial) + ": support mismatch";
      return;
    }
    Quad scl = it->second * lead->second.inv();
    Polynomial<Quad> scaled(amb, kOne);
    for (const auto& [m, cf] : tgt.terms()) scaled.add_term(m, cf * scl);
    if (scl.is_zero() || !(moved - scaled).is_zero()) {
      note = "trial " + std::to_string(trial) +
             ": image is not a scalar multiple of the target";
      return;
    }
  }
}

void c9_section_dims(std::string& note) {
  for (unsigned long n = 4; n <= 12; ++n)
    if (kFppSectionDims[n - 4] != fpp_section_dim(n)) {
      note = "n = " + std::to_string(n);
      return;
    }
}

void c10_soundness_gate(std::string& note) {
  std::size_t checked = 0, bad = 0;

  // search hits: independent nonreducedness decision + oracle membership
  if (!g_surface5 || g_hits5.empty()) {
    note = "missing scan artifacts (criterion 3 must run first)";
    return;
  }
  auto oracle = square_cut_oracle(5);
  for (const auto& h : g_hits5) {
    ++checked;
    Polynomial<Fp> cut(g_surface5->ambient(), g_surface5->exemplar());
    for (std::size_t i = 0; i < h.size(); ++i) {
      if (h[i].v == 0) continue;
      Monomial m(h.size());
      m.e[i] = 1;
      cut.add_term(m, h[i]);
    }
    std::vector<std::uint64_t> key;
    for (const auto& x : h) key.push_back(x.v);
    if (!is_nonreduced_curve(*g_surface5, cut) || oracle.count(key) == 0)
      ++bad;
  }

  // recognized numbers: reduce back and compare residues
  if (g_recognized.empty()) {
    note = "missing recognition artifacts (criterion 4 must run first)";
    return;
  }
  for (const auto& [residue, value] : g_recognized) {
    ++checked;
    ZMod s = sqrt_mod(mpz_class(-7), residue.modulus());
    if (!(reduce_quad(value, s) == residue)) ++bad;
  }

  // a lifted point: every generator vanishes at the lifted precision
  {
    Ideal<Quad> J = ideal_as_quad(dataset("planted_threepoints.ideal"));
    Ideal<Fp> Jp = ideal_as_fp(dataset("planted_threepoints.ideal"), 43);
    ProjPoint<Fp> pt =
        ProjPoint<Fp>::normalized({Fp(24, 43), Fp(1, 43), Fp(1, 43)});
    if (!satisfies(Jp, pt)) ++bad;
    ProjPoint<ZMod> L = lift_point(J, pt, 6, 12);
    const Modulus mk(mpz_class(43), 12);
    for (const auto& g : J.gens()) {
      ++checked;
      if (!reduce_poly(g, mk, 6).evaluate(L.coords).is_zero()) ++bad;
    }
  }

  // vanishing forms: order-1 families evaluate to zero at their points,
  // and the order-3 kernel really has no low-order terms on the surface
  {
    auto amb = make_ambient("x", 3);
    std::vector<ProjPoint<Quad>> pts = {
        ProjPoint<Quad>::normalized({kAlpha, kOne, kOne}),
        ProjPoint<Quad>::normalized({kOne, kAlpha, kOne}),
        ProjPoint<Quad>::normalized({kOne, kOne, kOne})};
    auto fams = vanishing_forms(pts, amb, kOne, 2);
    for (const auto& g : fams)
      for (const auto& pt : pts) {
        ++checked;
        if (!g.evaluate(pt.coords).is_zero()) ++bad;
      }
    if (fams.size() != 3) ++bad;
  }
  if (g_order3_ansatz.empty()) {
    note = "missing jet artifacts (criterion 7 must run first)";
    return;
  }
  {
    auto kernel = generic_nullspace(g_order3_rows, Rat(0));
    auto pamb = make_ambient(std::vector<std::string>{"s", "t"});
    std::vector<Polynomial<Rat>> images;
    images.push_back(parse_poly("s*t", pamb, Rat(0)));
    images.push_back(parse_poly("s", pamb, Rat(0)));
    images.push_back(parse_poly("t", pamb, Rat(0)));
    images.push_back(Polynomial<Rat>::constant(pamb, Rat(1)));
    for (const auto& v : kernel) {
      Polynomial<Rat> f(g_order3_ansatz[0].ambient(), Rat(0));
      for (std::size_t j = 0; j < v.size(); ++j) {
        if (v[j].is_zero()) continue;
        for (const auto& [m, cf] : g_order3_ansatz[j].terms())
          f.add_term(m, cf * v[j]);
      }
      Polynomial<Rat> g = f.compose(images);
      ++checked;
      for (const auto& [m, cf] : g.terms())
        if (m.degree() < 3 && !cf.is_zero()) ++bad;
    }
  }

  if (bad != 0)
    note = std::to_string(bad) + "/" + std::to_string(checked) +
           " artifacts failed re-verification";
}

}  // namespace

int main() {
  std::cout << "acceptance suite (exact tolerances, limits pinned per line)\n";
  run(1, "square roots of -7 mod 43, 37, 1327 under the canonical-root rule",
      1.0, c1_square_roots);
  run(2, "reduction of the published lifted coefficients at p = 43, s = 6",
      1.0, c2_reduction_consistency);
  run(3, "exhaustive cut scan matches the rank-one oracle (57 at 7, 31 at 5)",
      60.0, c3_cut_scan);
  run(4, "reduce-recognize round trip, 10^4 random elements at 43^40", 120.0,
      c4_round_trip);
  run(5, "Hilbert polynomials: 3n+1, 2n^2+3n+1, constant 3", 30.0,
      c5_hilbert_oracles);
  run(6, "guided solve recovers the planted three points at 37^K", 600.0,
      c6_guided_solve);
  run(7, "order-3 jet conditions equal the power-series oracle", 30.0,
      c7_jet_conditions);
  run(8, "10^3 random equivariant changes commute and map source to target",
      30.0, c8_equivariance);
  run(9, "section dimension table equals its closed form", 1.0,
      c9_section_dims);
  run(10, "soundness gate: every emitted artifact re-verifies", 300.0,
      c10_soundness_gate);
  std::cout << (10 - g_failures) << "/10 criteria passed\n";
  return g_failures;
}
