// Copyright (c) 2026 the tvx authors
// SPDX-License-Identifier: Apache-2.0
#include "tvx/lift.hpp"

#include <cstdio>

#include "json.hpp"

namespace tvx {

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// ---------------------------------------------------------------------------
// LiftState layout.

std::size_t LiftState::nfree() const {
  std::size_t n = 0;
  for (auto& pt : points) n += pt.coords.size() - 1;
  for (auto& per_point : tangents)
    for (auto& v : per_point) n += v.size();
  return n + params.size();
}

std::vector<ZMod> LiftState::flatten() const { return flatten_at(modulus); }

std::vector<ZMod> LiftState::flatten_at(const Modulus& m) const {
  std::vector<ZMod> out;
  out.reserve(nfree());
  for (auto& pt : points)
    for (std::size_t j = 0; j < pt.coords.size(); ++j)
      if (j != pt.pivot) out.emplace_back(pt.coords[j].value(), m);
  for (auto& per_point : tangents)
    for (auto& v : per_point)
      for (auto& x : v) out.emplace_back(x.value(), m);
  for (auto& x : params) out.emplace_back(x.value(), m);
  return out;
}

void LiftState::unflatten(const std::vector<ZMod>& vals, const Modulus& m) {
  if (vals.size() != nfree())
    throw DimensionMismatch("LiftState: flattened length mismatch");
  std::size_t idx = 0;
  modulus = m;
  const ZMod one(1, m);
  for (auto& pt : points)
    for (std::size_t j = 0; j < pt.coords.size(); ++j)
      pt.coords[j] = (j == pt.pivot) ? one : vals[idx++];
  for (auto& per_point : tangents)
    for (auto& v : per_point)
      for (auto& x : v) x = vals[idx++];
  for (auto& x : params) x = vals[idx++];
}

std::size_t lift_var_point(const LiftState& st, std::size_t i, std::size_t j) {
  if (i >= st.points.size() || j == st.points[i].pivot ||
      j >= st.points[i].coords.size())
    throw InputError("lift_var_point: no such free coordinate");
  std::size_t idx = 0;
  for (std::size_t a = 0; a < i; ++a) idx += st.points[a].coords.size() - 1;
  for (std::size_t b = 0; b < j; ++b)
    if (b != st.points[i].pivot) ++idx;
  return idx;
}

std::size_t lift_var_tangent(const LiftState& st, std::size_t i, std::size_t t,
                             std::size_t j) {
  if (i >= st.tangents.size() || t >= st.tangents[i].size() ||
      j >= st.tangents[i][t].size())
    throw InputError("lift_var_tangent: no such entry");
  std::size_t idx = 0;
  for (auto& pt : st.points) idx += pt.coords.size() - 1;
  for (std::size_t a = 0; a < i; ++a)
    for (auto& v : st.tangents[a]) idx += v.size();
  for (std::size_t b = 0; b < t; ++b) idx += st.tangents[i][b].size();
  return idx + j;
}

std::size_t lift_var_param(const LiftState& st, std::size_t j) {
  if (j >= st.params.size()) throw InputError("lift_var_param: no such param");
  std::size_t idx = 0;
  for (auto& pt : st.points) idx += pt.coords.size() - 1;
  for (auto& per_point : st.tangents)
    for (auto& v : per_point) idx += v.size();
  return idx + j;
}

AmbientPtr make_lift_ambient(const LiftState& st) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < st.points.size(); ++i)
    for (std::size_t j = 0; j < st.points[i].coords.size(); ++j)
      if (j != st.points[i].pivot)
        names.push_back("p" + std::to_string(i) + "_" + std::to_string(j));
  for (std::size_t i = 0; i < st.tangents.size(); ++i)
    for (std::size_t t = 0; t < st.tangents[i].size(); ++t)
      for (std::size_t j = 0; j < st.tangents[i][t].size(); ++j)
        names.push_back("t" + std::to_string(i) + "_" + std::to_string(t) +
                        "_" + std::to_string(j));
  for (std::size_t j = 0; j < st.params.size(); ++j)
    names.push_back("c" + std::to_string(j));
  return make_ambient(std::move(names));
}

LiftState lift_state_from_fp(
    std::uint64_t p, const std::vector<ProjPoint<Fp>>& points,
    const std::vector<std::vector<std::vector<Fp>>>& tangents,
    const std::vector<Fp>& params) {
  LiftState st;
  st.modulus = Modulus(mpz_class(static_cast<unsigned long>(p)), 1);
  for (auto& pt : points) {
    ProjPoint<ZMod> zp;
    zp.pivot = pt.pivot;
    for (auto& c : pt.coords)
      zp.coords.emplace_back(mpz_class(static_cast<unsigned long>(c.v)),
                             st.modulus);
    st.points.push_back(std::move(zp));
  }
  if (!tangents.empty() && tangents.size() != points.size())
    throw DimensionMismatch("lift_state_from_fp: one tangent list per point");
  for (auto& per_point : tangents) {
    std::vector<std::vector<ZMod>> lst;
    for (auto& v : per_point) {
      std::vector<ZMod> zv;
      for (auto& c : v)
        zv.emplace_back(mpz_class(static_cast<unsigned long>(c.v)),
                        st.modulus);
      lst.push_back(std::move(zv));
    }
    st.tangents.push_back(std::move(lst));
  }
  if (tangents.empty()) st.tangents.resize(points.size());
  for (auto& c : params)
    st.params.emplace_back(mpz_class(static_cast<unsigned long>(c.v)),
                           st.modulus);
  return st;
}

// ---------------------------------------------------------------------------
// JSON.

std::string LiftState::to_json() const {
  nlohmann::json j;
  j["p"] = modulus.p().get_str();
  j["k"] = modulus.k();
  j["modulus"] = modulus.pk().get_str();
  j["points"] = nlohmann::json::array();
  for (auto& pt : points) {
    nlohmann::json jp;
    jp["pivot"] = pt.pivot;
    jp["coords"] = nlohmann::json::array();
    for (auto& c : pt.coords) jp["coords"].push_back(c.value().get_str());
    j["points"].push_back(std::move(jp));
  }
  j["tangents"] = nlohmann::json::array();
  for (auto& per_point : tangents) {
    nlohmann::json jt = nlohmann::json::array();
    for (auto& v : per_point) {
      nlohmann::json jv = nlohmann::json::array();
      for (auto& c : v) jv.push_back(c.value().get_str());
      jt.push_back(std::move(jv));
    }
    j["tangents"].push_back(std::move(jt));
  }
  j["params"] = nlohmann::json::array();
  for (auto& c : params) j["params"].push_back(c.value().get_str());
  j["constraint_hashes"] = nlohmann::json::array();
  for (auto h : constraint_hashes) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(h));
    j["constraint_hashes"].push_back(std::string(buf));
  }
  return j.dump();
}

LiftState LiftState::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("LiftState: bad json: ") + e.what());
  }
  try {
    LiftState st;
    st.modulus =
        Modulus(mpz_class(j.at("p").get<std::string>()), j.at("k").get<unsigned>());
    for (auto& jp : j.at("points")) {
      ProjPoint<ZMod> pt;
      pt.pivot = jp.at("pivot").get<std::size_t>();
      for (auto& c : jp.at("coords"))
        pt.coords.emplace_back(mpz_class(c.get<std::string>()), st.modulus);
      st.points.push_back(std::move(pt));
    }
    for (auto& jt : j.at("tangents")) {
      std::vector<std::vector<ZMod>> per_point;
      for (auto& jv : jt) {
        std::vector<ZMod> v;
        for (auto& c : jv)
          v.emplace_back(mpz_class(c.get<std::string>()), st.modulus);
        per_point.push_back(std::move(v));
      }
      st.tangents.push_back(std::move(per_point));
    }
    for (auto& c : j.at("params"))
      st.params.emplace_back(mpz_class(c.get<std::string>()), st.modulus);
    if (j.contains("constraint_hashes"))
      for (auto& h : j.at("constraint_hashes"))
        st.constraint_hashes.push_back(
            std::stoull(h.get<std::string>(), nullptr, 16));
    return st;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("LiftState: bad fields: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Model reduction.

Polynomial<ZMod> reduce_poly(const Polynomial<Rat>& f, const Modulus& m) {
  Polynomial<ZMod> r(f.ambient(), ZMod(0, m));
  for (auto& [mono, c] : f.terms()) r.add_term(mono, reduce_rat(c, m));
  return r;
}

Polynomial<ZMod> reduce_poly(const Polynomial<Quad>& f, const Modulus& m,
                             std::uint64_t s_mod_p) {
  const long d = RingOps<Quad>::desc(f.exemplar()).d;
  Modulus base(m.p(), 1);
  ZMod s = lift_root(mpz_class(d), ZMod(mpz_class(s_mod_p), base), m);
  Polynomial<ZMod> r(f.ambient(), ZMod(0, m));
  for (auto& [mono, c] : f.terms()) r.add_term(mono, reduce_quad(c, s));
  return r;
}

Polynomial<Fp> zmod_poly_to_fp(const Polynomial<ZMod>& f) {
  const mpz_class& p = f.exemplar().modulus().p();
  if (f.exemplar().modulus().k() != 1 || !p.fits_ulong_p())
    throw InputError("zmod_poly_to_fp: needs k = 1 and a word-sized p");
  const std::uint64_t pu = p.get_ui();
  Polynomial<Fp> r(f.ambient(), Fp(0, pu));
  for (auto& [mono, c] : f.terms())
    r.add_term(mono, Fp(c.value().get_ui(), pu));
  return r;
}

// ---------------------------------------------------------------------------
// The core tower walk, shared by both coefficient models.

namespace {

struct ReducedSystem {
  std::vector<Polynomial<ZMod>> cons;
  std::vector<std::vector<Polynomial<ZMod>>> jac;  // [constraint][free var]
};

using SystemAt = std::function<ReducedSystem(const Modulus&)>;

void verify_state(const LiftState& st, const std::vector<Polynomial<ZMod>>& cons,
                  const Modulus& m, const char* who) {
  auto vals = st.flatten_at(m);
  for (auto& c : cons)
    if (!c.evaluate(vals).is_zero())
      throw Inconsistent(std::string(who) +
                         ": constraint does not vanish at precision " +
                         std::to_string(m.k()));
}

LiftOutcome lift_constrained_core(LiftState st, const SystemAt& sys_at,
                                  unsigned target_k, LiftSchedule sched) {
  const mpz_class p = st.modulus.p();
  unsigned k = st.modulus.k();
  if (target_k < k)
    throw InputError("lift_constrained: target precision below the state");
  const std::size_t nf = st.nfree();

  {
    auto sys = sys_at(st.modulus);
    auto vals = st.flatten();
    for (auto& c : sys.cons)
      if (!c.evaluate(vals).is_zero())
        throw InputError("lift_constrained: state violates a constraint at "
                         "its own precision");
  }

  LiftOutcome out;
  bool underdet = false;
  while (k < target_k) {
    unsigned t = (sched == LiftSchedule::kPlusOne)
                     ? 1u
                     : std::min(k, target_k - k);
    for (;;) {
      Modulus mt(p, t), mkt(p, k + t);
      auto sys_kt = sys_at(mkt);
      auto vals_kt = st.flatten_at(mkt);
      mpz_class pk;
      mpz_pow_ui(pk.get_mpz_t(), p.get_mpz_t(), k);

      std::vector<ZMod> rhs;
      rhs.reserve(sys_kt.cons.size());
      for (auto& c : sys_kt.cons) {
        mpz_class r = c.evaluate(vals_kt).value();
        if (r % pk != 0)
          throw Inconsistent("lift_constrained: residual is not divisible by "
                             "the current modulus");
        rhs.emplace_back(-mpz_class(r / pk), mt);
      }

      auto sys_t = sys_at(mt);
      auto vals_t = st.flatten_at(mt);
      std::vector<std::vector<ZMod>> J(
          sys_t.cons.size(), std::vector<ZMod>(nf, ZMod(0, mt)));
      for (std::size_t i = 0; i < sys_t.cons.size(); ++i)
        for (std::size_t j = 0; j < nf; ++j)
          J[i][j] = sys_t.jac[i][j].evaluate(vals_t);

      if (sys_t.cons.empty()) {
        // No constraints: the correction is zero but every direction is free.
        if (nf > 0) underdet = true;
        st.unflatten(st.flatten_at(mkt), mkt);
        k += t;
        break;
      }

      std::optional<std::vector<ZMod>> e;
      try {
        e = zmod_solve(J, rhs, mt);
      } catch (const NonUnit&) {
        if (t > 1) {
          t = 1;  // quadratic step stalled on a non-unit pivot; go linear
          continue;
        }
        throw;
      }
      if (!e)
        throw Inconsistent(
            "lift_constrained: correction system has no solution mod p^" +
            std::to_string(t));

      // Rank mod p decides whether the correction had free directions.
      {
        Modulus m1(p, 1);
        std::vector<std::vector<ZMod>> J1(
            J.size(), std::vector<ZMod>(nf, ZMod(0, m1)));
        for (std::size_t i = 0; i < J.size(); ++i)
          for (std::size_t j = 0; j < nf; ++j)
            J1[i][j] = J[i][j].reduced_to(m1);
        if (generic_rank(J1, ZMod(0, m1)) < nf) underdet = true;
      }

      auto vals_new = st.flatten_at(mkt);
      for (std::size_t j = 0; j < nf; ++j)
        vals_new[j] = vals_new[j] + ZMod(pk * (*e)[j].value(), mkt);
      st.unflatten(vals_new, mkt);
      verify_state(st, sys_kt.cons, mkt, "lift_constrained");
      k += t;
      break;
    }
  }
  out.state = std::move(st);
  out.underdetermined = underdet;
  return out;
}

template <class K>
std::vector<std::vector<Polynomial<K>>> all_partials(
    const std::vector<Polynomial<K>>& cons, std::size_t nf) {
  std::vector<std::vector<Polynomial<K>>> out;
  for (auto& c : cons) {
    std::vector<Polynomial<K>> row;
    for (std::size_t j = 0; j < nf; ++j) row.push_back(c.partial(j));
    out.push_back(std::move(row));
  }
  return out;
}

template <class K, class Reduce>
LiftOutcome lift_with_model(LiftState st,
                            const std::vector<Polynomial<K>>& constraints,
                            unsigned target_k, LiftSchedule sched,
                            const Reduce& reduce) {
  const std::size_t nf = st.nfree();
  for (auto& c : constraints)
    if (c.nvars() != nf)
      throw DimensionMismatch(
          "lift_constrained: constraints must live over the flattened "
          "lift variables");
  std::vector<std::uint64_t> hashes;
  for (auto& c : constraints) hashes.push_back(fnv1a64(c.to_string()));
  if (st.constraint_hashes.empty()) {
    st.constraint_hashes = hashes;
  } else if (st.constraint_hashes != hashes) {
    throw InputError("lift_constrained: constraint hashes do not match the "
                     "state (resuming with a different system)");
  }
  auto partials = all_partials(constraints, nf);
  SystemAt sys_at = [&](const Modulus& m) {
    ReducedSystem sys;
    for (auto& c : constraints) sys.cons.push_back(reduce(c, m));
    for (auto& row : partials) {
      std::vector<Polynomial<ZMod>> rrow;
      for (auto& f : row) rrow.push_back(reduce(f, m));
      sys.jac.push_back(std::move(rrow));
    }
    return sys;
  };
  return lift_constrained_core(std::move(st), sys_at, target_k, sched);
}

}  // namespace

LiftOutcome lift_constrained(LiftState st,
                             const std::vector<Polynomial<Rat>>& constraints,
                             unsigned target_k, LiftSchedule sched) {
  return lift_with_model(
      std::move(st), constraints, target_k, sched,
      [](const Polynomial<Rat>& f, const Modulus& m) {
        return reduce_poly(f, m);
      });
}

LiftOutcome lift_constrained(LiftState st,
                             const std::vector<Polynomial<Quad>>& constraints,
                             std::uint64_t s_mod_p, unsigned target_k,
                             LiftSchedule sched) {
  return lift_with_model(
      std::move(st), constraints, target_k, sched,
      [s_mod_p](const Polynomial<Quad>& f, const Modulus& m) {
        return reduce_poly(f, m, s_mod_p);
      });
}

// ---------------------------------------------------------------------------
// Point lifting: a one-point, no-tangent, no-param constrained lift behind a
// smoothness gate on the mod-p reduction.

namespace {

template <class K, class Reduce>
ProjPoint<ZMod> lift_point_impl(const Ideal<K>& I, const ProjPoint<Fp>& pt,
                                unsigned target_k, LiftSchedule sched,
                                const Reduce& reduce) {
  I.ensure_homogeneous();
  if (pt.coords.empty() || pt.coords.size() != I.nvars())
    throw DimensionMismatch("lift_point: point arity mismatch");
  const std::uint64_t p = pt.coords[0].p;
  Modulus m1(mpz_class(static_cast<unsigned long>(p)), 1);

  // Smoothness gate: chart Jacobian rank mod p must equal the codimension.
  std::vector<Polynomial<Fp>> gens_p;
  for (auto& g : I.gens()) gens_p.push_back(zmod_poly_to_fp(reduce(g, m1)));
  Ideal<Fp> Ip(I.ambient(), Fp(0, p), gens_p);
  if (!satisfies(Ip, pt))
    throw InputError("lift_point: point is not on the reduction");
  int dim = hilbert_polynomial(Ip).dimension();
  const std::size_t nv = I.nvars();
  std::size_t expected =
      (dim >= 0) ? (nv - 1 - static_cast<std::size_t>(dim)) : nv - 1;
  std::vector<std::vector<Fp>> jac;
  for (auto& g : gens_p) {
    std::vector<Fp> row;
    for (std::size_t j = 0; j < nv; ++j)
      if (j != pt.pivot) row.push_back(g.partial(j).evaluate(pt.coords));
    jac.push_back(std::move(row));
  }
  std::size_t rank = jac.empty() ? 0 : generic_rank(jac, Fp(0, p));
  if (rank != expected)
    throw SingularJacobian("lift_point: chart Jacobian rank " +
                           std::to_string(rank) + " at the point, expected " +
                           std::to_string(expected));

  LiftState st = lift_state_from_fp(p, {pt});
  auto lamb = make_lift_ambient(st);
  std::vector<Polynomial<K>> cons =
      point_membership_constraints(I.gens(), st, lamb, 0);
  auto out = lift_with_model(std::move(st), cons, target_k, sched, reduce);
  return out.state.points[0];
}

}  // namespace

ProjPoint<ZMod> lift_point(const Ideal<Rat>& I, const ProjPoint<Fp>& pt,
                           unsigned target_k, LiftSchedule sched) {
  return lift_point_impl(I, pt, target_k, sched,
                         [](const Polynomial<Rat>& f, const Modulus& m) {
                           return reduce_poly(f, m);
                         });
}

ProjPoint<ZMod> lift_point(const Ideal<Quad>& I, const ProjPoint<Fp>& pt,
                           std::uint64_t s_mod_p, unsigned target_k,
                           LiftSchedule sched) {
  return lift_point_impl(I, pt, target_k, sched,
                         [s_mod_p](const Polynomial<Quad>& f, const Modulus& m) {
                           return reduce_poly(f, m, s_mod_p);
                         });
}

}  // namespace tvx
