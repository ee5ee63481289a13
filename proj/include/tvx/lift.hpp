// Copyright (c) 2026 the tvx authors
// SPDX-License-Identifier: Apache-2.0
#ifndef TVX_LIFT_HPP
#define TVX_LIFT_HPP

// Hensel/Newton lifting of points, tangent frames, and parameter vectors
// from mod p to mod p^k. A LiftState carries the whole coupled configuration;
// corrections at precision p^k are multiples of p^k, so every reduction down
// the tower reproduces the earlier state exactly.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tvx/errors.hpp"
#include "tvx/linalg.hpp"
#include "tvx/poly.hpp"
#include "tvx/ring.hpp"
#include "tvx/vgeom.hpp"

namespace tvx {

enum class LiftSchedule { kDouble, kPlusOne };

inline constexpr unsigned kDefaultLiftPrecision = 200;  // p^200 tower top

std::uint64_t fnv1a64(const std::string& s);

// ---------------------------------------------------------------------------
// LiftState: points (pivot coordinate pinned to 1 for the whole tower),
// per-point tangent vectors, and a parameter vector, all over Z/p^k.

struct LiftState {
  Modulus modulus;
  std::vector<ProjPoint<ZMod>> points;
  // tangents[i] is the list of tangent vectors attached to points[i].
  std::vector<std::vector<std::vector<ZMod>>> tangents;
  std::vector<ZMod> params;
  // FNV-1a fingerprints of the bound constraint system (resumability).
  std::vector<std::uint64_t> constraint_hashes;

  // Free variables: non-pivot point coordinates, tangent entries, params.
  std::size_t nfree() const;
  std::vector<ZMod> flatten() const;
  // Same integer representatives re-read at another precision of the same p.
  std::vector<ZMod> flatten_at(const Modulus& m) const;
  void unflatten(const std::vector<ZMod>& vals, const Modulus& m);

  std::string to_json() const;
  static LiftState from_json(const std::string& text);
};

// Variable indexing of the flattened layout.
std::size_t lift_var_point(const LiftState& st, std::size_t i, std::size_t j);
std::size_t lift_var_tangent(const LiftState& st, std::size_t i, std::size_t t,
                             std::size_t j);
std::size_t lift_var_param(const LiftState& st, std::size_t j);

// Ambient named after the flattened layout: p{i}_{j}, t{i}_{t}_{j}, c{j}.
AmbientPtr make_lift_ambient(const LiftState& st);

// Convenience: assemble a k = 1 state from mod-p data.
LiftState lift_state_from_fp(
    std::uint64_t p, const std::vector<ProjPoint<Fp>>& points,
    const std::vector<std::vector<std::vector<Fp>>>& tangents = {},
    const std::vector<Fp>& params = {});

// ---------------------------------------------------------------------------
// Reduction of integer / quadratic-integer models into Z/p^k.

Polynomial<ZMod> reduce_poly(const Polynomial<Rat>& f, const Modulus& m);
// s_mod_p is the chosen residue of sqrt(d) mod p; it is lifted along the
// tower internally so the reduction stays a ring homomorphism at every k.
Polynomial<ZMod> reduce_poly(const Polynomial<Quad>& f, const Modulus& m,
                             std::uint64_t s_mod_p);

Polynomial<Fp> zmod_poly_to_fp(const Polynomial<ZMod>& f);

// ---------------------------------------------------------------------------
// Constraint builders over the lift ambient.

template <class K>
std::vector<Polynomial<K>> point_images(const LiftState& st,
                                        const AmbientPtr& lamb, std::size_t i,
                                        const K& like) {
  std::vector<Polynomial<K>> imgs;
  const std::size_t nv = st.points.at(i).coords.size();
  for (std::size_t j = 0; j < nv; ++j) {
    if (j == st.points[i].pivot)
      imgs.push_back(Polynomial<K>::constant(lamb, RingOps<K>::one(like)));
    else
      imgs.push_back(
          Polynomial<K>::variable(lamb, lift_var_point(st, i, j), like));
  }
  return imgs;
}

// gens composed with the chart of point i: "point i is on the variety".
template <class K>
std::vector<Polynomial<K>> point_membership_constraints(
    const std::vector<Polynomial<K>>& gens, const LiftState& st,
    const AmbientPtr& lamb, std::size_t i) {
  std::vector<Polynomial<K>> out;
  if (gens.empty()) return out;
  auto imgs = point_images(st, lamb, i, gens[0].exemplar());
  for (auto& g : gens) out.push_back(g.compose(imgs));
  return out;
}

// Gradient-orthogonality of tangent vector t at point i for every generator.
template <class K>
std::vector<Polynomial<K>> tangent_orthogonality_constraints(
    const std::vector<Polynomial<K>>& gens, const LiftState& st,
    const AmbientPtr& lamb, std::size_t i, std::size_t t) {
  std::vector<Polynomial<K>> out;
  if (gens.empty()) return out;
  const K like = gens[0].exemplar();
  auto imgs = point_images(st, lamb, i, like);
  const std::size_t nv = st.points.at(i).coords.size();
  for (auto& g : gens) {
    Polynomial<K> acc(lamb, like);
    for (std::size_t j = 0; j < nv; ++j) {
      Polynomial<K> pj = g.partial(j).compose(imgs);
      acc = acc + pj * Polynomial<K>::variable(
                           lamb, lift_var_tangent(st, i, t, j), like);
    }
    out.push_back(std::move(acc));
  }
  return out;
}

// The linear form with the params as coefficients vanishes at point i.
template <class K>
Polynomial<K> cut_vanishing_constraint(const LiftState& st,
                                       const AmbientPtr& lamb, std::size_t i,
                                       const K& like) {
  const std::size_t nv = st.points.at(i).coords.size();
  if (st.params.size() != nv)
    throw DimensionMismatch("cut_vanishing_constraint: params are not a "
                            "coordinate-length vector");
  auto imgs = point_images(st, lamb, i, like);
  Polynomial<K> acc(lamb, like);
  for (std::size_t j = 0; j < nv; ++j)
    acc = acc +
          Polynomial<K>::variable(lamb, lift_var_param(st, j), like) * imgs[j];
  return acc;
}

// ---------------------------------------------------------------------------
// Lifting.

struct LiftOutcome {
  LiftState state;
  // True when some correction system had free variables; the lift is then
  // the lexicographically smallest branch (free variables zero).
  bool underdetermined = false;
};

LiftOutcome lift_constrained(LiftState st,
                             const std::vector<Polynomial<Rat>>& constraints,
                             unsigned target_k,
                             LiftSchedule sched = LiftSchedule::kDouble);
LiftOutcome lift_constrained(LiftState st,
                             const std::vector<Polynomial<Quad>>& constraints,
                             std::uint64_t s_mod_p, unsigned target_k,
                             LiftSchedule sched = LiftSchedule::kDouble);

ProjPoint<ZMod> lift_point(const Ideal<Rat>& I, const ProjPoint<Fp>& pt,
                           unsigned target_k,
                           LiftSchedule sched = LiftSchedule::kDouble);
ProjPoint<ZMod> lift_point(const Ideal<Quad>& I, const ProjPoint<Fp>& pt,
                           std::uint64_t s_mod_p, unsigned target_k,
                           LiftSchedule sched = LiftSchedule::kDouble);

}  // namespace tvx

#endif
