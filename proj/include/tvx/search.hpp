// Copyright (c) 2026 the tvx authors
// SPDX-License-Identifier: Apache-2.0
#ifndef TVX_SEARCH_HPP
#define TVX_SEARCH_HPP

// Discovery procedures on top of the geometry stack: the exhaustive scan for
// invariant linear cuts with nonreduced section, Hilbert-guided solving of
// zero-dimensional systems over Q(sqrt d), equivariant coordinate changes,
// and sparsifying basis cleanup.

#include <cstdint>
#include <string>
#include <vector>

#include "tvx/errors.hpp"
#include "tvx/poly.hpp"
#include "tvx/recog.hpp"
#include "tvx/ring.hpp"
#include "tvx/vgeom.hpp"

namespace tvx {

// ---------------------------------------------------------------------------
// Nonreduced-cut search.

// Coefficient ansatz for an invariant linear cut: one unknown per orbit of
// variables, the cut being sum_o a_o * (sum of the orbit's variables).
// Variables outside every orbit get coefficient zero. `pinned` names the
// orbit whose coefficient is normalized to 1 in reported hits (when it is
// nonzero there; other hits keep their last nonzero coefficient at 1).
struct InvariantCutPattern {
  std::vector<std::vector<std::size_t>> orbits;
  std::size_t pinned = 0;
};

struct SearchReport {
  std::uint64_t candidates_scanned = 0;
  std::vector<std::vector<Fp>> hits;  // orbit coefficient tuples, scan order
  std::uint64_t seed = 0;             // scan is deterministic; kept for JSON
  double seconds = 0.0;
  std::string to_json() const;
};

// Scans every point of the projective coefficient space P^(orbits-1)(F_p)
// in lexicographic order and keeps the cuts whose hyperplane section of the
// surface is nonreduced. Quadric surfaces go through a dense degree-<=3
// saturation filter that discharges smooth sections early; every surviving
// candidate is decided (and every hit re-verified) by is_nonreduced_curve.
// Cut sections of unexpected dimension count as misses. Throws NotASurface
// unless the surface has Hilbert dimension 2, InputError on bad patterns.
SearchReport search_nonreduced_cuts(const Ideal<Fp>& surface,
                                    const InvariantCutPattern& pattern,
                                    unsigned window = kHilbertWindow,
                                    unsigned cap = kHilbertFitCap);

// ---------------------------------------------------------------------------
// Hilbert-guided solving over Q(sqrt d).

struct SolveOptions {
  std::uint64_t seed = 1;
  // Total random-cut budget across the whole run; cuts that fail to drop
  // the Hilbert constant (or empty the scheme) are rejected, not fatal.
  unsigned max_cut_attempts = 500;
  unsigned window = kHilbertWindow;
  unsigned cap = kHilbertFitCap;
  RecogOptions recog;
};

struct SolveOutcome {
  // Verified solutions: projective coordinate vectors over Q(sqrt d),
  // pivot coordinate 1, satisfying every input generator exactly.
  std::vector<std::vector<Quad>> solutions;
  // Per-point diagnostics for mod-p solutions that did not make it through
  // ("LiftFailed: ..." / "RecognitionFailed: ...").
  std::vector<std::string> failures;
  unsigned long hilbert_constant = 0;
  std::uint64_t cuts_tried = 0, cuts_accepted = 0;
};

// Reduces the system mod p (sqrt(d) -> the canonical root), checks that its
// Hilbert polynomial is a constant c >= 1 (HilbertNotConstant otherwise),
// then hunts the <= c rational points: random linear cuts are accepted when
// the constant drops but stays positive, breadth-first until every branch
// reaches constant 1, where the point is read off the corank-1 graded piece
// by linear algebra. Each point found mod p is Hensel-lifted to p^target_k,
// recognized coordinate-wise within height_cap, and re-verified exactly
// against the input generators; failures are recorded, never guessed over.
SolveOutcome hilbert_guided_solve(const Ideal<Quad>& system, std::uint64_t p,
                                  unsigned target_k,
                                  const mpz_class& height_cap,
                                  const SolveOptions& opt = {});

// ---------------------------------------------------------------------------
// Equivariant coordinate changes.

// Finds an invertible M commuting with both generators of the action (the
// weight diagonal and the character-twisted permutation) with
// source(M^-1 z) = target(z) exactly. The search runs over the diagonal
// part of the commutant, one scalar per permutation orbit: scalars are what
// matching a single pair of invariant linear forms can determine, and
// orbits whose coefficients cannot be matched by a scalar raise
// NoEquivariantSolution. Orbits untouched by both forms get scalar 1 (the
// free-parameter normalization). Support-pattern mismatches raise
// IncompatiblePattern.
std::vector<std::vector<Quad>> equivariant_coordinate_change(
    const CyclicAction<Quad>& act, const Polynomial<Quad>& source,
    const Polynomial<Quad>& target);

// ---------------------------------------------------------------------------
// Sparsifying basis cleanup.

// Rank-preserving simplification: pools the input with structured
// eliminations (leading-monomial cross-reductions) and `trials` random
// combinations with coefficients from {-1,0,1} (widening to {-2..2} for the
// second half), then greedily keeps the sparsest spanning subset, monic,
// sorted by monomial count. The span is re-verified by rank before return.
std::vector<Polynomial<Quad>> sparsify_basis(
    const std::vector<Polynomial<Quad>>& basis, unsigned trials,
    std::uint64_t seed);

// ---------------------------------------------------------------------------
// Invariant ansatz families.

// Basis of the degree-d, weight-w forms invariant under the action's
// permutation generator (orbit sums whose orbits stay inside weight w and
// whose character product around the cycle is 1). Each row of `conditions`
// is a linear functional on the family's coefficients, as produced by
// vanish_to_order_conditions; the returned family is the solved-in kernel.
// Throws EmptyAnsatz when nothing survives, InputError on shape mismatches.
template <class K>
std::vector<Polynomial<K>> ansatz_invariant_form(
    const AmbientPtr& amb, const K& like, const CyclicAction<K>& act,
    unsigned degree, unsigned weight,
    const std::vector<std::vector<K>>& conditions = {}) {
  if (degree < 1) throw InputError("ansatz_invariant_form: degree must be >= 1");
  act.validate(amb->nvars(), like);

  // Orbit sums over the permutation generator, restricted to weight w.
  std::vector<Polynomial<K>> family;
  std::vector<Monomial> mons = monomials_of_degree(amb->nvars(), degree);
  std::vector<bool> seen(mons.size(), false);
  for (std::size_t i = 0; i < mons.size(); ++i) {
    if (seen[i]) continue;
    if (monomial_weight(mons[i], act) != weight % act.n) continue;
    Polynomial<K> sum(amb, like);
    sum.add_term(mons[i], RingOps<K>::one(like));
    Polynomial<K> cur = sum;
    bool in_weight = true;
    for (;;) {
      cur = act_on_poly(cur, act);
      const Monomial& m = cur.terms().begin()->first;
      if (m == mons[i]) break;
      if (monomial_weight(m, act) != weight % act.n) in_weight = false;
      seen[detail::monomial_index(mons, m)] = true;
      sum = sum + cur;
    }
    // After a full cycle the monomial returns with the character product;
    // a nontrivial product makes the orbit sum non-invariant, so skip it.
    if (!in_weight || !(cur.terms().begin()->second == RingOps<K>::one(like)))
      continue;
    family.push_back(std::move(sum));
  }

  if (!conditions.empty()) {
    for (const auto& row : conditions)
      if (row.size() != family.size())
        throw InputError("ansatz_invariant_form: condition row length " +
                         std::to_string(row.size()) + ", family size " +
                         std::to_string(family.size()));
    auto kernel = generic_nullspace(conditions, like);
    std::vector<Polynomial<K>> solved;
    for (const auto& v : kernel) {
      Polynomial<K> f(amb, like);
      for (std::size_t j = 0; j < family.size(); ++j)
        f = f + v[j] * family[j];
      if (!f.is_zero()) solved.push_back(std::move(f));
    }
    family = std::move(solved);
  }

  if (family.empty())
    throw EmptyAnsatz("ansatz_invariant_form: no invariant form survives");
  return family;
}

}  // namespace tvx

#endif
