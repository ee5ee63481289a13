// Copyright (c) 2026 the tvx authors
// SPDX-License-Identifier: Apache-2.0
#ifndef TVX_RECOG_HPP
#define TVX_RECOG_HPP

// Exact lattice reduction and recognition of quadratic-field numbers from
// high-precision modular residues. The residue x mod p^k of (a + b*sqrt(d))/c
// leaves (-a, b, -c) as a short vector of the lattice spanned by (p^k, 0, 0),
// (s, 1, 0), (x, 0, 1); LLL finds it once p^k clears margin * H^3 for the
// height bound H. Every candidate is re-verified through reduce_quad before
// it is returned, so a wrong answer is never emitted.

#include <cstddef>
#include <gmpxx.h>
#include <optional>
#include <vector>

#include "tvx/errors.hpp"
#include "tvx/ring.hpp"

namespace tvx {

// ---------------------------------------------------------------------------
// Integer lattices.

struct LatticeBasis {
  // Rows span the lattice; all rows have the same length and are
  // Q-linearly independent.
  std::vector<std::vector<mpz_class>> rows;

  std::size_t dim() const { return rows.size(); }
};

struct LLLResult {
  LatticeBasis basis;
  // Unimodular row transform with transform * input = basis. Built from
  // elementary row operations, so det = +-1 by construction; lll_reduce
  // still re-multiplies it against the input as a self-check.
  std::vector<std::vector<mpz_class>> transform;
};

// All-integer LLL (integral Gram-Schmidt data, no floating point). The
// output basis spans the same lattice, is size-reduced, and satisfies the
// Lovasz condition at delta. Exactness costs nothing at the dimensions used
// here (<= 10). Throws DependentRows if the rows are Q-dependent and
// InputError unless 1/4 < delta < 1.
LLLResult lll_reduce(const LatticeBasis& basis, const Rat& delta = Rat(99, 100));

// ---------------------------------------------------------------------------
// Recognition of (a + b*sqrt(d))/c from its image mod p^k.

struct RecogOptions {
  long d = kDefaultD;
  // Precision sufficiency: recognition refuses to guess unless
  // p^k > margin * H^3 for the requested height cap H.
  mpz_class margin = mpz_class(1) << 16;
  // Scale on the residue column of the recognition lattice. 1 keeps the
  // target vector (-a, b, -c) at height ~H while generic vectors sit near
  // p^(k/3); larger weights push the target past the junk and lose it.
  mpz_class weight = 1;
  Rat delta = Rat(99, 100);
};

// Recognizes x as (a + b*sqrt(d))/c with |a|, |b|, c <= height_cap, trying
// height rungs 10, 100, ... up to the cap and returning the first candidate
// that re-verifies through reduce_quad. Returns nullopt when no candidate
// within the cap verifies. s must satisfy s^2 = d mod p^k (ModulusMismatch
// otherwise, matching reduce_quad); throws PrecisionTooLow when
// p^k <= margin * height_cap^3.
std::optional<Quad> recognize_quad(const ZMod& x, const ZMod& s,
                                   const mpz_class& height_cap,
                                   const RecogOptions& opt = {});

// Element-wise recognition; fails atomically, reporting the first index
// that does not recognize (NotFound carries it).
std::vector<Quad> recognize_vector(const std::vector<ZMod>& xs, const ZMod& s,
                                   const mpz_class& height_cap,
                                   const RecogOptions& opt = {});

}  // namespace tvx

#endif
