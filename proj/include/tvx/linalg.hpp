// Copyright (c) 2026 the tvx authors
// SPDX-License-Identifier: Apache-2.0
#ifndef TVX_LINALG_HPP
#define TVX_LINALG_HPP

// Exact dense linear algebra. Two layers:
//   * FpEchelon / FpMat: rows of u32 over a word-sized prime, built on the
//     kern row kernels; this is the hot path for graded ranks.
//   * generic_* templates over any exact field K (Rat, Quad, Fp), plus a
//     fraction-free (Bareiss) rank for Q(sqrt d) and a unit-pivot solver
//     over Z/p^k.

#include <cstdint>
#include <optional>
#include <vector>

#include "tvx/errors.hpp"
#include "tvx/kern.hpp"
#include "tvx/ring.hpp"

namespace tvx {

// ---------------------------------------------------------------------------
// Incremental row-echelon basis over F_p. Rows are kept pivot-normalized and
// sorted by pivot column; insert() reduces the incoming row and reports
// whether the rank grew. In rref mode existing rows are back-reduced, which
// nullspace() requires.

class FpEchelon {
 public:
  FpEchelon(std::uint32_t p, std::size_t ncols, bool rref = false);

  void reset(std::size_t ncols);
  // Reduces v in place; if it survives, moves it into the basis.
  bool insert(std::vector<std::uint32_t>& v);
  std::size_t rank() const { return rows_.size(); }
  std::size_t ncols() const { return ncols_; }
  std::uint32_t p() const { return ctx_.p; }
  const std::vector<std::vector<std::uint32_t>>& rows() const { return rows_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }
  bool full() const { return rows_.size() == ncols_; }

  // Basis of the solution space of (rows) * x = 0; requires rref mode.
  std::vector<std::vector<std::uint32_t>> nullspace() const;

 private:
  kern::FpCtx ctx_;
  std::size_t ncols_;
  bool rref_;
  std::vector<std::vector<std::uint32_t>> rows_;
  std::vector<std::size_t> pivots_;
};

// ---------------------------------------------------------------------------
// Dense matrix over F_p (u32 storage).

struct FpMat {
  std::uint32_t p = 0;
  std::size_t nrows = 0, ncols = 0;
  std::vector<std::vector<std::uint32_t>> a;

  static FpMat zero(std::uint32_t p, std::size_t r, std::size_t c) {
    FpMat m;
    m.p = p;
    m.nrows = r;
    m.ncols = c;
    m.a.assign(r, std::vector<std::uint32_t>(c, 0));
    return m;
  }

  std::size_t rank() const;
  std::vector<std::vector<std::uint32_t>> nullspace() const;
  // Solves A x = b; free variables are set to 0 (leftmost-pivot reduced
  // echelon form, the lexicographically smallest solution in that sense).
  std::optional<std::vector<std::uint32_t>> solve(
      const std::vector<std::uint32_t>& b) const;
};

// ---------------------------------------------------------------------------
// Generic exact elimination over a field K.

// In-place reduced row echelon form; returns the pivot columns (ascending).
template <class K>
std::vector<std::size_t> generic_rref(std::vector<std::vector<K>>& m,
                                      const K& like) {
  std::vector<std::size_t> pivots;
  if (m.empty()) return pivots;
  const std::size_t ncols = m[0].size();
  std::size_t row = 0;
  for (std::size_t col = 0; col < ncols && row < m.size(); ++col) {
    std::size_t sel = row;
    while (sel < m.size() && RingOps<K>::is_zero(m[sel][col])) ++sel;
    if (sel == m.size()) continue;
    std::swap(m[sel], m[row]);
    K piv_inv = RingOps<K>::inv(m[row][col]);
    for (std::size_t j = col; j < ncols; ++j) m[row][j] = piv_inv * m[row][j];
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == row || RingOps<K>::is_zero(m[i][col])) continue;
      K f = m[i][col];
      for (std::size_t j = col; j < ncols; ++j)
        m[i][j] = m[i][j] - f * m[row][j];
    }
    pivots.push_back(col);
    ++row;
  }
  (void)like;
  return pivots;
}

template <class K>
std::size_t generic_rank(std::vector<std::vector<K>> m, const K& like) {
  return generic_rref(m, like).size();
}

// Basis of ker(m) (right kernel), columns indexed like m's columns.
template <class K>
std::vector<std::vector<K>> generic_nullspace(std::vector<std::vector<K>> m,
                                              const K& like) {
  std::vector<std::vector<K>> basis;
  if (m.empty()) return basis;
  const std::size_t ncols = m[0].size();
  auto pivots = generic_rref(m, like);
  std::vector<bool> is_pivot(ncols, false);
  for (auto c : pivots) is_pivot[c] = true;
  for (std::size_t f = 0; f < ncols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<K> v(ncols, RingOps<K>::zero(like));
    v[f] = RingOps<K>::one(like);
    for (std::size_t i = 0; i < pivots.size(); ++i)
      v[pivots[i]] = -m[i][f];
    basis.push_back(std::move(v));
  }
  return basis;
}

// Solves A x = b with free variables set to 0; nullopt when inconsistent.
template <class K>
std::optional<std::vector<K>> generic_solve(std::vector<std::vector<K>> a,
                                            const std::vector<K>& b,
                                            const K& like) {
  if (a.size() != b.size())
    throw DimensionMismatch("generic_solve: row count mismatch");
  if (a.empty()) return std::vector<K>{};
  const std::size_t ncols = a[0].size();
  for (std::size_t i = 0; i < a.size(); ++i) a[i].push_back(b[i]);
  auto pivots = generic_rref(a, like);
  std::vector<K> x(ncols, RingOps<K>::zero(like));
  for (std::size_t i = 0; i < pivots.size(); ++i) {
    if (pivots[i] == ncols) return std::nullopt;  // pivot in the rhs column
    x[pivots[i]] = a[i][ncols];
  }
  return x;
}

template <class K>
K generic_det(std::vector<std::vector<K>> m, const K& like) {
  const std::size_t n = m.size();
  K det = RingOps<K>::one(like);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t sel = col;
    while (sel < n && RingOps<K>::is_zero(m[sel][col])) ++sel;
    if (sel == n) return RingOps<K>::zero(like);
    if (sel != col) {
      std::swap(m[sel], m[col]);
      det = -det;
    }
    det = det * m[col][col];
    K piv_inv = RingOps<K>::inv(m[col][col]);
    for (std::size_t i = col + 1; i < n; ++i) {
      if (RingOps<K>::is_zero(m[i][col])) continue;
      K f = m[i][col] * piv_inv;
      for (std::size_t j = col; j < n; ++j) m[i][j] = m[i][j] - f * m[col][j];
    }
  }
  return det;
}

template <class K>
std::optional<std::vector<std::vector<K>>> generic_inverse(
    std::vector<std::vector<K>> m, const K& like) {
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (m[i].size() != n)
      throw DimensionMismatch("generic_inverse: matrix not square");
    for (std::size_t j = 0; j < n; ++j)
      m[i].push_back(i == j ? RingOps<K>::one(like) : RingOps<K>::zero(like));
  }
  auto pivots = generic_rref(m, like);
  if (pivots.size() != n || (n > 0 && pivots.back() >= n)) return std::nullopt;
  std::vector<std::vector<K>> inv(n);
  for (std::size_t i = 0; i < n; ++i)
    inv[i].assign(m[i].begin() + n, m[i].end());
  return inv;
}

// ---------------------------------------------------------------------------
// Fraction-free (Bareiss) rank over Q(sqrt d): rows are scaled integral
// first, then two-step elimination with exact divisions in Z[sqrt d], so no
// denominators appear mid-computation.
std::size_t quad_rank_bareiss(std::vector<std::vector<Quad>> m);

// ---------------------------------------------------------------------------
// Unit-pivot Gaussian solver over Z/p^k (free variables set to 0). Returns
// nullopt when the system is inconsistent; throws NonUnit when elimination
// stalls on a column whose nonzero entries are all divisible by p (the
// callers' Jacobians are unit-pivotable at smooth points).
std::optional<std::vector<ZMod>> zmod_solve(std::vector<std::vector<ZMod>> a,
                                            std::vector<ZMod> b,
                                            const Modulus& m);

}  // namespace tvx

#endif
