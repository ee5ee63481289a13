// Copyright (c) 2026 the tvx authors
// SPDX-License-Identifier: Apache-2.0
#include "tvx/linalg.hpp"

#include <algorithm>

namespace tvx {

// ---------------------------------------------------------------------------
// FpEchelon

FpEchelon::FpEchelon(std::uint32_t p, std::size_t ncols, bool rref)
    : ctx_(kern::select(p)), ncols_(ncols), rref_(rref) {}

void FpEchelon::reset(std::size_t ncols) {
  ncols_ = ncols;
  rows_.clear();
  pivots_.clear();
}

bool FpEchelon::insert(std::vector<std::uint32_t>& v) {
  const std::uint32_t p = ctx_.p;
  // Reduce against basis rows in ascending pivot order.
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    std::uint32_t c = v[pivots_[i]];
    if (c != 0) ctx_.axpy(ctx_, v.data(), rows_[i].data(), p - c, ncols_);
  }
  std::size_t piv = 0;
  while (piv < ncols_ && v[piv] == 0) ++piv;
  if (piv == ncols_) return false;
  if (v[piv] != 1) {
    std::uint32_t inv =
        static_cast<std::uint32_t>(inv_mod_u64(v[piv], p));
    ctx_.scale(ctx_, v.data(), inv, ncols_);
  }
  if (rref_) {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      std::uint32_t c = rows_[i][piv];
      if (c != 0)
        ctx_.axpy(ctx_, rows_[i].data(), v.data(), p - c, ncols_);
    }
  }
  auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), piv);
  std::size_t idx = static_cast<std::size_t>(pos - pivots_.begin());
  pivots_.insert(pos, piv);
  rows_.insert(rows_.begin() + idx, std::move(v));
  v.clear();
  return true;
}

std::vector<std::vector<std::uint32_t>> FpEchelon::nullspace() const {
  if (!rref_)
    throw InputError("FpEchelon: nullspace requires rref mode");
  std::vector<bool> is_pivot(ncols_, false);
  for (auto c : pivots_) is_pivot[c] = true;
  std::vector<std::vector<std::uint32_t>> basis;
  const std::uint32_t p = ctx_.p;
  for (std::size_t f = 0; f < ncols_; ++f) {
    if (is_pivot[f]) continue;
    std::vector<std::uint32_t> x(ncols_, 0);
    x[f] = 1;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      std::uint32_t c = rows_[i][f];
      if (c != 0) x[pivots_[i]] = p - c;
    }
    basis.push_back(std::move(x));
  }
  return basis;
}

// ---------------------------------------------------------------------------
// FpMat

std::size_t FpMat::rank() const {
  FpEchelon ech(p, ncols, false);
  for (const auto& row : a) {
    std::vector<std::uint32_t> v = row;
    ech.insert(v);
    if (ech.full()) break;
  }
  return ech.rank();
}

std::vector<std::vector<std::uint32_t>> FpMat::nullspace() const {
  FpEchelon ech(p, ncols, true);
  for (auto row : a) {
    std::vector<std::uint32_t> v = row;
    ech.insert(v);
  }
  return ech.nullspace();
}

std::optional<std::vector<std::uint32_t>> FpMat::solve(
    const std::vector<std::uint32_t>& b) const {
  if (b.size() != nrows)
    throw DimensionMismatch("FpMat::solve: rhs length mismatch");
  FpEchelon ech(p, ncols + 1, true);
  for (std::size_t i = 0; i < nrows; ++i) {
    std::vector<std::uint32_t> v = a[i];
    v.push_back(b[i] % p);
    ech.insert(v);
  }
  std::vector<std::uint32_t> x(ncols, 0);
  const auto& rows = ech.rows();
  const auto& pivots = ech.pivots();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (pivots[i] == ncols) return std::nullopt;
    // Row reads x[piv] + sum(free terms) = rhs; frees are 0.
    x[pivots[i]] = rows[i][ncols];
  }
  return x;
}

// ---------------------------------------------------------------------------
// Bareiss over Q(sqrt d)

namespace {

struct ZQuad {
  mpz_class a, b;  // a + b sqrt(d)
};

// Exact division u / v in Z[sqrt d] (valid when v | u, as in Bareiss).
ZQuad zq_divexact(const ZQuad& u, const ZQuad& v, long d) {
  mpz_class n = v.a * v.a - d * v.b * v.b;
  mpz_class na = u.a * v.a - d * u.b * v.b;
  mpz_class nb = u.b * v.a - u.a * v.b;
  ZQuad r;
  mpz_divexact(r.a.get_mpz_t(), na.get_mpz_t(), n.get_mpz_t());
  mpz_divexact(r.b.get_mpz_t(), nb.get_mpz_t(), n.get_mpz_t());
  return r;
}

}  // namespace

std::size_t quad_rank_bareiss(std::vector<std::vector<Quad>> m) {
  if (m.empty() || m[0].empty()) return 0;
  const long d = m[0][0].d();
  const std::size_t nr = m.size(), nc = m[0].size();
  std::vector<std::vector<ZQuad>> z(nr, std::vector<ZQuad>(nc));
  for (std::size_t i = 0; i < nr; ++i) {
    mpz_class l = 1;
    for (std::size_t j = 0; j < nc; ++j)
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m[i][j].c().get_mpz_t());
    for (std::size_t j = 0; j < nc; ++j) {
      mpz_class f = l / m[i][j].c();
      z[i][j].a = m[i][j].a() * f;
      z[i][j].b = m[i][j].b() * f;
    }
  }
  ZQuad prev{1, 0};
  std::size_t row = 0;
  for (std::size_t col = 0; col < nc && row < nr; ++col) {
    std::size_t sel = row;
    while (sel < nr && z[sel][col].a == 0 && z[sel][col].b == 0) ++sel;
    if (sel == nr) continue;
    std::swap(z[sel], z[row]);
    for (std::size_t i = row + 1; i < nr; ++i) {
      for (std::size_t j = col + 1; j < nc; ++j) {
        ZQuad num;
        num.a = z[row][col].a * z[i][j].a - d * (z[row][col].b * z[i][j].b) -
                (z[i][col].a * z[row][j].a - d * (z[i][col].b * z[row][j].b));
        num.b = z[row][col].a * z[i][j].b + z[row][col].b * z[i][j].a -
                (z[i][col].a * z[row][j].b + z[i][col].b * z[row][j].a);
        z[i][j] = (prev.a == 1 && prev.b == 0) ? num
                                               : zq_divexact(num, prev, d);
      }
      z[i][col].a = 0;
      z[i][col].b = 0;
    }
    prev = z[row][col];
    ++row;
  }
  return row;
}

// ---------------------------------------------------------------------------
// Unit-pivot solver over Z/p^k

std::optional<std::vector<ZMod>> zmod_solve(std::vector<std::vector<ZMod>> a,
                                            std::vector<ZMod> b,
                                            const Modulus& m) {
  const std::size_t nr = a.size();
  const std::size_t nc = nr == 0 ? 0 : a[0].size();
  std::vector<std::size_t> pivots;  // column per eliminated row
  std::size_t row = 0;
  for (std::size_t col = 0; col < nc && row < nr; ++col) {
    std::size_t sel = nr;
    bool any_nonzero = false;
    for (std::size_t i = row; i < nr; ++i) {
      if (!a[i][col].is_zero()) any_nonzero = true;
      if (a[i][col].is_unit()) {
        sel = i;
        break;
      }
    }
    if (sel == nr) {
      if (any_nonzero)
        throw NonUnit("zmod_solve: column " + std::to_string(col) +
                      " has no unit pivot");
      continue;
    }
    std::swap(a[sel], a[row]);
    std::swap(b[sel], b[row]);
    ZMod inv = a[row][col].inv();
    for (std::size_t j = col; j < nc; ++j) a[row][j] = inv * a[row][j];
    b[row] = inv * b[row];
    for (std::size_t i = 0; i < nr; ++i) {
      if (i == row || a[i][col].is_zero()) continue;
      ZMod f = a[i][col];
      for (std::size_t j = col; j < nc; ++j)
        a[i][j] = a[i][j] - f * a[row][j];
      b[i] = b[i] - f * b[row];
    }
    pivots.push_back(col);
    ++row;
  }
  for (std::size_t i = row; i < nr; ++i)
    if (!b[i].is_zero()) return std::nullopt;
  std::vector<ZMod> x(nc, ZMod(0, m));
  for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = b[i];
  return x;
}

}  // namespace tvx
