// Copyright (c) 2026 the tvx authors
// SPDX-License-Identifier: Apache-2.0

#include "tvx/recog.hpp"

#include <cstddef>
#include <utility>

namespace tvx {
namespace {

// Checked exact division; the integral Gram-Schmidt recurrences divide
// exactly by construction, so a remainder means a bug upstream.
mpz_class exact_div(const mpz_class& n, const mpz_class& d) {
  mpz_class q, r;
  mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
  if (r != 0) throw Error("lll_reduce: inexact division in Gram data");
  return q;
}

mpz_class dot(const std::vector<mpz_class>& x, const std::vector<mpz_class>& y) {
  mpz_class s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

// State of the all-integer reduction: D[i] is the Gram determinant of the
// first i rows (D[0] = 1) and lam[i][j] = D[j+1] * mu[i][j], all integers.
struct LLLState {
  std::vector<std::vector<mpz_class>> b;  // basis rows
  std::vector<std::vector<mpz_class>> u;  // transform rows, u * input = b
  std::vector<mpz_class> D;
  std::vector<std::vector<mpz_class>> lam;

  // Size-reduce b[k] against b[l]: afterwards |2 lam[k][l]| <= D[l+1].
  void redi(std::size_t k, std::size_t l) {
    mpz_class two_lam = 2 * lam[k][l];
    if (abs(two_lam) <= D[l + 1]) return;
    mpz_class q;
    // Nearest integer to lam[k][l] / D[l+1] (D > 0; ties round up).
    mpz_class num = two_lam + D[l + 1];
    mpz_class den = 2 * D[l + 1];
    mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    for (std::size_t j = 0; j < b[k].size(); ++j) b[k][j] -= q * b[l][j];
    for (std::size_t j = 0; j < u[k].size(); ++j) u[k][j] -= q * u[l][j];
    for (std::size_t j = 0; j < l; ++j) lam[k][j] -= q * lam[l][j];
    lam[k][l] -= q * D[l + 1];
  }

  // Swap b[k] and b[k-1], updating D and lam in place.
  void swapi(std::size_t k) {
    std::swap(b[k], b[k - 1]);
    std::swap(u[k], u[k - 1]);
    for (std::size_t j = 0; j + 1 < k; ++j) std::swap(lam[k][j], lam[k - 1][j]);
    const mpz_class lkk = lam[k][k - 1];
    const mpz_class Bnew = exact_div(D[k - 1] * D[k + 1] + lkk * lkk, D[k]);
    for (std::size_t i = k + 1; i < b.size(); ++i) {
      mpz_class t = lam[i][k];
      lam[i][k] = exact_div(D[k + 1] * lam[i][k - 1] - lkk * t, D[k]);
      lam[i][k - 1] = exact_div(Bnew * t + lkk * lam[i][k], D[k + 1]);
    }
    D[k] = Bnew;
  }
};

}  // namespace

LLLResult lll_reduce(const LatticeBasis& basis, const Rat& delta) {
  const std::size_t n = basis.rows.size();
  if (4 * delta.num() <= delta.den() || delta.num() >= delta.den())
    throw InputError("lll_reduce: delta must lie in (1/4, 1)");
  if (n == 0) return {};
  const std::size_t m = basis.rows[0].size();
  for (const auto& r : basis.rows)
    if (r.size() != m) throw InputError("lll_reduce: ragged rows");

  LLLState st;
  st.b = basis.rows;
  st.u.assign(n, std::vector<mpz_class>(n, 0));
  for (std::size_t i = 0; i < n; ++i) st.u[i][i] = 1;
  st.D.assign(n + 1, 0);
  st.D[0] = 1;
  st.lam.assign(n, std::vector<mpz_class>());
  for (std::size_t i = 0; i < n; ++i) st.lam[i].assign(i, 0);

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      mpz_class val = dot(st.b[i], st.b[j]);
      for (std::size_t t = 0; t < j; ++t)
        val = exact_div(st.D[t + 1] * val - st.lam[i][t] * st.lam[j][t],
                        st.D[t]);
      if (j < i) {
        st.lam[i][j] = val;
      } else {
        if (val == 0) throw DependentRows("lll_reduce: rows are Q-dependent");
        st.D[i + 1] = val;
      }
    }
  }

  const mpz_class dnum = delta.num(), dden = delta.den();
  std::size_t k = 1;
  while (k < n) {
    st.redi(k, k - 1);
    // Lovasz at delta: D[k+1] D[k-1] + lam^2 >= delta D[k]^2, cleared of
    // denominators.
    const mpz_class& l = st.lam[k][k - 1];
    if (dden * (st.D[k + 1] * st.D[k - 1] + l * l) < dnum * st.D[k] * st.D[k]) {
      st.swapi(k);
      if (k > 1) --k;
    } else {
      for (std::size_t j = k - 1; j-- > 0;) st.redi(k, j);
      ++k;
    }
  }

  // Self-check: the recorded transform reproduces the output exactly.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      mpz_class acc = 0;
      for (std::size_t t = 0; t < n; ++t)
        acc += st.u[i][t] * basis.rows[t][j];
      if (acc != st.b[i][j])
        throw VerificationError("lll_reduce: transform check failed");
    }

  LLLResult out;
  out.basis.rows = std::move(st.b);
  out.transform = std::move(st.u);
  return out;
}

namespace {

// One recognition attempt at a fixed height rung. Returns the first reduced
// row that decodes to a verified quadratic number within the rung.
std::optional<Quad> recognize_at(const ZMod& x, const ZMod& s,
                                 const mpz_class& rung,
                                 const RecogOptions& opt) {
  const mpz_class& pk = x.modulus().pk();
  const mpz_class& T = opt.weight;

  LatticeBasis lat;
  lat.rows = {{T * pk, 0, 0}, {T * s.value(), 1, 0}, {T * x.value(), 0, 1}};
  auto red = lll_reduce(lat, opt.delta);

  for (const auto& v : red.basis.rows) {
    if (v[0] % T != 0) continue;
    mpz_class a = -mpz_class(v[0] / T), b = v[1], c = -v[2];
    if (c == 0) continue;
    if (c < 0) {
      a = -a;
      b = -b;
      c = -c;
    }
    if (abs(a) > rung || abs(b) > rung || c > rung) continue;
    Quad cand(a, b, c, opt.d);
    try {
      if (reduce_quad(cand, s).value() == x.value()) return cand;
    } catch (const DenominatorNotUnit&) {
      // p | c: not a p-integral candidate, keep scanning.
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<Quad> recognize_quad(const ZMod& x, const ZMod& s,
                                   const mpz_class& height_cap,
                                   const RecogOptions& opt) {
  if (x.modulus() != s.modulus())
    throw ModulusMismatch("recognize_quad: residue and root at different moduli");
  if (height_cap < 1) throw InputError("recognize_quad: height cap must be >= 1");
  if (opt.weight < 1) throw InputError("recognize_quad: weight must be >= 1");
  const Modulus& m = x.modulus();
  if ((s * s).value() != ZMod(mpz_class(opt.d), m).value())
    throw ModulusMismatch("recognize_quad: s^2 != d at the working precision");

  if (m.pk() <= opt.margin * height_cap * height_cap * height_cap)
    throw PrecisionTooLow(
        "recognize_quad: need p^k > margin * H^3 for H = " +
        height_cap.get_str() + " (have p^" + std::to_string(m.k()) + ")");

  for (mpz_class rung = 10;; rung *= 10) {
    if (rung > height_cap) rung = height_cap;
    if (auto q = recognize_at(x, s, rung, opt)) return q;
    if (rung == height_cap) break;
  }
  return std::nullopt;
}

std::vector<Quad> recognize_vector(const std::vector<ZMod>& xs, const ZMod& s,
                                   const mpz_class& height_cap,
                                   const RecogOptions& opt) {
  std::vector<Quad> out;
  out.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    auto q = recognize_quad(xs[i], s, height_cap, opt);
    if (!q)
      throw NotFound("recognize_vector: entry " + std::to_string(i) +
                         " did not recognize within height " +
                         height_cap.get_str(),
                     i);
    out.push_back(std::move(*q));
  }
  return out;
}

}  // namespace tvx
