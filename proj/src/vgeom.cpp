// Copyright (c) 2026 the tvx authors
// SPDX-License-Identifier: Apache-2.0
#include "tvx/vgeom.hpp"

#include <random>

#include "json.hpp"

namespace tvx {

mpz_class binom_mpz(unsigned long n, unsigned long k) {
  mpz_class b;
  if (k > n) return 0;
  mpz_bin_uiui(b.get_mpz_t(), n, k);
  return b;
}

unsigned long binom_ul(unsigned long n, unsigned long k) {
  mpz_class b = binom_mpz(n, k);
  if (!b.fits_ulong_p())
    throw InputError("binom: value does not fit a machine word");
  return b.get_ui();
}

namespace detail {

void combinations(std::size_t n, std::size_t k,
                  const std::function<void(const std::vector<std::size_t>&)>& f) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    f(idx);
    std::size_t i = k;
    while (i-- > 0) {
      if (idx[i] + (k - i) < n) {
        ++idx[i];
        for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
        break;
      }
      if (i == 0) return;
    }
    if (k == 0) return;
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Hilbert tail fit.

Rat eval_rat_poly(const std::vector<Rat>& coeffs, long n) {
  Rat acc(0);
  Rat x{long(n)};
  for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * x + coeffs[i];
  return acc;
}

namespace {

// Exact interpolation through (t, v[t]), ..., (t+e, v[t+e]); low-to-high.
std::vector<Rat> lagrange_fit(const std::vector<unsigned long>& v, unsigned t,
                              unsigned e) {
  std::vector<Rat> coeffs(e + 1, Rat(0));
  for (unsigned i = 0; i <= e; ++i) {
    // numerator polynomial prod_{j != i} (x - (t+j))
    std::vector<Rat> num{Rat(1)};
    Rat denom(1);
    for (unsigned j = 0; j <= e; ++j) {
      if (j == i) continue;
      std::vector<Rat> next(num.size() + 1, Rat(0));
      Rat root{long(t) + long(j)};
      for (std::size_t d = 0; d < num.size(); ++d) {
        next[d + 1] = next[d + 1] + num[d];
        next[d] = next[d] - root * num[d];
      }
      num = std::move(next);
      denom = denom * (Rat{long(i)} - Rat{long(j)});
    }
    Rat scale = Rat(mpz_class(v[t + i])) / denom;
    for (std::size_t d = 0; d < num.size(); ++d)
      coeffs[d] = coeffs[d] + scale * num[d];
  }
  while (!coeffs.empty() && coeffs.back().is_zero()) coeffs.pop_back();
  return coeffs;
}

}  // namespace

std::optional<std::pair<std::vector<Rat>, unsigned>> fit_hilbert_tail(
    const std::vector<unsigned long>& values, unsigned cap) {
  if (values.size() < 2) return std::nullopt;
  const unsigned w = static_cast<unsigned>(values.size()) - 1;  // top degree
  for (unsigned e = 0; e <= cap; ++e) {
    if (e + 2 > w) break;  // need >= 2 predicted values past the nodes
    for (unsigned t = 0; t + e + 2 <= w; ++t) {
      std::vector<Rat> coeffs = lagrange_fit(values, t, e);
      bool ok = true;
      for (unsigned n = t + e + 1; n <= w && ok; ++n)
        ok = (eval_rat_poly(coeffs, long(n)) == Rat(mpz_class(values[n])));
      if (ok) return std::make_pair(std::move(coeffs), t);
    }
  }
  return std::nullopt;
}

Rat HilbertData::leading() const {
  return fitted.empty() ? Rat(0) : fitted.back();
}

unsigned long HilbertData::scheme_degree() const {
  if (fitted.empty()) return 0;
  Rat d = leading();
  for (long f = 2; f <= dimension(); ++f) d = d * Rat(f);
  mpq_class q = d.value();
  q.canonicalize();
  if (q.get_den() != 1 || q < 0)
    throw VerificationError("scheme_degree: leading * dim! is not a "
                            "nonnegative integer");
  mpz_class num = q.get_num();
  if (!num.fits_ulong_p())
    throw VerificationError("scheme_degree: value does not fit a machine word");
  return num.get_ui();
}

std::string HilbertData::to_json() const {
  nlohmann::json j;
  j["values"] = nlohmann::json::object();
  for (auto& [n, h] : values) j["values"][std::to_string(n)] = h;
  j["fitted"] = nlohmann::json::array();
  for (auto& c : fitted) j["fitted"].push_back(RingOps<Rat>::str(c));
  j["stable_from"] = stable_from;
  j["dimension"] = dimension();
  if (!fitted.empty()) j["degree"] = scheme_degree();
  return j.dump();
}

// ---------------------------------------------------------------------------
// GradedRankTower.

GradedRankTower::GradedRankTower(std::uint32_t p, AmbientPtr amb,
                                 const std::vector<Polynomial<Fp>>& gens)
    : p_(p), amb_(std::move(amb)) {
  for (auto& g : gens) {
    if (g.is_zero()) continue;
    if (!g.is_homogeneous())
      throw NotHomogeneous("GradedRankTower: inhomogeneous generator");
    if (g.ambient() != amb_ && g.ambient()->names != amb_->names)
      throw DimensionMismatch("GradedRankTower: generator ambient mismatch");
    if (g.exemplar().p != p_)
      throw ModulusMismatch("GradedRankTower: generator modulus mismatch");
    gens_by_deg_[static_cast<unsigned>(g.degree())].push_back(g);
  }
}

void GradedRankTower::step() {
  const unsigned n = static_cast<unsigned>(cur_ + 1);
  const std::size_t nv = amb_->nvars();
  auto newcols = monomials_of_degree(nv, n);
  if (full_at_) {
    cols_ = std::move(newcols);
    cur_ = static_cast<int>(n);
    ranks_.push_back(cols_.size());
    return;
  }
  auto next = std::make_unique<FpEchelon>(p_, newcols.size());
  if (cur_ >= 0 && ech_ && ech_->rank() > 0) {
    std::vector<std::vector<std::size_t>> shift(
        nv, std::vector<std::size_t>(cols_.size()));
    for (std::size_t i = 0; i < nv; ++i)
      for (std::size_t j = 0; j < cols_.size(); ++j) {
        Monomial m = cols_[j];
        m.e[i] = static_cast<std::uint16_t>(m.e[i] + 1);
        shift[i][j] = detail::monomial_index(newcols, m);
      }
    for (auto& r : ech_->rows())
      for (std::size_t i = 0; i < nv && !next->full(); ++i) {
        std::vector<std::uint32_t> row(newcols.size(), 0);
        for (std::size_t j = 0; j < cols_.size(); ++j) row[shift[i][j]] = r[j];
        next->insert(row);
      }
  }
  auto it = gens_by_deg_.find(n);
  if (it != gens_by_deg_.end())
    for (auto& g : it->second) {
      if (next->full()) break;
      std::vector<std::uint32_t> row(newcols.size(), 0);
      for (auto& [m, c] : g.terms())
        row[detail::monomial_index(newcols, m)] =
            static_cast<std::uint32_t>(c.v);
      next->insert(row);
    }
  ech_ = std::move(next);
  cols_ = std::move(newcols);
  cur_ = static_cast<int>(n);
  ranks_.push_back(ech_->rank());
  if (ech_->full()) full_at_ = n;
}

std::size_t GradedRankTower::rank_at(unsigned n) {
  while (cur_ < static_cast<int>(n)) step();
  return ranks_[n];
}

unsigned long GradedRankTower::hilbert_at(unsigned n) {
  unsigned long total = binom_ul(n + amb_->nvars() - 1, amb_->nvars() - 1);
  return total - static_cast<unsigned long>(rank_at(n));
}

// ---------------------------------------------------------------------------
// Zero-dimensional solving over F_p by pivot-chart enumeration. Points come
// out with the last unit coordinate pinned to 1, matching
// ProjPoint::normalized.

ZeroDimSolution solve_zero_dim(const Ideal<Fp>& I, unsigned window,
                               unsigned cap) {
  I.ensure_homogeneous();
  HilbertData hd = hilbert_polynomial(I, window, cap);
  if (hd.dimension() >= 1)
    throw NotZeroDimensional("solve_zero_dim: positive Hilbert dimension " +
                             std::to_string(hd.dimension()));
  ZeroDimSolution out;
  if (hd.dimension() < 0) return out;  // empty scheme
  out.expected = hd.scheme_degree();

  const std::uint64_t p = I.exemplar().p;
  const std::size_t nv = I.nvars();
  mpz_class npoints = 0, pw = 1;
  for (std::size_t q = 0; q < nv; ++q) {
    npoints += pw;
    pw *= p;
  }
  if (npoints * std::max<std::size_t>(I.gens().size(), 1) > 20000000)
    throw InputError("solve_zero_dim: enumeration budget exceeded");

  std::vector<Fp> coords(nv, Fp(0, p));
  for (std::size_t q = 0; q < nv; ++q) {
    for (std::size_t j = 0; j < nv; ++j) coords[j] = Fp(0, p);
    coords[q] = Fp(1, p);
    std::vector<std::uint64_t> digits(q, 0);
    while (true) {
      for (std::size_t j = 0; j < q; ++j) coords[j] = Fp(digits[j], p);
      bool on = true;
      for (auto& g : I.gens())
        if (!g.evaluate(coords).is_zero()) {
          on = false;
          break;
        }
      if (on) {
        ProjPoint<Fp> pt;
        pt.coords = coords;
        pt.pivot = q;
        out.points.push_back(std::move(pt));
      }
      std::size_t j = 0;
      while (j < q && ++digits[j] == p) digits[j++] = 0;
      if (j == q) break;
    }
  }
  if (out.points.size() > out.expected)
    throw VerificationError("solve_zero_dim: more rational points than the "
                            "Hilbert constant");
  out.residual = out.points.size() < out.expected;
  return out;
}

// ---------------------------------------------------------------------------
// Point sampling: slice down to dimension zero with random hyperplanes, then
// enumerate. Degenerate slices are rejected and retried.

std::vector<ProjPoint<Fp>> sample_points(const Ideal<Fp>& I, std::size_t count,
                                         std::uint64_t seed,
                                         std::size_t max_slices) {
  I.ensure_homogeneous();
  if (count == 0) return {};
  HilbertData hd = hilbert_polynomial(I);
  const int dim = hd.dimension();
  if (dim < 0) throw SamplingExhausted("sample_points: variety is empty");

  const std::uint64_t p = I.exemplar().p;
  const std::size_t nv = I.nvars();
  std::vector<ProjPoint<Fp>> out;
  auto absorb = [&](const std::vector<ProjPoint<Fp>>& pts) {
    for (auto& pt : pts) {
      if (std::find(out.begin(), out.end(), pt) == out.end()) {
        out.push_back(pt);
        if (out.size() == count) return true;
      }
    }
    return false;
  };

  if (dim == 0) {
    absorb(solve_zero_dim(I).points);
    if (out.size() < count)
      throw SamplingExhausted("sample_points: only " +
                              std::to_string(out.size()) +
                              " rational points exist");
    return out;
  }

  std::mt19937_64 rng(seed);
  for (std::size_t iter = 0; iter < max_slices; ++iter) {
    Ideal<Fp> sliced = I;
    for (int k = 0; k < dim; ++k) {
      Polynomial<Fp> cut(I.ambient(), I.exemplar());
      for (std::size_t j = 0; j < nv; ++j) {
        Monomial m(nv);
        m.e[j] = 1;
        cut.add_term(m, Fp(rng() % p, p));
      }
      if (cut.is_zero())
        cut = Polynomial<Fp>::variable(I.ambient(), 0, I.exemplar());
      sliced.add(cut);
    }
    try {
      if (absorb(solve_zero_dim(sliced).points)) return out;
    } catch (const NotZeroDimensional&) {
      continue;  // slice met the variety badly; redraw
    } catch (const NotStabilized&) {
      continue;
    }
  }
  throw SamplingExhausted("sample_points: found " + std::to_string(out.size()) +
                          " of " + std::to_string(count) + " points within " +
                          std::to_string(max_slices) + " slices");
}

}  // namespace tvx
