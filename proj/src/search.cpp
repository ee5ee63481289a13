// Copyright (c) 2026 the tvx authors
// SPDX-License-Identifier: Apache-2.0

#include "tvx/search.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <random>
#include <set>
#include <utility>

#include "json.hpp"
#include "tvx/lift.hpp"
#include "tvx/linalg.hpp"

namespace tvx {

std::string SearchReport::to_json() const {
  nlohmann::json j;
  j["candidates_scanned"] = candidates_scanned;
  j["seed"] = seed;
  j["seconds"] = seconds;
  auto arr = nlohmann::json::array();
  for (const auto& h : hits) {
    auto t = nlohmann::json::array();
    for (const auto& c : h) t.push_back(c.v);
    arr.push_back(std::move(t));
  }
  j["hits"] = std::move(arr);
  return j.dump(2);
}

namespace {

// ---------------------------------------------------------------------------
// Dense fast filter for quadric surfaces. The generators of the section and
// of its singular-locus ideal (quadrics, plus Jacobian minors of degree at
// most 3) fit in small dense u32 rows, so graded pieces can be filled by an
// incremental echelon instead of sparse polynomial arithmetic. The filter
// only ever discharges candidates by proving the singular locus is finite:
//   stage 1  the singular ideal fills a whole graded piece, so the locus is
//            empty (smooth section);
//   stage 2  after substituting one of a few fixed hyperplanes the sliced
//            ideal fills a graded piece, so the slice is empty; a locus of
//            dimension >= 1 meets every hyperplane, hence it was finite.
// Survivors (actual hits, plus finite loci that dodge every slice) go to
// the exact public decision.

struct TowerTables {
  std::size_t nv = 0;
  std::vector<std::vector<Monomial>> mons;  // mons[d], d <= maxdeg
  // shift[d][v][j]: column of z_v * mons[d][j] among mons[d+1]
  std::vector<std::vector<std::vector<std::size_t>>> shift;
  std::vector<std::vector<std::size_t>> idx2;
  std::vector<std::vector<std::vector<std::size_t>>> idx3;
};

TowerTables make_tower_tables(std::size_t nv, unsigned maxdeg) {
  TowerTables t;
  t.nv = nv;
  t.mons.resize(maxdeg + 1);
  for (unsigned d = 0; d <= maxdeg; ++d) t.mons[d] = monomials_of_degree(nv, d);
  t.shift.resize(maxdeg);
  for (unsigned d = 0; d + 1 <= maxdeg; ++d) {
    t.shift[d].assign(nv, std::vector<std::size_t>(t.mons[d].size(), 0));
    for (std::size_t v = 0; v < nv; ++v)
      for (std::size_t j = 0; j < t.mons[d].size(); ++j) {
        Monomial m = t.mons[d][j];
        m.e[v] = static_cast<std::uint16_t>(m.e[v] + 1);
        t.shift[d][v][j] = detail::monomial_index(t.mons[d + 1], m);
      }
  }
  t.idx2.assign(nv, std::vector<std::size_t>(nv, 0));
  if (maxdeg >= 2)
    for (std::size_t a = 0; a < nv; ++a)
      for (std::size_t b = 0; b < nv; ++b)
        t.idx2[a][b] = t.shift[1][a][t.shift[0][b][0]];
  if (maxdeg >= 3) {
    t.idx3.assign(nv, std::vector<std::vector<std::size_t>>(
                          nv, std::vector<std::size_t>(nv, 0)));
    for (std::size_t a = 0; a < nv; ++a)
      for (std::size_t b = 0; b < nv; ++b)
        for (std::size_t c = 0; c < nv; ++c)
          t.idx3[a][b][c] = t.shift[2][a][t.idx2[b][c]];
  }
  return t;
}

// One candidate's singular-ideal data over some variable set: symmetric
// matrices of the quadrics; Jacobian row i of generator g is the linear
// form sym[g][i] (the gradient factor 2 only scales minors by a unit).
struct SingData {
  std::uint64_t p = 0;
  std::size_t nv = 0, t = 0;  // t = minor size = codimension
  std::vector<std::vector<std::vector<std::uint64_t>>> sym;
};

// Substitutes z_pivot = -sum c_j z_j (c[pivot] must be 1) into symmetric
// matrices, producing data over the remaining variables in order.
SingData restrict_sing(const SingData& in, std::size_t pivot,
                       const std::vector<std::uint64_t>& c, std::size_t t) {
  const std::uint64_t p = in.p;
  SingData out;
  out.p = p;
  out.nv = in.nv - 1;
  out.t = t;
  std::vector<std::size_t> var(out.nv);
  for (std::size_t j = 0, k = 0; j < in.nv; ++j)
    if (j != pivot) var[k++] = j;
  out.sym.assign(in.sym.size(),
                 std::vector<std::vector<std::uint64_t>>(
                     out.nv, std::vector<std::uint64_t>(out.nv, 0)));
  for (std::size_t g = 0; g < in.sym.size(); ++g)
    for (std::size_t r = 0; r < out.nv; ++r) {
      const std::size_t vr = var[r];
      const std::uint64_t cr = c[vr];
      for (std::size_t s = r; s < out.nv; ++s) {
        const std::size_t vs = var[s];
        const std::uint64_t cs = c[vs];
        std::uint64_t v = in.sym[g][vr][vs] +
                          cr * (p - in.sym[g][pivot][vs]) % p +
                          cs * (p - in.sym[g][vr][pivot]) % p +
                          cr * cs % p * in.sym[g][pivot][pivot] % p;
        out.sym[g][r][s] = out.sym[g][s][r] = v % p;
      }
    }
  return out;
}

// Feeds the size-t Jacobian minors of sd into ech one at a time, stopping
// early once the graded piece is full. Overflow margin: all products of
// entries < 2^15 accumulate in u64 well below 2^63.
bool insert_minors(const SingData& sd, const TowerTables& tab, FpEchelon& ech) {
  const std::uint64_t p = sd.p;
  const std::size_t ng = sd.sym.size(), nv = sd.nv;
  std::vector<std::uint32_t> row;
  if (sd.t == 1) {
    for (std::size_t g = 0; g < ng; ++g)
      for (std::size_t i = 0; i < nv; ++i) {
        row.assign(tab.mons[1].size(), 0);
        for (std::size_t j = 0; j < nv; ++j)
          row[tab.shift[0][j][0]] =
              static_cast<std::uint32_t>(sd.sym[g][i][j]);
        ech.insert(row);
        if (ech.full()) return true;
      }
  } else if (sd.t == 2) {
    std::vector<std::uint64_t> acc;
    for (std::size_t g = 0; g < ng; ++g)
      for (std::size_t h = g + 1; h < ng; ++h)
        for (std::size_t i = 0; i < nv; ++i)
          for (std::size_t j = i + 1; j < nv; ++j) {
            acc.assign(tab.mons[2].size(), 0);
            for (std::size_t x = 0; x < nv; ++x) {
              if (sd.sym[g][i][x] == 0 && sd.sym[g][j][x] == 0) continue;
              for (std::size_t y = 0; y < nv; ++y)
                acc[tab.idx2[x][y]] +=
                    sd.sym[g][i][x] * sd.sym[h][j][y] % p +
                    (p - sd.sym[g][j][x] * sd.sym[h][i][y] % p);
            }
            row.assign(acc.size(), 0);
            for (std::size_t k = 0; k < acc.size(); ++k)
              row[k] = static_cast<std::uint32_t>(acc[k] % p);
            ech.insert(row);
            if (ech.full()) return true;
          }
  } else {
    static const int perm3[6][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1},
                                    {0, 2, 1}, {2, 1, 0}, {1, 0, 2}};
    std::vector<std::uint64_t> pos, neg;
    std::vector<std::size_t> gi(3), vi(3);
    for (gi[0] = 0; gi[0] < ng; ++gi[0])
      for (gi[1] = gi[0] + 1; gi[1] < ng; ++gi[1])
        for (gi[2] = gi[1] + 1; gi[2] < ng; ++gi[2])
          for (vi[0] = 0; vi[0] < nv; ++vi[0])
            for (vi[1] = vi[0] + 1; vi[1] < nv; ++vi[1])
              for (vi[2] = vi[1] + 1; vi[2] < nv; ++vi[2]) {
                pos.assign(tab.mons[3].size(), 0);
                neg.assign(tab.mons[3].size(), 0);
                for (int s = 0; s < 6; ++s) {
                  const auto& a = sd.sym[gi[0]][vi[perm3[s][0]]];
                  const auto& b = sd.sym[gi[1]][vi[perm3[s][1]]];
                  const auto& cl = sd.sym[gi[2]][vi[perm3[s][2]]];
                  auto& out = s < 3 ? pos : neg;
                  for (std::size_t x = 0; x < nv; ++x) {
                    if (a[x] == 0) continue;
                    for (std::size_t y = 0; y < nv; ++y) {
                      if (b[y] == 0) continue;
                      const std::uint64_t ab = a[x] * b[y] % p;
                      for (std::size_t z = 0; z < nv; ++z)
                        out[tab.idx3[x][y][z]] += ab * cl[z] % p;
                    }
                  }
                }
                row.assign(pos.size(), 0);
                for (std::size_t k = 0; k < pos.size(); ++k)
                  row[k] = static_cast<std::uint32_t>(
                      (pos[k] % p + p - neg[k] % p) % p);
                ech.insert(row);
                if (ech.full()) return true;
              }
  }
  return ech.full();
}

// True when some graded piece of degree <= maxdeg of the singular ideal
// (quadrics + size-t minors) is everything, i.e. the locus is empty.
bool tower_proves_empty(const SingData& sd, const TowerTables& tab,
                        unsigned maxdeg) {
  const std::uint64_t p = sd.p;
  const std::size_t nv = sd.nv;
  std::vector<std::vector<std::uint32_t>> prev;
  std::vector<std::uint32_t> row;
  for (unsigned d = 1; d <= maxdeg; ++d) {
    FpEchelon ech(static_cast<std::uint32_t>(p), tab.mons[d].size());
    for (const auto& r : prev)
      for (std::size_t v = 0; v < nv; ++v) {
        row.assign(tab.mons[d].size(), 0);
        for (std::size_t j = 0; j < r.size(); ++j)
          if (r[j]) {
            std::size_t ix = tab.shift[d - 1][v][j];
            row[ix] = static_cast<std::uint32_t>((row[ix] + r[j]) % p);
          }
        ech.insert(row);
        if (ech.full()) return true;
      }
    if (d == 2)
      for (std::size_t g = 0; g < sd.sym.size(); ++g) {
        row.assign(tab.mons[2].size(), 0);
        for (std::size_t i = 0; i < nv; ++i) {
          row[tab.idx2[i][i]] = static_cast<std::uint32_t>(sd.sym[g][i][i]);
          for (std::size_t j = i + 1; j < nv; ++j)
            row[tab.idx2[i][j]] =
                static_cast<std::uint32_t>(2 * sd.sym[g][i][j] % p);
        }
        ech.insert(row);
        if (ech.full()) return true;
      }
    if (d == sd.t && insert_minors(sd, tab, ech)) return true;
    prev = ech.rows();
  }
  return false;
}

struct QuadricFast {
  bool usable = false;
  std::uint64_t p = 0;
  std::size_t nv = 0, nvp = 0, minor = 0;
  SingData amb;         // ambient symmetric matrices, nv variables
  TowerTables tab_sec;  // nv - 1 variables, degrees <= 3
  TowerTables tab_sli;  // nv - 2 variables, degrees <= 6
};

QuadricFast prepare_fast(const Ideal<Fp>& surface) {
  QuadricFast f;
  const std::uint64_t p = surface.exemplar().p;
  const std::size_t nv = surface.nvars();
  if (surface.gens().empty() || p < 3 || p >= (1u << 15) || nv < 4) return f;
  const std::size_t minor = nv - 1 - 2;
  if (minor > 3) return f;
  for (const auto& g : surface.gens())
    if (g.degree() != 2 || !g.is_homogeneous()) return f;
  std::size_t ng = surface.gens().size();
  if (binom_ul(ng, minor) * binom_ul(nv - 1, minor) > 5000) return f;

  f.usable = true;
  f.p = p;
  f.nv = nv;
  f.nvp = nv - 1;
  f.minor = minor;
  f.amb.p = p;
  f.amb.nv = nv;
  f.amb.t = minor;
  const std::uint64_t inv2 = Fp(2, p).inv().v;
  f.amb.sym.assign(ng, std::vector<std::vector<std::uint64_t>>(
                           nv, std::vector<std::uint64_t>(nv, 0)));
  for (std::size_t g = 0; g < ng; ++g)
    for (const auto& [m, c] : surface.gens()[g].terms()) {
      std::size_t i = 0;
      while (m.e[i] == 0) ++i;
      if (m.e[i] == 2) {
        f.amb.sym[g][i][i] = c.v;
      } else {
        std::size_t j = i + 1;
        while (m.e[j] == 0) ++j;
        std::uint64_t half = c.v * inv2 % p;
        f.amb.sym[g][i][j] = f.amb.sym[g][j][i] = half;
      }
    }
  f.tab_sec = make_tower_tables(nv - 1, 3);
  f.tab_sli = make_tower_tables(nv - 2, 6);
  return f;
}

// True when the filter proves the section by the cut (coefficients cv) has
// finite singular locus: not a hit.
bool fast_filter_reduced(const QuadricFast& f,
                         const std::vector<std::uint64_t>& cv) {
  const std::uint64_t p = f.p;
  std::size_t piv = f.nv;
  for (std::size_t j = f.nv; j-- > 0;)
    if (cv[j] != 0) {
      piv = j;
      break;
    }
  if (piv == f.nv) return false;
  std::uint64_t scale = Fp(cv[piv], p).inv().v;
  std::vector<std::uint64_t> c(f.nv);
  for (std::size_t j = 0; j < f.nv; ++j) c[j] = cv[j] * scale % p;

  SingData sec = restrict_sing(f.amb, piv, c, f.minor);
  if (tower_proves_empty(sec, f.tab_sec, 3)) return true;

  // Slice by a few fixed hyperplanes l = sum u^j z_j + z_last; emptiness of
  // one slice proves the locus finite.
  const unsigned nslices = 6;
  std::vector<std::uint64_t> l(sec.nv);
  for (unsigned u = 1; u <= nslices; ++u) {
    std::uint64_t uj = 1;
    for (std::size_t j = 0; j + 1 < sec.nv; ++j) {
      uj = uj * (u % p) % p;
      l[j] = uj;
    }
    l[sec.nv - 1] = 1;
    SingData sli = restrict_sing(sec, sec.nv - 1, l, f.minor);
    if (tower_proves_empty(sli, f.tab_sli, 6)) return true;
  }
  return false;
}

}  // namespace

SearchReport search_nonreduced_cuts(const Ideal<Fp>& surface,
                                    const InvariantCutPattern& pattern,
                                    unsigned window, unsigned cap) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::uint64_t p = surface.exemplar().p;
  const std::size_t nv = surface.nvars();
  if (p < 2 || p >= (1ull << 31))
    throw InputError("search_nonreduced_cuts: p out of range");
  surface.ensure_homogeneous();

  if (pattern.orbits.empty())
    throw InputError("search_nonreduced_cuts: pattern has no orbits");
  if (pattern.pinned >= pattern.orbits.size())
    throw InputError("search_nonreduced_cuts: pinned orbit out of range");
  std::vector<bool> used(nv, false);
  for (const auto& orb : pattern.orbits) {
    if (orb.empty())
      throw InputError("search_nonreduced_cuts: empty orbit");
    for (std::size_t v : orb) {
      if (v >= nv || used[v])
        throw InputError("search_nonreduced_cuts: orbits must partition a "
                         "subset of the variables");
      used[v] = true;
    }
  }

  if (hilbert_polynomial(surface, window, cap).dimension() != 2)
    throw NotASurface("search_nonreduced_cuts: ideal is not a surface");

  QuadricFast fast = prepare_fast(surface);

  SearchReport rep;
  const std::size_t o = pattern.orbits.size();
  std::vector<std::uint64_t> tuple(o, 0);
  std::vector<std::uint64_t> cv(nv);

  // Odometer over F_p^o, first coordinate most significant; a tuple is kept
  // when its last nonzero entry is 1, which enumerates P^(o-1)(F_p) once.
  for (;;) {
    std::size_t last = o;
    for (std::size_t i = o; i-- > 0;)
      if (tuple[i] != 0) {
        last = i;
        break;
      }
    if (last != o && tuple[last] == 1) {
      ++rep.candidates_scanned;
      std::fill(cv.begin(), cv.end(), 0);
      for (std::size_t i = 0; i < o; ++i)
        for (std::size_t v : pattern.orbits[i]) cv[v] = tuple[i];

      bool hit = false;
      if (!fast.usable || !fast_filter_reduced(fast, cv)) {
        Polynomial<Fp> cut(surface.ambient(), surface.exemplar());
        for (std::size_t v = 0; v < nv; ++v) {
          if (cv[v] == 0) continue;
          Monomial m(nv);
          m.e[v] = 1;
          cut.add_term(m, Fp(cv[v], p));
        }
        try {
          hit = is_nonreduced_curve(surface, cut, window, cap);
        } catch (const NotACurve&) {
          hit = false;  // section of unexpected dimension: not a curve cut
        }
      }
      if (hit) {
        std::vector<Fp> out;
        out.reserve(o);
        Fp norm(1, p);
        if (tuple[pattern.pinned] != 0) norm = Fp(tuple[pattern.pinned], p).inv();
        for (std::size_t i = 0; i < o; ++i) out.push_back(Fp(tuple[i], p) * norm);
        rep.hits.push_back(std::move(out));
      }
    }

    std::size_t d = o;
    while (d-- > 0) {
      if (++tuple[d] < p) break;
      tuple[d] = 0;
      if (d == 0) {
        rep.seconds = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
        return rep;
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Hilbert-guided solving.

namespace {

// Reads the unique point of a constant-1 zero-dimensional scheme off the
// corank-1 graded piece: the evaluation functional spans the right kernel.
std::optional<ProjPoint<Fp>> point_from_constant_one(const Ideal<Fp>& I,
                                                     const HilbertData& hd) {
  const std::size_t nv = I.nvars();
  const std::uint64_t p = I.exemplar().p;
  const unsigned n = std::max(hd.stable_from, 1u);
  auto cols = monomials_of_degree(nv, n);

  FpMat rows = FpMat::zero(static_cast<std::uint32_t>(p), 0, cols.size());
  for (const auto& g : I.gens()) {
    const unsigned dg = static_cast<unsigned>(g.degree());
    if (dg > n) continue;
    for (const auto& m : monomials_of_degree(nv, n - dg)) {
      std::vector<std::uint32_t> r(cols.size(), 0);
      for (const auto& [mg, c] : g.terms())
        r[detail::monomial_index(cols, m * mg)] =
            static_cast<std::uint32_t>(c.v);
      rows.a.push_back(std::move(r));
      ++rows.nrows;
    }
  }
  auto kernel = rows.nullspace();
  if (kernel.size() != 1) return std::nullopt;
  const auto& ev = kernel[0];

  // ev[m] = m(v) up to scale; coordinates come from z_i z_j^(n-1) / z_j^n.
  std::size_t pj = nv;
  for (std::size_t j = nv; j-- > 0;) {
    Monomial m(nv);
    m.e[j] = static_cast<std::uint16_t>(n);
    if (ev[detail::monomial_index(cols, m)] != 0) {
      pj = j;
      break;
    }
  }
  if (pj == nv) return std::nullopt;
  Monomial mp(nv);
  mp.e[pj] = static_cast<std::uint16_t>(n);
  Fp denom(ev[detail::monomial_index(cols, mp)], p);
  std::vector<Fp> coords(nv, Fp(0, p));
  for (std::size_t i = 0; i < nv; ++i) {
    Monomial m(nv);
    m.e[pj] = static_cast<std::uint16_t>(n - 1);
    m.e[i] = static_cast<std::uint16_t>(m.e[i] + 1);
    coords[i] = Fp(ev[detail::monomial_index(cols, m)], p) / denom;
  }
  auto pt = ProjPoint<Fp>::normalized(coords);
  if (!satisfies(I, pt)) return std::nullopt;
  return pt;
}

}  // namespace

SolveOutcome hilbert_guided_solve(const Ideal<Quad>& system, std::uint64_t p,
                                  unsigned target_k,
                                  const mpz_class& height_cap,
                                  const SolveOptions& opt) {
  if (p < 3 || p >= (1ull << 31))
    throw InputError("hilbert_guided_solve: p out of range");
  if (target_k < 1) throw InputError("hilbert_guided_solve: target_k < 1");
  system.ensure_homogeneous();
  const long d = system.exemplar().d();
  const Modulus m1(mpz_class(static_cast<unsigned long>(p)), 1);
  const ZMod s1 = sqrt_mod(mpz_class(d), m1);
  const std::uint64_t su = s1.value().get_ui();

  std::vector<Polynomial<Fp>> gens_fp;
  for (const auto& g : system.gens())
    gens_fp.push_back(zmod_poly_to_fp(reduce_poly(g, m1, su)));
  Ideal<Fp> base(system.ambient(), Fp(0, p), gens_fp);

  HilbertData hd = hilbert_polynomial(base, opt.window, opt.cap);
  if (hd.dimension() != 0)
    throw HilbertNotConstant(
        "hilbert_guided_solve: mod-p system has dimension " +
        std::to_string(hd.dimension()));
  const unsigned long c = hd.scheme_degree();
  if (c < 1)
    throw HilbertNotConstant("hilbert_guided_solve: system is empty mod p");

  SolveOutcome out;
  out.hilbert_constant = c;

  const ZMod sK = lift_root(mpz_class(d), s1,
                            Modulus(mpz_class(static_cast<unsigned long>(p)),
                                    target_k));
  RecogOptions ropt = opt.recog;
  ropt.d = d;

  std::vector<ProjPoint<Fp>> found;
  auto process_point = [&](const ProjPoint<Fp>& pt) {
    for (const auto& q : found)
      if (q == pt) return;
    found.push_back(pt);

    ProjPoint<ZMod> lifted;
    try {
      lifted = lift_point(system, pt, su, target_k);
    } catch (const Error& e) {
      out.failures.push_back(std::string("LiftFailed: ") + e.what() +
                             " at " + pt.str());
      return;
    }
    std::vector<ZMod> xs;
    for (std::size_t j = 0; j < lifted.coords.size(); ++j)
      if (j != lifted.pivot) xs.push_back(lifted.coords[j]);
    std::vector<Quad> rec;
    try {
      rec = recognize_vector(xs, sK, height_cap, ropt);
    } catch (const NotFound& e) {
      out.failures.push_back(std::string("RecognitionFailed: ") + e.what() +
                             " at " + pt.str());
      return;
    }
    std::vector<Quad> qc;
    qc.reserve(lifted.coords.size());
    for (std::size_t j = 0, r = 0; j < lifted.coords.size(); ++j)
      qc.push_back(j == lifted.pivot ? Quad(1, 0, 1, d) : rec[r++]);
    for (const auto& g : system.gens())
      if (!g.evaluate(qc).is_zero()) {
        out.failures.push_back("RecognitionFailed: exact re-verification at " +
                               pt.str());
        return;
      }
    out.solutions.push_back(std::move(qc));
  };

  struct Branch {
    std::vector<Polynomial<Fp>> cuts;
    unsigned long constant;
  };
  std::deque<Branch> queue;
  queue.push_back({{}, c});
  std::mt19937_64 rng(opt.seed);
  const std::size_t nv = system.nvars();

  auto branch_ideal = [&](const Branch& br) {
    std::vector<Polynomial<Fp>> gs = gens_fp;
    gs.insert(gs.end(), br.cuts.begin(), br.cuts.end());
    return Ideal<Fp>(system.ambient(), Fp(0, p), gs);
  };

  unsigned tried = 0;
  while (found.size() < c) {
    if (queue.empty()) {
      if (tried >= opt.max_cut_attempts) break;
      queue.push_back({{}, c});  // fresh pass with new random cuts
    }
    Branch br = std::move(queue.front());
    queue.pop_front();

    if (br.constant == 1) {
      try {
        Ideal<Fp> J = branch_ideal(br);
        auto hb = hilbert_polynomial(J, opt.window, opt.cap);
        if (hb.dimension() == 0 && hb.scheme_degree() == 1)
          if (auto pt = point_from_constant_one(J, hb)) process_point(*pt);
      } catch (const NotStabilized&) {
      }
      continue;
    }

    unsigned long coverage = 0;
    while (coverage < br.constant && tried < opt.max_cut_attempts) {
      ++tried;
      ++out.cuts_tried;
      Polynomial<Fp> cut(system.ambient(), Fp(0, p));
      bool nonzero = false;
      for (std::size_t v = 0; v < nv; ++v) {
        std::uint64_t cc = rng() % p;
        if (cc == 0) continue;
        Monomial m(nv);
        m.e[v] = 1;
        cut.add_term(m, Fp(cc, p));
        nonzero = true;
      }
      if (!nonzero) continue;

      Branch child{br.cuts, 0};
      child.cuts.push_back(cut);
      unsigned long c2 = 0;
      try {
        auto h2 = hilbert_polynomial(branch_ideal(child), opt.window, opt.cap);
        if (h2.dimension() > 0) continue;
        c2 = h2.dimension() == 0 ? h2.scheme_degree() : 0;
      } catch (const NotStabilized&) {
        continue;
      }
      if (c2 == 0 || c2 >= br.constant) continue;  // emptied or no drop
      child.constant = c2;
      ++out.cuts_accepted;
      coverage += c2;
      queue.push_back(std::move(child));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Equivariant coordinate change.

namespace {

std::vector<Quad> linear_coeffs(const Polynomial<Quad>& f, std::size_t nv,
                                const char* which) {
  if (f.is_zero() || f.degree() != 1 || !f.is_homogeneous())
    throw InputError(std::string("equivariant_coordinate_change: ") + which +
                     " form must be linear");
  if (f.nvars() != nv)
    throw DimensionMismatch("equivariant_coordinate_change: variable count");
  std::vector<Quad> c(nv, Quad(0, 0, 1, f.exemplar().d()));
  for (const auto& [m, coef] : f.terms()) {
    std::size_t i = 0;
    while (m.e[i] == 0) ++i;
    c[i] = coef;
  }
  return c;
}

}  // namespace

std::vector<std::vector<Quad>> equivariant_coordinate_change(
    const CyclicAction<Quad>& act, const Polynomial<Quad>& source,
    const Polynomial<Quad>& target) {
  const std::size_t nv = act.weights.size();
  const Quad like = source.exemplar();
  act.validate(nv, like);
  if (source.ambient()->names != target.ambient()->names)
    throw DimensionMismatch("equivariant_coordinate_change: mixed ambients");
  auto sig = linear_coeffs(source, nv, "source");
  auto tau = linear_coeffs(target, nv, "target");

  // Permutation orbits of the variables.
  std::vector<std::vector<std::size_t>> orbits;
  {
    std::vector<bool> seen(nv, false);
    for (std::size_t i = 0; i < nv; ++i) {
      if (seen[i]) continue;
      std::vector<std::size_t> orb;
      std::size_t j = i;
      do {
        seen[j] = true;
        orb.push_back(j);
        j = act.has_perm() ? act.perm[j] : j;
      } while (j != i);
      orbits.push_back(std::move(orb));
    }
  }

  const Quad one(1, 0, 1, like.d());
  std::vector<std::vector<Quad>> M(
      nv, std::vector<Quad>(nv, Quad(0, 0, 1, like.d())));
  for (const auto& orb : orbits) {
    bool ssup = false, tsup = false;
    for (std::size_t i : orb) {
      ssup = ssup || !sig[i].is_zero();
      tsup = tsup || !tau[i].is_zero();
    }
    if (ssup != tsup)
      throw IncompatiblePattern(
          "equivariant_coordinate_change: orbit support differs");
    Quad scalar = one;  // free orbits get the normalized scalar 1
    if (tsup) {
      bool have = false;
      for (std::size_t i : orb) {
        if (tau[i].is_zero()) {
          if (!sig[i].is_zero())
            throw NoEquivariantSolution(
                "equivariant_coordinate_change: no orbit scalar matches "
                "coefficient " + std::to_string(i));
          continue;
        }
        Quad r = sig[i] / tau[i];
        if (have && !(r == scalar))
          throw NoEquivariantSolution(
              "equivariant_coordinate_change: orbit requires conflicting "
              "scalars");
        scalar = r;
        have = true;
      }
      if (scalar.is_zero())
        throw NoEquivariantSolution(
            "equivariant_coordinate_change: forced scalar is zero");
    }
    for (std::size_t i : orb) M[i][i] = scalar;
  }

  // M is diagonal and constant along permutation orbits: it commutes with
  // the weight diagonal and the twisted permutation. Check the defining
  // relation and the proportionality exactly before returning.
  for (std::size_t i = 0; i < nv; ++i) {
    Quad acc(0, 0, 1, like.d());
    for (std::size_t j = 0; j < nv; ++j) acc = acc + M[j][i] * tau[j];
    if (!(acc == sig[i]))
      throw VerificationError("equivariant_coordinate_change: M^T tau != sigma");
  }
  if (act.has_perm())
    for (std::size_t i = 0; i < nv; ++i)
      if (!(M[act.perm[i]][act.perm[i]] == M[i][i]))
        throw VerificationError(
            "equivariant_coordinate_change: permutation commutation");
  std::vector<Polynomial<Quad>> images;
  for (std::size_t i = 0; i < nv; ++i) {
    Polynomial<Quad> xi(source.ambient(), like);
    Monomial m(nv);
    m.e[i] = 1;
    xi.add_term(m, one / M[i][i]);
    images.push_back(std::move(xi));
  }
  if (!(source.compose(images) - target).is_zero())
    throw VerificationError(
        "equivariant_coordinate_change: source(M^-1) != target");
  return M;
}

// ---------------------------------------------------------------------------
// Sparsifying basis cleanup.

namespace {

std::vector<Monomial> union_support(const std::vector<Polynomial<Quad>>& fs) {
  std::set<Monomial, DegRevLexLess> s;
  for (const auto& f : fs)
    for (const auto& [m, c] : f.terms()) s.insert(m);
  return std::vector<Monomial>(s.begin(), s.end());
}

std::vector<std::vector<Quad>> coeff_matrix(
    const std::vector<Polynomial<Quad>>& fs, const std::vector<Monomial>& sup,
    const Quad& like) {
  std::vector<std::vector<Quad>> m(
      fs.size(), std::vector<Quad>(sup.size(), RingOps<Quad>::zero(like)));
  for (std::size_t i = 0; i < fs.size(); ++i)
    for (const auto& [mon, c] : fs[i].terms()) {
      auto it = std::lower_bound(sup.begin(), sup.end(), mon, DegRevLexLess{});
      m[i][static_cast<std::size_t>(it - sup.begin())] = c;
    }
  return m;
}

Polynomial<Quad> monic(const Polynomial<Quad>& f) {
  auto [lm, lc] = f.leading(MonomialOrder::kDegRevLex);
  return RingOps<Quad>::inv(lc) * f;
}

}  // namespace

std::vector<Polynomial<Quad>> sparsify_basis(
    const std::vector<Polynomial<Quad>>& basis, unsigned trials,
    std::uint64_t seed) {
  if (basis.empty()) return {};
  const Quad like = basis[0].exemplar();
  for (const auto& f : basis) {
    if (f.is_zero()) throw InputError("sparsify_basis: zero element");
    if (f.ambient()->names != basis[0].ambient()->names)
      throw DimensionMismatch("sparsify_basis: mixed ambients");
  }
  auto sup0 = union_support(basis);
  if (quad_rank_bareiss(coeff_matrix(basis, sup0, like)) != basis.size())
    throw InputError("sparsify_basis: input is linearly dependent");

  std::vector<Polynomial<Quad>> pool;
  std::set<std::string> seen;
  auto add = [&](const Polynomial<Quad>& f) {
    if (f.is_zero()) return;
    Polynomial<Quad> g = monic(f);
    if (seen.insert(g.to_string()).second) pool.push_back(std::move(g));
  };

  for (const auto& f : basis) add(f);
  // Structured eliminations: cross-reduce each element by each other one,
  // then by all others at once (Gaussian pivots on shared monomials).
  for (std::size_t i = 0; i < basis.size(); ++i) {
    std::vector<Polynomial<Quad>> others;
    for (std::size_t j = 0; j < basis.size(); ++j) {
      if (i == j) continue;
      others.push_back(basis[j]);
      add(normal_form(basis[i], {basis[j]}, MonomialOrder::kDegRevLex));
    }
    if (!others.empty())
      add(normal_form(basis[i], others, MonomialOrder::kDegRevLex));
  }
  std::mt19937_64 rng(seed);
  for (unsigned t = 0; t < trials; ++t) {
    const long w = t < trials / 2 ? 1 : 2;
    Polynomial<Quad> f(basis[0].ambient(), like);
    for (const auto& b : basis) {
      long cc = static_cast<long>(rng() % (2 * w + 1)) - w;
      if (cc != 0) f = f + Quad(cc, 0, 1, like.d()) * b;
    }
    add(f);
  }

  std::stable_sort(pool.begin(), pool.end(),
                   [](const Polynomial<Quad>& a, const Polynomial<Quad>& b) {
                     if (a.terms().size() != b.terms().size())
                       return a.terms().size() < b.terms().size();
                     return a.to_string() < b.to_string();
                   });

  // Greedy sparsest spanning subset via exact elimination.
  auto sup = union_support(pool);
  std::vector<std::vector<Quad>> red;   // reduced rows
  std::vector<std::size_t> red_piv;
  std::vector<Polynomial<Quad>> out;
  for (const auto& f : pool) {
    if (out.size() == basis.size()) break;
    auto row = coeff_matrix({f}, sup, like)[0];
    for (std::size_t r = 0; r < red.size(); ++r) {
      const Quad& x = row[red_piv[r]];
      if (x.is_zero()) continue;
      Quad factor = x;
      for (std::size_t j = 0; j < sup.size(); ++j)
        row[j] = row[j] - factor * red[r][j];
    }
    std::size_t piv = sup.size();
    for (std::size_t j = 0; j < sup.size(); ++j)
      if (!row[j].is_zero()) {
        piv = j;
        break;
      }
    if (piv == sup.size()) continue;
    Quad inv = RingOps<Quad>::inv(row[piv]);
    for (auto& x : row) x = inv * x;
    red.push_back(std::move(row));
    red_piv.push_back(piv);
    out.push_back(f);
  }

  // Same span both ways, by rank.
  std::vector<Polynomial<Quad>> both = basis;
  both.insert(both.end(), out.begin(), out.end());
  auto supb = union_support(both);
  if (out.size() != basis.size() ||
      quad_rank_bareiss(coeff_matrix(out, supb, like)) != basis.size() ||
      quad_rank_bareiss(coeff_matrix(both, supb, like)) != basis.size())
    throw VerificationError("sparsify_basis: span changed");
  return out;
}

}  // namespace tvx
