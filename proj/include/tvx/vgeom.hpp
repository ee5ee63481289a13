// Copyright (c) 2026 the tvx authors
// SPDX-License-Identifier: Apache-2.0
#ifndef TVX_VGEOM_HPP
#define TVX_VGEOM_HPP

// Graded linear algebra on homogeneous ideals: Hilbert functions and their
// polynomial tails, interpolation of vanishing forms, jets, singular loci,
// nonreducedness detection, point sampling, and zero-dimensional solving.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tvx/errors.hpp"
#include "tvx/linalg.hpp"
#include "tvx/poly.hpp"
#include "tvx/ring.hpp"

namespace tvx {

// ---------------------------------------------------------------------------
// Ideal: a shared ambient plus a generator list. The constructor enforces the
// shared ambient; homogeneity is enforced by the graded operations (Groebner
// bases accept inhomogeneous input, so it is not a constructor invariant).

template <class K>
class Ideal {
 public:
  Ideal(AmbientPtr amb, K like, std::vector<Polynomial<K>> gens = {})
      : amb_(std::move(amb)), like_(std::move(like)) {
    for (auto& g : gens) add(std::move(g));
  }

  const AmbientPtr& ambient() const { return amb_; }
  const K& exemplar() const { return like_; }
  const std::vector<Polynomial<K>>& gens() const { return gens_; }
  std::size_t nvars() const { return amb_->nvars(); }

  void add(Polynomial<K> g) {
    if (g.ambient() != amb_ && g.ambient()->names != amb_->names)
      throw DimensionMismatch("Ideal: generator in a different ambient");
    if (!g.is_zero()) gens_.push_back(std::move(g));
  }

  void ensure_homogeneous() const {
    for (auto& g : gens_)
      if (!g.is_homogeneous())
        throw NotHomogeneous("Ideal: generator '" + g.to_string() +
                             "' is not homogeneous");
  }

 private:
  AmbientPtr amb_;
  K like_;
  std::vector<Polynomial<K>> gens_;
};

// ---------------------------------------------------------------------------
// Projective point. The pivot is the last unit coordinate and is normalized
// to 1, matching the enumeration order of the solvers.

template <class K>
struct ProjPoint {
  std::vector<K> coords;
  std::size_t pivot = 0;

  static ProjPoint normalized(std::vector<K> c) {
    std::size_t piv = c.size();
    for (std::size_t i = c.size(); i-- > 0;)
      if (RingOps<K>::is_unit(c[i])) {
        piv = i;
        break;
      }
    if (piv == c.size())
      throw InputError("ProjPoint: no unit coordinate");
    K inv = RingOps<K>::inv(c[piv]);
    for (auto& x : c) x = inv * x;
    ProjPoint p;
    p.coords = std::move(c);
    p.pivot = piv;
    return p;
  }

  std::string str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < coords.size(); ++i) {
      if (i) s += ":";
      s += RingOps<K>::str(coords[i]);
    }
    return s + ")";
  }

  friend bool operator==(const ProjPoint& a, const ProjPoint& b) {
    if (a.coords.size() != b.coords.size()) return false;
    for (std::size_t i = 0; i < a.coords.size(); ++i)
      if (!(a.coords[i] == b.coords[i])) return false;
    return true;
  }
  friend bool operator!=(const ProjPoint& a, const ProjPoint& b) {
    return !(a == b);
  }
};

template <class K>
bool satisfies(const Ideal<K>& I, const ProjPoint<K>& pt) {
  for (auto& g : I.gens())
    if (!RingOps<K>::is_zero(g.evaluate(pt.coords))) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Graded piece ranks. The degree-n piece J_n is the span of {m*g} over
// monomials m with deg(m*g) = n; its rank drives every Hilbert value.

mpz_class binom_mpz(unsigned long n, unsigned long k);
unsigned long binom_ul(unsigned long n, unsigned long k);

namespace detail {

inline std::size_t monomial_index(const std::vector<Monomial>& sorted,
                                  const Monomial& m) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), m, DegRevLexLess{});
  return static_cast<std::size_t>(it - sorted.begin());
}

}  // namespace detail

// Incremental echelon tower over F_p: deg n basis = vars * (deg n-1 basis)
// + generators of degree n, which spans exactly the degree-n graded piece.
class GradedRankTower {
 public:
  GradedRankTower(std::uint32_t p, AmbientPtr amb,
                  const std::vector<Polynomial<Fp>>& gens);

  std::size_t rank_at(unsigned n);        // advances the tower as needed
  unsigned long hilbert_at(unsigned n);   // binom(n+N, N) - rank_at(n)
  // True once the ideal contains every monomial of some degree <= n; all
  // later Hilbert values are then 0.
  bool saturated_full() const { return full_at_.has_value(); }

 private:
  void step();
  std::uint32_t p_;
  AmbientPtr amb_;
  std::map<unsigned, std::vector<Polynomial<Fp>>> gens_by_deg_;
  int cur_ = -1;
  std::vector<Monomial> cols_;
  std::unique_ptr<FpEchelon> ech_;
  std::vector<std::size_t> ranks_;
  std::optional<unsigned> full_at_;
};

template <class K>
std::size_t graded_piece_rank(const Ideal<K>& I, unsigned n) {
  I.ensure_homogeneous();
  const std::size_t nv = I.nvars();
  auto cols = monomials_of_degree(nv, n);
  if constexpr (std::is_same_v<K, Fp>) {
    if (I.exemplar().p < (1ull << 31)) {
      const std::uint32_t p = static_cast<std::uint32_t>(I.exemplar().p);
      FpEchelon ech(p, cols.size());
      for (auto& g : I.gens()) {
        unsigned dg = static_cast<unsigned>(g.degree());
        if (dg > n) continue;
        for (auto& m : monomials_of_degree(nv, n - dg)) {
          std::vector<std::uint32_t> row(cols.size(), 0);
          for (auto& [t, c] : g.terms())
            row[detail::monomial_index(cols, t * m)] =
                static_cast<std::uint32_t>(c.v);
          ech.insert(row);
          if (ech.full()) return ech.rank();
        }
      }
      return ech.rank();
    }
  }
  {
    std::vector<std::vector<K>> rows;
    const K zero = RingOps<K>::zero(I.exemplar());
    for (auto& g : I.gens()) {
      unsigned dg = static_cast<unsigned>(g.degree());
      if (dg > n) continue;
      for (auto& m : monomials_of_degree(nv, n - dg)) {
        std::vector<K> row(cols.size(), zero);
        for (auto& [t, c] : g.terms())
          row[detail::monomial_index(cols, t * m)] = c;
        rows.push_back(std::move(row));
      }
    }
    if (rows.empty()) return 0;
    if constexpr (std::is_same_v<K, Quad>) {
      return quad_rank_bareiss(rows);
    } else {
      return generic_rank(rows, I.exemplar());
    }
  }
}

template <class K>
unsigned long hilbert_function(const Ideal<K>& I, unsigned n) {
  unsigned long total = binom_ul(n + I.nvars() - 1, I.nvars() - 1);
  return total - static_cast<unsigned long>(graded_piece_rank(I, n));
}

// ---------------------------------------------------------------------------
// Hilbert polynomial of the tail, with a guarded stabilization rule: the
// least-degree polynomial (degree <= cap) through e+1 consecutive values that
// also predicts every remaining value in the window, with at least 2
// predictions checked.

struct HilbertData {
  std::map<unsigned, unsigned long> values;
  std::vector<Rat> fitted;  // coefficients low-to-high; empty = zero tail
  unsigned stable_from = 0;

  int dimension() const { return static_cast<int>(fitted.size()) - 1; }
  Rat leading() const;
  unsigned long scheme_degree() const;  // leading coefficient * dimension!
  std::string to_json() const;
};

// Fit helper shared by every coefficient ring (values are plain integers).
std::optional<std::pair<std::vector<Rat>, unsigned>> fit_hilbert_tail(
    const std::vector<unsigned long>& values, unsigned cap);

Rat eval_rat_poly(const std::vector<Rat>& coeffs, long n);

inline constexpr unsigned kHilbertWindow = 8;
inline constexpr unsigned kHilbertFitCap = 3;

template <class K>
HilbertData hilbert_polynomial(const Ideal<K>& I,
                               unsigned window = kHilbertWindow,
                               unsigned cap = kHilbertFitCap) {
  I.ensure_homogeneous();
  std::vector<unsigned long> vals;
  bool towered = false;
  if constexpr (std::is_same_v<K, Fp>) {
    if (I.exemplar().p < (1ull << 31)) {
      GradedRankTower tower(static_cast<std::uint32_t>(I.exemplar().p),
                            I.ambient(), I.gens());
      for (unsigned n = 0; n <= window; ++n)
        vals.push_back(tower.hilbert_at(n));
      towered = true;
    }
  }
  if (!towered)
    for (unsigned n = 0; n <= window; ++n)
      vals.push_back(hilbert_function(I, n));
  HilbertData out;
  for (unsigned n = 0; n <= window; ++n) out.values[n] = vals[n];
  auto fit = fit_hilbert_tail(vals, cap);
  if (!fit)
    throw NotStabilized(
        "hilbert_polynomial: no stable fit of degree <= " +
        std::to_string(cap) + " in window [0, " + std::to_string(window) +
        "]");
  out.fitted = std::move(fit->first);
  out.stable_from = fit->second;
  return out;
}

// ---------------------------------------------------------------------------
// Forms of a given degree vanishing to a given order at every input point,
// optionally restricted to one weight class of a cyclic action. Vanishing to
// order m is imposed in the pivot chart via Hasse derivatives, which keeps
// the conditions exact in small characteristic.

template <class K>
std::vector<Polynomial<K>> vanishing_forms(
    const std::vector<ProjPoint<K>>& points, const AmbientPtr& amb,
    const K& like, unsigned degree, unsigned order = 1,
    const CyclicAction<K>* act = nullptr, unsigned weight = 0) {
  if (degree < 1) throw InputError("vanishing_forms: degree must be >= 1");
  if (order < 1) throw InputError("vanishing_forms: order must be >= 1");
  const std::size_t nv = amb->nvars();
  std::vector<Monomial> basis =
      act ? weight_component_basis(nv, degree, weight, *act)
          : monomials_of_degree(nv, degree);
  std::vector<std::vector<K>> rows;
  const K zero = RingOps<K>::zero(like);
  for (auto& pt : points) {
    if (pt.coords.size() != nv)
      throw DimensionMismatch("vanishing_forms: point arity mismatch");
    for (unsigned r = 0; r < order; ++r) {
      for (auto& alpha : monomials_of_degree(nv, r)) {
        if (alpha.e[pt.pivot] != 0) continue;  // chart: pivot is constant 1
        std::vector<K> row(basis.size(), zero);
        bool nonzero = false;
        for (std::size_t j = 0; j < basis.size(); ++j) {
          if (!alpha.divides(basis[j])) continue;
          mpz_class binprod = 1;
          for (std::size_t i = 0; i < nv; ++i) {
            mpz_class b;
            mpz_bin_uiui(b.get_mpz_t(), basis[j].e[i], alpha.e[i]);
            binprod *= b;
          }
          K v = RingOps<K>::from_rat(like, Rat(binprod));
          Monomial rest = basis[j] / alpha;
          for (std::size_t i = 0; i < nv; ++i)
            for (unsigned t = 0; t < rest.e[i]; ++t) v = v * pt.coords[i];
          row[j] = v;
          if (!RingOps<K>::is_zero(v)) nonzero = true;
        }
        if (nonzero) rows.push_back(std::move(row));
      }
    }
  }
  std::vector<std::vector<K>> kernel;
  if (rows.empty()) {
    kernel.assign(basis.size(), std::vector<K>(basis.size(), zero));
    const K one = RingOps<K>::one(like);
    for (std::size_t j = 0; j < basis.size(); ++j) kernel[j][j] = one;
  } else {
    kernel = generic_nullspace(rows, like);
  }
  std::vector<Polynomial<K>> out;
  for (auto& v : kernel) {
    Polynomial<K> f(amb, like);
    for (std::size_t j = 0; j < basis.size(); ++j) f.add_term(basis[j], v[j]);
    if (!f.is_zero()) out.push_back(std::move(f));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Singular locus: the input ideal plus all codim x codim minors of the
// Jacobian of its generators.

template <class K>
Polynomial<K> poly_det(const std::vector<std::vector<Polynomial<K>>>& m);

namespace detail {
void combinations(std::size_t n, std::size_t k,
                  const std::function<void(const std::vector<std::size_t>&)>& f);
}  // namespace detail

template <class K>
Ideal<K> singular_locus(const Ideal<K>& I, std::size_t codim) {
  if (codim < 1) throw InputError("singular_locus: codim must be >= 1");
  I.ensure_homogeneous();
  const std::size_t nv = I.nvars(), ng = I.gens().size();
  Ideal<K> out(I.ambient(), I.exemplar(), I.gens());
  if (codim > ng || codim > nv) return out;  // no minors of that size
  std::vector<std::vector<Polynomial<K>>> jac(
      ng, std::vector<Polynomial<K>>());
  for (std::size_t i = 0; i < ng; ++i)
    for (std::size_t j = 0; j < nv; ++j)
      jac[i].push_back(I.gens()[i].partial(j));
  detail::combinations(ng, codim, [&](const std::vector<std::size_t>& rs) {
    detail::combinations(nv, codim, [&](const std::vector<std::size_t>& cs) {
      std::vector<std::vector<Polynomial<K>>> sub;
      for (auto r : rs) {
        std::vector<Polynomial<K>> row;
        for (auto c : cs) row.push_back(jac[r][c]);
        sub.push_back(std::move(row));
      }
      out.add(poly_det(sub));
    });
  });
  return out;
}

// Laplace expansion along the first row; entries are exact polynomials.
template <class K>
Polynomial<K> poly_det(const std::vector<std::vector<Polynomial<K>>>& m) {
  const std::size_t n = m.size();
  if (n == 0) throw InputError("poly_det: empty matrix");
  if (n == 1) return m[0][0];
  Polynomial<K> acc(m[0][0].ambient(), m[0][0].exemplar());
  for (std::size_t j = 0; j < n; ++j) {
    if (m[0][j].is_zero()) continue;
    std::vector<std::vector<Polynomial<K>>> sub;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<Polynomial<K>> row;
      for (std::size_t c = 0; c < n; ++c)
        if (c != j) row.push_back(m[i][c]);
      sub.push_back(std::move(row));
    }
    Polynomial<K> t = m[0][j] * poly_det(sub);
    acc = (j % 2 == 0) ? acc + t : acc - t;
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Hyperplane restriction: substitute the cut's pivot variable away, mapping
// polynomials on P^N into the hyperplane's own P^(N-1).

template <class K>
struct HyperplaneModel {
  AmbientPtr sub_amb;                    // ambient with the pivot removed
  std::size_t pivot;                     // substituted variable (in the big ambient)
  std::vector<Polynomial<K>> images;     // big-ambient variable images
};

template <class K>
HyperplaneModel<K> hyperplane_model(const AmbientPtr& amb,
                                    const Polynomial<K>& cut) {
  if (cut.is_zero() || cut.degree() != 1 || !cut.is_homogeneous())
    throw InputError("hyperplane restriction: cut must be a nonzero linear form");
  const std::size_t nv = amb->nvars();
  std::vector<K> coeff(nv, RingOps<K>::zero(cut.exemplar()));
  for (auto& [m, c] : cut.terms())
    for (std::size_t i = 0; i < nv; ++i)
      if (m.e[i] == 1) coeff[i] = c;
  std::size_t piv = nv;
  for (std::size_t i = nv; i-- > 0;)
    if (RingOps<K>::is_unit(coeff[i])) {
      piv = i;
      break;
    }
  if (piv == nv)
    throw InputError("hyperplane restriction: no unit coefficient in the cut");

  HyperplaneModel<K> model;
  model.pivot = piv;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < nv; ++i)
    if (i != piv) names.push_back(amb->names[i]);
  model.sub_amb = make_ambient(std::move(names));

  K scale = -RingOps<K>::inv(coeff[piv]);
  Polynomial<K> pivot_image(model.sub_amb, cut.exemplar());
  std::size_t sub_j = 0;
  for (std::size_t i = 0; i < nv; ++i) {
    if (i == piv) continue;
    Monomial m(nv - 1);
    m.e[sub_j] = 1;
    pivot_image.add_term(m, scale * coeff[i]);
    ++sub_j;
  }
  sub_j = 0;
  for (std::size_t i = 0; i < nv; ++i) {
    if (i == piv) {
      model.images.push_back(pivot_image);
    } else {
      model.images.push_back(
          Polynomial<K>::variable(model.sub_amb, sub_j, cut.exemplar()));
      ++sub_j;
    }
  }
  return model;
}

template <class K>
Ideal<K> restrict_to_hyperplane(const Ideal<K>& I, const Polynomial<K>& cut) {
  auto model = hyperplane_model(I.ambient(), cut);
  Ideal<K> out(model.sub_amb, I.exemplar());
  for (auto& g : I.gens()) out.add(g.compose(model.images));
  return out;
}

// ---------------------------------------------------------------------------
// Nonreducedness of a hyperplane section of a surface: true iff the singular
// locus of the restricted curve is at least 1-dimensional. The restriction
// model is rank-equivalent to the ambient Jacobian test: at a point of the
// hyperplane the full Jacobian rank is 1 + the restricted rank.

template <class K>
bool is_nonreduced_curve(const Ideal<K>& surface, const Polynomial<K>& cut,
                         unsigned window = kHilbertWindow,
                         unsigned cap = kHilbertFitCap) {
  surface.ensure_homogeneous();
  Ideal<K> curve = restrict_to_hyperplane(surface, cut);
  HilbertData hd = hilbert_polynomial(curve, window, cap);
  if (hd.dimension() != 1)
    throw NotACurve("is_nonreduced_curve: section has dimension " +
                    std::to_string(hd.dimension()));
  if (curve.nvars() < 3) return false;  // the section is all of P^1: reduced
  std::size_t codim = curve.nvars() - 2;
  Ideal<K> sing = singular_locus(curve, codim);
  HilbertData sh = hilbert_polynomial(sing, window, cap);
  return sh.dimension() >= 1;
}

// ---------------------------------------------------------------------------
// Jets: a truncated expected_dim-parameter power-series chart of V(I) at a
// smooth point, solved order by order against the fixed Jacobian.

template <class K>
struct JetExpansion {
  AmbientPtr amb;     // ambient of the variety
  AmbientPtr params;  // jet parameters (s, t, ... )
  ProjPoint<K> point;
  unsigned order = 1;
  std::vector<Polynomial<K>> series;  // one per ambient coordinate
};

inline AmbientPtr jet_param_ambient(std::size_t dim) {
  if (dim == 1) return make_ambient({"s"});
  if (dim == 2) return make_ambient({"s", "t"});
  return make_ambient("s", dim);
}

template <class K>
JetExpansion<K> jets_at_point(const Ideal<K>& I, const ProjPoint<K>& pt,
                              unsigned order, std::size_t expected_dim = 2) {
  if (order < 1) throw InputError("jets_at_point: order must be >= 1");
  I.ensure_homogeneous();
  if (!satisfies(I, pt))
    throw InputError("jets_at_point: point is not on the variety");
  const std::size_t nv = I.nvars(), ng = I.gens().size();
  const K zero = RingOps<K>::zero(I.exemplar());

  // Chart Jacobian at the point: strike the pivot column.
  std::vector<std::size_t> chart_cols;
  for (std::size_t j = 0; j < nv; ++j)
    if (j != pt.pivot) chart_cols.push_back(j);
  std::vector<std::vector<K>> jac(ng, std::vector<K>(chart_cols.size(), zero));
  for (std::size_t i = 0; i < ng; ++i)
    for (std::size_t j = 0; j < chart_cols.size(); ++j)
      jac[i][j] = I.gens()[i].partial(chart_cols[j]).evaluate(pt.coords);
  std::vector<std::vector<K>> kernel;
  if (ng == 0) {
    const K one = RingOps<K>::one(I.exemplar());
    kernel.assign(chart_cols.size(), std::vector<K>(chart_cols.size(), zero));
    for (std::size_t j = 0; j < chart_cols.size(); ++j) kernel[j][j] = one;
  } else {
    kernel = generic_nullspace(jac, I.exemplar());
  }
  if (kernel.size() != expected_dim)
    throw SingularPoint("jets_at_point: tangent dimension " +
                        std::to_string(kernel.size()) + ", expected " +
                        std::to_string(expected_dim));

  JetExpansion<K> jet;
  jet.amb = I.ambient();
  jet.params = jet_param_ambient(expected_dim);
  jet.point = pt;
  jet.order = order;
  jet.series.assign(nv, Polynomial<K>(jet.params, I.exemplar()));
  for (std::size_t j = 0; j < nv; ++j)
    jet.series[j].add_term(Monomial(expected_dim), pt.coords[j]);
  for (std::size_t r = 0; r < expected_dim; ++r)
    for (std::size_t j = 0; j < chart_cols.size(); ++j) {
      Monomial m(expected_dim);
      m.e[r] = 1;
      jet.series[chart_cols[j]].add_term(m, kernel[r][j]);
    }

  for (unsigned d = 2; d <= order; ++d) {
    auto mons = monomials_of_degree(expected_dim, d);
    // One linear solve per degree-d parameter monomial.
    std::vector<Polynomial<K>> residual;
    for (auto& g : I.gens()) residual.push_back(g.compose(jet.series, d));
    for (auto& beta : mons) {
      std::vector<K> rhs(ng, zero);
      bool any = false;
      for (std::size_t i = 0; i < ng; ++i) {
        auto it = residual[i].terms().find(beta);
        if (it != residual[i].terms().end()) {
          rhs[i] = -it->second;
          any = true;
        }
      }
      if (!any) continue;
      auto corr = generic_solve(jac, rhs, I.exemplar());
      if (!corr)
        throw NoLift("jets_at_point: inconsistent correction at order " +
                     std::to_string(d));
      for (std::size_t j = 0; j < chart_cols.size(); ++j)
        jet.series[chart_cols[j]].add_term(beta, (*corr)[j]);
    }
  }

  for (auto& g : I.gens())
    if (!g.compose(jet.series, order).is_zero())
      throw NoLift("jets_at_point: residual after final order");
  return jet;
}

// Linear conditions on ansatz coefficients equivalent to: the composition of
// the ansatz with the jet has no term of total order < `order`. One row per
// parameter monomial of degree < order, one column per ansatz member.
template <class K>
std::vector<std::vector<K>> vanish_to_order_conditions(
    const std::vector<Polynomial<K>>& ansatz, const JetExpansion<K>& jet,
    unsigned order) {
  if (order < 1)
    throw InputError("vanish_to_order_conditions: order must be >= 1");
  if (jet.order + 1 < order)
    throw InputError("vanish_to_order_conditions: jet order too low");
  const K zero = RingOps<K>::zero(jet.point.coords[jet.point.pivot]);
  std::vector<Monomial> rows_idx;
  for (unsigned d = 0; d < order; ++d)
    for (auto& m : monomials_of_degree(jet.params->nvars(), d))
      rows_idx.push_back(m);
  std::vector<std::vector<K>> rows(rows_idx.size(),
                                   std::vector<K>(ansatz.size(), zero));
  for (std::size_t c = 0; c < ansatz.size(); ++c) {
    Polynomial<K> comp = ansatz[c].compose(jet.series, order - 1);
    for (std::size_t r = 0; r < rows_idx.size(); ++r) {
      auto it = comp.terms().find(rows_idx[r]);
      if (it != comp.terms().end()) rows[r][c] = it->second;
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Buchberger. Reduced Groebner basis: monic, auto-reduced, sorted by leading
// monomial; inhomogeneous input is allowed.

template <class K>
Polynomial<K> normal_form(Polynomial<K> f,
                          const std::vector<Polynomial<K>>& basis,
                          MonomialOrder ord) {
  Polynomial<K> rem(f.ambient(), f.exemplar());
  while (!f.is_zero()) {
    auto [lm, lc] = f.leading(ord);
    bool reduced = false;
    for (auto& g : basis) {
      if (g.is_zero()) continue;
      auto [gm, gc] = g.leading(ord);
      if (!gm.divides(lm)) continue;
      K factor = lc * RingOps<K>::inv(gc);
      Polynomial<K> mult(f.ambient(), f.exemplar());
      mult.add_term(lm / gm, factor);
      f = f - mult * g;
      reduced = true;
      break;
    }
    if (!reduced) {
      Polynomial<K> head(f.ambient(), f.exemplar());
      head.add_term(lm, lc);
      rem = rem + head;
      f = f - head;
    }
  }
  return rem;
}

template <class K>
std::vector<Polynomial<K>> groebner_basis(std::vector<Polynomial<K>> gens,
                                          MonomialOrder ord) {
  std::vector<Polynomial<K>> basis;
  for (auto& g : gens)
    if (!g.is_zero()) basis.push_back(g);
  if (basis.empty()) return basis;

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = i + 1; j < basis.size(); ++j) pairs.emplace_back(i, j);

  while (!pairs.empty()) {
    auto [i, j] = pairs.back();
    pairs.pop_back();
    auto [mi, ci] = basis[i].leading(ord);
    auto [mj, cj] = basis[j].leading(ord);
    Monomial l = Monomial::lcm(mi, mj);
    // Product criterion: coprime leading monomials reduce to zero.
    if (l == mi * mj) continue;
    Polynomial<K> si(basis[i].ambient(), basis[i].exemplar());
    si.add_term(l / mi, RingOps<K>::inv(ci));
    Polynomial<K> sj(basis[j].ambient(), basis[j].exemplar());
    sj.add_term(l / mj, RingOps<K>::inv(cj));
    Polynomial<K> s = si * basis[i] - sj * basis[j];
    Polynomial<K> r = normal_form(s, basis, ord);
    if (r.is_zero()) continue;
    for (std::size_t t = 0; t < basis.size(); ++t)
      pairs.emplace_back(t, basis.size());
    basis.push_back(std::move(r));
  }

  // Minimalize: drop members whose leading monomial another one divides.
  std::vector<Polynomial<K>> minimal;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    auto [mi, ci] = basis[i].leading(ord);
    bool keep = true;
    for (std::size_t j = 0; j < basis.size(); ++j) {
      if (i == j) continue;
      auto [mj, cj] = basis[j].leading(ord);
      if (mj.divides(mi) && !(mi == mj && j > i)) {
        keep = false;
        break;
      }
    }
    if (keep) minimal.push_back(basis[i]);
  }
  // Reduce tails and normalize to monic.
  std::vector<Polynomial<K>> reduced;
  for (std::size_t i = 0; i < minimal.size(); ++i) {
    std::vector<Polynomial<K>> others;
    for (std::size_t j = 0; j < minimal.size(); ++j)
      if (j != i) others.push_back(minimal[j]);
    Polynomial<K> r = normal_form(minimal[i], others, ord);
    if (r.is_zero()) continue;
    auto [lm, lc] = r.leading(ord);
    reduced.push_back(RingOps<K>::inv(lc) * r);
  }
  std::sort(reduced.begin(), reduced.end(),
            [&](const Polynomial<K>& a, const Polynomial<K>& b) {
              return monomial_less(a.leading(ord).first, b.leading(ord).first,
                                   ord);
            });
  return reduced;
}

template <class K>
Ideal<K> groebner_basis(const Ideal<K>& I, MonomialOrder ord) {
  return Ideal<K>(I.ambient(), I.exemplar(), groebner_basis(I.gens(), ord));
}

// ---------------------------------------------------------------------------
// Zero-dimensional solving and point sampling over F_p.

struct ZeroDimSolution {
  std::vector<ProjPoint<Fp>> points;
  unsigned long expected = 0;  // the constant Hilbert value
  // True when the rational points do not exhaust the scheme: the remaining
  // length sits over extension fields or in multiple structure.
  bool residual = false;
};

ZeroDimSolution solve_zero_dim(const Ideal<Fp>& I,
                               unsigned window = kHilbertWindow,
                               unsigned cap = kHilbertFitCap);

std::vector<ProjPoint<Fp>> sample_points(const Ideal<Fp>& I, std::size_t count,
                                         std::uint64_t seed,
                                         std::size_t max_slices = 200);

}  // namespace tvx

#endif
