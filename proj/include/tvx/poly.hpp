// Copyright (c) 2026 the tvx authors
// SPDX-License-Identifier: Apache-2.0
#ifndef TVX_POLY_HPP
#define TVX_POLY_HPP

// Sparse multivariate polynomials over an exact coefficient ring, with the
// monomial machinery (orders, weights under a cyclic action) and a parser /
// canonical printer for the textual form used in ideal files.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "tvx/errors.hpp"
#include "tvx/ring.hpp"

namespace tvx {

// ---------------------------------------------------------------------------
// Ambient space: ordered variable names, shared between polynomials.

struct Ambient {
  std::vector<std::string> names;
  std::size_t nvars() const { return names.size(); }
  std::optional<std::size_t> index_of(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return i;
    return std::nullopt;
  }
};

using AmbientPtr = std::shared_ptr<const Ambient>;

inline AmbientPtr make_ambient(std::vector<std::string> names) {
  auto a = std::make_shared<Ambient>();
  a->names = std::move(names);
  return a;
}

// Convenience: x0, x1, ..., x{n-1}.
inline AmbientPtr make_ambient(const std::string& stem, std::size_t n) {
  std::vector<std::string> names;
  names.reserve(n);
  for (std::size_t i = 0; i < n; ++i) names.push_back(stem + std::to_string(i));
  return make_ambient(std::move(names));
}

// ---------------------------------------------------------------------------
// Monomials.

struct Monomial {
  std::vector<std::uint16_t> e;

  Monomial() = default;
  explicit Monomial(std::size_t nvars) : e(nvars, 0) {}

  unsigned degree() const {
    unsigned d = 0;
    for (auto x : e) d += x;
    return d;
  }
  bool is_one() const {
    return std::all_of(e.begin(), e.end(), [](auto x) { return x == 0; });
  }
  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial r(a.e.size());
    for (std::size_t i = 0; i < a.e.size(); ++i)
      r.e[i] = static_cast<std::uint16_t>(a.e[i] + b.e[i]);
    return r;
  }
  bool divides(const Monomial& b) const {
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i] > b.e[i]) return false;
    return true;
  }
  friend Monomial operator/(const Monomial& a, const Monomial& b) {
    Monomial r(a.e.size());
    for (std::size_t i = 0; i < a.e.size(); ++i)
      r.e[i] = static_cast<std::uint16_t>(a.e[i] - b.e[i]);
    return r;
  }
  static Monomial lcm(const Monomial& a, const Monomial& b) {
    Monomial r(a.e.size());
    for (std::size_t i = 0; i < a.e.size(); ++i)
      r.e[i] = std::max(a.e[i], b.e[i]);
    return r;
  }
  friend bool operator==(const Monomial& a, const Monomial& b) {
    return a.e == b.e;
  }
  friend bool operator!=(const Monomial& a, const Monomial& b) {
    return !(a == b);
  }
};

enum class MonomialOrder { kDegRevLex, kLex, kDegLex };

// true iff a < b in the given order.
inline bool monomial_less(const Monomial& a, const Monomial& b,
                          MonomialOrder ord) {
  switch (ord) {
    case MonomialOrder::kLex:
      for (std::size_t i = 0; i < a.e.size(); ++i)
        if (a.e[i] != b.e[i]) return a.e[i] < b.e[i];
      return false;
    case MonomialOrder::kDegLex: {
      unsigned da = a.degree(), db = b.degree();
      if (da != db) return da < db;
      for (std::size_t i = 0; i < a.e.size(); ++i)
        if (a.e[i] != b.e[i]) return a.e[i] < b.e[i];
      return false;
    }
    case MonomialOrder::kDegRevLex:
    default: {
      unsigned da = a.degree(), db = b.degree();
      if (da != db) return da < db;
      for (std::size_t i = a.e.size(); i-- > 0;)
        if (a.e[i] != b.e[i]) return a.e[i] > b.e[i];
      return false;
    }
  }
}

struct DegRevLexLess {
  bool operator()(const Monomial& a, const Monomial& b) const {
    return monomial_less(a, b, MonomialOrder::kDegRevLex);
  }
};

// All monomials of the given total degree, ascending in degrevlex.
std::vector<Monomial> monomials_of_degree(std::size_t nvars, unsigned degree);

// ---------------------------------------------------------------------------
// Cyclic group action: a diagonal part (order n, one weight per variable)
// and an optional permutation part of order m with a scalar character,
// sigma(x_i) = character[i] * x_{perm[i]}.

template <class K>
struct CyclicAction {
  unsigned n = 1;
  std::vector<unsigned> weights;
  std::size_t perm_order = 1;
  std::vector<std::size_t> perm;  // empty = identity
  std::vector<K> character;       // empty = all ones

  bool has_perm() const { return !perm.empty(); }

  void validate(std::size_t nvars, const K& like) const {
    if (n == 0) throw InputError("CyclicAction: order must be positive");
    if (weights.size() != nvars)
      throw DimensionMismatch("CyclicAction: one weight per variable required");
    if (!perm.empty()) {
      if (perm.size() != nvars || perm_order == 0)
        throw DimensionMismatch("CyclicAction: bad permutation");
      if (!character.empty() && character.size() != nvars)
        throw DimensionMismatch("CyclicAction: bad character length");
      for (std::size_t i = 0; i < nvars; ++i) {
        std::size_t j = i;
        K scal = RingOps<K>::one(like);
        for (std::size_t step = 0; step < perm_order; ++step) {
          if (perm[j] >= nvars)
            throw DimensionMismatch("CyclicAction: permutation out of range");
          if (!character.empty()) scal = scal * character[j];
          j = perm[j];
        }
        if (j != i || !(scal == RingOps<K>::one(like)))
          throw InputError("CyclicAction: perm with character is not of the "
                           "declared order");
      }
    }
  }
};

template <class K>
unsigned monomial_weight(const Monomial& m, const CyclicAction<K>& act) {
  unsigned long w = 0;
  for (std::size_t i = 0; i < m.e.size(); ++i)
    w += static_cast<unsigned long>(m.e[i]) * (act.weights[i] % act.n);
  return static_cast<unsigned>(w % act.n);
}

// Monomials of total degree d and weight w, ascending degrevlex. The weight
// classes partition monomials_of_degree (tested as an invariant).
template <class K>
std::vector<Monomial> weight_component_basis(std::size_t nvars, unsigned d,
                                             unsigned w,
                                             const CyclicAction<K>& act) {
  std::vector<Monomial> out;
  for (auto& m : monomials_of_degree(nvars, d))
    if (monomial_weight(m, act) == w % act.n) out.push_back(m);
  return out;
}

// ---------------------------------------------------------------------------
// Polynomial.

template <class K>
class Polynomial {
 public:
  using TermMap = std::map<Monomial, K, DegRevLexLess>;

  Polynomial(AmbientPtr amb, K like)
      : amb_(std::move(amb)), like_(std::move(like)) {}

  const AmbientPtr& ambient() const { return amb_; }
  const K& exemplar() const { return like_; }
  const TermMap& terms() const { return terms_; }
  std::size_t nvars() const { return amb_->nvars(); }

  bool is_zero() const { return terms_.empty(); }
  int degree() const {
    if (terms_.empty()) return -1;
    // degrevlex: the map's last key has maximal total degree.
    return static_cast<int>(terms_.rbegin()->first.degree());
  }
  bool is_homogeneous() const {
    if (terms_.empty()) return true;
    unsigned d = terms_.begin()->first.degree();
    for (auto& [m, c] : terms_)
      if (m.degree() != d) return false;
    return true;
  }

  void add_term(const Monomial& m, const K& c) {
    if (RingOps<K>::is_zero(c)) return;
    if (m.e.size() != nvars())
      throw DimensionMismatch("Polynomial: monomial arity mismatch");
    auto it = terms_.find(m);
    if (it == terms_.end()) {
      terms_.emplace(m, c);
    } else {
      K s = it->second + c;
      if (RingOps<K>::is_zero(s))
        terms_.erase(it);
      else
        it->second = std::move(s);
    }
  }

  static Polynomial zero(AmbientPtr amb, const K& like) {
    return Polynomial(std::move(amb), like);
  }
  static Polynomial constant(AmbientPtr amb, const K& c) {
    Polynomial f(amb, c);
    f.add_term(Monomial(amb->nvars()), c);
    return f;
  }
  static Polynomial variable(AmbientPtr amb, std::size_t i, const K& like) {
    Polynomial f(amb, like);
    Monomial m(amb->nvars());
    m.e[i] = 1;
    f.add_term(m, RingOps<K>::one(like));
    return f;
  }

  friend Polynomial operator+(const Polynomial& f, const Polynomial& g) {
    f.check(g);
    Polynomial r = f;
    for (auto& [m, c] : g.terms_) r.add_term(m, c);
    return r;
  }
  friend Polynomial operator-(const Polynomial& f, const Polynomial& g) {
    f.check(g);
    Polynomial r = f;
    for (auto& [m, c] : g.terms_) r.add_term(m, -c);
    return r;
  }
  friend Polynomial operator-(const Polynomial& f) {
    Polynomial r(f.amb_, f.like_);
    for (auto& [m, c] : f.terms_) r.terms_.emplace(m, -c);
    return r;
  }
  friend Polynomial operator*(const Polynomial& f, const Polynomial& g) {
    f.check(g);
    return f.mul_truncated(g, std::nullopt);
  }
  friend Polynomial operator*(const K& c, const Polynomial& f) {
    Polynomial r(f.amb_, f.like_);
    for (auto& [m, fc] : f.terms_) r.add_term(m, c * fc);
    return r;
  }
  friend bool operator==(const Polynomial& f, const Polynomial& g) {
    f.check(g);
    if (f.terms_.size() != g.terms_.size()) return false;
    auto it = f.terms_.begin(), jt = g.terms_.begin();
    for (; it != f.terms_.end(); ++it, ++jt)
      if (it->first != jt->first || !(it->second == jt->second)) return false;
    return true;
  }
  friend bool operator!=(const Polynomial& f, const Polynomial& g) {
    return !(f == g);
  }

  // Product with every term of total degree above max_deg dropped.
  Polynomial mul_truncated(const Polynomial& g,
                           std::optional<unsigned> max_deg) const {
    Polynomial r(amb_, like_);
    for (auto& [mf, cf] : terms_)
      for (auto& [mg, cg] : g.terms_) {
        Monomial m = mf * mg;
        if (max_deg && m.degree() > *max_deg) continue;
        r.add_term(m, cf * cg);
      }
    return r;
  }

  Polynomial truncated(unsigned max_deg) const {
    Polynomial r(amb_, like_);
    for (auto& [m, c] : terms_)
      if (m.degree() <= max_deg) r.add_term(m, c);
    return r;
  }

  Polynomial pow(unsigned e, std::optional<unsigned> max_deg = {}) const {
    Polynomial acc = constant(amb_, RingOps<K>::one(like_));
    Polynomial base = *this;
    while (e) {
      if (e & 1) acc = acc.mul_truncated(base, max_deg);
      e >>= 1;
      if (e) base = base.mul_truncated(base, max_deg);
    }
    return acc;
  }

  K evaluate(const std::vector<K>& point) const {
    if (point.size() != nvars())
      throw DimensionMismatch("evaluate: wrong point arity");
    K acc = RingOps<K>::zero(like_);
    for (auto& [m, c] : terms_) {
      K t = c;
      for (std::size_t i = 0; i < m.e.size(); ++i)
        for (unsigned j = 0; j < m.e[i]; ++j) t = t * point[i];
      acc = acc + t;
    }
    return acc;
  }

  // Formal partial derivative.
  Polynomial partial(std::size_t i) const {
    Polynomial r(amb_, like_);
    for (auto& [m, c] : terms_) {
      if (m.e[i] == 0) continue;
      Monomial mm = m;
      mm.e[i] -= 1;
      r.add_term(mm, RingOps<K>::from_rat(like_, Rat(long(m.e[i]))) * c);
    }
    return r;
  }

  // Hasse (divided-power) derivative for the multi-index alpha; exact in any
  // characteristic: x^e |-> binom(e, alpha) x^{e-alpha}.
  Polynomial hasse_derivative(const Monomial& alpha) const {
    Polynomial r(amb_, like_);
    for (auto& [m, c] : terms_) {
      if (!alpha.divides(m)) continue;
      mpz_class binprod = 1;
      for (std::size_t i = 0; i < m.e.size(); ++i) {
        mpz_class b;
        mpz_bin_uiui(b.get_mpz_t(), m.e[i], alpha.e[i]);
        binprod *= b;
      }
      r.add_term(m / alpha,
                 RingOps<K>::from_rat(like_, Rat(binprod)) * c);
    }
    return r;
  }

  // Substitutes images[i] for variable i; images live in their own ambient.
  Polynomial compose(const std::vector<Polynomial>& images,
                     std::optional<unsigned> max_deg = {}) const {
    if (images.size() != nvars())
      throw DimensionMismatch("compose: one image per variable required");
    AmbientPtr target = images.empty() ? amb_ : images[0].amb_;
    Polynomial r(target, like_);
    for (auto& [m, c] : terms_) {
      Polynomial t = Polynomial::constant(target, RingOps<K>::one(like_));
      for (std::size_t i = 0; i < m.e.size(); ++i)
        if (m.e[i] > 0)
          t = t.mul_truncated(images[i].pow(m.e[i], max_deg), max_deg);
      r = r + c * t;
    }
    return r;
  }

  // The leading term under the given order (throws on zero).
  std::pair<Monomial, K> leading(MonomialOrder ord) const {
    if (terms_.empty()) throw InputError("leading: zero polynomial");
    auto best = terms_.begin();
    for (auto it = std::next(terms_.begin()); it != terms_.end(); ++it)
      if (monomial_less(best->first, it->first, ord)) best = it;
    return {best->first, best->second};
  }

  std::string to_string() const;

 private:
  void check(const Polynomial& g) const {
    if (amb_ != g.amb_ && amb_->names != g.amb_->names)
      throw DimensionMismatch("Polynomial: mixed ambients");
  }
  AmbientPtr amb_;
  K like_;
  TermMap terms_;
};

// Applies the cyclic action generator to f: x_i -> character[i] * x_{perm[i]}.
template <class K>
Polynomial<K> act_on_poly(const Polynomial<K>& f, const CyclicAction<K>& act) {
  if (!act.has_perm()) return f;
  Polynomial<K> r(f.ambient(), f.exemplar());
  for (auto& [m, c] : f.terms()) {
    Monomial mm(m.e.size());
    K coeff = c;
    for (std::size_t i = 0; i < m.e.size(); ++i) {
      if (m.e[i] == 0) continue;
      mm.e[act.perm[i]] = static_cast<std::uint16_t>(mm.e[act.perm[i]] + m.e[i]);
      if (!act.character.empty())
        for (unsigned j = 0; j < m.e[i]; ++j) coeff = coeff * act.character[i];
    }
    r.add_term(mm, coeff);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Parsing. Grammar (whitespace-insensitive):
//   poly  := ['-'] term (('+' | '-') term)*
//   term  := atom ('*' atom)*
//   atom  := nat ['/' nat] | '(' quad ')' ['/' nat] | 'r' | var ['^' nat]
//   quad  := ['-'] part (('+' | '-') part)*
//   part  := nat ['/' nat] ['*' 'r'] | ['nat' '*'] 'r'
// 'r' is the formal square root of d (Quad coefficients only); 'sqrt' '(' d ')'
// is accepted as an alias. A variable named 'r' shadows the root symbol.

namespace detail {

struct Lexer {
  const std::string& s;
  std::size_t pos = 0, line = 1, col = 1;
  explicit Lexer(const std::string& text) : s(text) {}

  void skip_ws() {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) advance();
  }
  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }
  void advance() {
    if (pos < s.size()) {
      if (s[pos] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++pos;
    }
  }
  bool eat(char c) {
    if (peek() == c) {
      advance();
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c))
      throw SyntaxError(std::string("expected '") + c + "'", line, col);
  }
  bool at_end() { return peek() == '\0'; }

  mpz_class natural() {
    skip_ws();
    if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos])))
      throw SyntaxError("expected a number", line, col);
    std::string digits;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      digits += s[pos];
      advance();
    }
    return mpz_class(digits);
  }
  std::string ident() {
    skip_ws();
    if (pos >= s.size() ||
        !(std::isalpha(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
      throw SyntaxError("expected an identifier", line, col);
    std::string name;
    while (pos < s.size() &&
           (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) {
      name += s[pos];
      advance();
    }
    return name;
  }
};

// Rational plus root part accumulated while parsing one multiplicative atom
// chain: value = a + b * sqrt(d).
struct CoeffAcc {
  Rat a{1};
  Rat b{0};
  void mul_rat(const Rat& r) {
    a = a * r;
    b = b * r;
  }
  void mul_root(long d) {
    Rat na = b * Rat(d);
    b = a;
    a = na;
  }
  void mul(const CoeffAcc& o, long d) {
    Rat na = a * o.a + Rat(d) * b * o.b;
    Rat nb = a * o.b + b * o.a;
    a = na;
    b = nb;
  }
};

}  // namespace detail

template <class K>
Polynomial<K> parse_poly(const std::string& text, const AmbientPtr& amb,
                         const K& like) {
  detail::Lexer lx(text);
  const RingDesc desc = RingOps<K>::desc(like);
  const long d = desc.cls == RingDesc::kQuad ? desc.d : 0;
  const bool root_allowed =
      desc.cls == RingDesc::kQuad && !amb->index_of("r").has_value();

  auto parse_rat_after_int = [&](mpz_class num) -> Rat {
    if (lx.eat('/')) {
      mpz_class den = lx.natural();
      if (den == 0) throw SyntaxError("zero denominator", lx.line, lx.col);
      return Rat(mpq_class(num, den));
    }
    return Rat(mpq_class(num));
  };

  // part := nat ['/' nat] ['*' 'r'] | 'r'   (inside a parenthesized quad)
  auto parse_quad_part = [&]() -> detail::CoeffAcc {
    detail::CoeffAcc acc;
    char c = lx.peek();
    if (c == 'r' || std::isalpha(static_cast<unsigned char>(c))) {
      std::string name = lx.ident();
      if (name != "r")
        throw SyntaxError("only 'r' may appear inside a coefficient",
                          lx.line, lx.col);
      acc.mul_root(d);
      return acc;
    }
    acc.mul_rat(parse_rat_after_int(lx.natural()));
    if (lx.eat('*')) {
      std::string name = lx.ident();
      if (name != "r")
        throw SyntaxError("only 'r' may follow '*' inside a coefficient",
                          lx.line, lx.col);
      acc.mul_root(d);
    }
    return acc;
  };

  auto parse_paren_quad = [&]() -> detail::CoeffAcc {
    // consumes from after '(' to ')'
    detail::CoeffAcc sum;
    sum.a = Rat(0);
    sum.b = Rat(0);
    bool neg = lx.eat('-');
    for (;;) {
      detail::CoeffAcc part = parse_quad_part();
      if (neg) part.mul_rat(Rat(-1));
      sum.a = sum.a + part.a;
      sum.b = sum.b + part.b;
      if (lx.eat('+')) {
        neg = false;
      } else if (lx.eat('-')) {
        neg = true;
      } else {
        break;
      }
    }
    lx.expect(')');
    return sum;
  };

  Polynomial<K> out(amb, like);
  bool first = true;
  for (;;) {
    bool neg = false;
    if (first) {
      if (lx.eat('-')) neg = true;
      first = false;
    } else {
      if (lx.at_end()) break;
      if (lx.eat('+')) {
        neg = false;
      } else if (lx.eat('-')) {
        neg = true;
      } else {
        throw SyntaxError("expected '+' or '-' between terms", lx.line, lx.col);
      }
    }

    detail::CoeffAcc coeff;
    Monomial mono(amb->nvars());
    bool any_atom = false;
    for (;;) {
      char c = lx.peek();
      if (std::isdigit(static_cast<unsigned char>(c))) {
        coeff.mul_rat(parse_rat_after_int(lx.natural()));
      } else if (c == '(') {
        lx.advance();
        detail::CoeffAcc q = parse_paren_quad();
        if (lx.eat('/')) {
          mpz_class den = lx.natural();
          if (den == 0) throw SyntaxError("zero denominator", lx.line, lx.col);
          q.a = q.a * Rat(mpq_class(1, den));
          q.b = q.b * Rat(mpq_class(1, den));
        }
        if (!q.b.is_zero() && d == 0)
          throw CoefficientNotInRing(
              "quadratic coefficient in a non-quadratic ring");
        coeff.mul(q, d);
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        auto save_line = lx.line;
        auto save_col = lx.col;
        std::string name = lx.ident();
        if (name == "sqrt") {
          lx.expect('(');
          bool dneg = lx.eat('-');
          mpz_class dv = lx.natural();
          if (dneg) dv = -dv;
          lx.expect(')');
          if (d == 0 || dv != d)
            throw CoefficientNotInRing("sqrt(" + dv.get_str() +
                                       ") is not the ring's root");
          coeff.mul_root(d);
        } else if (name == "r" && root_allowed) {
          coeff.mul_root(d);
        } else {
          auto idx = amb->index_of(name);
          if (!idx)
            throw UnknownVariable("unknown variable '" + name + "' at line " +
                                  std::to_string(save_line) + ", column " +
                                  std::to_string(save_col));
          unsigned e = 1;
          if (lx.eat('^')) {
            mpz_class ev = lx.natural();
            if (ev > 60000) throw SyntaxError("exponent too large", lx.line, lx.col);
            e = static_cast<unsigned>(ev.get_ui());
          }
          mono.e[*idx] = static_cast<std::uint16_t>(mono.e[*idx] + e);
        }
      } else {
        throw SyntaxError("expected a coefficient or variable", lx.line,
                          lx.col);
      }
      any_atom = true;
      if (!lx.eat('*')) break;
    }
    if (!any_atom)
      throw SyntaxError("empty term", lx.line, lx.col);
    if (neg) coeff.mul_rat(Rat(-1));
    K c = RingOps<K>::from_parts(like, coeff.a, coeff.b);
    out.add_term(mono, c);
    if (lx.at_end()) break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Canonical printing: terms descending in degrevlex; coefficients via
// RingOps::str; "1 * mono" collapses to "mono"; a leading '-' in a printed
// coefficient becomes the term separator sign.

namespace detail {
std::string monomial_to_string(const Monomial& m, const Ambient& amb);
}

template <class K>
std::string Polynomial<K>::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    std::string cs = RingOps<K>::str(it->second);
    bool negative = !cs.empty() && cs[0] == '-';
    std::string body = negative ? cs.substr(1) : cs;
    std::string ms = detail::monomial_to_string(it->first, *amb_);
    std::string term;
    if (ms.empty()) {
      term = body;
    } else if (body == "1") {
      term = ms;
    } else {
      term = body + "*" + ms;
    }
    if (out.empty()) {
      out = negative ? "-" + term : term;
    } else {
      out += negative ? " - " : " + ";
      out += term;
    }
  }
  return out;
}

}  // namespace tvx

#endif
