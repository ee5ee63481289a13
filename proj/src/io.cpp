// Copyright (c) 2026 the tvx authors
// SPDX-License-Identifier: Apache-2.0

#include "tvx/io.hpp"

#include <fstream>
#include <sstream>

namespace tvx {

namespace {

std::string strip(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

mpz_class parse_mpz(const std::string& tok, const char* what) {
  try {
    return mpz_class(tok);
  } catch (const std::invalid_argument&) {
    throw InputError(std::string("poly file: bad ") + what + " '" + tok + "'");
  }
}

// Splits a point line on top-level commas. The coefficient grammar has no
// commas of its own, so this is a plain split.
std::vector<std::string> split_coords(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(strip(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(strip(cur));
  return out;
}

template <class K>
Ideal<K> build_ideal(const PolyFileData& f, const K& like) {
  Ideal<K> I(f.amb, like);
  for (const auto& e : f.entries) I.add(parse_poly(e, f.amb, like));
  return I;
}

template <class K>
std::vector<ProjPoint<K>> build_points(const PolyFileData& f, const K& like) {
  std::vector<ProjPoint<K>> out;
  for (const auto& e : f.entries) {
    auto coords = split_coords(e);
    if (coords.size() != f.amb->nvars())
      throw InputError("poly file: point with " +
                       std::to_string(coords.size()) + " coordinates in " +
                       std::to_string(f.amb->nvars()) + " variables");
    std::vector<K> vals;
    for (const auto& c : coords) {
      Polynomial<K> cp = parse_poly(c, f.amb, like);
      if (!cp.is_zero() && cp.degree() != 0)
        throw InputError("poly file: coordinate '" + c + "' is not constant");
      vals.push_back(cp.is_zero() ? RingOps<K>::zero(like)
                                  : cp.terms().begin()->second);
    }
    out.push_back(ProjPoint<K>::normalized(vals));
  }
  return out;
}

bool uses_root(const Polynomial<Quad>& g) {
  for (const auto& [m, cf] : g.terms())
    if (cf.b() != 0) return true;
  return false;
}

Polynomial<Rat> quad_poly_to_rat(const Polynomial<Quad>& g,
                                 const AmbientPtr& amb) {
  Polynomial<Rat> out(amb, Rat(0));
  for (const auto& [m, cf] : g.terms()) out.add_term(m, cf.rational_part());
  return out;
}

std::uint64_t fp_prime(const PolyFileData& f, std::uint64_t p) {
  if (f.ring.cls == RingDesc::kFp) {
    std::uint64_t fp = f.ring.p.get_ui();
    if (p != 0 && p != fp)
      throw InputError("poly file: file is over F_" + f.ring.p.get_str() +
                       ", requested p=" + std::to_string(p));
    return fp;
  }
  if (p == 0)
    throw InputError("poly file: a prime is required to reduce a " +
                     f.ring.text() + " file");
  return p;
}

}  // namespace

PolyFileData parse_poly_file(const std::string& text) {
  PolyFileData f;
  f.raw = text;
  std::istringstream in(text);
  std::string line;
  int header = 0;  // 0: expect ring, 1: expect vars, 2: entries
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = strip(line);
    if (line.empty()) continue;
    if (header == 0) {
      auto tok = split_ws(line);
      if (tok.size() < 2 || tok[0] != "ring")
        throw InputError("poly file: first line must be 'ring ...'");
      if (tok[1] == "Q" && tok.size() == 2) {
        f.ring = RingDesc{RingDesc::kQ, 0, 1, 0};
      } else if (tok[1] == "Fp" && tok.size() == 3) {
        f.ring = RingDesc{RingDesc::kFp, parse_mpz(tok[2], "prime"), 1, 0};
      } else if (tok[1] == "Zpk" && tok.size() == 4) {
        f.ring = RingDesc{RingDesc::kZpk, parse_mpz(tok[2], "prime"),
                          static_cast<unsigned>(
                              parse_mpz(tok[3], "exponent").get_ui()),
                          0};
      } else if (tok[1] == "Quad" && tok.size() == 3) {
        f.ring = RingDesc{RingDesc::kQuad, 0, 1,
                          static_cast<long>(parse_mpz(tok[2], "d").get_si())};
      } else {
        throw InputError("poly file: unknown ring '" + line + "'");
      }
      header = 1;
    } else if (header == 1) {
      auto tok = split_ws(line);
      if (tok.size() < 2 || tok[0] != "vars")
        throw InputError("poly file: second line must be 'vars ...'");
      f.amb = make_ambient(std::vector<std::string>(tok.begin() + 1,
                                                    tok.end()));
      header = 2;
    } else {
      f.entries.push_back(line);
    }
  }
  if (header != 2) throw InputError("poly file: missing header lines");
  return f;
}

PolyFileData read_poly_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_poly_file(buf.str());
}

std::string format_poly_file(const RingDesc& ring, const AmbientPtr& amb,
                             const std::vector<std::string>& entries,
                             const std::string& comment) {
  std::ostringstream out;
  if (!comment.empty()) {
    std::istringstream cin(comment);
    std::string cl;
    while (std::getline(cin, cl)) out << "# " << cl << "\n";
  }
  switch (ring.cls) {
    case RingDesc::kQ: out << "ring Q\n"; break;
    case RingDesc::kFp: out << "ring Fp " << ring.p.get_str() << "\n"; break;
    case RingDesc::kZpk:
      out << "ring Zpk " << ring.p.get_str() << " " << ring.k << "\n";
      break;
    case RingDesc::kQuad: out << "ring Quad " << ring.d << "\n"; break;
  }
  out << "vars";
  for (const auto& n : amb->names) out << " " << n;
  out << "\n";
  for (const auto& e : entries) out << e << "\n";
  return out.str();
}

Ideal<Fp> ideal_as_fp(const PolyFileData& f, std::uint64_t p) {
  const std::uint64_t q = fp_prime(f, p);
  if (f.ring.cls == RingDesc::kFp) return build_ideal(f, Fp(0, q));
  const Modulus m1(mpz_class(static_cast<unsigned long>(q)), 1);
  Ideal<Fp> I(f.amb, Fp(0, q));
  if (f.ring.cls == RingDesc::kQ) {
    Ideal<Rat> J = build_ideal(f, Rat(0));
    for (const auto& g : J.gens())
      I.add(zmod_poly_to_fp(reduce_poly(g, m1)));
  } else if (f.ring.cls == RingDesc::kQuad) {
    Ideal<Quad> J = build_ideal(f, Quad(0, 0, 1, f.ring.d));
    // sqrt(d) mod p is needed (and must exist) only when a coefficient
    // actually has an irrational part; integer models reduce at any prime.
    bool root = false;
    for (const auto& g : J.gens()) root = root || uses_root(g);
    if (root) {
      const ZMod s = sqrt_mod(mpz_class(f.ring.d), m1);
      for (const auto& g : J.gens())
        I.add(zmod_poly_to_fp(reduce_poly(g, m1, s.value().get_ui())));
    } else {
      for (const auto& g : J.gens())
        I.add(zmod_poly_to_fp(reduce_poly(quad_poly_to_rat(g, f.amb), m1)));
    }
  } else {
    throw InputError("poly file: cannot view a " + f.ring.text() +
                     " file over F_p");
  }
  return I;
}

Ideal<Rat> ideal_as_rat(const PolyFileData& f) {
  if (f.ring.cls != RingDesc::kQ)
    throw InputError("poly file: file is " + f.ring.text() + ", not Q");
  return build_ideal(f, Rat(0));
}

Ideal<Quad> ideal_as_quad(const PolyFileData& f) {
  if (f.ring.cls == RingDesc::kQuad)
    return build_ideal(f, Quad(0, 0, 1, f.ring.d));
  if (f.ring.cls == RingDesc::kQ) {
    // Rationals embed; reuse the Quad parser with the default d.
    return build_ideal(f, Quad(0, 0, 1, kDefaultD));
  }
  throw InputError("poly file: cannot view a " + f.ring.text() +
                   " file over a quadratic field");
}

std::vector<ProjPoint<Fp>> points_as_fp(const PolyFileData& f,
                                        std::uint64_t p) {
  const std::uint64_t q = fp_prime(f, p);
  if (f.ring.cls == RingDesc::kFp) return build_points(f, Fp(0, q));
  const Modulus m1(mpz_class(static_cast<unsigned long>(q)), 1);
  std::vector<ProjPoint<Fp>> out;
  if (f.ring.cls == RingDesc::kQ) {
    for (const auto& pt : build_points(f, Rat(0))) {
      std::vector<Fp> c;
      for (const auto& x : pt.coords)
        c.push_back(Fp(reduce_rat(x, m1).value().get_ui(), q));
      out.push_back(ProjPoint<Fp>::normalized(c));
    }
    return out;
  }
  if (f.ring.cls == RingDesc::kQuad) {
    auto pts = build_points(f, Quad(0, 0, 1, f.ring.d));
    bool root = false;
    for (const auto& pt : pts)
      for (const auto& x : pt.coords) root = root || x.b() != 0;
    ZMod s(0, m1);
    if (root) s = sqrt_mod(mpz_class(f.ring.d), m1);
    for (const auto& pt : pts) {
      std::vector<Fp> c;
      for (const auto& x : pt.coords)
        c.push_back(Fp(root ? reduce_quad(x, s).value().get_ui()
                            : reduce_rat(x.rational_part(), m1)
                                  .value()
                                  .get_ui(),
                       q));
      out.push_back(ProjPoint<Fp>::normalized(c));
    }
    return out;
  }
  throw InputError("poly file: cannot view a " + f.ring.text() +
                   " file over F_p");
}

std::vector<ProjPoint<Rat>> points_as_rat(const PolyFileData& f) {
  if (f.ring.cls != RingDesc::kQ)
    throw InputError("poly file: file is " + f.ring.text() + ", not Q");
  return build_points(f, Rat(0));
}

std::vector<ProjPoint<Quad>> points_as_quad(const PolyFileData& f) {
  if (f.ring.cls == RingDesc::kQuad)
    return build_points(f, Quad(0, 0, 1, f.ring.d));
  if (f.ring.cls == RingDesc::kQ)
    return build_points(f, Quad(0, 0, 1, kDefaultD));
  throw InputError("poly file: cannot view a " + f.ring.text() +
                   " file over a quadratic field");
}

const std::vector<Dataset>& bundled_datasets() {
  static const std::vector<Dataset> sets = [] {
    std::vector<Dataset> out;

    {
      // Rank-1 locus of a symmetric 3x3 catalecticant: the image of the
      // plane under all degree-2 monomials. Hyperplane cuts that restrict
      // to squares of linear forms are the planted nonreduced sections.
      auto amb = make_ambient("z", 6);
      std::vector<std::string> gens = {"z0*z3 - z1^2", "z0*z4 - z1*z2",
                                       "z0*z5 - z2^2", "z1*z4 - z2*z3",
                                       "z1*z5 - z2*z4", "z3*z5 - z4^2"};
      out.push_back(
          {"veronese.ideal",
           format_poly_file(
               RingDesc{RingDesc::kQuad, 0, 1, -7}, amb, gens,
               "Degree-2 embedding of the plane in P^5.\n"
               "Coordinates are z0..z5 = x^2, xy, xz, y^2, yz, z^2; the\n"
               "nonreduced hyperplane sections are the squares\n"
               "(u x + v y + w z)^2, i.e. cuts (u^2, 2uv, 2uw, v^2, 2vw, "
               "w^2).")});
    }

    {
      auto amb = make_ambient("x", 4);
      std::vector<std::string> gens = {"x0*x2 - x1^2", "x0*x3 - x1*x2",
                                       "x1*x3 - x2^2"};
      out.push_back({"twisted_cubic.ideal",
                     format_poly_file(RingDesc{RingDesc::kQ, 0, 1, 0}, amb,
                                      gens,
                                      "Degree-3 rational normal curve in "
                                      "P^3; Hilbert polynomial 3n + 1.")});
    }

    {
      // Conics through three planted points of P^2 over Q(sqrt(-7)). The
      // guided solver must recover exactly these three points.
      auto amb = make_ambient("x", 3);
      Quad like(0, 0, 1, -7);
      Quad one(1, 0, 1, -7);
      Quad alpha(-1, 1, 2, -7);
      std::vector<ProjPoint<Quad>> pts;
      pts.push_back(ProjPoint<Quad>::normalized({alpha, one, one}));
      pts.push_back(ProjPoint<Quad>::normalized({one, alpha, one}));
      pts.push_back(ProjPoint<Quad>::normalized({one, one, one}));
      std::vector<std::string> gens;
      for (const auto& g : vanishing_forms(pts, amb, like, 2))
        gens.push_back(g.to_string());
      out.push_back(
          {"planted_threepoints.ideal",
           format_poly_file(
               RingDesc{RingDesc::kQuad, 0, 1, -7}, amb, gens,
               "Conics through three planted points of the plane over\n"
               "Q(sqrt(-7)): (a, 1, 1), (1, a, 1), (1, 1, 1) with\n"
               "a = (-1 + sqrt(-7))/2. Zero-dimensional of degree 3.")});
    }

    {
      auto amb = make_ambient("x", 4);
      std::vector<std::string> gens = {"x0*x3 - x1*x2"};
      out.push_back(
          {"quadric_jet.ideal",
           format_poly_file(
               RingDesc{RingDesc::kQ, 0, 1, 0}, amb, gens,
               "Smooth quadric surface in P^3 for jet and\n"
               "vanish-to-order demos; (0, 0, 0, 1) is a smooth point\n"
               "with local parametrization (s t, s, t, 1).")});
    }

    return out;
  }();
  return sets;
}

}  // namespace tvx
