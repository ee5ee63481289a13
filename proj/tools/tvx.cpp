// Copyright (c) 2026 the tvx authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end. Each subcommand drives one library pipeline:
// scanning hyperplane cuts over F_p, Hensel lifting, algebraic-number
// recognition, Hilbert verification, linear systems through points, guided
// solving over Q(sqrt d), equivariant coordinate changes, and basis cleanup.
// Human-readable output goes to stdout; --json switches every command to a
// single machine object embedding the seed and an FNV-1a hash of each input
// file. Exit codes: 0 success, 2 input error, 3 verification mismatch,
// 4 internal failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tvx/io.hpp"
#include "tvx/lift.hpp"
#include "tvx/recog.hpp"
#include "tvx/search.hpp"

using json = nlohmann::ordered_json;
using namespace tvx;

namespace {

struct Common {
  bool json_out = false;
  unsigned jobs = 1;  // worker cap; every module runs within it
  std::uint64_t seed = 1;
  std::vector<json> inputs;  // path + content hash, in read order
};

std::string hash_hex(const std::string& raw) {
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << fnv1a64(raw);
  return out.str();
}

// Inputs resolve through the filesystem first, then the bundled datasets
// ("veronese" and "veronese.ideal" both name the shipped file).
PolyFileData load_input(Common& c, const std::string& spec) {
  std::string path = spec;
  PolyFileData f;
  if (std::filesystem::exists(path)) {
    f = read_poly_file(path);
  } else {
    const Dataset* hit = nullptr;
    for (const auto& s : bundled_datasets())
      if (s.name == spec || s.name == spec + ".ideal") {
        hit = &s;
        break;
      }
    if (!hit) throw InputError("cannot open file: " + spec);
    path = "bundled:" + hit->name;
    f = parse_poly_file(hit->content);
  }
  c.inputs.push_back(json{{"path", path}, {"fnv1a64", hash_hex(f.raw)}});
  return f;
}

json envelope(const Common& c, const std::string& command) {
  return json{{"command", command}, {"seed", c.seed}, {"inputs", c.inputs}};
}

void emit(const Common& c, const json& report, const std::string& human) {
  if (c.json_out)
    std::cout << report.dump(2) << "\n";
  else
    std::cout << human;
}

mpz_class parse_int(const std::string& tok, const char* what) {
  try {
    return mpz_class(tok);
  } catch (const std::invalid_argument&) {
    throw InputError(std::string("bad ") + what + " '" + tok + "'");
  }
}

std::vector<mpz_class> parse_int_list(const std::string& s, const char* what) {
  std::vector<mpz_class> out;
  std::istringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ',')) out.push_back(parse_int(tok, what));
  if (out.empty()) throw InputError(std::string("empty ") + what + " list");
  return out;
}

std::vector<std::size_t> parse_index_list(const std::string& s,
                                          const char* what) {
  std::vector<std::size_t> out;
  for (const auto& z : parse_int_list(s, what)) {
    if (z < 0) throw InputError(std::string("negative ") + what + " entry");
    out.push_back(z.get_ui());
  }
  return out;
}

InvariantCutPattern parse_pattern(const std::string& s, std::size_t nvars,
                                  std::size_t pin) {
  InvariantCutPattern pat;
  if (s.empty()) {
    for (std::size_t i = 0; i < nvars; ++i) pat.orbits.push_back({i});
  } else {
    std::istringstream in(s);
    std::string grp;
    while (std::getline(in, grp, ';'))
      pat.orbits.push_back(parse_index_list(grp, "pattern"));
  }
  pat.pinned = pin;
  return pat;
}

// Cyclic action from flags; the permutation's order is the lcm of its cycle
// lengths, and act.validate does the structural checks at the call site.
template <class K>
CyclicAction<K> action_from_flags(unsigned n, const std::string& weights,
                                  const std::string& perm,
                                  std::vector<K> character) {
  CyclicAction<K> act;
  act.n = n;
  for (auto w : parse_index_list(weights, "weights"))
    act.weights.push_back(static_cast<unsigned>(w));
  if (!perm.empty()) {
    act.perm = parse_index_list(perm, "perm");
    const std::size_t nv = act.perm.size();
    for (auto v : act.perm)
      if (v >= nv) throw InputError("perm entry out of range");
    std::vector<bool> seen(nv, false);
    std::size_t order = 1;
    for (std::size_t i = 0; i < nv; ++i) {
      std::size_t len = 0, j = i;
      while (!seen[j]) {
        seen[j] = true;
        j = act.perm[j];
        ++len;
      }
      if (len > 1) order = std::lcm(order, len);
    }
    act.perm_order = order;
  }
  act.character = std::move(character);
  return act;
}

// Exact model of a Q- or Quad-file for lifting. When no entry uses the
// root, the rational reparse is kept too, so integer-defined surfaces lift
// at primes where d is a non-residue.
struct ExactModel {
  Ideal<Quad> quad;
  std::optional<Ideal<Rat>> rat;
};

ExactModel exact_model(const PolyFileData& f) {
  ExactModel em{ideal_as_quad(f), {}};
  bool root = false;
  for (const auto& g : em.quad.gens())
    for (const auto& [m, cf] : g.terms()) root = root || cf.b() != 0;
  if (!root) {
    Ideal<Rat> J(f.amb, Rat(0));
    for (const auto& e : f.entries) J.add(parse_poly(e, f.amb, Rat(0)));
    em.rat = std::move(J);
  }
  return em;
}

std::string fp_tuple(const std::vector<Fp>& t) {
  std::string s;
  for (std::size_t i = 0; i < t.size(); ++i)
    s += (i ? " " : "") + std::to_string(t[i].v);
  return s;
}

std::string quad_tuple(const std::vector<Quad>& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i)
    s += (i ? ", " : "") + RingOps<Quad>::str(t[i]);
  return s + ")";
}

json quad_tuple_json(const std::vector<Quad>& t) {
  json a = json::array();
  for (const auto& q : t) a.push_back(RingOps<Quad>::str(q));
  return a;
}

// Pretty printer for a fitted Hilbert polynomial, coefficients low-to-high.
std::string fitted_str(const std::vector<Rat>& c) {
  std::string s;
  for (std::size_t i = c.size(); i-- > 0;) {
    if (c[i].is_zero() && !(s.empty() && i == 0)) continue;
    std::string coeff = RingOps<Rat>::str(c[i]);
    bool neg = coeff[0] == '-';
    if (neg) coeff = coeff.substr(1);
    std::string term;
    if (i == 0)
      term = coeff;
    else {
      term = (coeff == "1") ? "" : coeff + "*";
      term += "n";
      if (i > 1) term += "^" + std::to_string(i);
    }
    if (s.empty())
      s = (neg ? "-" : "") + term;
    else
      s += (neg ? " - " : " + ") + term;
  }
  return s.empty() ? "0" : s;
}

std::string seconds_str(double t) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(2) << t;
  return out.str();
}

// ---------------------------------------------------------------------------
// search-cuts

struct SearchOpts {
  std::string file, pattern;
  std::uint64_t p = 0;
  std::size_t pin = 0;
  unsigned window = kHilbertWindow, cap = kHilbertFitCap;
};

int run_search_cuts(Common& c, const SearchOpts& o) {
  PolyFileData f = load_input(c, o.file);
  Ideal<Fp> I = ideal_as_fp(f, o.p);
  const std::uint64_t p = I.exemplar().p;
  auto pat = parse_pattern(o.pattern, I.nvars(), o.pin);
  SearchReport rep = search_nonreduced_cuts(I, pat, o.window, o.cap);
  rep.seed = c.seed;

  json r = envelope(c, "search-cuts");
  r["p"] = p;
  r["orbits"] = pat.orbits;
  r["pinned"] = pat.pinned;
  r["report"] = json::parse(rep.to_json());

  std::ostringstream h;
  h << "scanned " << rep.candidates_scanned << " candidate cuts over F_" << p
    << " in " << seconds_str(rep.seconds) << " s\n";
  h << "nonreduced cuts (" << rep.hits.size() << "):\n";
  for (const auto& t : rep.hits) h << "  " << fp_tuple(t) << "\n";
  emit(c, r, h.str());
  return 0;
}

// ---------------------------------------------------------------------------
// hilbert

struct HilbertOpts {
  std::string file, expect;
  std::uint64_t p = 0;
  unsigned window = kHilbertWindow, cap = kHilbertFitCap;
};

int run_hilbert(Common& c, const HilbertOpts& o) {
  PolyFileData f = load_input(c, o.file);
  HilbertData hd;
  if (f.ring.cls == RingDesc::kFp || o.p != 0)
    hd = hilbert_polynomial(ideal_as_fp(f, o.p), o.window, o.cap);
  else if (f.ring.cls == RingDesc::kQ)
    hd = hilbert_polynomial(ideal_as_rat(f), o.window, o.cap);
  else if (f.ring.cls == RingDesc::kQuad)
    hd = hilbert_polynomial(ideal_as_quad(f), o.window, o.cap);
  else
    hd = hilbert_polynomial(ideal_as_fp(f, 0), o.window, o.cap);

  json r = envelope(c, "hilbert");
  r["hilbert"] = json::parse(hd.to_json());

  std::ostringstream h;
  h << " n  h(n)\n";
  for (const auto& [n, v] : hd.values)
    h << std::setw(2) << n << "  " << v << "\n";
  h << "fitted: " << fitted_str(hd.fitted) << "  (dimension "
    << hd.dimension() << ", stable from n = " << hd.stable_from << ")\n";

  int code = 0;
  if (!o.expect.empty()) {
    std::vector<Rat> want;
    std::istringstream in(o.expect);
    std::string tok;
    while (std::getline(in, tok, ',')) {
      try {
        mpq_class q(tok);
        q.canonicalize();
        want.push_back(Rat(q));
      } catch (const std::invalid_argument&) {
        throw InputError("bad expect entry '" + tok + "'");
      }
    }
    bool ok = want.size() == hd.fitted.size();
    for (std::size_t i = 0; ok && i < want.size(); ++i)
      ok = want[i] == hd.fitted[i];
    json ws = json::array();
    for (const auto& w : want) ws.push_back(RingOps<Rat>::str(w));
    r["expected"] = ws;
    r["match"] = ok;
    if (ok) {
      h << "expected " << fitted_str(want) << ": match\n";
    } else {
      h << "MISMATCH: expected " << fitted_str(want) << ", computed "
        << fitted_str(hd.fitted) << "\n";
      code = 3;
    }
  }
  emit(c, r, h.str());
  return code;
}

// ---------------------------------------------------------------------------
// recognize

struct RecogCliOpts {
  std::string residue, root, height = "1000000";
  std::uint64_t p = 0;
  unsigned k = 0;
  long d = kDefaultD;
};

int run_recognize(Common& c, const RecogCliOpts& o) {
  const Modulus m(mpz_class(static_cast<unsigned long>(o.p)), o.k);
  const ZMod x(parse_int(o.residue, "residue"), m);
  ZMod s = o.root.empty() ? sqrt_mod(mpz_class(o.d), m)
                          : ZMod(parse_int(o.root, "root"), m);
  if (!(s * s == ZMod(mpz_class(o.d), m)))
    throw InputError("root^2 != d mod p^k");
  RecogOptions ro;
  ro.d = o.d;
  auto q = recognize_quad(x, s, parse_int(o.height, "height bound"), ro);

  json r = envelope(c, "recognize");
  r["residue"] = x.value().get_str();
  r["modulus"] = json{{"p", o.p}, {"k", o.k}};
  r["root"] = s.value().get_str();
  r["result"] = q ? json(RingOps<Quad>::str(*q)) : json(nullptr);

  std::ostringstream h;
  h << "residue " << x.value().get_str() << " (mod " << o.p << "^" << o.k
    << ")\n";
  h << "root    " << s.value().get_str() << "\n";
  if (q)
    h << "result  " << RingOps<Quad>::str(*q)
      << "  [re-verified by reduction]\n";
  else
    h << "result  none within the height bound\n";
  emit(c, r, h.str());
  return 0;
}

// ---------------------------------------------------------------------------
// lift

struct LiftOpts {
  std::string file, point, schedule = "double";
  std::uint64_t p = 0;
  unsigned k = 0;
};

int run_lift(Common& c, const LiftOpts& o) {
  PolyFileData f = load_input(c, o.file);
  if (f.ring.cls != RingDesc::kQ && f.ring.cls != RingDesc::kQuad)
    throw InputError("lift: file must be over Q or a quadratic field");
  if (o.p == 0 || o.k == 0) throw InputError("lift: need --p and --k");
  Ideal<Fp> Ip = ideal_as_fp(f, o.p);

  std::vector<Fp> coords;
  for (const auto& z : parse_int_list(o.point, "point")) {
    mpz_class v = z % static_cast<unsigned long>(o.p);
    if (v < 0) v += static_cast<unsigned long>(o.p);
    coords.push_back(Fp(v.get_ui(), o.p));
  }
  if (coords.size() != Ip.nvars())
    throw InputError("lift: point has " + std::to_string(coords.size()) +
                     " coordinates in " + std::to_string(Ip.nvars()) +
                     " variables");
  ProjPoint<Fp> pt = ProjPoint<Fp>::normalized(coords);
  if (!satisfies(Ip, pt))
    throw InputError("lift: point does not lie on the variety mod p");

  LiftSchedule sched;
  if (o.schedule == "double")
    sched = LiftSchedule::kDouble;
  else if (o.schedule == "plus-one")
    sched = LiftSchedule::kPlusOne;
  else
    throw InputError("lift: schedule must be 'double' or 'plus-one'");

  const Modulus mk(mpz_class(static_cast<unsigned long>(o.p)), o.k);
  ProjPoint<ZMod> L;
  std::vector<Polynomial<ZMod>> gens_k;
  ExactModel em = exact_model(f);
  if (em.rat) {
    L = lift_point(*em.rat, pt, o.k, sched);
    for (const auto& g : em.rat->gens()) gens_k.push_back(reduce_poly(g, mk));
  } else {
    const ZMod s1 =
        sqrt_mod(mpz_class(f.ring.d),
                 Modulus(mpz_class(static_cast<unsigned long>(o.p)), 1));
    L = lift_point(em.quad, pt, s1.value().get_ui(), o.k, sched);
    for (const auto& g : em.quad.gens())
      gens_k.push_back(reduce_poly(g, mk, s1.value().get_ui()));
  }
  for (const auto& g : gens_k)
    if (!g.evaluate(L.coords).is_zero())
      throw VerificationError("lift: lifted point fails a generator");

  json r = envelope(c, "lift");
  r["modulus"] = json{{"p", o.p}, {"k", o.k}};
  json pc = json::array();
  for (const auto& z : L.coords) pc.push_back(z.value().get_str());
  r["point"] = pc;
  r["pivot"] = L.pivot;
  r["verified"] = true;

  std::ostringstream h;
  h << "lifted point mod " << o.p << "^" << o.k << " (pivot coordinate "
    << L.pivot << "):\n";
  for (const auto& z : L.coords) h << "  " << z.value().get_str() << "\n";
  h << "all generators vanish at this precision\n";
  emit(c, r, h.str());
  return 0;
}

// ---------------------------------------------------------------------------
// forms

struct FormsOpts {
  std::string file, points, out, weights, perm;
  std::uint64_t p = 0;
  std::size_t sample = 0;
  unsigned degree = 1, order = 1, n = 0;
  int weight = -1;  // -1: all classes when an action is given
};

template <class K>
json forms_payload(const std::vector<ProjPoint<K>>& pts, const AmbientPtr& amb,
                   const K& like, const FormsOpts& o, std::string& human,
                   std::vector<std::string>& entries) {
  json payload;
  payload["points"] = pts.size();
  payload["degree"] = o.degree;
  payload["order"] = o.order;
  std::ostringstream h;
  h << "forms of degree " << o.degree << " vanishing to order " << o.order
    << " at " << pts.size() << " points\n";

  auto emit_family = [&](const std::vector<Polynomial<K>>& fam) {
    for (const auto& g : fam) entries.push_back(g.to_string());
  };

  if (o.n != 0) {
    CyclicAction<K> act = action_from_flags<K>(o.n, o.weights, o.perm, {});
    act.validate(amb->nvars(), like);
    if (o.weight >= 0) {
      auto fam = vanishing_forms(pts, amb, like, o.degree, o.order, &act,
                                 static_cast<unsigned>(o.weight));
      payload["weight"] = o.weight;
      payload["count"] = fam.size();
      h << "weight class " << o.weight << ": " << fam.size() << " forms\n";
      emit_family(fam);
    } else {
      auto all = vanishing_forms(pts, amb, like, o.degree, o.order);
      json table = json::array();
      std::size_t total = 0;
      h << "weight  count\n";
      for (unsigned w = 0; w < act.n; ++w) {
        auto fam = vanishing_forms(pts, amb, like, o.degree, o.order, &act, w);
        table.push_back(json{{"weight", w}, {"count", fam.size()}});
        total += fam.size();
        h << std::setw(6) << w << "  " << fam.size() << "\n";
        emit_family(fam);
      }
      payload["classes"] = table;
      payload["total"] = total;
      payload["unfiltered"] = all.size();
      h << "partition check: " << total << " across classes, " << all.size()
        << " unfiltered\n";
      if (total != all.size())
        throw VerificationError("forms: weight classes do not partition");
    }
  } else {
    auto fam = vanishing_forms(pts, amb, like, o.degree, o.order);
    payload["count"] = fam.size();
    h << fam.size() << " forms\n";
    emit_family(fam);
  }
  human = h.str();
  return payload;
}

int run_forms(Common& c, const FormsOpts& o) {
  PolyFileData f = load_input(c, o.file);
  if ((o.points.empty() && o.sample == 0) ||
      (!o.points.empty() && o.sample != 0))
    throw InputError("forms: give exactly one of --points and --sample");

  std::string human;
  std::vector<std::string> entries;
  json payload;
  RingDesc out_ring;

  if (o.sample != 0) {
    Ideal<Fp> I = ideal_as_fp(f, o.p);
    auto pts = sample_points(I, o.sample, c.seed);
    payload = forms_payload(pts, I.ambient(), I.exemplar(), o, human, entries);
    out_ring = RingOps<Fp>::desc(I.exemplar());
  } else {
    PolyFileData pf = load_input(c, o.points);
    if (pf.amb->nvars() != f.amb->nvars())
      throw InputError("forms: points file has " +
                       std::to_string(pf.amb->nvars()) + " variables, ideal " +
                       std::to_string(f.amb->nvars()));
    if (pf.ring.cls == RingDesc::kQ && o.p == 0) {
      auto pts = points_as_rat(pf);
      payload = forms_payload(pts, f.amb, Rat(0), o, human, entries);
      out_ring = RingOps<Rat>::desc(Rat(0));
    } else if (pf.ring.cls == RingDesc::kQuad && o.p == 0) {
      Quad like(0, 0, 1, pf.ring.d);
      auto pts = points_as_quad(pf);
      payload = forms_payload(pts, f.amb, like, o, human, entries);
      out_ring = RingOps<Quad>::desc(like);
    } else {
      auto pts = points_as_fp(pf, o.p);
      if (pts.empty()) throw InputError("forms: empty points file");
      Fp like = pts[0].coords[0];
      payload = forms_payload(pts, f.amb, like, o, human, entries);
      out_ring = RingOps<Fp>::desc(like);
    }
  }

  std::string file_text = format_poly_file(out_ring, f.amb, entries);
  if (!o.out.empty()) {
    std::ofstream out(o.out, std::ios::binary);
    if (!out) throw InputError("cannot write file: " + o.out);
    out << file_text;
    human += "wrote " + o.out + "\n";
  } else {
    human += file_text;
  }

  json r = envelope(c, "forms");
  r.update(payload);
  json fs = json::array();
  for (const auto& e : entries) fs.push_back(e);
  r["forms"] = fs;
  emit(c, r, human);
  return 0;
}

// ---------------------------------------------------------------------------
// solve

struct SolveCliOpts {
  std::string file, height = "1000000";
  std::uint64_t p = 0;
  unsigned precision = 0, attempts = 500;
  unsigned window = kHilbertWindow, cap = kHilbertFitCap;
};

int run_solve(Common& c, const SolveCliOpts& o) {
  PolyFileData f = load_input(c, o.file);
  Ideal<Quad> J = ideal_as_quad(f);
  SolveOptions so;
  so.seed = c.seed;
  so.max_cut_attempts = o.attempts;
  so.window = o.window;
  so.cap = o.cap;
  so.recog.d = J.exemplar().d();
  SolveOutcome out = hilbert_guided_solve(J, o.p, o.precision,
                                          parse_int(o.height, "height bound"),
                                          so);

  json r = envelope(c, "solve");
  r["p"] = o.p;
  r["precision"] = o.precision;
  r["hilbert_constant"] = out.hilbert_constant;
  r["cuts_tried"] = out.cuts_tried;
  r["cuts_accepted"] = out.cuts_accepted;
  json sols = json::array();
  for (const auto& s : out.solutions) sols.push_back(quad_tuple_json(s));
  r["solutions"] = sols;
  r["failures"] = out.failures;

  std::ostringstream h;
  h << "hilbert constant " << out.hilbert_constant << "; cuts tried "
    << out.cuts_tried << ", accepted " << out.cuts_accepted << "\n";
  h << "solutions (" << out.solutions.size() << "):\n";
  for (const auto& s : out.solutions) h << "  " << quad_tuple(s) << "\n";
  if (!out.failures.empty()) {
    h << "failures (" << out.failures.size() << "):\n";
    for (const auto& msg : out.failures) h << "  " << msg << "\n";
  }
  emit(c, r, h.str());
  return 0;
}

// ---------------------------------------------------------------------------
// coordchange

struct CoordOpts {
  std::string vars, weights, perm, character, source, target;
  unsigned n = 1;
  std::size_t nvars = 0;
  long d = kDefaultD;
};

int run_coordchange(Common& c, const CoordOpts& o) {
  AmbientPtr amb;
  if (!o.vars.empty()) {
    std::istringstream in(o.vars);
    std::vector<std::string> names;
    std::string tok;
    while (in >> tok) names.push_back(tok);
    amb = make_ambient(names);
  } else if (o.nvars > 0) {
    amb = make_ambient("z", o.nvars);
  } else {
    throw InputError("coordchange: need --vars or --nvars");
  }
  const Quad like(0, 0, 1, o.d);

  std::vector<Quad> character;
  if (!o.character.empty()) {
    std::istringstream in(o.character);
    std::string tok;
    while (std::getline(in, tok, ',')) {
      Polynomial<Quad> cp = parse_poly(tok, amb, like);
      if (!cp.is_zero() && cp.degree() != 0)
        throw InputError("coordchange: character entry '" + tok +
                         "' is not constant");
      character.push_back(cp.is_zero() ? like : cp.terms().begin()->second);
    }
  }
  std::string weights = o.weights;
  if (weights.empty()) {
    for (std::size_t i = 0; i < amb->nvars(); ++i)
      weights += (i ? ",0" : "0");
  }
  CyclicAction<Quad> act =
      action_from_flags<Quad>(o.n, weights, o.perm, std::move(character));
  act.validate(amb->nvars(), like);

  Polynomial<Quad> src = parse_poly(o.source, amb, like);
  Polynomial<Quad> tgt = parse_poly(o.target, amb, like);
  auto M = equivariant_coordinate_change(act, src, tgt);

  json r = envelope(c, "coordchange");
  json rows = json::array();
  for (const auto& row : M) rows.push_back(quad_tuple_json(row));
  r["matrix"] = rows;

  std::ostringstream h;
  h << "coordinate change (" << M.size() << " x " << M.size() << "):\n";
  for (const auto& row : M) h << "  " << quad_tuple(row) << "\n";
  h << "commutes with both action generators; source maps to target\n";
  emit(c, r, h.str());
  return 0;
}

// ---------------------------------------------------------------------------
// sparsify

struct SparsifyOpts {
  std::string file, out;
  unsigned trials = 200;
};

int run_sparsify(Common& c, const SparsifyOpts& o) {
  PolyFileData f = load_input(c, o.file);
  Ideal<Quad> J = ideal_as_quad(f);
  auto before = J.gens();
  auto after = sparsify_basis(before, o.trials, c.seed);

  auto term_total = [](const std::vector<Polynomial<Quad>>& v) {
    std::size_t t = 0;
    for (const auto& g : v) t += g.terms().size();
    return t;
  };

  std::vector<std::string> entries;
  for (const auto& g : after) entries.push_back(g.to_string());
  RingDesc ring = RingOps<Quad>::desc(J.exemplar());

  json r = envelope(c, "sparsify");
  r["terms_before"] = term_total(before);
  r["terms_after"] = term_total(after);
  json fs = json::array();
  for (const auto& e : entries) fs.push_back(e);
  r["basis"] = fs;

  std::ostringstream h;
  h << "monomial count " << term_total(before) << " -> " << term_total(after)
    << " across " << after.size() << " forms\n";
  std::string file_text = format_poly_file(ring, f.amb, entries);
  if (!o.out.empty()) {
    std::ofstream out(o.out, std::ios::binary);
    if (!out) throw InputError("cannot write file: " + o.out);
    out << file_text;
    h << "wrote " << o.out << "\n";
  } else {
    h << file_text;
  }
  emit(c, r, h.str());
  return 0;
}

// ---------------------------------------------------------------------------
// pipeline-torsion

struct PipelineOpts {
  std::string file, pattern, target, weights, perm, height = "1000000";
  std::uint64_t p = 0;
  std::size_t pin = 0;
  unsigned precision = 40, n = 0;
  unsigned window = kHilbertWindow, cap = kHilbertFitCap;
};

template <class F>
auto stage(const char* label, F&& body) {
  try {
    return body();
  } catch (const InputError& e) {
    throw InputError(std::string(label) + ": " + e.what());
  } catch (const VerificationError& e) {
    throw VerificationError(std::string(label) + ": " + e.what());
  }
}

int run_pipeline(Common& c, const PipelineOpts& o) {
  PolyFileData f = load_input(c, o.file);
  if (f.ring.cls != RingDesc::kQ && f.ring.cls != RingDesc::kQuad)
    throw InputError("pipeline-torsion: file must be over Q or Quad");
  if (o.p == 0) throw InputError("pipeline-torsion: need --p");
  const long d = f.ring.cls == RingDesc::kQuad ? f.ring.d : kDefaultD;

  json r = envelope(c, "pipeline-torsion");
  std::ostringstream h;

  // Stage 1: exhaustive mod-p scan for nonreduced cuts.
  Ideal<Fp> Ip = stage("search", [&] { return ideal_as_fp(f, o.p); });
  const std::size_t nv = Ip.nvars();
  auto pat = parse_pattern(o.pattern, nv, o.pin);
  SearchReport rep = stage(
      "search", [&] { return search_nonreduced_cuts(Ip, pat, o.window, o.cap); });
  rep.seed = c.seed;
  r["search"] = json::parse(rep.to_json());
  h << "search: scanned " << rep.candidates_scanned << " cuts over F_" << o.p
    << ", " << rep.hits.size() << " nonreduced in " << seconds_str(rep.seconds)
    << " s\n";
  if (rep.hits.empty()) {
    r["cut"] = nullptr;
    h << "no nonreduced cut found; nothing to lift\n";
    emit(c, r, h.str());
    return 0;
  }

  // Stage 2 + 3: lift the first hit whose coefficient vector is a smooth
  // point of the surface itself (the rank-one chart used by the planted
  // datasets), then recognize the coordinates over Q(sqrt d). Hits whose
  // canonical lift stays irrational are reported and skipped.
  ExactModel em = stage("lift", [&] { return exact_model(f); });
  const Ideal<Quad>& JQ = em.quad;
  const Modulus m1(mpz_class(static_cast<unsigned long>(o.p)), 1);
  const Modulus mk(mpz_class(static_cast<unsigned long>(o.p)), o.precision);
  const mpz_class height = parse_int(o.height, "height bound");
  if (RecogOptions{}.margin * height * height * height >= mk.pk())
    throw InputError(
        "pipeline-torsion: precision " + std::to_string(o.precision) +
        " is too low for height bound " + height.get_str() +
        " (recognition needs p^k > 2^16 * H^3)");

  // Recognition root mod p^precision. A rationally-defined surface does not
  // need sqrt(d) itself: any auxiliary square-free d' with a root recovers
  // the rational coordinates through the same lattice (irrational results
  // at d' are rejected per hit); d is preferred when its root exists.
  std::optional<ZMod> sk;
  long rec_d = d;
  std::uint64_t s1u = 0;
  if (em.rat) {
    for (long dp : {d, -1L, 2L, -2L, 3L, -3L, 5L, -5L, 6L, -6L}) {
      try {
        sk = lift_root(mpz_class(dp), sqrt_mod(mpz_class(dp), m1), mk);
        rec_d = dp;
        break;
      } catch (const Error&) {
      }
    }
    if (!sk)
      throw InputError("pipeline-torsion: no recognition root mod " +
                       std::to_string(o.p) + "^" + std::to_string(o.precision));
  } else {
    const ZMod s1 =
        stage("lift", [&] { return sqrt_mod(mpz_class(d), m1); });
    s1u = s1.value().get_ui();
    sk = stage("recognize",
               [&] { return lift_root(mpz_class(d), s1, mk); });
  }

  json skipped = json::array();
  std::vector<Quad> exact;
  std::vector<Fp> chosen;
  std::size_t chosen_idx = 0;
  for (std::size_t idx = 0; idx < rep.hits.size() && exact.empty(); ++idx) {
    std::vector<Fp> cv(nv, Fp(0, o.p));
    for (std::size_t g = 0; g < pat.orbits.size(); ++g)
      for (auto v : pat.orbits[g]) cv[v] = rep.hits[idx][g];
    ProjPoint<Fp> pt = ProjPoint<Fp>::normalized(cv);
    auto skip = [&](const std::string& why) {
      skipped.push_back(json{{"hit", idx}, {"reason", why}});
    };
    if (!satisfies(Ip, pt)) {
      skip("cut vector is not a point of the surface");
      continue;
    }
    try {
      ProjPoint<ZMod> L = em.rat ? lift_point(*em.rat, pt, o.precision)
                                 : lift_point(JQ, pt, s1u, o.precision);
      RecogOptions ro;
      ro.d = rec_d;
      std::vector<Quad> rec = recognize_vector(L.coords, *sk, height, ro);
      if (rec_d != d) {
        bool rational = true;
        for (const auto& q : rec) rational = rational && q.b() == 0;
        if (!rational) {
          skip("coordinates irrational at a prime without sqrt(d)");
          continue;
        }
        for (auto& q : rec) q = Quad(q.a(), 0, q.c(), d);
      }
      ProjPoint<Quad> qpt = ProjPoint<Quad>::normalized(rec);
      if (!satisfies(JQ, qpt)) {
        skip("recognized vector fails exact re-verification");
        continue;
      }
      exact = qpt.coords;
      chosen = rep.hits[idx];
      chosen_idx = idx;
    } catch (const InputError& e) {
      skip(std::string("lift: ") + e.what());
    } catch (const NotFound& e) {
      skip(std::string("recognize: ") + e.what());
    }
  }
  r["skipped"] = skipped;
  if (exact.empty()) {
    r["cut"] = nullptr;
    h << "lift: none of the " << rep.hits.size()
      << " hits lifted to a recognizable cut at this precision\n";
    emit(c, r, h.str());
    return 0;
  }

  Polynomial<Quad> cutpoly(f.amb, JQ.exemplar());
  for (std::size_t i = 0; i < nv; ++i) {
    if (exact[i].is_zero()) continue;
    Monomial mo(nv);
    mo.e[i] = 1;
    cutpoly.add_term(mo, exact[i]);
  }
  r["cut"] = quad_tuple_json(exact);
  r["cut_form"] = cutpoly.to_string();
  r["selected_hit"] = chosen_idx;
  r["mod_p_reduction"] = json::parse(rep.to_json())["hits"][chosen_idx];
  h << "lift: hit #" << chosen_idx << " (" << fp_tuple(chosen)
    << ") lifted to " << o.p << "^" << o.precision << "\n";
  h << "recognize: exact cut " << quad_tuple(exact)
    << " over Q(sqrt(" << d << "))  [re-verified on the surface]\n";
  h << "cut form: " << cutpoly.to_string() << "\n";
  h << "mod-p reduction: " << fp_tuple(chosen) << "\n";

  // Optional stage 4: equivariant change moving the found cut to a target.
  if (!o.target.empty()) {
    std::string weights = o.weights;
    if (weights.empty())
      for (std::size_t i = 0; i < nv; ++i) weights += (i ? ",0" : "0");
    CyclicAction<Quad> act = action_from_flags<Quad>(
        o.n == 0 ? 1 : o.n, weights, o.perm, {});
    act.validate(nv, JQ.exemplar());
    Polynomial<Quad> tgt = parse_poly(o.target, f.amb, JQ.exemplar());
    auto M = stage("coordchange", [&] {
      return equivariant_coordinate_change(act, cutpoly, tgt);
    });
    json rows = json::array();
    for (const auto& row : M) rows.push_back(quad_tuple_json(row));
    r["matrix"] = rows;
    h << "coordchange: matrix moving the cut to " << o.target << ":\n";
    for (const auto& row : M) h << "  " << quad_tuple(row) << "\n";
  }
  emit(c, r, h.str());
  return 0;
}

// ---------------------------------------------------------------------------
// datasets

struct DatasetOpts {
  std::string out = "data";
};

int run_datasets(Common& c, const DatasetOpts& o) {
  std::filesystem::create_directories(o.out);
  json r = envelope(c, "datasets");
  json files = json::array();
  std::ostringstream h;
  for (const auto& s : bundled_datasets()) {
    const std::string path = o.out + "/" + s.name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write file: " + path);
    out << s.content;
    files.push_back(json{{"path", path}, {"fnv1a64", hash_hex(s.content)}});
    h << "wrote " << path << "\n";
  }
  r["files"] = files;
  emit(c, r, h.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Common c;
  if (const char* env = std::getenv("TVX_SEED"))
    c.seed = std::strtoull(env, nullptr, 10);

  CLI::App app{"exact-arithmetic toolkit for torsion-cut pipelines"};
  app.require_subcommand(1);
  app.add_flag("--json", c.json_out, "machine-readable JSON report");
  app.add_option("--jobs", c.jobs, "worker cap");
  app.add_option("--seed", c.seed, "RNG seed (default: TVX_SEED or 1)");

  std::function<int()> chosen;

  SearchOpts so;
  auto* sc = app.add_subcommand("search-cuts",
                                "scan hyperplane cuts for nonreduced sections");
  sc->add_option("file", so.file, "surface ideal file")->required();
  sc->add_option("--p", so.p, "prime (required unless the file is mod p)");
  sc->add_option("--pattern", so.pattern,
                 "orbit pattern, e.g. '0,5;1,4;2;3' (default: all free)");
  sc->add_option("--pin", so.pin, "orbit normalized to 1 in reported hits");
  sc->add_option("--window", so.window, "Hilbert window");
  sc->add_option("--cap", so.cap, "Hilbert fit degree cap");
  sc->callback([&] { chosen = [&] { return run_search_cuts(c, so); }; });

  HilbertOpts ho;
  auto* hc = app.add_subcommand("hilbert", "Hilbert polynomial of an ideal");
  hc->add_option("file", ho.file, "ideal file")->required();
  hc->add_option("--p", ho.p, "reduce mod p before counting");
  hc->add_option("--window", ho.window, "degrees sampled");
  hc->add_option("--cap", ho.cap, "fit degree cap");
  hc->add_option("--expect", ho.expect,
                 "expected coefficients, low to high, e.g. '1,3'");
  hc->callback([&] { chosen = [&] { return run_hilbert(c, ho); }; });

  RecogCliOpts ro;
  auto* rc = app.add_subcommand("recognize",
                                "recognize (a+b*sqrt(d))/c from a residue");
  rc->add_option("--residue", ro.residue, "residue mod p^k")->required();
  rc->add_option("--p", ro.p, "prime")->required();
  rc->add_option("--k,--precision", ro.k, "tower exponent")->required();
  rc->add_option("--d", ro.d, "square-free d (default -7)");
  rc->add_option("--height-bound", ro.height, "max |a|,|b|,c");
  rc->add_option("--root", ro.root, "residue of sqrt(d) (default canonical)");
  rc->callback([&] { chosen = [&] { return run_recognize(c, ro); }; });

  LiftOpts lo;
  auto* lc = app.add_subcommand("lift", "Hensel-lift a smooth mod-p point");
  lc->add_option("file", lo.file, "ideal file over Q or Quad")->required();
  lc->add_option("--point", lo.point, "mod-p coordinates 'c0,c1,...'")
      ->required();
  lc->add_option("--p", lo.p, "prime")->required();
  lc->add_option("--k,--precision", lo.k, "tower exponent")->required();
  lc->add_option("--schedule", lo.schedule, "'double' or 'plus-one'");
  lc->callback([&] { chosen = [&] { return run_lift(c, lo); }; });

  FormsOpts fo;
  auto* fc = app.add_subcommand("forms",
                                "linear system of forms through points");
  fc->add_option("file", fo.file, "ideal file (ambient and sampling source)")
      ->required();
  fc->add_option("--degree", fo.degree, "form degree")->required();
  fc->add_option("--order", fo.order, "vanishing order (default 1)");
  fc->add_option("--points", fo.points, "points file");
  fc->add_option("--sample", fo.sample, "sample N points from the ideal");
  fc->add_option("--p", fo.p, "prime for sampling / reduction");
  fc->add_option("--action-n", fo.n, "cyclic action order");
  fc->add_option("--weights", fo.weights, "action weights 'w0,w1,...'");
  fc->add_option("--perm", fo.perm, "action permutation 'i0,i1,...'");
  fc->add_option("--weight", fo.weight, "single weight class (default: all)");
  fc->add_option("--out", fo.out, "write forms to this file");
  fc->callback([&] { chosen = [&] { return run_forms(c, fo); }; });

  SolveCliOpts vo;
  auto* vc = app.add_subcommand("solve",
                                "Hilbert-guided solve over Q(sqrt d)");
  vc->add_option("file", vo.file, "zero-dimensional ideal over Quad")
      ->required();
  vc->add_option("--p", vo.p, "prime")->required();
  vc->add_option("--precision", vo.precision, "tower exponent")->required();
  vc->add_option("--height-bound", vo.height, "recognition height cap");
  vc->add_option("--attempts", vo.attempts, "random cut budget");
  vc->add_option("--window", vo.window, "Hilbert window");
  vc->add_option("--cap", vo.cap, "Hilbert fit degree cap");
  vc->callback([&] { chosen = [&] { return run_solve(c, vo); }; });

  CoordOpts co;
  auto* cc = app.add_subcommand("coordchange",
                                "equivariant coordinate change");
  cc->add_option("--vars", co.vars, "variable names, space separated");
  cc->add_option("--nvars", co.nvars, "variable count (names z0..)");
  cc->add_option("--n", co.n, "cyclic action order");
  cc->add_option("--weights", co.weights, "action weights");
  cc->add_option("--perm", co.perm, "action permutation");
  cc->add_option("--character", co.character, "permutation character");
  cc->add_option("--source", co.source, "source linear form")->required();
  cc->add_option("--target", co.target, "target linear form")->required();
  cc->add_option("--d", co.d, "square-free d (default -7)");
  cc->callback([&] { chosen = [&] { return run_coordchange(c, co); }; });

  SparsifyOpts po;
  auto* pc = app.add_subcommand("sparsify", "rank-preserving basis cleanup");
  pc->add_option("file", po.file, "basis file over Q or Quad")->required();
  pc->add_option("--trials", po.trials, "random combination budget");
  pc->add_option("--out", po.out, "write the new basis to this file");
  pc->callback([&] { chosen = [&] { return run_sparsify(c, po); }; });

  PipelineOpts to;
  auto* tc = app.add_subcommand(
      "pipeline-torsion", "search, lift, recognize a torsion cut end to end");
  tc->add_option("file", to.file, "surface ideal over Q or Quad")->required();
  tc->add_option("--p", to.p, "search prime")->required();
  tc->add_option("--pattern", to.pattern, "orbit pattern");
  tc->add_option("--pin", to.pin, "pinned orbit");
  tc->add_option("--precision", to.precision, "lift tower exponent");
  tc->add_option("--height-bound", to.height, "recognition height cap");
  tc->add_option("--target", to.target, "optional coordinate-change target");
  tc->add_option("--action-n", to.n, "cyclic action order");
  tc->add_option("--weights", to.weights, "action weights");
  tc->add_option("--perm", to.perm, "action permutation");
  tc->add_option("--window", to.window, "Hilbert window");
  tc->add_option("--cap", to.cap, "Hilbert fit degree cap");
  tc->callback([&] { chosen = [&] { return run_pipeline(c, to); }; });

  DatasetOpts dso;
  auto* dc = app.add_subcommand("datasets", "write the bundled datasets");
  dc->add_option("--out", dso.out, "directory (default: data)");
  dc->callback([&] { chosen = [&] { return run_datasets(c, dso); }; });

  // Global flags remain usable after the subcommand name.
  for (auto* s : app.get_subcommands(nullptr)) s->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    return chosen();
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const VerificationError& e) {
    std::cerr << "verification error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
}
