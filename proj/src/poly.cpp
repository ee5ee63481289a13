// Copyright (c) 2026 the tvx authors
// SPDX-License-Identifier: Apache-2.0
#include "tvx/poly.hpp"

namespace tvx {

std::vector<Monomial> monomials_of_degree(std::size_t nvars, unsigned degree) {
  std::vector<Monomial> out;
  if (nvars == 0) {
    if (degree == 0) out.emplace_back(0);
    return out;
  }
  Monomial cur(nvars);
  // Enumerate exponent vectors summing to `degree`, then sort degrevlex.
  auto rec = [&](auto&& self, std::size_t i, unsigned left) -> void {
    if (i + 1 == nvars) {
      cur.e[i] = static_cast<std::uint16_t>(left);
      out.push_back(cur);
      return;
    }
    for (unsigned v = 0; v <= left; ++v) {
      cur.e[i] = static_cast<std::uint16_t>(v);
      self(self, i + 1, left - v);
    }
    cur.e[i] = 0;
  };
  rec(rec, 0, degree);
  std::sort(out.begin(), out.end(), DegRevLexLess{});
  return out;
}

namespace detail {

std::string monomial_to_string(const Monomial& m, const Ambient& amb) {
  std::string out;
  for (std::size_t i = 0; i < m.e.size(); ++i) {
    if (m.e[i] == 0) continue;
    if (!out.empty()) out += "*";
    out += amb.names[i];
    if (m.e[i] > 1) out += "^" + std::to_string(m.e[i]);
  }
  return out;
}

}  // namespace detail

}  // namespace tvx
