// Copyright (c) 2026 the tvx authors
// SPDX-License-Identifier: Apache-2.0
//
// Polynomial files and bundled datasets. A file is two header lines and one
// entry per line after them; '#' starts a comment, blank lines are skipped:
//
//   ring Q | ring Fp <p> | ring Zpk <p> <k> | ring Quad <d>
//   vars x0 x1 x2
//   x0*x3 - x1*x2
//
// Ideal files hold one generator per line. Point files hold one point per
// line as comma-separated coordinates (each coordinate uses the coefficient
// grammar of the polynomial parser). Readers keep the raw entry strings so
// the same file can be re-read over a compatible ring, e.g. a Quad ideal
// reduced modulo p.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tvx/lift.hpp"
#include "tvx/vgeom.hpp"

namespace tvx {

struct PolyFileData {
  RingDesc ring;
  AmbientPtr amb;
  std::vector<std::string> entries;
  std::string raw;  // full file text, for content hashing
};

PolyFileData parse_poly_file(const std::string& text);
PolyFileData read_poly_file(const std::string& path);

std::string format_poly_file(const RingDesc& ring, const AmbientPtr& amb,
                             const std::vector<std::string>& entries,
                             const std::string& comment = "");

// Typed views of a file. Files over Q or Quad can be reduced modulo a prime
// on the way in (DenominatorNotUnit when p divides a denominator); an Fp
// file must agree with the requested prime when one is given.
Ideal<Fp> ideal_as_fp(const PolyFileData& f, std::uint64_t p = 0);
Ideal<Rat> ideal_as_rat(const PolyFileData& f);
Ideal<Quad> ideal_as_quad(const PolyFileData& f);

std::vector<ProjPoint<Fp>> points_as_fp(const PolyFileData& f,
                                        std::uint64_t p = 0);
std::vector<ProjPoint<Rat>> points_as_rat(const PolyFileData& f);
std::vector<ProjPoint<Quad>> points_as_quad(const PolyFileData& f);

// Planted example inputs shipped with the toolkit, generated in code so
// tests can pin the on-disk copies to them byte for byte.
struct Dataset {
  std::string name;     // file name, e.g. "veronese.ideal"
  std::string content;  // full file text
};
const std::vector<Dataset>& bundled_datasets();

// Reference dimensions h^0(nH) on a fake projective plane (K = 3H, H^2 = 1)
// for n = 4..12, with their closed form. Documentation tests pin the two
// against each other.
inline constexpr unsigned long kFppSectionDims[] = {3,  6,  10, 15, 21,
                                                    28, 36, 45, 55};
inline constexpr unsigned long fpp_section_dim(unsigned long n) {
  return 1 + n * (n - 3) / 2;
}

}  // namespace tvx
