// Copyright (c) 2026 the tvx authors
// SPDX-License-Identifier: Apache-2.0
#ifndef TVX_KERN_HPP
#define TVX_KERN_HPP

// Row-operation kernels over F_p for the dense linear algebra underneath the
// graded-rank computations. Two implementations with identical semantics:
//   * scalar: plain u64 arithmetic, valid for any odd or even p < 2^31,
//     the reference the others are tested against;
//   * avx2: 8-lane u32 Montgomery arithmetic, valid for odd p < 2^16.
// select() picks a variant at runtime from the CPU and the modulus; the
// environment variable TVX_NO_AVX2 forces the scalar path.

#include <cstddef>
#include <cstdint>

namespace tvx::kern {

struct FpCtx;

// a[i] <- (a[i] + c * b[i]) mod p for i < n. Inputs must lie in [0, p).
using AxpyFn = void (*)(const FpCtx&, std::uint32_t* a, const std::uint32_t* b,
                        std::uint32_t c, std::size_t n);
// a[i] <- (c * a[i]) mod p for i < n.
using ScaleFn = void (*)(const FpCtx&, std::uint32_t* a, std::uint32_t c,
                         std::size_t n);

struct FpCtx {
  std::uint32_t p = 0;
  std::uint32_t pinv16 = 0;  // -p^{-1} mod 2^16, only set on the avx2 path
  AxpyFn axpy = nullptr;
  ScaleFn scale = nullptr;
  const char* variant = "";
};

// Builds a context for the given modulus. p must satisfy 2 <= p < 2^31.
FpCtx select(std::uint32_t p);

// Individual variants, exposed for the equivalence tests.
FpCtx make_scalar(std::uint32_t p);
bool avx2_supported();
FpCtx make_avx2(std::uint32_t p);  // requires odd p < 2^16 and AVX2 hardware

}  // namespace tvx::kern

#endif
