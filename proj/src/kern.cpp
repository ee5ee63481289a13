// Copyright (c) 2026 the tvx authors
// SPDX-License-Identifier: Apache-2.0
#include "tvx/kern.hpp"

#include <cstdlib>
#include <stdexcept>

namespace tvx::kern {

namespace {

void axpy_scalar(const FpCtx& ctx, std::uint32_t* a, const std::uint32_t* b,
                 std::uint32_t c, std::size_t n) {
  const std::uint64_t p = ctx.p;
  const std::uint64_t cc = c % p;
  for (std::size_t i = 0; i < n; ++i)
    a[i] = static_cast<std::uint32_t>((a[i] + cc * b[i]) % p);
}

void scale_scalar(const FpCtx& ctx, std::uint32_t* a, std::uint32_t c,
                  std::size_t n) {
  const std::uint64_t p = ctx.p;
  const std::uint64_t cc = c % p;
  for (std::size_t i = 0; i < n; ++i)
    a[i] = static_cast<std::uint32_t>((cc * a[i]) % p);
}

}  // namespace

FpCtx make_scalar(std::uint32_t p) {
  if (p < 2 || p >= (1u << 31))
    throw std::invalid_argument("kern: modulus out of range");
  FpCtx ctx;
  ctx.p = p;
  ctx.axpy = axpy_scalar;
  ctx.scale = scale_scalar;
  ctx.variant = "scalar";
  return ctx;
}

bool avx2_supported() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}

FpCtx select(std::uint32_t p) {
  if (std::getenv("TVX_NO_AVX2") == nullptr && avx2_supported() &&
      (p & 1u) != 0 && p < (1u << 16))
    return make_avx2(p);
  return make_scalar(p);
}

}  // namespace tvx::kern
