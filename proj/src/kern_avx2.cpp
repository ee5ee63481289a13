// Copyright (c) 2026 the tvx authors
// SPDX-License-Identifier: Apache-2.0
#include "tvx/kern.hpp"

#include <stdexcept>

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>

namespace tvx::kern {

namespace {

// Montgomery arithmetic with R = 2^16 on 8 u32 lanes. For odd p < 2^16 and
// T < p*2^16, REDC(T) = (T + ((T * pinv16) mod 2^16) * p) / 2^16 lies in
// [0, 2p) and is congruent to T * 2^-16 mod p. Passing c~ = c * 2^16 mod p
// therefore turns REDC(c~ * b) into plain c * b mod p. The sum T + m*p can
// carry past 2^32, so the high halves are added with an explicit carry:
// T + m*p = 0 mod 2^16, hence lo16(T) + lo16(m*p) is 0 or 2^16 exactly.

inline std::uint32_t mont_pinv16(std::uint32_t p) {
  std::uint32_t inv = 1;  // p odd: Newton doubles correct bits mod 2^k
  for (int i = 0; i < 5; ++i) inv *= 2u - p * inv;
  return (0u - inv) & 0xFFFFu;
}

struct VConst {
  __m256i p, pinv, mask16, ones;
};

inline __m256i redc_mul(const VConst& k, __m256i x, __m256i cmont) {
  __m256i t0 = _mm256_mullo_epi32(x, cmont);
  __m256i m = _mm256_and_si256(_mm256_mullo_epi32(t0, k.pinv), k.mask16);
  __m256i mp = _mm256_mullo_epi32(m, k.p);
  __m256i lo = _mm256_and_si256(t0, k.mask16);
  __m256i carry =
      _mm256_add_epi32(_mm256_cmpeq_epi32(lo, _mm256_setzero_si256()), k.ones);
  __m256i t = _mm256_add_epi32(
      _mm256_add_epi32(_mm256_srli_epi32(t0, 16), _mm256_srli_epi32(mp, 16)),
      carry);
  t = _mm256_sub_epi32(t, k.p);
  return _mm256_add_epi32(t, _mm256_and_si256(_mm256_srai_epi32(t, 31), k.p));
}

inline __m256i add_mod(const VConst& k, __m256i x, __m256i y) {
  __m256i r = _mm256_sub_epi32(_mm256_add_epi32(x, y), k.p);
  return _mm256_add_epi32(r, _mm256_and_si256(_mm256_srai_epi32(r, 31), k.p));
}

inline VConst vconst(const FpCtx& ctx) {
  return VConst{_mm256_set1_epi32(static_cast<int>(ctx.p)),
                _mm256_set1_epi32(static_cast<int>(ctx.pinv16)),
                _mm256_set1_epi32(0xFFFF), _mm256_set1_epi32(1)};
}

inline std::uint32_t to_mont(const FpCtx& ctx, std::uint32_t c) {
  return static_cast<std::uint32_t>(
      (static_cast<std::uint64_t>(c % ctx.p) << 16) % ctx.p);
}

void axpy_avx2(const FpCtx& ctx, std::uint32_t* a, const std::uint32_t* b,
               std::uint32_t c, std::size_t n) {
  const VConst k = vconst(ctx);
  const __m256i cm = _mm256_set1_epi32(static_cast<int>(to_mont(ctx, c)));
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
    __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    __m256i r = add_mod(k, va, redc_mul(k, vb, cm));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(a + i), r);
  }
  const std::uint64_t p = ctx.p, cc = c % ctx.p;
  for (; i < n; ++i)
    a[i] = static_cast<std::uint32_t>((a[i] + cc * b[i]) % p);
}

void scale_avx2(const FpCtx& ctx, std::uint32_t* a, std::uint32_t c,
                std::size_t n) {
  const VConst k = vconst(ctx);
  const __m256i cm = _mm256_set1_epi32(static_cast<int>(to_mont(ctx, c)));
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(a + i),
                        redc_mul(k, va, cm));
  }
  const std::uint64_t p = ctx.p, cc = c % ctx.p;
  for (; i < n; ++i)
    a[i] = static_cast<std::uint32_t>((cc * a[i]) % p);
}

}  // namespace

FpCtx make_avx2(std::uint32_t p) {
  if ((p & 1u) == 0 || p >= (1u << 16) || p < 3)
    throw std::invalid_argument("kern: avx2 variant requires odd p < 2^16");
  FpCtx ctx;
  ctx.p = p;
  ctx.pinv16 = mont_pinv16(p);
  ctx.axpy = axpy_avx2;
  ctx.scale = scale_avx2;
  ctx.variant = "avx2";
  return ctx;
}

}  // namespace tvx::kern

#else

namespace tvx::kern {
FpCtx make_avx2(std::uint32_t) {
  throw std::runtime_error("kern: avx2 variant not built on this target");
}
}  // namespace tvx::kern

#endif
