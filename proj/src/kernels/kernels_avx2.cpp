#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>

#include "hb/kernels/kernels.hpp"

// AVX2 kernel variants. Compiled in a plain TU via per-function target
// attributes; only ever called after a CPUID check. All loads/stores are
// unaligned. Reduction orders match the scalar reference exactly.

namespace hb::kernels::avx2 {

bool supported() {
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

namespace {

// Unsigned 64-bit a >= b using the signed compare with flipped sign bits.
__attribute__((target("avx2"))) inline __m256i cmplt_epu64(__m256i a, __m256i b) {
  const __m256i flip = _mm256_set1_epi64x(static_cast<long long>(0x8000000000000000ULL));
  return _mm256_cmpgt_epi64(_mm256_xor_si256(b, flip), _mm256_xor_si256(a, flip));
}

__attribute__((target("avx2"))) inline std::uint64_t popcount256(__m256i v) {
  const __m256i lookup = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
                                          0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
  const __m256i low_mask = _mm256_set1_epi8(0x0f);
  __m256i lo = _mm256_and_si256(v, low_mask);
  __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low_mask);
  __m256i cnt = _mm256_add_epi8(_mm256_shuffle_epi8(lookup, lo), _mm256_shuffle_epi8(lookup, hi));
  __m256i sad = _mm256_sad_epu8(cnt, _mm256_setzero_si256());
  std::uint64_t lanes[4];
  _mm256_storeu_si256(reinterpret_cast<__m256i*>(lanes), sad);
  return lanes[0] + lanes[1] + lanes[2] + lanes[3];
}

}  // namespace

__attribute__((target("avx2"))) void mod_add_u64(std::uint64_t* dst, const std::uint64_t* a,
                                                 const std::uint64_t* b, std::size_t n,
                                                 std::uint64_t q) {
  const __m256i qv = _mm256_set1_epi64x(static_cast<long long>(q));
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
    __m256i s = _mm256_add_epi64(va, vb);
    // subtract q unless s < q
    __m256i lt = cmplt_epu64(s, qv);
    __m256i sub = _mm256_andnot_si256(lt, qv);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), _mm256_sub_epi64(s, sub));
  }
  for (; i < n; ++i) {
    std::uint64_t s = a[i] + b[i];
    dst[i] = s >= q ? s - q : s;
  }
}

__attribute__((target("avx2"))) void mod_sub_u64(std::uint64_t* dst, const std::uint64_t* a,
                                                 const std::uint64_t* b, std::size_t n,
                                                 std::uint64_t q) {
  const __m256i qv = _mm256_set1_epi64x(static_cast<long long>(q));
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
    __m256i d = _mm256_sub_epi64(va, vb);
    __m256i lt = cmplt_epu64(va, vb);
    __m256i add = _mm256_and_si256(lt, qv);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), _mm256_add_epi64(d, add));
  }
  for (; i < n; ++i) {
    std::uint64_t d = a[i] - b[i];
    dst[i] = a[i] < b[i] ? d + q : d;
  }
}

__attribute__((target("avx2,fma"))) double dot_f64(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
  }
  // lane order matches the scalar reference: ((acc0+acc2)+(acc1+acc3)) + tail
  __m128d lo = _mm256_castpd256_pd128(acc);
  __m128d hi = _mm256_extractf128_pd(acc, 1);
  __m128d pair = _mm_add_pd(lo, hi);
  double main = _mm_cvtsd_f64(pair) + _mm_cvtsd_f64(_mm_unpackhi_pd(pair, pair));
  double tail = 0.0;
  for (; i < n; ++i) tail = std::fma(a[i], b[i], tail);
  return main + tail;
}

__attribute__((target("avx2,fma"))) void axpy_f64(double* y, double alpha, const double* x,
                                                  std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy));
  }
  for (; i < n; ++i) y[i] = std::fma(alpha, x[i], y[i]);
}

__attribute__((target("avx2"))) std::size_t hamming_u64(const std::uint64_t* a,
                                                        const std::uint64_t* b, std::size_t n) {
  std::size_t total = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
    total += popcount256(_mm256_xor_si256(va, vb));
  }
  for (; i < n; ++i) total += static_cast<std::size_t>(__builtin_popcountll(a[i] ^ b[i]));
  return total;
}

namespace {

// Widening i32*i32 -> i64 products of even and odd elements, accumulated.
__attribute__((target("avx2"))) inline __m256i mul_acc_i32_i64(__m256i acc, __m256i va, __m256i vb) {
  __m256i even = _mm256_mul_epi32(va, vb);
  // move odd 32-bit elements into even positions (sign handled by mul_epi32)
  __m256i va_odd = _mm256_shuffle_epi32(va, _MM_SHUFFLE(3, 3, 1, 1));
  __m256i vb_odd = _mm256_shuffle_epi32(vb, _MM_SHUFFLE(3, 3, 1, 1));
  __m256i odd = _mm256_mul_epi32(va_odd, vb_odd);
  return _mm256_add_epi64(acc, _mm256_add_epi64(even, odd));
}

__attribute__((target("avx2"))) inline std::int64_t sum_epi64(__m256i v) {
  std::int64_t lanes[4];
  _mm256_storeu_si256(reinterpret_cast<__m256i*>(lanes), v);
  return lanes[0] + lanes[1] + lanes[2] + lanes[3];
}

}  // namespace

__attribute__((target("avx2"))) std::int64_t sqdiff_i32(const std::int32_t* a, const std::int32_t* b,
                                                        std::size_t n) {
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
    __m256i d = _mm256_sub_epi32(va, vb);
    acc = mul_acc_i32_i64(acc, d, d);
  }
  std::int64_t total = sum_epi64(acc);
  for (; i < n; ++i) {
    std::int64_t d = static_cast<std::int64_t>(a[i]) - b[i];
    total += d * d;
  }
  return total;
}

__attribute__((target("avx2"))) std::int64_t dot_i32(const std::int32_t* a, const std::int32_t* b,
                                                     std::size_t n) {
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
    acc = mul_acc_i32_i64(acc, va, vb);
  }
  std::int64_t total = sum_epi64(acc);
  for (; i < n; ++i) total += static_cast<std::int64_t>(a[i]) * b[i];
  return total;
}

}  // namespace hb::kernels::avx2

#endif  // x86-64
