#if defined(__x86_64__) || defined(_M_X64)

#include <cfloat>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <immintrin.h>

#include "cosetlab/kernels.hpp"

namespace cosetlab::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

// log2 of strictly positive normal doubles, accurate to ~2 ulp.
// x = 2^e * m with m in [sqrt(1/2), sqrt(2)); log(m) via the atanh series
// in s = (m-1)/(m+1); the t*log2(e) product is split exactly with an FMA
// so the final assembly loses at most the last rounding.
inline __m256d log2_pd(__m256d x) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d half = _mm256_set1_pd(0.5);
  const __m256d sqrt2 = _mm256_set1_pd(1.4142135623730951);
  const __m256d log2e = _mm256_set1_pd(1.4426950408889634);

  const __m256i bits = _mm256_castpd_si256(x);
  // biased exponent as double via the 2^52 magic-number trick
  const __m256i expo_raw = _mm256_srli_epi64(bits, 52);
  const __m256i magic = _mm256_set1_epi64x(0x4330000000000000LL);  // 2^52
  const __m256d expo_biased = _mm256_sub_pd(
      _mm256_castsi256_pd(_mm256_or_si256(expo_raw, magic)),
      _mm256_castsi256_pd(magic));
  __m256d e = _mm256_sub_pd(expo_biased, _mm256_set1_pd(1023.0));

  // mantissa in [1, 2)
  const __m256i mant_mask = _mm256_set1_epi64x(0x000fffffffffffffLL);
  const __m256i one_bits = _mm256_set1_epi64x(0x3ff0000000000000LL);
  __m256d m = _mm256_castsi256_pd(
      _mm256_or_si256(_mm256_and_si256(bits, mant_mask), one_bits));

  // fold into [sqrt(1/2), sqrt(2))
  const __m256d fold = _mm256_cmp_pd(m, sqrt2, _CMP_GE_OQ);
  m = _mm256_blendv_pd(m, _mm256_mul_pd(m, half), fold);
  e = _mm256_add_pd(e, _mm256_and_pd(fold, one));

  const __m256d s =
      _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
  const __m256d z = _mm256_mul_pd(s, s);

  // atanh tail: log(m) = 2s + 2s * z * P(z), P(z) = sum z^k/(2k+3)
  __m256d poly = _mm256_set1_pd(1.0 / 23.0);
  poly = _mm256_fmadd_pd(poly, z, _mm256_set1_pd(1.0 / 21.0));
  poly = _mm256_fmadd_pd(poly, z, _mm256_set1_pd(1.0 / 19.0));
  poly = _mm256_fmadd_pd(poly, z, _mm256_set1_pd(1.0 / 17.0));
  poly = _mm256_fmadd_pd(poly, z, _mm256_set1_pd(1.0 / 15.0));
  poly = _mm256_fmadd_pd(poly, z, _mm256_set1_pd(1.0 / 13.0));
  poly = _mm256_fmadd_pd(poly, z, _mm256_set1_pd(1.0 / 11.0));
  poly = _mm256_fmadd_pd(poly, z, _mm256_set1_pd(1.0 / 9.0));
  poly = _mm256_fmadd_pd(poly, z, _mm256_set1_pd(1.0 / 7.0));
  poly = _mm256_fmadd_pd(poly, z, _mm256_set1_pd(1.0 / 5.0));
  poly = _mm256_fmadd_pd(poly, z, _mm256_set1_pd(1.0 / 3.0));

  const __m256d t = _mm256_add_pd(s, s);
  const __m256d w = _mm256_mul_pd(_mm256_mul_pd(t, z), poly);

  // log2(x) = e + (t + w)*log2e with t*log2e split as u + v (exact)
  const __m256d u = _mm256_mul_pd(t, log2e);
  const __m256d v = _mm256_fmsub_pd(t, log2e, u);
  return _mm256_add_pd(_mm256_add_pd(e, u), _mm256_fmadd_pd(w, log2e, v));
}

}  // namespace

double sum(const double* v, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(v + i));
  double total = hsum(acc);
  for (; i < n; ++i) total += v[i];
  return total;
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
  double total = hsum(acc);
  for (; i < n; ++i) total += a[i] * b[i];
  return total;
}

void scale(double* dst, const double* src, double c, std::size_t n) {
  const __m256d cv = _mm256_set1_pd(c);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(dst + i, _mm256_mul_pd(cv, _mm256_loadu_pd(src + i)));
  for (; i < n; ++i) dst[i] = c * src[i];
}

double neg_plogp_sum(const double* p, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d tiny = _mm256_set1_pd(DBL_MIN);  // subnormals go scalar
  const __m256d one = _mm256_set1_pd(1.0);
  __m256d acc = _mm256_setzero_pd();
  double tail = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(p + i);
    const __m256d pos = _mm256_cmp_pd(x, zero, _CMP_GT_OQ);
    const __m256d sub = _mm256_and_pd(pos, _mm256_cmp_pd(x, tiny, _CMP_LT_OQ));
    if (_mm256_movemask_pd(sub) != 0) {
      for (std::size_t j = i; j < i + 4; ++j)
        if (p[j] > 0.0) tail -= p[j] * std::log2(p[j]);
      continue;
    }
    // masked-out lanes evaluate log2 at 1 so they contribute exactly 0
    const __m256d xs = _mm256_blendv_pd(one, x, pos);
    acc = _mm256_fnmadd_pd(xs, log2_pd(xs), acc);
  }
  double total = hsum(acc) + tail;
  for (; i < n; ++i)
    if (p[i] > 0.0) total -= p[i] * std::log2(p[i]);
  return total;
}

void select3_add(double* acc, const std::uint8_t* sym, double v0, double v1,
                 double v2, std::size_t n) {
  const __m256d v0v = _mm256_set1_pd(v0);
  const __m256d v1v = _mm256_set1_pd(v1);
  const __m256d v2v = _mm256_set1_pd(v2);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    std::uint32_t packed;
    __builtin_memcpy(&packed, sym + i, 4);
    const __m128i s32 =
        _mm_cvtepu8_epi32(_mm_cvtsi32_si128(static_cast<int>(packed)));
    const __m256d is0 = _mm256_castsi256_pd(
        _mm256_cvtepi32_epi64(_mm_cmpeq_epi32(s32, _mm_setzero_si128())));
    const __m256d is1 = _mm256_castsi256_pd(
        _mm256_cvtepi32_epi64(_mm_cmpeq_epi32(s32, _mm_set1_epi32(1))));
    __m256d v = _mm256_blendv_pd(v2v, v1v, is1);
    v = _mm256_blendv_pd(v, v0v, is0);
    _mm256_storeu_pd(acc + i, _mm256_add_pd(_mm256_loadu_pd(acc + i), v));
  }
  for (; i < n; ++i) {
    const std::uint8_t s = sym[i];
    acc[i] += s == 0 ? v0 : (s == 1 ? v1 : v2);
  }
}

}  // namespace cosetlab::kernels::avx2

#endif  // x86-64
