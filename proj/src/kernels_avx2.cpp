#ifdef MMSR_HAVE_AVX2

#include <immintrin.h>

#include "mmsr/kernels.hpp"

namespace mmsr {

namespace {

inline tu_t hsum_epi32(__m256i v) {
  __m128i lo = _mm256_castsi256_si128(v);
  __m128i hi = _mm256_extracti128_si256(v, 1);
  __m128i s = _mm_add_epi32(lo, hi);
  s = _mm_add_epi32(s, _mm_shuffle_epi32(s, _MM_SHUFFLE(1, 0, 3, 2)));
  s = _mm_add_epi32(s, _mm_shuffle_epi32(s, _MM_SHUFFLE(2, 3, 0, 1)));
  return _mm_cvtsi128_si32(s);
}

}  // namespace

tu_sum_t overload_run_avx2(const LoadMatrix& loads, const int* row_ids, int len,
                           int first, tu_t* z, tu_t* w_pos) {
  const int stride = loads.stride;
  const int groups = stride / 8;
  const tu_t* lengths = loads.lengths.data();
  const __m256i zero = _mm256_setzero_si256();
  const __m256i cv = _mm256_set1_epi32(loads.cycle);
  tu_sum_t total = 0;
  for (int t = first; t < len; ++t) {
    const tu_t* b = loads.row(row_ids[t]);
    const tu_t* zt = z + static_cast<size_t>(t) * stride;
    tu_t* zn = z + static_cast<size_t>(t + 1) * stride;
    const bool last = t + 1 == len;
    tu_t wsum = 0;
    for (int g = 0; g < groups; ++g) {
      __m256i zv = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(zt + g * 8));
      __m256i bv = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + g * 8));
      __m256i zb = _mm256_add_epi32(zv, bv);
      __m256i wv;
      if (last) {
        wv = _mm256_max_epi32(_mm256_sub_epi32(zb, cv), zero);
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(zn + g * 8), zero);
      } else {
        __m256i lv =
            _mm256_loadu_si256(reinterpret_cast<const __m256i*>(lengths + g * 8));
        wv = _mm256_max_epi32(_mm256_sub_epi32(zb, lv), zero);
        __m256i znext = _mm256_max_epi32(
            _mm256_sub_epi32(zb, _mm256_add_epi32(wv, cv)), zero);
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(zn + g * 8), znext);
      }
      wsum += hsum_epi32(wv);
    }
    w_pos[t] = wsum;
    total += wsum;
  }
  return total;
}

}  // namespace mmsr

#endif  // MMSR_HAVE_AVX2
