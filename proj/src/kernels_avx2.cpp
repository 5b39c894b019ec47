#include "pars/kernels/kernels.hpp"

// Compiled with -mavx2 (see CMakeLists); callers go through active_level().

#if PARS_HAVE_AVX2_KERNELS

#include <immintrin.h>

namespace pars::simd::avx2 {

MinMax minmax(const double* data, std::size_t n) {
  std::size_t i = 0;
  double lo = data[0];
  double hi = data[0];
  if (n >= 4) {
    __m256d vlo = _mm256_loadu_pd(data);
    __m256d vhi = vlo;
    for (i = 4; i + 4 <= n; i += 4) {
      const __m256d x = _mm256_loadu_pd(data + i);
      vlo = _mm256_min_pd(x, vlo);
      vhi = _mm256_max_pd(x, vhi);
    }
    alignas(32) double tl[4], th[4];
    _mm256_store_pd(tl, vlo);
    _mm256_store_pd(th, vhi);
    lo = tl[0];
    hi = th[0];
    for (int k = 1; k < 4; ++k) {
      lo = tl[k] < lo ? tl[k] : lo;
      hi = th[k] > hi ? th[k] : hi;
    }
  }
  for (; i < n; ++i) {
    lo = data[i] < lo ? data[i] : lo;
    hi = data[i] > hi ? data[i] : hi;
  }
  return {lo, hi};
}

void affine_clamp01(const double* in, double* out, std::size_t n, double lo, double scale) {
  const __m256d vlo = _mm256_set1_pd(lo);
  const __m256d vscale = _mm256_set1_pd(scale);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d t = _mm256_mul_pd(_mm256_sub_pd(_mm256_loadu_pd(in + i), vlo), vscale);
    t = _mm256_max_pd(t, zero);
    t = _mm256_min_pd(t, one);
    _mm256_storeu_pd(out + i, t);
  }
  for (; i < n; ++i) {
    double t = (in[i] - lo) * scale;
    t = t > 0.0 ? t : 0.0;
    t = t < 1.0 ? t : 1.0;
    out[i] = t;
  }
}

void quantize14(const double* in, std::int16_t* out, std::size_t n) {
  const __m256d vmin = _mm256_set1_pd(-8192.0);
  const __m256d vmax = _mm256_set1_pd(8191.0);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256d a = _mm256_round_pd(_mm256_loadu_pd(in + i), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d b = _mm256_round_pd(_mm256_loadu_pd(in + i + 4), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    a = _mm256_min_pd(_mm256_max_pd(a, vmin), vmax);
    b = _mm256_min_pd(_mm256_max_pd(b, vmin), vmax);
    const __m128i ia = _mm256_cvtpd_epi32(a);
    const __m128i ib = _mm256_cvtpd_epi32(b);
    _mm_storeu_si128(reinterpret_cast<__m128i*>(out + i), _mm_packs_epi32(ia, ib));
  }
  for (; i < n; ++i) {
    double v = __builtin_nearbyint(in[i]);
    v = v > -8192.0 ? v : -8192.0;
    v = v < 8191.0 ? v : 8191.0;
    out[i] = static_cast<std::int16_t>(v);
  }
}

}  // namespace pars::simd::avx2

#endif  // PARS_HAVE_AVX2_KERNELS
