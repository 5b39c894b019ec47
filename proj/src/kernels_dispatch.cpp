#include <cstdlib>
#include <cstring>

#include "pars/kernels/kernels.hpp"

namespace pars::simd {

Level detect_level() {
#if PARS_HAVE_AVX2_KERNELS && (defined(__GNUC__) || defined(__clang__))
  // __builtin_cpu_supports also checks OS ymm-state support via xgetbv.
  if (__builtin_cpu_supports("avx2")) return Level::avx2;
#endif
  return Level::scalar;
}

Level active_level() {
  static const Level level = [] {
    const Level best = detect_level();
    if (const char* env = std::getenv("PARS_SIMD")) {
      if (std::strcmp(env, "scalar") == 0) return Level::scalar;
      if (std::strcmp(env, "avx2") == 0 && best == Level::avx2) return Level::avx2;
    }
    return best;
  }();
  return level;
}

const char* level_name(Level level) {
  return level == Level::avx2 ? "avx2" : "scalar";
}

MinMax minmax(const double* data, std::size_t n) {
#if PARS_HAVE_AVX2_KERNELS
  if (active_level() == Level::avx2) return avx2::minmax(data, n);
#endif
  return scalar::minmax(data, n);
}

void affine_clamp01(const double* in, double* out, std::size_t n, double lo, double scale) {
#if PARS_HAVE_AVX2_KERNELS
  if (active_level() == Level::avx2) return avx2::affine_clamp01(in, out, n, lo, scale);
#endif
  scalar::affine_clamp01(in, out, n, lo, scale);
}

void quantize14(const double* in, std::int16_t* out, std::size_t n) {
#if PARS_HAVE_AVX2_KERNELS
  if (active_level() == Level::avx2) return avx2::quantize14(in, out, n);
#endif
  scalar::quantize14(in, out, n);
}

}  // namespace pars::simd
