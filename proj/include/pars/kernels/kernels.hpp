#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

// Data-parallel inner-loop kernels used by the trace and image pipelines.
// Every kernel has a scalar reference implementation and, on x86 with AVX2,
// a vector variant selected once at runtime. The two paths are restricted to
// operations with identical IEEE semantics (no fma, no reassociation), so
// they produce bit-identical results; the test suite asserts this.

namespace pars::simd {

enum class Level { scalar, avx2 };

/// Highest level supported by the running CPU.
Level detect_level();

/// Level in use: detect_level() unless overridden by PARS_SIMD=scalar|avx2.
Level active_level();

const char* level_name(Level level);

struct MinMax {
  double min;
  double max;
};

/// Min and max of n finite doubles. n must be >= 1.
MinMax minmax(const double* data, std::size_t n);

/// out[i] = clamp((in[i] - lo) * scale, 0, 1).
void affine_clamp01(const double* in, double* out, std::size_t n, double lo, double scale);

/// out[i] = clamp(nearbyint(in[i]), -8192, 8191) as int16 (14-bit signed range).
void quantize14(const double* in, std::int16_t* out, std::size_t n);

// Reference kernels, public so the equivalence tests can pin them against
// the dispatched path.
namespace scalar {
MinMax minmax(const double* data, std::size_t n);
void affine_clamp01(const double* in, double* out, std::size_t n, double lo, double scale);
void quantize14(const double* in, std::int16_t* out, std::size_t n);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64) || defined(__i386__)
#define PARS_HAVE_AVX2_KERNELS 1
namespace avx2 {
// Callable only when detect_level() >= avx2.
MinMax minmax(const double* data, std::size_t n);
void affine_clamp01(const double* in, double* out, std::size_t n, double lo, double scale);
void quantize14(const double* in, std::int16_t* out, std::size_t n);
}  // namespace avx2
#else
#define PARS_HAVE_AVX2_KERNELS 0
#endif

}  // namespace pars::simd
