#include <cfenv>
#include <cmath>

#include "pars/kernels/kernels.hpp"

namespace pars::simd::scalar {

MinMax minmax(const double* data, std::size_t n) {
  double lo = data[0];
  double hi = data[0];
  for (std::size_t i = 1; i < n; ++i) {
    // Same operand order as the vector compares: keep x only if it wins.
    lo = data[i] < lo ? data[i] : lo;
    hi = data[i] > hi ? data[i] : hi;
  }
  return {lo, hi};
}

void affine_clamp01(const double* in, double* out, std::size_t n, double lo, double scale) {
  for (std::size_t i = 0; i < n; ++i) {
    double t = (in[i] - lo) * scale;
    t = t > 0.0 ? t : 0.0;  // max(t, 0), matching maxpd(t, 0)
    t = t < 1.0 ? t : 1.0;  // min(t, 1), matching minpd(t, 1)
    out[i] = t;
  }
}

void quantize14(const double* in, std::int16_t* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double v = std::nearbyint(in[i]);  // round half to even, as roundpd does
    v = v > -8192.0 ? v : -8192.0;
    v = v < 8191.0 ? v : 8191.0;
    out[i] = static_cast<std::int16_t>(v);
  }
}

}  // namespace pars::simd::scalar
