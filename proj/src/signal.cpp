#include "pars/signal.hpp"

#include <algorithm>
#include <sstream>

#include "pars/errors.hpp"
#include "pars/kernels/kernels.hpp"

namespace pars {

namespace {

// Fill [anchors] with a piecewise-linear interpolant over all n samples.
void interpolate_anchors(const std::vector<std::size_t>& idx, const std::vector<double>& val,
                         std::vector<double>& out) {
  for (std::size_t a = 0; a + 1 < idx.size(); ++a) {
    const std::size_t i0 = idx[a], i1 = idx[a + 1];
    const double v0 = val[a], v1 = val[a + 1];
    const double span = static_cast<double>(i1 - i0);
    out[i0] = v0;
    for (std::size_t i = i0 + 1; i < i1; ++i)
      out[i] = v0 + (v1 - v0) * (static_cast<double>(i - i0) / span);
  }
  out[idx.back()] = val.back();
}

}  // namespace

EnvelopePair extract_envelopes(const Trace& trace) {
  const std::size_t n = trace.samples.size();
  if (n < trace.pre_trigger_samples + 8)
    throw MalformedTraceError("trace has " + std::to_string(n) + " samples, need at least " +
                              std::to_string(trace.pre_trigger_samples + 8));

  const auto& s = trace.samples;
  std::vector<std::size_t> max_idx{0}, min_idx{0};
  std::vector<double> max_val{static_cast<double>(s[0])}, min_val{static_cast<double>(s[0])};

  // Local extrema; the first sample of a plateau counts so quantized peaks
  // still anchor.
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (s[i] > s[i - 1] && s[i] >= s[i + 1]) {
      max_idx.push_back(i);
      max_val.push_back(static_cast<double>(s[i]));
    }
    if (s[i] < s[i - 1] && s[i] <= s[i + 1]) {
      min_idx.push_back(i);
      min_val.push_back(static_cast<double>(s[i]));
    }
  }
  max_idx.push_back(n - 1);
  max_val.push_back(static_cast<double>(s[n - 1]));
  min_idx.push_back(n - 1);
  min_val.push_back(static_cast<double>(s[n - 1]));

  EnvelopePair env;
  env.upper.resize(n);
  env.lower.resize(n);
  interpolate_anchors(max_idx, max_val, env.upper);
  interpolate_anchors(min_idx, min_val, env.lower);
  env.window_start = trace.pre_trigger_samples;
  env.window_end = std::min(n, static_cast<std::size_t>(trace.pre_trigger_samples) +
                                   kTemplateSamples + kGateGuardSamples);
  return env;
}

double pars_amplitude(const Trace& trace) {
  const EnvelopePair env = extract_envelopes(trace);
  const std::size_t w0 = env.window_start;
  const std::size_t w1 = env.window_end;

  const double gated = simd::minmax(env.upper.data() + w0, w1 - w0).max -
                       simd::minmax(env.lower.data() + w0, w1 - w0).min;

  // Baseline from the raw pre-trigger segment. Its own envelope extrema are
  // the raw extrema, and using the global envelopes here would leak the
  // post-trigger peak across the trigger.
  double baseline = 0.0;
  if (trace.pre_trigger_samples >= 2) {
    std::int16_t lo = trace.samples[0], hi = trace.samples[0];
    for (std::uint32_t i = 1; i < trace.pre_trigger_samples; ++i) {
      lo = std::min(lo, trace.samples[i]);
      hi = std::max(hi, trace.samples[i]);
    }
    baseline = static_cast<double>(hi) - static_cast<double>(lo);
  }

  return std::max(0.0, gated - baseline);
}

std::string format_trace_dump(const Trace& trace) {
  const EnvelopePair env = extract_envelopes(trace);
  std::ostringstream os;
  os << "# index sample upper lower gated\n";
  for (std::size_t i = 0; i < trace.samples.size(); ++i) {
    const int gated = (i >= env.window_start && i < env.window_end) ? 1 : 0;
    os << i << " " << trace.samples[i] << " " << env.upper[i] << " " << env.lower[i] << " "
       << gated << "\n";
  }
  return os.str();
}

}  // namespace pars
