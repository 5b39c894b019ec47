#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pars/trace.hpp"

namespace pars {

/// Piecewise-linear envelopes through a trace's local extrema, plus the
/// post-trigger gating window they are evaluated over.
struct EnvelopePair {
  std::vector<double> upper;
  std::vector<double> lower;
  std::size_t window_start = 0;
  std::size_t window_end = 0;  // one past the last gated sample
};

/// Upper envelope: linear interpolation through the trace's local maxima
/// (trace endpoints always anchor). Lower envelope symmetric through the
/// minima. Monotone or constant traces degenerate to the endpoint chord.
/// Throws MalformedTraceError if the trace is shorter than
/// pre_trigger_samples + 8.
EnvelopePair extract_envelopes(const Trace& trace);

/// PARS amplitude: envelope spread max(upper) - min(lower) over the gating
/// window, minus the pre-trigger baseline spread, floored at zero.
double pars_amplitude(const Trace& trace);

/// Plain-text columns (index, sample, upper, lower, gated) for plotting.
std::string format_trace_dump(const Trace& trace);

}  // namespace pars
