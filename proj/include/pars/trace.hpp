#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace pars {

// 14-bit signed digitizer range, stored in int16.
inline constexpr int kAdcMin = -8192;
inline constexpr int kAdcMax = 8191;

inline constexpr double kDefaultSampleRateHz = 500e6;
inline constexpr std::uint32_t kDefaultPreTriggerSamples = 32;

/// Number of samples in the transient template (48 ns at 500 MS/s).
inline constexpr int kTemplateSamples = 24;

/// Post-trigger guard appended to the envelope gating window.
inline constexpr int kGateGuardSamples = 8;

/// Fixed bipolar transient template: one positive lobe then one negative
/// lobe, zero at both ends, normalized to unit peak-to-trough so a trace
/// synthesized with modulation depth m has spread exactly m before
/// quantization. Tests invert the forward model through this constant.
const std::array<double, kTemplateSamples>& trace_template();

/// AC-coupled photodiode waveform for one excitation pulse.
struct Trace {
  double sample_rate_hz = kDefaultSampleRateHz;
  std::uint32_t pre_trigger_samples = kDefaultPreTriggerSamples;
  std::vector<std::int16_t> samples;
};

/// One excitation event.
struct InterrogationRecord {
  double x_um = 0.0;
  double y_um = 0.0;
  double wavelength_nm = 0.0;
  std::uint64_t pulse_index = 0;
  Trace trace;
};

}  // namespace pars
