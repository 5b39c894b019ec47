#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pars/phantom.hpp"
#include "pars/trace.hpp"

namespace pars {

enum class ScanMode : std::uint8_t { mechanical = 0, optical = 1 };

struct ScanParams {
  ScanMode mode = ScanMode::optical;
  double fov_x_um = 0.0;
  double fov_y_um = 0.0;
  std::optional<double> step_um;           // exactly one of step_um /
  std::optional<std::uint64_t> point_count;  // point_count must be set
  double rep_rate_hz = 0.0;
  std::vector<double> wavelengths_nm;
  double pulse_energy_nj = 5.0;
  double psf_fwhm_um = 0.58;
  double overhead_fraction = 0.0;  // optional turnaround overhead, not modeled physically
  double energy_min_nj = 0.9;      // default bounds per the source lasers;
  double energy_max_nj = 20.0;     // overridable
};

struct ScanPlan {
  ScanParams params;
  std::uint64_t points_x = 0;  // raster dimensions of the target lattice
  std::uint64_t points_y = 0;
  double step_x_um = 0.0;
  double step_y_um = 0.0;
  std::uint64_t pulses_per_wavelength = 0;
  double per_wavelength_duration_s = 0.0;
  double total_duration_s = 0.0;
  double frame_rate_hz = 0.0;
};

/// Validates params and fills the derived throughput numbers.
/// duration = pulses * wavelengths / rate, scaled by (1 + overhead_fraction).
ScanPlan plan_scan(const ScanParams& params);

std::string format_plan_table(const ScanPlan& plan);
std::string format_plan_kv(const ScanPlan& plan);

struct Point2 {
  double x_um;
  double y_um;
};

struct TrajectoryOptions {
  double jitter_sigma_factor = 0.15;  // sigma = factor * step; 0 disables jitter
};

/// Interrogation positions in acquisition order. Mechanical: the exact
/// serpentine lattice. Optical: lattice targets plus zero-mean truncated
/// Gaussian jitter (cut at +/-0.5 step). Deterministic in seed.
std::vector<Point2> generate_trajectory(const ScanPlan& plan, std::uint64_t seed,
                                        const TrajectoryOptions& opts = {});

struct NoiseParams {
  double trace_noise_std = 0.0;  // white Gaussian, digitizer units
};

struct DigitizerParams {
  double sample_rate_hz = kDefaultSampleRateHz;
  std::uint32_t pre_trigger_samples = kDefaultPreTriggerSamples;
  double gain = 400.0;  // digitizer units per (nJ * unit absorption)
};

/// PSF-weighted absorption: the phantom's absorption field integrated
/// against a 2D Gaussian of the given FWHM centered at (x, y), evaluated on
/// a fixed normalized lattice (spacing min(pitch, sigma)/2, truncated at
/// 3 sigma). fwhm = 0 degenerates to a point sample. Sample positions clamp
/// to the phantom border, so centers within a jitter margin of the rim are
/// fine.
double psf_weighted_absorption(const ChromophorePhantom& phantom, const AbsorptionSpectrum& spectra,
                               double x_um, double y_um, double wavelength_nm, double psf_fwhm_um);

/// Forward model for one pulse:
///   trace = quantize14(noise + m * template), m = gain * E * psf_absorption.
/// Noise stream is derived from seed alone, so callers pass
/// mix_seed(dataset_seed, pulse_index) to make records order-independent.
Trace simulate_trace(const ChromophorePhantom& phantom, const AbsorptionSpectrum& spectra,
                     double x_um, double y_um, double wavelength_nm, const ScanPlan& plan,
                     const NoiseParams& noise, std::uint64_t seed,
                     const DigitizerParams& digitizer = {});

/// Full acquisition: every wavelength over its own trajectory, records in
/// pulse order, traces generated in parallel.
std::vector<InterrogationRecord> simulate_dataset(const ChromophorePhantom& phantom,
                                                  const AbsorptionSpectrum& spectra,
                                                  const ScanPlan& plan, const NoiseParams& noise,
                                                  std::uint64_t seed,
                                                  const DigitizerParams& digitizer = {},
                                                  const TrajectoryOptions& traj = {});

}  // namespace pars
