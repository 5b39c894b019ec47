#include "pars/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <iomanip>

#include "pars/errors.hpp"
#include "pars/kernels/kernels.hpp"
#include "pars/parallel.hpp"
#include "pars/rng.hpp"

namespace pars {

const std::array<double, kTemplateSamples>& trace_template() {
  static const std::array<double, kTemplateSamples> tmpl = [] {
    std::array<double, kTemplateSamples> t{};
    double lo = 0.0, hi = 0.0;
    for (int k = 0; k < kTemplateSamples; ++k) {
      const double u = static_cast<double>(k) / kTemplateSamples;
      const double hann = std::sin(std::numbers::pi * u);
      t[k] = std::sin(2.0 * std::numbers::pi * u) * hann * hann;
      lo = std::min(lo, t[k]);
      hi = std::max(hi, t[k]);
    }
    for (auto& v : t) v /= (hi - lo);
    return t;
  }();
  return tmpl;
}

namespace {

// Inclusive lattice over [0, fov]: points at 0, step, ..., <= fov.
std::uint64_t points_per_axis(double fov_um, double step_um) {
  return static_cast<std::uint64_t>(std::floor(fov_um / step_um + 1e-9)) + 1;
}

}  // namespace

ScanPlan plan_scan(const ScanParams& params) {
  if (params.fov_x_um <= 0.0 || params.fov_y_um <= 0.0)
    throw InvalidPlanError("field of view must be positive");
  if (params.rep_rate_hz <= 0.0) throw InvalidPlanError("repetition rate must be positive");
  if (params.step_um && params.point_count)
    throw AmbiguousPlanError("specify either step_um or point_count, not both");
  if (!params.step_um && !params.point_count)
    throw InvalidPlanError("one of step_um or point_count is required");
  if (params.step_um && *params.step_um <= 0.0)
    throw InvalidPlanError("sampling step must be positive");
  if (params.point_count && *params.point_count == 0)
    throw InvalidPlanError("point count must be positive");
  if (params.overhead_fraction < 0.0) throw InvalidPlanError("overhead fraction must be >= 0");
  if (params.psf_fwhm_um < 0.0) throw InvalidPlanError("psf fwhm must be >= 0");
  if (params.pulse_energy_nj < params.energy_min_nj || params.pulse_energy_nj > params.energy_max_nj)
    throw InvalidPlanError("pulse energy " + std::to_string(params.pulse_energy_nj) +
                           " nJ outside [" + std::to_string(params.energy_min_nj) + ", " +
                           std::to_string(params.energy_max_nj) + "] nJ bounds");

  ScanPlan plan;
  plan.params = params;
  if (params.step_um) {
    plan.points_x = points_per_axis(params.fov_x_um, *params.step_um);
    plan.points_y = points_per_axis(params.fov_y_um, *params.step_um);
    plan.step_x_um = *params.step_um;
    plan.step_y_um = *params.step_um;
    plan.pulses_per_wavelength = plan.points_x * plan.points_y;
  } else {
    const std::uint64_t n = *params.point_count;
    const double aspect = params.fov_x_um / params.fov_y_um;
    plan.points_x = std::max<std::uint64_t>(
        1, static_cast<std::uint64_t>(std::llround(std::sqrt(static_cast<double>(n) * aspect))));
    plan.points_y = (n + plan.points_x - 1) / plan.points_x;
    plan.step_x_um = plan.points_x > 1 ? params.fov_x_um / static_cast<double>(plan.points_x - 1)
                                       : params.fov_x_um;
    plan.step_y_um = plan.points_y > 1 ? params.fov_y_um / static_cast<double>(plan.points_y - 1)
                                       : params.fov_y_um;
    plan.pulses_per_wavelength = n;
  }

  const double pulses = static_cast<double>(plan.pulses_per_wavelength);
  plan.per_wavelength_duration_s =
      pulses / params.rep_rate_hz * (1.0 + params.overhead_fraction);
  plan.total_duration_s =
      plan.per_wavelength_duration_s * static_cast<double>(params.wavelengths_nm.size());
  plan.frame_rate_hz = plan.total_duration_s > 0.0 ? 1.0 / plan.total_duration_s : 0.0;
  return plan;
}

std::string format_plan_table(const ScanPlan& plan) {
  std::ostringstream os;
  const auto& p = plan.params;
  os << std::fixed;
  os << "  mode                  " << (p.mode == ScanMode::mechanical ? "mechanical" : "optical")
     << "\n";
  os << "  field of view         " << std::setprecision(1) << p.fov_x_um << " x " << p.fov_y_um
     << " um\n";
  if (p.step_um)
    os << "  sampling step         " << std::setprecision(3) << *p.step_um << " um\n";
  else
    os << "  interrogation points  " << *p.point_count << "\n";
  os << "  raster                " << plan.points_x << " x " << plan.points_y << "\n";
  os << "  repetition rate       " << std::setprecision(0) << p.rep_rate_hz << " Hz\n";
  os << "  wavelengths           ";
  if (p.wavelengths_nm.empty()) {
    os << "none";
  } else {
    for (std::size_t i = 0; i < p.wavelengths_nm.size(); ++i)
      os << (i ? ", " : "") << std::setprecision(0) << p.wavelengths_nm[i] << " nm";
  }
  os << "\n";
  os << "  pulse energy          " << std::setprecision(1) << p.pulse_energy_nj << " nJ\n";
  os << "  pulses / wavelength   " << plan.pulses_per_wavelength << "\n";
  os << "  per-wavelength time   " << std::setprecision(1) << plan.per_wavelength_duration_s
     << " s (" << std::setprecision(2) << plan.per_wavelength_duration_s / 60.0 << " min)\n";
  os << "  total time            " << std::setprecision(1) << plan.total_duration_s << " s\n";
  if (plan.frame_rate_hz > 0.0)
    os << "  frame rate            " << std::setprecision(3) << plan.frame_rate_hz << " fps\n";
  return os.str();
}

std::string format_plan_kv(const ScanPlan& plan) {
  std::ostringstream os;
  const auto& p = plan.params;
  os << "mode = " << (p.mode == ScanMode::mechanical ? "mechanical" : "optical") << "\n";
  os << "fov_x_um = " << p.fov_x_um << "\n";
  os << "fov_y_um = " << p.fov_y_um << "\n";
  if (p.step_um) os << "step_um = " << *p.step_um << "\n";
  if (p.point_count) os << "point_count = " << *p.point_count << "\n";
  os << "rep_rate_hz = " << p.rep_rate_hz << "\n";
  os << "wavelengths_nm =";
  for (double w : p.wavelengths_nm) os << " " << w;
  os << "\n";
  os << "pulse_energy_nj = " << p.pulse_energy_nj << "\n";
  os << "psf_fwhm_um = " << p.psf_fwhm_um << "\n";
  os << "points_x = " << plan.points_x << "\n";
  os << "points_y = " << plan.points_y << "\n";
  os << "pulses_per_wavelength = " << plan.pulses_per_wavelength << "\n";
  os << "per_wavelength_duration_s = " << plan.per_wavelength_duration_s << "\n";
  os << "total_duration_s = " << plan.total_duration_s << "\n";
  os << "frame_rate_hz = " << plan.frame_rate_hz << "\n";
  return os.str();
}

std::vector<Point2> generate_trajectory(const ScanPlan& plan, std::uint64_t seed,
                                        const TrajectoryOptions& opts) {
  const std::uint64_t nx = plan.points_x;
  const std::uint64_t total = plan.pulses_per_wavelength;
  std::vector<Point2> pts;
  pts.reserve(total);

  const double sigma_x = opts.jitter_sigma_factor * plan.step_x_um;
  const double sigma_y = opts.jitter_sigma_factor * plan.step_y_um;
  const bool jitter = plan.params.mode == ScanMode::optical && opts.jitter_sigma_factor > 0.0;
  Rng rng(mix_seed(seed, 0x54524a43u));  // trajectory stream

  for (std::uint64_t k = 0; k < total; ++k) {
    const std::uint64_t row = k / nx;
    const std::uint64_t col_in_row = k % nx;
    // serpentine: odd rows run right-to-left
    const std::uint64_t col = (row % 2 == 0) ? col_in_row : nx - 1 - col_in_row;
    Point2 p{static_cast<double>(col) * plan.step_x_um,
             static_cast<double>(row) * plan.step_y_um};
    if (jitter) {
      p.x_um += rng.truncated_normal(sigma_x, 0.5 * plan.step_x_um);
      p.y_um += rng.truncated_normal(sigma_y, 0.5 * plan.step_y_um);
    }
    pts.push_back(p);
  }
  return pts;
}

double psf_weighted_absorption(const ChromophorePhantom& phantom, const AbsorptionSpectrum& spectra,
                               double x_um, double y_um, double wavelength_nm,
                               double psf_fwhm_um) {
  const double eps_dna = spectra.dna.at(wavelength_nm);
  const double eps_cyt = spectra.cytochrome.at(wavelength_nm);

  auto local_absorption = [&](double sx, double sy) {
    // Sample positions clamp to the border, extending rim values outward.
    const double cx = std::clamp(sx, 0.0, phantom.width_um);
    const double cy = std::clamp(sy, 0.0, phantom.height_um);
    return phantom.dna_density.sample(cx, cy) * eps_dna +
           phantom.cytochrome_density.sample(cx, cy) * eps_cyt;
  };

  if (psf_fwhm_um <= 0.0) return local_absorption(x_um, y_um);

  const double sigma = psf_fwhm_um / 2.3548200450309493;  // FWHM -> sigma
  const double h = 0.5 * std::min(phantom.resolution_um, sigma);
  const int radius = static_cast<int>(std::ceil(3.0 * sigma / h));

  double sum = 0.0;
  double wsum = 0.0;
  for (int j = -radius; j <= radius; ++j) {
    const double wy = std::exp(-0.5 * (j * h) * (j * h) / (sigma * sigma));
    for (int i = -radius; i <= radius; ++i) {
      const double wx = std::exp(-0.5 * (i * h) * (i * h) / (sigma * sigma));
      const double w = wx * wy;
      sum += w * local_absorption(x_um + i * h, y_um + j * h);
      wsum += w;
    }
  }
  return sum / wsum;
}

Trace simulate_trace(const ChromophorePhantom& phantom, const AbsorptionSpectrum& spectra,
                     double x_um, double y_um, double wavelength_nm, const ScanPlan& plan,
                     const NoiseParams& noise, std::uint64_t seed,
                     const DigitizerParams& digitizer) {
  if (noise.trace_noise_std < 0.0) throw InvalidNoiseError("trace noise std must be >= 0");

  // Optical jitter may push a position just past the phantom rim; anything
  // beyond that margin is a caller bug.
  const double pad = 0.5 * std::max(plan.step_x_um, plan.step_y_um);
  if (x_um < -pad || x_um > phantom.width_um + pad || y_um < -pad ||
      y_um > phantom.height_um + pad)
    throw OutOfBoundsError("interrogation position outside phantom extent");

  const double absorption =
      psf_weighted_absorption(phantom, spectra, x_um, y_um, wavelength_nm, plan.params.psf_fwhm_um);
  const double m = digitizer.gain * plan.params.pulse_energy_nj * absorption;

  const auto& tmpl = trace_template();
  const std::uint32_t pre = digitizer.pre_trigger_samples;
  const std::size_t n = pre + kTemplateSamples + kGateGuardSamples + 8;

  std::vector<double> raw(n, 0.0);
  if (noise.trace_noise_std > 0.0) {
    Rng rng(seed);
    for (auto& v : raw) v = rng.normal(0.0, noise.trace_noise_std);
  }
  for (int k = 0; k < kTemplateSamples; ++k) raw[pre + k] += m * tmpl[k];

  Trace trace;
  trace.sample_rate_hz = digitizer.sample_rate_hz;
  trace.pre_trigger_samples = pre;
  trace.samples.resize(n);
  simd::quantize14(raw.data(), trace.samples.data(), n);
  return trace;
}

std::vector<InterrogationRecord> simulate_dataset(const ChromophorePhantom& phantom,
                                                  const AbsorptionSpectrum& spectra,
                                                  const ScanPlan& plan, const NoiseParams& noise,
                                                  std::uint64_t seed,
                                                  const DigitizerParams& digitizer,
                                                  const TrajectoryOptions& traj) {
  if (noise.trace_noise_std < 0.0) throw InvalidNoiseError("trace noise std must be >= 0");

  const std::uint64_t per_wl = plan.pulses_per_wavelength;
  const std::size_t wl_count = plan.params.wavelengths_nm.size();
  std::vector<InterrogationRecord> records(per_wl * wl_count);

  for (std::size_t w = 0; w < wl_count; ++w) {
    const double wavelength = plan.params.wavelengths_nm[w];
    const auto points = generate_trajectory(plan, mix_seed(seed, w), traj);
    InterrogationRecord* out = records.data() + w * per_wl;
    parallel_for(points.size(), [&, out, wavelength, w](std::size_t k) {
      InterrogationRecord& rec = out[k];
      rec.x_um = points[k].x_um;
      rec.y_um = points[k].y_um;
      rec.wavelength_nm = wavelength;
      rec.pulse_index = w * per_wl + k;
      rec.trace = simulate_trace(phantom, spectra, rec.x_um, rec.y_um, wavelength, plan, noise,
                                 mix_seed(seed, rec.pulse_index), digitizer);
    });
  }
  return records;
}

}  // namespace pars
