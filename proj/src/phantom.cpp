#include "pars/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pars/errors.hpp"
#include "pars/rng.hpp"

namespace pars {

double Field2D::sample(double x_um, double y_um) const {
  // Continuous coordinates relative to cell centers.
  const double fx = x_um / pitch_um - 0.5;
  const double fy = y_um / pitch_um - 0.5;
  const double cx = std::clamp(fx, 0.0, static_cast<double>(nx - 1));
  const double cy = std::clamp(fy, 0.0, static_cast<double>(ny - 1));
  const int i0 = std::min(static_cast<int>(cx), nx - 2 >= 0 ? nx - 2 : 0);
  const int j0 = std::min(static_cast<int>(cy), ny - 2 >= 0 ? ny - 2 : 0);
  const int i1 = std::min(i0 + 1, nx - 1);
  const int j1 = std::min(j0 + 1, ny - 1);
  const double tx = cx - i0;
  const double ty = cy - j0;
  const double top = (1.0 - tx) * at(i0, j0) + tx * at(i1, j0);
  const double bot = (1.0 - tx) * at(i0, j1) + tx * at(i1, j1);
  return (1.0 - ty) * top + ty * bot;
}

void AbsorptionTable::validate() const {
  if (entries.empty()) throw InvalidSpecError("absorption table is empty");
  for (std::size_t k = 0; k < entries.size(); ++k) {
    if (entries[k].second < 0.0) throw InvalidSpecError("absorption coefficient < 0");
    if (k > 0 && entries[k].first <= entries[k - 1].first)
      throw InvalidSpecError("absorption table wavelengths must be strictly increasing");
  }
}

double AbsorptionTable::at(double wavelength_nm) const {
  if (entries.empty()) throw SpectrumRangeError("absorption table is empty");
  if (wavelength_nm < entries.front().first || wavelength_nm > entries.back().first)
    throw SpectrumRangeError("wavelength " + std::to_string(wavelength_nm) +
                             " nm outside tabulated range");
  auto it = std::lower_bound(entries.begin(), entries.end(), wavelength_nm,
                             [](const auto& e, double w) { return e.first < w; });
  if (it->first == wavelength_nm) return it->second;
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  const double t = (wavelength_nm - lo.first) / (hi.first - lo.first);
  return lo.second + t * (hi.second - lo.second);
}

AbsorptionSpectrum AbsorptionSpectrum::defaults() {
  AbsorptionSpectrum s;
  s.dna.entries = {{250.0, 1.0}, {266.0, 0.9}, {420.0, 0.02}};
  s.cytochrome.entries = {{250.0, 0.1}, {266.0, 0.1}, {420.0, 1.0}};
  return s;
}

PhantomSpec PhantomSpec::from_config(const Config& cfg) {
  PhantomSpec s;
  s.width_um = cfg.get_double("width_um", s.width_um);
  s.height_um = cfg.get_double("height_um", s.height_um);
  s.resolution_um = cfg.get_double("resolution_um", s.resolution_um);
  s.nucleus_count = static_cast<int>(cfg.get_int("nucleus_count", s.nucleus_count));
  s.nucleus_radius_min_um = cfg.get_double("nucleus_radius_min_um", s.nucleus_radius_min_um);
  s.nucleus_radius_max_um = cfg.get_double("nucleus_radius_max_um", s.nucleus_radius_max_um);
  s.edge_softness_um = cfg.get_double("edge_softness_um", s.edge_softness_um);
  s.tissue_margin_um = cfg.get_double("tissue_margin_um", s.tissue_margin_um);
  s.cytochrome_base = cfg.get_double("cytochrome_base", s.cytochrome_base);
  s.vessels = cfg.get_bool("vessels", s.vessels);
  s.vessel_count = static_cast<int>(cfg.get_int("vessel_count", s.vessel_count));
  s.necrosis = cfg.get_bool("necrosis", s.necrosis);
  s.seed = static_cast<std::uint64_t>(cfg.get_int("seed", static_cast<long long>(s.seed)));
  return s;
}

namespace {

struct Superellipse {
  double cx, cy, ax, ay;

  // Exponent-4 superellipse: smooth tissue boundary without sharp corners.
  bool inside(double x, double y, double shrink = 0.0) const {
    const double a = ax - shrink;
    const double b = ay - shrink;
    if (a <= 0.0 || b <= 0.0) return false;
    const double u = (x - cx) / a;
    const double v = (y - cy) / b;
    return u * u * u * u + v * v * v * v <= 1.0;
  }
};

double disk_profile(double dist, double radius, double taper) {
  if (dist <= radius - taper) return 1.0;
  if (dist >= radius) return 0.0;
  // cosine falloff over [radius - taper, radius]
  const double t = (dist - (radius - taper)) / taper;
  return 0.5 * (1.0 + std::cos(std::numbers::pi * t));
}

void splat_disk(Field2D& field, double cx, double cy, double radius, double taper,
                const std::vector<std::uint8_t>& mask) {
  const double pitch = field.pitch_um;
  const int i_lo = std::max(0, static_cast<int>((cx - radius) / pitch) - 1);
  const int i_hi = std::min(field.nx - 1, static_cast<int>((cx + radius) / pitch) + 1);
  const int j_lo = std::max(0, static_cast<int>((cy - radius) / pitch) - 1);
  const int j_hi = std::min(field.ny - 1, static_cast<int>((cy + radius) / pitch) + 1);
  for (int j = j_lo; j <= j_hi; ++j) {
    const double y = (j + 0.5) * pitch;
    for (int i = i_lo; i <= i_hi; ++i) {
      if (!mask[static_cast<std::size_t>(j) * field.nx + i]) continue;
      const double x = (i + 0.5) * pitch;
      const double d = std::hypot(x - cx, y - cy);
      const double val = taper > 0.0 ? disk_profile(d, radius, taper) : (d <= radius ? 1.0 : 0.0);
      if (val > 0.0) {
        float& cell = field.at(i, j);
        cell = std::max(cell, static_cast<float>(val));
      }
    }
  }
}

}  // namespace

ChromophorePhantom generate_phantom(const PhantomSpec& spec) {
  if (spec.width_um <= 0.0 || spec.height_um <= 0.0 || spec.resolution_um <= 0.0)
    throw InvalidSpecError("phantom extent and resolution must be positive");
  if (spec.nucleus_count < 0) throw InvalidSpecError("nucleus_count must be >= 0");
  if (spec.nucleus_radius_min_um <= 0.0 || spec.nucleus_radius_max_um < spec.nucleus_radius_min_um)
    throw InvalidSpecError("bad nucleus radius range");

  const int nx = std::max(1, static_cast<int>(std::llround(spec.width_um / spec.resolution_um)));
  const int ny = std::max(1, static_cast<int>(std::llround(spec.height_um / spec.resolution_um)));

  ChromophorePhantom ph;
  ph.width_um = spec.width_um;
  ph.height_um = spec.height_um;
  ph.resolution_um = spec.resolution_um;
  ph.seed = spec.seed;
  ph.dna_density = Field2D(nx, ny, spec.resolution_um);
  ph.cytochrome_density = Field2D(nx, ny, spec.resolution_um);
  ph.background_reflectance = Field2D(nx, ny, spec.resolution_um);
  ph.tissue_mask.assign(static_cast<std::size_t>(nx) * ny, 0);

  const Superellipse tissue{spec.width_um / 2.0, spec.height_um / 2.0,
                            spec.width_um / 2.0 - spec.tissue_margin_um,
                            spec.height_um / 2.0 - spec.tissue_margin_um};

  for (int j = 0; j < ny; ++j) {
    const double y = (j + 0.5) * spec.resolution_um;
    for (int i = 0; i < nx; ++i) {
      const double x = (i + 0.5) * spec.resolution_um;
      if (tissue.inside(x, y)) ph.tissue_mask[static_cast<std::size_t>(j) * nx + i] = 1;
    }
  }

  Rng rng(mix_seed(spec.seed, 0x7048414eu));  // phantom stream

  // Optional necrotic region: nuclei are excluded there.
  double nec_x = 0.0, nec_y = 0.0, nec_r = 0.0;
  if (spec.necrosis) {
    nec_r = 0.15 * std::min(spec.width_um, spec.height_um);
    for (int attempt = 0; attempt < 1000; ++attempt) {
      nec_x = rng.uniform(0.0, spec.width_um);
      nec_y = rng.uniform(0.0, spec.height_um);
      if (tissue.inside(nec_x, nec_y, nec_r * 0.5)) break;
    }
  }

  // Optional vessels: swept-circle voids with no nuclei and little cytochrome.
  struct Vessel {
    double x0, y0, x1, y1, radius;
  };
  std::vector<Vessel> vessels;
  if (spec.vessels) {
    for (int v = 0; v < spec.vessel_count; ++v) {
      for (int attempt = 0; attempt < 1000; ++attempt) {
        const double x0 = rng.uniform(0.0, spec.width_um);
        const double y0 = rng.uniform(0.0, spec.height_um);
        const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
        const double len = rng.uniform(0.25, 0.45) * std::min(spec.width_um, spec.height_um);
        const double x1 = x0 + len * std::cos(theta);
        const double y1 = y0 + len * std::sin(theta);
        if (tissue.inside(x0, y0, 5.0) && tissue.inside(x1, y1, 5.0)) {
          vessels.push_back({x0, y0, x1, y1, rng.uniform(2.5, 4.0)});
          break;
        }
      }
    }
  }

  auto dist_to_vessel = [&vessels](double x, double y) {
    double best = 1e30;
    for (const auto& v : vessels) {
      const double dx = v.x1 - v.x0, dy = v.y1 - v.y0;
      const double len2 = dx * dx + dy * dy;
      double t = len2 > 0.0 ? ((x - v.x0) * dx + (y - v.y0) * dy) / len2 : 0.0;
      t = std::clamp(t, 0.0, 1.0);
      const double d = std::hypot(x - (v.x0 + t * dx), y - (v.y0 + t * dy)) - v.radius;
      best = std::min(best, d);
    }
    return best;
  };

  // Nuclei: rejection-sample centers so each disk stays inside the tissue
  // boundary and clear of vessels / the necrotic core.
  ph.nuclei.reserve(spec.nucleus_count);
  const int max_attempts = 200 * std::max(1, spec.nucleus_count);
  int attempts = 0;
  while (static_cast<int>(ph.nuclei.size()) < spec.nucleus_count && attempts < max_attempts) {
    ++attempts;
    const double r = rng.uniform(spec.nucleus_radius_min_um, spec.nucleus_radius_max_um);
    const double x = rng.uniform(0.0, spec.width_um);
    const double y = rng.uniform(0.0, spec.height_um);
    if (!tissue.inside(x, y, r)) continue;
    if (spec.necrosis && std::hypot(x - nec_x, y - nec_y) < nec_r + r) continue;
    if (spec.vessels && dist_to_vessel(x, y) < r + 1.0) continue;
    ph.nuclei.push_back({x, y, r});
  }

  for (const auto& n : ph.nuclei)
    splat_disk(ph.dna_density, n.x_um, n.y_um, n.radius_um, spec.edge_softness_um, ph.tissue_mask);

  // Diffuse cytochrome with a gentle ripple; reduced inside nuclei (cytoplasm
  // displaced) and in vessels / necrosis.
  for (int j = 0; j < ny; ++j) {
    const double y = (j + 0.5) * spec.resolution_um;
    for (int i = 0; i < nx; ++i) {
      const double x = (i + 0.5) * spec.resolution_um;
      ph.background_reflectance.at(i, j) = static_cast<float>(
          0.85 + 0.05 * std::sin(2.0 * std::numbers::pi * x / 97.0) *
                     std::cos(2.0 * std::numbers::pi * y / 71.0));
      if (!ph.in_tissue(i, j)) continue;
      double c = spec.cytochrome_base *
                 (1.0 + 0.25 * std::sin(2.0 * std::numbers::pi * x / 67.0) *
                            std::cos(2.0 * std::numbers::pi * y / 53.0));
      c *= 1.0 - 0.5 * ph.dna_density.at(i, j);
      if (spec.necrosis && std::hypot(x - nec_x, y - nec_y) < nec_r) c *= 0.6;
      if (spec.vessels && dist_to_vessel(x, y) < 0.0) c = 0.08;
      ph.cytochrome_density.at(i, j) = static_cast<float>(std::clamp(c, 0.0, 1.0));
    }
  }

  return ph;
}

double absorption_at(const ChromophorePhantom& phantom, double x_um, double y_um,
                     double wavelength_nm, const AbsorptionSpectrum& spectra) {
  if (!phantom.contains(x_um, y_um))
    throw OutOfBoundsError("position (" + std::to_string(x_um) + ", " + std::to_string(y_um) +
                           ") um outside phantom extent");
  const double eps_dna = spectra.dna.at(wavelength_nm);
  const double eps_cyt = spectra.cytochrome.at(wavelength_nm);
  return phantom.dna_density.sample(x_um, y_um) * eps_dna +
         phantom.cytochrome_density.sample(x_um, y_um) * eps_cyt;
}

ChromophorePhantom make_knife_edge_phantom(double width_um, double height_um,
                                           double resolution_um, double edge_x_um) {
  if (width_um <= 0.0 || height_um <= 0.0 || resolution_um <= 0.0)
    throw InvalidSpecError("phantom extent and resolution must be positive");
  const int nx = std::max(1, static_cast<int>(std::llround(width_um / resolution_um)));
  const int ny = std::max(1, static_cast<int>(std::llround(height_um / resolution_um)));
  ChromophorePhantom ph;
  ph.width_um = width_um;
  ph.height_um = height_um;
  ph.resolution_um = resolution_um;
  ph.dna_density = Field2D(nx, ny, resolution_um);
  ph.cytochrome_density = Field2D(nx, ny, resolution_um);
  ph.background_reflectance = Field2D(nx, ny, resolution_um, 0.85f);
  ph.tissue_mask.assign(static_cast<std::size_t>(nx) * ny, 1);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      if ((i + 0.5) * resolution_um >= edge_x_um) ph.dna_density.at(i, j) = 1.0f;
  return ph;
}

ChromophorePhantom make_uniform_phantom(double width_um, double height_um,
                                        double resolution_um, float dna, float cyt) {
  if (width_um <= 0.0 || height_um <= 0.0 || resolution_um <= 0.0)
    throw InvalidSpecError("phantom extent and resolution must be positive");
  const int nx = std::max(1, static_cast<int>(std::llround(width_um / resolution_um)));
  const int ny = std::max(1, static_cast<int>(std::llround(height_um / resolution_um)));
  ChromophorePhantom ph;
  ph.width_um = width_um;
  ph.height_um = height_um;
  ph.resolution_um = resolution_um;
  ph.dna_density = Field2D(nx, ny, resolution_um, dna);
  ph.cytochrome_density = Field2D(nx, ny, resolution_um, cyt);
  ph.background_reflectance = Field2D(nx, ny, resolution_um, 0.85f);
  ph.tissue_mask.assign(static_cast<std::size_t>(nx) * ny, 1);
  return ph;
}

}  // namespace pars
