#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pars/config.hpp"

namespace pars {

/// Row-major scalar field sampled at cell centers: cell (i, j) sits at
/// ((i + 0.5) * pitch, (j + 0.5) * pitch). Bilinear between centers,
/// clamped at the border half-cells.
struct Field2D {
  int nx = 0;
  int ny = 0;
  double pitch_um = 1.0;
  std::vector<float> v;

  Field2D() = default;
  Field2D(int nx_, int ny_, double pitch, float fill = 0.0f)
      : nx(nx_), ny(ny_), pitch_um(pitch), v(static_cast<std::size_t>(nx_) * ny_, fill) {}

  float& at(int i, int j) { return v[static_cast<std::size_t>(j) * nx + i]; }
  float at(int i, int j) const { return v[static_cast<std::size_t>(j) * nx + i]; }

  double sample(double x_um, double y_um) const;
};

/// One chromophore's relative absorption vs wavelength. Strictly increasing
/// wavelengths; linear interpolation between entries; querying outside the
/// table throws SpectrumRangeError.
struct AbsorptionTable {
  std::vector<std::pair<double, double>> entries;  // (wavelength_nm, coefficient)

  double at(double wavelength_nm) const;
  void validate() const;
};

struct AbsorptionSpectrum {
  AbsorptionTable dna;
  AbsorptionTable cytochrome;

  /// Relative spectra preserving the qualitative contrast: DNA dominates in
  /// the UV, cytochromes at 420 nm. Overridable configuration, not ground
  /// truth.
  static AbsorptionSpectrum defaults();
};

struct Nucleus {
  double x_um;
  double y_um;
  double radius_um;
};

struct PhantomSpec {
  double width_um = 200.0;
  double height_um = 200.0;
  double resolution_um = 0.5;
  int nucleus_count = 120;
  double nucleus_radius_min_um = 3.0;
  double nucleus_radius_max_um = 5.0;
  double edge_softness_um = 0.0;   // cosine taper width; 0 = hard disks
  double tissue_margin_um = 15.0;  // background rim between tissue and extent
  double cytochrome_base = 0.35;
  bool vessels = false;
  int vessel_count = 2;
  bool necrosis = false;
  std::uint64_t seed = 1;

  static PhantomSpec from_config(const Config& cfg);
};

struct ChromophorePhantom {
  double width_um = 0.0;
  double height_um = 0.0;
  double resolution_um = 1.0;
  Field2D dna_density;
  Field2D cytochrome_density;
  Field2D background_reflectance;
  std::vector<std::uint8_t> tissue_mask;  // per cell, row-major
  std::vector<Nucleus> nuclei;            // as placed, for oracles
  std::uint64_t seed = 0;

  bool in_tissue(int i, int j) const {
    return tissue_mask[static_cast<std::size_t>(j) * dna_density.nx + i] != 0;
  }
  bool contains(double x_um, double y_um) const {
    return x_um >= 0.0 && x_um <= width_um && y_um >= 0.0 && y_um <= height_um;
  }
};

/// Synthetic tissue: disk-shaped high-DNA nuclei scattered in a superellipse
/// tissue region, diffuse cytochrome throughout, zero densities outside.
/// Pure function of spec (including spec.seed).
ChromophorePhantom generate_phantom(const PhantomSpec& spec);

/// dna(x,y)*eps_dna(lambda) + cyt(x,y)*eps_cyt(lambda), densities sampled
/// bilinearly. Throws OutOfBoundsError / SpectrumRangeError.
double absorption_at(const ChromophorePhantom& phantom, double x_um, double y_um,
                     double wavelength_nm, const AbsorptionSpectrum& spectra);

/// Knife-edge target for resolution tests: dna = 1 where x >= edge_x_um,
/// else 0; no tissue rim, uniform reflectance.
ChromophorePhantom make_knife_edge_phantom(double width_um, double height_um,
                                           double resolution_um, double edge_x_um);

/// Uniform-density phantom (tissue everywhere); handy for linearity checks.
ChromophorePhantom make_uniform_phantom(double width_um, double height_um,
                                        double resolution_um, float dna, float cyt);

}  // namespace pars
