#pragma once

#include <array>
#include <string>
#include <vector>

#include "pars/config.hpp"
#include "pars/gridding.hpp"

namespace pars {

struct RgbImage {
  int nx = 0;
  int ny = 0;
  std::vector<std::array<float, 3>> pixels;  // row-major, channels in [0, 1]

  RgbImage() = default;
  RgbImage(int nx_, int ny_) : nx(nx_), ny(ny_), pixels(static_cast<std::size_t>(nx_) * ny_) {}

  std::array<float, 3>& at(int i, int j) { return pixels[static_cast<std::size_t>(j) * nx + i]; }
  const std::array<float, 3>& at(int i, int j) const {
    return pixels[static_cast<std::size_t>(j) * nx + i];
  }
};

enum class ColormapName { gray, gray_inv, hot };

ColormapName colormap_from_name(const std::string& name);

/// Monotone colormap lookup for t in [0, 1].
std::array<float, 3> colormap_color(ColormapName map, double t);

struct ValueRange {
  bool auto_percentile = true;
  double p_lo = 1.0;   // percentiles when auto
  double p_hi = 99.0;
  double min = 0.0;    // explicit bounds otherwise
  double max = 1.0;
};

/// Normalizes grid values over the chosen range, clamps to [0, 1], maps
/// through the colormap. Missing nodes render as background (black).
/// A degenerate range renders the uniform mid-color and sets the flag.
RgbImage apply_colormap(const AmplitudeGrid& grid, ColormapName map, const ValueRange& range,
                        bool* degenerate_range = nullptr);

struct SegmentationOptions {
  double window_um = 25.0;      // side of the density-averaging window
  bool otsu = true;             // otherwise use explicit_threshold
  double explicit_threshold = 0.0;
};

/// Tissue/background mask from nuclear signal density: box-mean the 250 nm
/// (or 266 nm) amplitudes over window_um, threshold (Otsu by default), then
/// a 3x3 morphological closing. Throws InvalidWindowError if the window is
/// smaller than one grid pitch.
std::vector<std::uint8_t> segment_tissue(const AmplitudeGrid& nuclear_grid,
                                         const SegmentationOptions& opts);

/// Otsu threshold over a 256-bin histogram of the given values.
double otsu_threshold(const std::vector<double>& values);

struct StainProfile {
  std::array<float, 3> hematoxylin_absorbance{0.65f, 0.70f, 0.29f};
  std::array<float, 3> eosin_absorbance{0.07f, 0.99f, 0.11f};
  float k_h = 1.0f;
  float k_e = 1.0f;
  std::array<float, 3> background_color{1.0f, 1.0f, 1.0f};

  static StainProfile from_config(const Config& cfg);
  std::string dump() const;
  /// Absorbance vectors must be non-zero and non-parallel.
  void validate() const;
};

/// Beer-Lambert dual-wavelength mixing: channels are normalized to [0, 1]
/// per grid (auto-percentile 1..99), then inside the mask
///   pixel_c = exp(-(k_h * n * A_h[c] + k_e * e * A_e[c]))
/// with n from the 250 nm grid and e from the 420 nm grid; outside the mask
/// pixels take background_color exactly. Throws ShapeError on geometry
/// mismatch.
RgbImage mix_hne(const AmplitudeGrid& grid_250, const AmplitudeGrid& grid_420,
                 const std::vector<std::uint8_t>& mask, const StainProfile& profile);

}  // namespace pars
