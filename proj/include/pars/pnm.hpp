#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pars/colorize.hpp"
#include "pars/gridding.hpp"
#include "pars/phantom.hpp"

namespace pars {

/// 16-bit P5 graymap, big-endian samples, maxval 65535.
void write_pgm16(const std::string& path, int nx, int ny, const std::vector<std::uint16_t>& pixels);

struct Pgm16 {
  int nx = 0;
  int ny = 0;
  std::vector<std::uint16_t> pixels;
};

Pgm16 read_pgm16(const std::string& path);

/// Grid export: linear scaling from [0, max amplitude] to [0, 65535]
/// (missing nodes scale like zeros), plus a `<path>.txt` sidecar with
/// origin, pitch, wavelength, dimensions and the scale factor.
void write_grid_pgm(const std::string& path, const AmplitudeGrid& grid);

/// Loads a grid written by write_grid_pgm, undoing the scaling from the
/// sidecar. All nodes come back filled-direct.
AmplitudeGrid read_grid_pgm(const std::string& path);

/// Phantom field snapshot; values expected in [0, 1].
void write_field_pgm(const std::string& path, const Field2D& field);

/// 8-bit binary P6 pixmap.
void write_ppm8(const std::string& path, const RgbImage& image);

}  // namespace pars
