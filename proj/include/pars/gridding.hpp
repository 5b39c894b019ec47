#pragma once

#include <cstdint>
#include <vector>

#include "pars/acquisition.hpp"

namespace pars {

enum class NodeState : std::uint8_t { missing = 0, direct = 1, interpolated = 2 };

struct AmplitudeRecord {
  double x_um;
  double y_um;
  double amplitude;
};

struct GridSpec {
  double origin_x_um = 0.0;
  double origin_y_um = 0.0;
  double pitch_um = 1.0;
  int nx = 0;
  int ny = 0;
};

/// Cartesian raster of PARS amplitudes for one wavelength.
struct AmplitudeGrid {
  GridSpec spec;
  double wavelength_nm = 0.0;
  std::vector<double> values;     // row-major, ny rows of nx
  std::vector<NodeState> state;

  double& value(int i, int j) { return values[static_cast<std::size_t>(j) * spec.nx + i]; }
  double value(int i, int j) const { return values[static_cast<std::size_t>(j) * spec.nx + i]; }
  NodeState node_state(int i, int j) const {
    return state[static_cast<std::size_t>(j) * spec.nx + i];
  }
  double node_x(int i) const { return spec.origin_x_um + i * spec.pitch_um; }
  double node_y(int j) const { return spec.origin_y_um + j * spec.pitch_um; }
  std::size_t size() const { return values.size(); }
};

/// Nearest-neighbor fit, nodes -> records: each node takes the amplitude of
/// its nearest record within radius_um (Euclidean; ties to the lowest record
/// index), otherwise stays missing. Spatial bucket index, expected O(1) per
/// node; result is identical to the brute-force scan.
AmplitudeGrid fit_to_grid(const std::vector<AmplitudeRecord>& records, const GridSpec& spec,
                          double radius_um);

/// Gap filling. Pass 1: 1D linear interpolation across missing runs bounded
/// by filled nodes along rows; pass 2: the same along columns; pass 3:
/// remaining nodes copy the nearest filled value in their row, else column.
/// Direct values are never modified. Nodes whose entire row and column are
/// empty stay missing.
AmplitudeGrid interpolate_gaps(const AmplitudeGrid& grid);

/// Mechanical-scan reshape: de-serpentines amplitudes into the raster.
/// Requires a complete raster (points_x * points_y records, trajectory
/// order); every node comes out filled-direct.
AmplitudeGrid grid_mechanical(const std::vector<AmplitudeRecord>& records, const ScanPlan& plan);

}  // namespace pars
