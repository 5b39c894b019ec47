#include "pars/gridding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pars/errors.hpp"
#include "pars/parallel.hpp"

namespace pars {

namespace {

struct BucketIndex {
  double min_x, min_y;
  double cell;
  int ncx, ncy;
  // record indices per cell, ascending because records are pushed in order
  std::vector<std::vector<std::uint32_t>> cells;

  BucketIndex(const std::vector<AmplitudeRecord>& records, double cell_size) : cell(cell_size) {
    min_x = records[0].x_um;
    min_y = records[0].y_um;
    double max_x = min_x, max_y = min_y;
    for (const auto& r : records) {
      min_x = std::min(min_x, r.x_um);
      max_x = std::max(max_x, r.x_um);
      min_y = std::min(min_y, r.y_um);
      max_y = std::max(max_y, r.y_um);
    }
    ncx = std::max(1, static_cast<int>((max_x - min_x) / cell) + 1);
    ncy = std::max(1, static_cast<int>((max_y - min_y) / cell) + 1);
    cells.resize(static_cast<std::size_t>(ncx) * ncy);
    for (std::uint32_t k = 0; k < records.size(); ++k)
      cells[cell_of(records[k].x_um, records[k].y_um)].push_back(k);
  }

  std::size_t cell_of(double x, double y) const {
    const int ci = std::clamp(static_cast<int>((x - min_x) / cell), 0, ncx - 1);
    const int cj = std::clamp(static_cast<int>((y - min_y) / cell), 0, ncy - 1);
    return static_cast<std::size_t>(cj) * ncx + ci;
  }
};

}  // namespace

AmplitudeGrid fit_to_grid(const std::vector<AmplitudeRecord>& records, const GridSpec& spec,
                          double radius_um) {
  if (records.empty()) throw EmptyInputError("no records to grid");
  if (spec.pitch_um <= 0.0 || spec.nx <= 0 || spec.ny <= 0)
    throw InvalidSpecError("grid spec must have positive pitch and dimensions");
  if (radius_um <= 0.0) throw InvalidSpecError("association radius must be positive");
  for (std::size_t k = 0; k < records.size(); ++k)
    if (!std::isfinite(records[k].x_um) || !std::isfinite(records[k].y_um) ||
        !std::isfinite(records[k].amplitude))
      throw MalformedRecordError("non-finite record at index " + std::to_string(k));

  AmplitudeGrid grid;
  grid.spec = spec;
  grid.values.assign(static_cast<std::size_t>(spec.nx) * spec.ny, 0.0);
  grid.state.assign(grid.values.size(), NodeState::missing);

  const BucketIndex index(records, radius_um);
  const double r2 = radius_um * radius_um;

  parallel_for(static_cast<std::size_t>(spec.ny), [&](std::size_t j) {
    const double ny_um = spec.origin_y_um + static_cast<double>(j) * spec.pitch_um;
    for (int i = 0; i < spec.nx; ++i) {
      const double nx_um = spec.origin_x_um + i * spec.pitch_um;

      // Scan every bucket within the radius bound; candidates outside it
      // cannot win, so this equals the full scan, tie-breaks included.
      const int ci_lo = std::max(0, static_cast<int>(std::floor((nx_um - radius_um - index.min_x) / index.cell)));
      const int ci_hi = std::min(index.ncx - 1, static_cast<int>(std::floor((nx_um + radius_um - index.min_x) / index.cell)));
      const int cj_lo = std::max(0, static_cast<int>(std::floor((ny_um - radius_um - index.min_y) / index.cell)));
      const int cj_hi = std::min(index.ncy - 1, static_cast<int>(std::floor((ny_um + radius_um - index.min_y) / index.cell)));

      double best_d2 = std::numeric_limits<double>::infinity();
      std::uint32_t best_k = 0;
      bool found = false;
      for (int cj = cj_lo; cj <= cj_hi; ++cj) {
        for (int ci = ci_lo; ci <= ci_hi; ++ci) {
          for (std::uint32_t k : index.cells[static_cast<std::size_t>(cj) * index.ncx + ci]) {
            const double dx = nx_um - records[k].x_um;
            const double dy = ny_um - records[k].y_um;
            const double d2 = dx * dx + dy * dy;
            if (d2 < best_d2 || (d2 == best_d2 && found && k < best_k)) {
              if (d2 <= r2) {
                best_d2 = d2;
                best_k = k;
                found = true;
              }
            }
          }
        }
      }
      if (found) {
        grid.values[j * spec.nx + i] = records[best_k].amplitude;
        grid.state[j * spec.nx + i] = NodeState::direct;
      }
    }
  });
  return grid;
}

namespace {

// 1D gap fill for one line (row or column) of a strided array.
template <typename ValueAt, typename StateAt>
void fill_line_runs(int n, ValueAt value, StateAt state) {
  int prev_filled = -1;
  for (int i = 0; i < n; ++i) {
    if (state(i) == NodeState::missing) continue;
    if (prev_filled >= 0 && i - prev_filled > 1) {
      const double v0 = value(prev_filled);
      const double v1 = value(i);
      const double span = static_cast<double>(i - prev_filled);
      for (int k = prev_filled + 1; k < i; ++k) {
        value(k) = v0 + (v1 - v0) * (static_cast<double>(k - prev_filled) / span);
        state(k) = NodeState::interpolated;
      }
    }
    prev_filled = i;
  }
}

}  // namespace

AmplitudeGrid interpolate_gaps(const AmplitudeGrid& grid) {
  const int nx = grid.spec.nx;
  const int ny = grid.spec.ny;
  bool any_direct = false;
  for (const auto s : grid.state)
    if (s == NodeState::direct) {
      any_direct = true;
      break;
    }
  if (!any_direct) throw EmptyGridError("grid has no filled-direct nodes");

  AmplitudeGrid out = grid;

  // pass 1: rows
  parallel_for(static_cast<std::size_t>(ny), [&](std::size_t j) {
    double* row = out.values.data() + j * nx;
    NodeState* st = out.state.data() + j * nx;
    fill_line_runs(
        nx, [row](int i) -> double& { return row[i]; },
        [st](int i) -> NodeState& { return st[i]; });
  });

  // pass 2: columns, over what pass 1 left
  parallel_for(static_cast<std::size_t>(nx), [&](std::size_t i) {
    fill_line_runs(
        ny, [&, i](int j) -> double& { return out.values[static_cast<std::size_t>(j) * nx + i]; },
        [&, i](int j) -> NodeState& { return out.state[static_cast<std::size_t>(j) * nx + i]; });
  });

  // pass 3: edge runs copy the nearest filled value in the row, else column
  // (ties go to the lower index). Snapshot states so copies don't cascade.
  const std::vector<NodeState> before = out.state;
  auto state_at = [&](int i, int j) { return before[static_cast<std::size_t>(j) * nx + i]; };
  parallel_for(static_cast<std::size_t>(ny), [&](std::size_t j) {
    for (int i = 0; i < nx; ++i) {
      if (state_at(i, static_cast<int>(j)) != NodeState::missing) continue;
      int src_i = -1;
      for (int d = 1; d < nx; ++d) {
        if (i - d >= 0 && state_at(i - d, j) != NodeState::missing) {
          src_i = i - d;
          break;
        }
        if (i + d < nx && state_at(i + d, j) != NodeState::missing) {
          src_i = i + d;
          break;
        }
      }
      if (src_i >= 0) {
        out.values[j * nx + i] = out.values[j * nx + src_i];
        out.state[j * nx + i] = NodeState::interpolated;
        continue;
      }
      int src_j = -1;
      for (int d = 1; d < ny; ++d) {
        if (static_cast<int>(j) - d >= 0 && state_at(i, static_cast<int>(j) - d) != NodeState::missing) {
          src_j = static_cast<int>(j) - d;
          break;
        }
        if (static_cast<int>(j) + d < ny && state_at(i, static_cast<int>(j) + d) != NodeState::missing) {
          src_j = static_cast<int>(j) + d;
          break;
        }
      }
      if (src_j >= 0) {
        out.values[j * nx + i] = out.values[static_cast<std::size_t>(src_j) * nx + i];
        out.state[j * nx + i] = NodeState::interpolated;
      }
      // else: whole row and column empty; stays missing
    }
  });

  return out;
}

AmplitudeGrid grid_mechanical(const std::vector<AmplitudeRecord>& records, const ScanPlan& plan) {
  const std::uint64_t nx = plan.points_x;
  const std::uint64_t ny = plan.points_y;
  if (records.size() != plan.pulses_per_wavelength || nx * ny != records.size())
    throw IncompleteScanError("expected " + std::to_string(nx) + "x" + std::to_string(ny) + " = " +
                              std::to_string(nx * ny) + " records, got " +
                              std::to_string(records.size()));

  AmplitudeGrid grid;
  grid.spec.origin_x_um = 0.0;
  grid.spec.origin_y_um = 0.0;
  grid.spec.pitch_um = plan.step_x_um;
  grid.spec.nx = static_cast<int>(nx);
  grid.spec.ny = static_cast<int>(ny);
  grid.values.resize(records.size());
  grid.state.assign(records.size(), NodeState::direct);

  for (std::uint64_t k = 0; k < records.size(); ++k) {
    const std::uint64_t row = k / nx;
    const std::uint64_t col_in_row = k % nx;
    const std::uint64_t col = (row % 2 == 0) ? col_in_row : nx - 1 - col_in_row;
    grid.values[row * nx + col] = records[k].amplitude;
  }
  return grid;
}

}  // namespace pars
