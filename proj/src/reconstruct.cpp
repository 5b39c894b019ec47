#include "pars/reconstruct.hpp"

#include <cmath>

#include "pars/errors.hpp"
#include "pars/parallel.hpp"
#include "pars/signal.hpp"

namespace pars {

std::vector<AmplitudeRecord> amplitude_records(const std::vector<InterrogationRecord>& records,
                                               double wavelength_nm) {
  std::vector<const InterrogationRecord*> selected;
  selected.reserve(records.size());
  for (const auto& rec : records)
    if (rec.wavelength_nm == wavelength_nm) selected.push_back(&rec);

  std::vector<AmplitudeRecord> out(selected.size());
  parallel_for(selected.size(), [&](std::size_t k) {
    out[k] = {selected[k]->x_um, selected[k]->y_um, pars_amplitude(selected[k]->trace)};
  });
  return out;
}

std::vector<AmplitudeGrid> reconstruct_dataset(const Dataset& dataset,
                                               const ReconstructOptions& opts) {
  const ScanPlan& plan = dataset.plan;
  const double pitch = opts.grid_pitch_um.value_or(plan.step_x_um);
  if (pitch <= 0.0) throw InvalidSpecError("grid pitch must be positive");

  std::vector<AmplitudeGrid> grids;
  for (double wl : plan.params.wavelengths_nm) {
    const auto amps = amplitude_records(dataset.records, wl);
    if (amps.empty()) throw EmptyInputError("no records for wavelength " + std::to_string(wl));

    AmplitudeGrid grid;
    const bool complete_raster =
        plan.points_x * plan.points_y == amps.size() && !opts.grid_pitch_um;
    if (plan.params.mode == ScanMode::mechanical && complete_raster) {
      grid = grid_mechanical(amps, plan);
    } else {
      GridSpec spec;
      spec.origin_x_um = 0.0;
      spec.origin_y_um = 0.0;
      spec.pitch_um = pitch;
      spec.nx = static_cast<int>(std::floor(plan.params.fov_x_um / pitch + 1e-9)) + 1;
      spec.ny = static_cast<int>(std::floor(plan.params.fov_y_um / pitch + 1e-9)) + 1;
      grid = interpolate_gaps(fit_to_grid(amps, spec, opts.radius_factor * pitch));
    }
    grid.wavelength_nm = wl;
    grids.push_back(std::move(grid));
  }
  return grids;
}

}  // namespace pars
