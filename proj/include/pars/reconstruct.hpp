#pragma once

#include <optional>
#include <vector>

#include "pars/dataset.hpp"
#include "pars/gridding.hpp"

namespace pars {

struct ReconstructOptions {
  double radius_factor = 1.0;            // association radius = factor * pitch
  std::optional<double> grid_pitch_um;   // defaults to the plan's step
};

/// Records for one wavelength, in pulse order, with extracted amplitudes.
std::vector<AmplitudeRecord> amplitude_records(const std::vector<InterrogationRecord>& records,
                                               double wavelength_nm);

/// Dataset -> one grid per plan wavelength. Mechanical complete rasters
/// reshape directly; everything else goes through nearest-neighbor fitting
/// and gap interpolation.
std::vector<AmplitudeGrid> reconstruct_dataset(const Dataset& dataset,
                                               const ReconstructOptions& opts = {});

}  // namespace pars
