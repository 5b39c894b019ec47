#pragma once

#include <string>
#include <vector>

#include "pars/acquisition.hpp"
#include "pars/trace.hpp"

namespace pars {

// PARS dataset container, version 1. Little-endian fixed layout:
//
//   offset size  field
//   0      4     magic 'P' 'A' 'R' 'S'
//   4      2     version u16 (= 1)
//   6      1     mode u8 (0 mechanical, 1 optical)
//   7      1     sampling u8 (0 step_um, 1 point_count)
//   8      2     wavelength_count u16
//   10     8     sample_rate_hz f64
//   18     4     pre_trigger_samples u32
//   22     8     record_count u64
//   30     8     fov_um f64 (square field-of-view echo)
//   38     8     step_um or point_count f64, per sampling byte
//   46     8     rep_rate_hz f64
//   54           wavelength table: wavelength_count x f32
//
// followed by record_count records:
//   x_um f64, y_um f64, wavelength_nm f32, pulse_index u64,
//   n_samples u32, samples i16 * n_samples
//
// The layout is frozen for version 1; any change bumps the version.

inline constexpr std::size_t kDatasetHeaderBytes = 54;
inline constexpr std::uint16_t kDatasetVersion = 1;

struct Dataset {
  ScanPlan plan;
  double sample_rate_hz = kDefaultSampleRateHz;
  std::uint32_t pre_trigger_samples = kDefaultPreTriggerSamples;
  std::vector<InterrogationRecord> records;
};

/// Serializes to the layout above. Every record's wavelength must appear in
/// the plan's wavelength list and its trace must match the shared
/// sample rate / pre-trigger configuration.
void write_dataset(const Dataset& dataset, const std::string& path);

/// Convenience wrapper building the Dataset from records + plan.
void write_dataset(const std::vector<InterrogationRecord>& records, const ScanPlan& plan,
                   const std::string& path);

/// Throws UnsupportedFormatError on bad magic/version and
/// CorruptDatasetError (with record index and byte offset) on truncation or
/// inconsistency. read(write(x)) re-serializes byte-identically.
Dataset read_dataset(const std::string& path);

}  // namespace pars
