#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pars {

/// Base class for every error raised by the toolkit.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidSpecError : Error {
  using Error::Error;
};
struct OutOfBoundsError : Error {
  using Error::Error;
};
struct SpectrumRangeError : Error {
  using Error::Error;
};
struct InvalidPlanError : Error {
  using Error::Error;
};
struct AmbiguousPlanError : InvalidPlanError {
  using InvalidPlanError::InvalidPlanError;
};
struct InvalidNoiseError : Error {
  using Error::Error;
};
struct MalformedTraceError : Error {
  using Error::Error;
};
struct EmptyInputError : Error {
  using Error::Error;
};
struct MalformedRecordError : Error {
  using Error::Error;
};
struct EmptyGridError : Error {
  using Error::Error;
};
struct IncompleteScanError : Error {
  using Error::Error;
};
struct ShapeError : Error {
  using Error::Error;
};
struct InvalidWindowError : Error {
  using Error::Error;
};
struct ConfigError : Error {
  using Error::Error;
};
struct IoError : Error {
  using Error::Error;
};
struct UnsupportedFormatError : Error {
  using Error::Error;
};

/// Raised when a dataset file ends early or is internally inconsistent.
/// Carries the index of the record that failed and the byte offset at
/// which the failure was detected.
struct CorruptDatasetError : Error {
  CorruptDatasetError(const std::string& what, std::uint64_t record, std::uint64_t offset)
      : Error(what + " (record " + std::to_string(record) + ", byte offset " +
              std::to_string(offset) + ")"),
        record_index(record),
        byte_offset(offset) {}

  std::uint64_t record_index;
  std::uint64_t byte_offset;
};

}  // namespace pars
