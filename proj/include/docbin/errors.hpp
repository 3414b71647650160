#ifndef DOCBIN_ERRORS_HPP
#define DOCBIN_ERRORS_HPP

#include <stdexcept>

namespace docbin {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Unusable arguments or malformed configuration values.
struct InvalidParams : Error {
  using Error::Error;
};

// File-system and codec failures.
struct IoError : Error {
  using Error::Error;
};
struct FileNotFound : IoError {
  using IoError::IoError;
};
struct UnsupportedFormat : IoError {
  using IoError::IoError;
};
struct CorruptImage : IoError {
  using IoError::IoError;
};

struct RegionOutOfBounds : Error {
  using Error::Error;
};
struct DegenerateHistogram : Error {
  using Error::Error;
};
struct DimensionMismatch : Error {
  using Error::Error;
};
struct EmptyGroundTruth : Error {
  using Error::Error;
};
struct UndefinedDistortion : Error {
  using Error::Error;
};
struct EmptyTable : Error {
  using Error::Error;
};

}  // namespace docbin

#endif  // DOCBIN_ERRORS_HPP
