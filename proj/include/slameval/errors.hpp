#pragma once

#include <stdexcept>
#include <string>

namespace slameval {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad argument values: non-finite components, malformed parameters.
struct InvalidInputError : Error {
  using Error::Error;
};

// Interpolation query outside the bracketing interval.
struct OutOfRangeError : Error {
  using Error::Error;
};

// Interpolation interval of zero width between differing poses.
struct DegenerateIntervalError : Error {
  using Error::Error;
};

// Malformed trajectory text; message carries the offending line number.
struct ParseError : Error {
  using Error::Error;
};

// Timestamps not strictly increasing.
struct OrderingError : ParseError {
  using ParseError::ParseError;
};

// A line parsed but describes an unusable record (e.g. zero-norm quaternion).
struct InvalidRecordError : ParseError {
  using ParseError::ParseError;
};

// Scene manifest fails validation.
struct ManifestError : Error {
  using Error::Error;
};

// File could not be opened or written.
struct IoError : Error {
  using Error::Error;
};

// Association produced zero usable pairs.
struct NoOverlapError : Error {
  using Error::Error;
};

// Fewer correspondences than the alignment problem needs.
struct UnderdeterminedError : Error {
  using Error::Error;
};

// Scale estimation impossible (zero point-set variance).
struct DegenerateScaleError : Error {
  using Error::Error;
};

// Evaluation span is empty or inverted.
struct InvalidSpanError : Error {
  using Error::Error;
};

// Statistic requested over too few samples.
struct InsufficientDataError : Error {
  using Error::Error;
};

}  // namespace slameval
