#pragma once

#include <stdexcept>
#include <string>

namespace thra {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A wavelength query fell outside a curve's sampled range (strict mode).
class OutOfRangeError : public Error {
public:
  using Error::Error;
};

/// Two or more spectral grids share no common wavelength interval.
class NoOverlapError : public Error {
public:
  using Error::Error;
};

/// A CSV row has the wrong arity or a non-numeric field.
class MalformedRowError : public Error {
public:
  using Error::Error;
};

/// Two CSV rows carry the same wavelength.
class DuplicateWavelengthError : public Error {
public:
  using Error::Error;
};

/// A curve has fewer than two sample points.
class TooFewPointsError : public Error {
public:
  using Error::Error;
};

/// Curve data violates a structural invariant (non-finite, unordered,
/// or positive gain on a passive curve).
class InvalidCurveError : public Error {
public:
  using Error::Error;
};

/// A direction query does not apply to the component kind, or a
/// circulator port pair has no configured curve.
class InvalidDirectionError : public Error {
public:
  using Error::Error;
};

/// Detection probability cannot be inverted to an efficiency.
class NotInvertibleError : public Error {
public:
  using Error::Error;
};

/// A wavelength scan was requested over an empty grid.
class EmptyGridError : public Error {
public:
  using Error::Error;
};

/// Protocol parameters or attack observations violate their ranges.
class InvalidObservationError : public Error {
public:
  using Error::Error;
};

/// A system configuration document is structurally or semantically invalid.
class ConfigError : public Error {
public:
  using Error::Error;
};

/// An input file could not be read or an output file could not be written.
class IoError : public Error {
public:
  using Error::Error;
};

/// Generic precondition violation on an operation argument.
class DomainError : public Error {
public:
  using Error::Error;
};

} // namespace thra
