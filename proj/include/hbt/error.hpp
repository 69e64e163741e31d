#pragma once

#include <stdexcept>
#include <string>

namespace hbt {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter violated one of its documented invariants.
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// A function was evaluated outside its mathematical domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The closed-form expectation has a zero denominator.
class DegenerateDenominator : public Error {
 public:
  using Error::Error;
};

/// Requested stream length exceeds the configured maximum.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Lag window does not fit inside the streams.
class WindowTooLarge : public Error {
 public:
  using Error::Error;
};

/// All sideband coincidence counts are zero, so g2(0) is undefined.
class EmptySidebands : public Error {
 public:
  using Error::Error;
};

/// Failure inside one sweep cell; carries the cell coordinates.
class SweepCellError : public Error {
 public:
  SweepCellError(std::size_t i1, std::size_t i2, const std::string& what)
      : Error("cell (" + std::to_string(i1) + ", " + std::to_string(i2) + "): " + what),
        axis1_index(i1), axis2_index(i2) {}

  std::size_t axis1_index;
  std::size_t axis2_index;
};

/// Reading or writing a file failed.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace hbt
