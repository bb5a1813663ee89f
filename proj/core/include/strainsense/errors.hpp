#pragma once

#include <stdexcept>
#include <string>

namespace strainsense {

/// Base class for every numeric-guard failure raised by the library.
/// The command-line tool maps these to exit code 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input lies outside the range where the linearized model is meaningful.
class ModelRangeError : public Error {
 public:
  using Error::Error;
};

/// Charge-basis cutoff too small for the requested spectrum.
class CutoffError : public Error {
 public:
  using Error::Error;
};

/// Closed-form transmon approximation requested outside E_J/E_C >= 20.
class RegimeError : public Error {
 public:
  using Error::Error;
};

/// Finite-difference step outside its admissible window, or Richardson
/// extrapolation did not settle.
class StepError : public Error {
 public:
  using Error::Error;
};

/// Fock-space cutoff cannot hold the requested displacement.
class TruncationError : public Error {
 public:
  using Error::Error;
};

/// State fails a normalization or shape invariant.
class StateError : public Error {
 public:
  using Error::Error;
};

/// Register representation cannot express the requested operation.
class RepresentationError : public Error {
 public:
  using Error::Error;
};

/// Calibration slope is zero; strain cannot be inferred.
class DegenerateEstimatorError : public Error {
 public:
  using Error::Error;
};

/// Joint state is not a qubit-resonator product state.
class UnsupportedStateError : public Error {
 public:
  using Error::Error;
};

/// Fisher information is zero; the parameter is not identifiable.
class UnidentifiableError : public Error {
 public:
  using Error::Error;
};

/// Requested sweep or workload exceeds the resource guard.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Configuration file or command-line values are malformed.
/// Not an Error subclass: the tool maps it to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File could not be read or written; message carries the path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace strainsense
