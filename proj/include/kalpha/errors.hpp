#pragma once

#include <stdexcept>
#include <string>

namespace kalpha {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller passed malformed input (length mismatch, too few samples, bad flag).
class UsageError : public Error {
 public:
  using Error::Error;
};

/// A scalar argument lies outside the domain of a closed form.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Radius-of-curvature profile whose first Fourier modes do not vanish.
class ClosureError : public Error {
 public:
  using Error::Error;
};

/// Radius of curvature is not strictly positive where it must be.
class ConvexityError : public Error {
 public:
  using Error::Error;
};

/// A time step lost convexity; the caller should retry with a smaller step.
class StepRejected : public Error {
 public:
  using Error::Error;
};

/// Grid too coarse for the requested construction.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent construction parameters.
class SpecError : public Error {
 public:
  using Error::Error;
};

/// The integrator failed (too many rejections, area growth).
class SchemeError : public Error {
 public:
  using Error::Error;
};

/// A run hit max_steps before reaching its area target.
class IncompleteRun : public Error {
 public:
  using Error::Error;
};

}  // namespace kalpha
