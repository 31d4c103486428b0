#pragma once

#include <stdexcept>
#include <string>

namespace responsum {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// An iterative solver (Newton, Picard, series summation) failed to meet its
/// tolerance within the allotted iterations.
class NonConvergence : public Error {
 public:
  using Error::Error;
};

/// The stationary point found is not a nondegenerate minimum.
class DegenerateMinimum : public Error {
 public:
  using Error::Error;
};

/// A structural assumption on the input system fails (e.g. the Hessian at the
/// equilibrium is not symmetric positive definite).
class HypothesisViolation : public Error {
 public:
  using Error::Error;
};

/// eps is outside the range where the uniform inverse bound applies.
class EpsilonTooLarge : public Error {
 public:
  using Error::Error;
};

/// A matrix required to be symmetric positive definite is not.
class NotPositiveDefinite : public Error {
 public:
  using Error::Error;
};

/// A linear solve hit a numerically singular matrix.
class SingularMatrix : public Error {
 public:
  using Error::Error;
};

/// A quantity that must be real came out with a non-negligible imaginary part.
class ComplexLeak : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration input (syntax level).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Well-formed configuration with invalid content (semantic level).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Not enough data to compute the requested diagnostic.
class InsufficientData : public Error {
 public:
  using Error::Error;
};

/// Requested expansion order exceeds the supported enumeration ceiling.
class OrderTooLarge : public Error {
 public:
  using Error::Error;
};

/// Adaptive integrator could not complete a step above the minimum step size.
class StepFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace responsum
