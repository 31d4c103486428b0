#pragma once

#include "responsum/polynomial.hpp"
#include "responsum/trig.hpp"
#include "responsum/types.hpp"

namespace responsum {

/// Which structural form the equations of motion take.
///  - GradientAutonomous: eps x'' + Gamma x' + eps grad V(x) = eps f(omega t),
///    unit mass matrix.
///  - GradientForced: eps M x'' + Gamma x' + eps grad_x W(x, omega t) = 0,
///    with W a trigonometric family of polynomial potentials.
enum class SystemKind { GradientAutonomous, GradientForced };

struct SystemSpec {
  SystemKind kind = SystemKind::GradientAutonomous;
  int m = 1;  // state dimension
  int d = 1;  // number of driving frequencies
  Vec omega;
  Mat mass;
  Mat damping;
  Polynomial potential;                   // GradientAutonomous
  TrigVectorField forcing;                // GradientAutonomous
  TrigPolynomialFamily potential_family;  // GradientForced

  /// Throws ValidationError on dimension mismatches, non-symmetric or
  /// non-positive-definite mass/damping, or zero frequency components.
  void validate() const;

  /// Largest l1 norm over the driving-mode support (0 if angle-independent).
  int max_forcing_mode() const;
};

/// Effective potential whose nondegenerate minima seed response solutions:
/// V(x) - <f_0, x>.
Polynomial build_U(const Polynomial& potential, const Vec& f0);

/// Kind-aware variant: the above for the autonomous kind, the angle average
/// W_0(x) for the forced kind.
Polynomial build_U(const SystemSpec& spec);

/// Damped Newton search for a local minimum of U starting from guess.
/// Throws NonConvergence if the gradient tolerance is not met, and
/// DegenerateMinimum if the Hessian at the converged point has an eigenvalue
/// at or below 1e-10 times the curvature scale.
Vec find_minimum(const Polynomial& U, const Vec& guess, double tol = 1e-12, int max_iter = 200);

}  // namespace responsum
