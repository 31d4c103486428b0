#pragma once

#include "responsum/propagator.hpp"
#include "responsum/series.hpp"

namespace responsum {

struct ResidualReport {
  FourierMap per_mode;
  double sup_norm = 0.0;
  double l2_norm = 0.0;
  Mode dominant_mode;
};

struct DecayReport {
  double xi_fit = 0.0;  // fitted exponential decay rate of |u_nu| vs |nu|_1
  std::vector<double> per_order_norms;
  double ratio = 0.0;
  double Phi = 0.0;      // driving strip-sup estimate
  double Delta = 0.0;    // tensor scale at radius rho
  double C0_diag = 0.0;  // combined diagnostic constant
};

struct Trajectory {
  std::vector<double> t;
  std::vector<Vec> x;
  std::vector<Vec> v;
  long steps = 0;
  long rejected = 0;
};

/// Substitute the truncated response into the equations of motion in Fourier
/// space: R_nu = (-eps s^2 M + i s Gamma) u_nu + eps [interaction]_nu for
/// nu != 0 with s = omega.nu, and R_0 = eps [interaction]_0; the composed
/// interaction carries the full restoring force, linear part included. The
/// composition is taken untruncated so spillover modes show up as genuine
/// residual.
ResidualReport ode_residual(const FourierMap& u, const Vec& zeta, const Vec& c, double eps,
                            const SystemSpec& spec, const TaylorTensors& tensors);

/// Implicit trapezoidal integration of the second-order system as a
/// first-order system in (x, v), with Newton inner solves and step-doubling
/// error control targeting step_tol. Throws StepFailure below the minimum
/// step size.
Trajectory integrate_reference(double eps, const SystemSpec& spec, const Vec& x0, const Vec& v0,
                               double t_end, double step_tol);

/// Sup over retained samples (those past transient_fraction of the final
/// time) of the distance between the trajectory and the response evaluated
/// at psi = omega t.
double attractor_compare(const Trajectory& trajectory, const FourierMap& u, const Vec& zeta,
                         const Vec& c, const Vec& omega, double transient_fraction);

/// Settling-time heuristic 20 kappa_m^2 / (eps b_1) from the slow decay rate.
double default_t_end(double eps, const SpectralData& sd);

/// Decay diagnostics of a computed order stack: exponential fit over mode
/// radius, per-order norms and ratio, and the scale constants at the chosen
/// analyticity radii rho (Taylor) and xi (Fourier). Throws InsufficientData
/// with fewer than two nonzero orders.
DecayReport decay_report(const OrderSeries& orders, const SystemSpec& spec,
                         const TaylorTensors& tensors, double rho, double xi);

}  // namespace responsum
