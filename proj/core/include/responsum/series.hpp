#pragma once

#include <vector>

#include "responsum/fourier_map.hpp"
#include "responsum/propagator.hpp"
#include "responsum/taylor.hpp"

namespace responsum {

/// Expansion orders u^(k), k = 1..count(). The average ζ is carried as the
/// zero-mode entry of order 1; all higher orders have no zero mode.
struct OrderSeries {
  std::vector<FourierMap> orders;
  Vec zeta;
  double epsilon = 0.0;
  int k_max = 0;
  int n_trunc = FourierMap::kUnlimited;

  int count() const { return static_cast<int>(orders.size()); }
  const FourierMap& order(int k) const { return orders.at(k - 1); }
};

struct RatioDiagnostics {
  std::vector<double> per_order_norms;  // a_k = max over nonzero modes of |u^(k)_nu|
  double ratio = 0.0;                   // last two nonzero a_k; 0 when undefined
  bool non_convergent = false;          // ratio >= 1
};

struct SummedSeries {
  FourierMap u;  // zero-average response correction
  RatioDiagnostics diagnostics;
};

/// Default l1 truncation radius: k_max times the largest forcing mode norm.
int default_truncation(const SystemSpec& spec, int k_max);

/// Order-1 coefficients: solve D(eps, omega.nu) u_nu against the driving
/// seed per mode, and store zeta in the zero mode.
FourierMap first_order(double eps, const SystemSpec& spec, const TaylorTensors& tensors,
                       const Vec& zeta, int n_trunc = FourierMap::kUnlimited);

/// Coefficient of the composed interaction at expansion order count(), using
/// every stored order. Feeding orders 1..k-1 yields the order k-1 composite.
FourierMap compose_nonlinearity(const OrderSeries& orders, const TaylorTensors& tensors);

/// u^(k)_nu = -D^-1(eps, omega.nu) eps [composite]_nu for nu != 0.
FourierMap next_order(int k, const OrderSeries& orders, double eps, const SystemSpec& spec,
                      const TaylorTensors& tensors);

/// Run first_order then next_order up to k_max. n_trunc < 0 selects the
/// default truncation.
OrderSeries compute_series(double eps, const SystemSpec& spec, const TaylorTensors& tensors,
                           const Vec& zeta, int k_max, int n_trunc = -1);

/// Sum the orders with weight mu^k, excluding the zero mode, and report
/// per-order coefficient norms plus the empirical convergence ratio.
SummedSeries sum_series(const OrderSeries& orders, double mu = 1.0);

/// Fixed-point iteration on the nonzero modes, independent of the order
/// expansion; throws NonConvergence when tol is not met within max_iter.
FourierMap picard_solve(double eps, const SystemSpec& spec, const TaylorTensors& tensors,
                        const Vec& zeta, double tol, int max_iter, int n_trunc = -1);

/// x = c + zeta + sum_nu u_nu e^{i nu.psi}; throws ComplexLeak when the
/// imaginary residue exceeds 1e-9.
Vec evaluate(const FourierMap& u, const Vec& zeta, const Vec& c, const Vec& psi);

/// Sup of the field norm over a uniform phase grid (multiples of 4 points
/// per angle, so quarter-period phases are sampled exactly). 0 picks a
/// dimension-dependent default.
double sup_phase_norm(const FourierMap& u, int points_per_dim = 0);

/// Fourier coefficients of the interaction force along c + w: the composed
/// Taylor expansion at every stored mode, minus the driving term for the
/// autonomous kind. w carries its average in the zero mode.
FourierMap interaction_coefficients(const FourierMap& w, const SystemSpec& spec,
                                    const TaylorTensors& tensors);

}  // namespace responsum
