#pragma once

#include <span>

#include "responsum/series.hpp"

namespace responsum {

/// Expansion controls threaded through the average-equation solver;
/// n_trunc < 0 selects the default truncation.
struct SeriesParams {
  int k_max = 8;
  int n_trunc = -1;
};

struct BifurcationSolveRecord {
  double epsilon = 0.0;
  Vec zeta;
  double H_residual = 0.0;
  int newton_iters = 0;
  double u_sup_norm = 0.0;
  bool converged = false;
};

/// Average equation residual with eps divided out: recompute the response at
/// (eps, zeta), compose the interaction along it, and return the real zero
/// mode (A zeta plus the averaged nonlinearity).
Vec residual_H(const Vec& zeta, double eps, const SystemSpec& spec, const TaylorTensors& tensors,
               const SeriesParams& params = {});

/// Damped Newton on residual_H with a central finite-difference Jacobian.
/// Converged when the residual norm is at most tol; throws NonConvergence
/// otherwise.
BifurcationSolveRecord solve_zeta(double eps, const SystemSpec& spec, const TaylorTensors& tensors,
                                  const Vec& guess, double tol, int max_iter,
                                  const SeriesParams& params = {});

/// Warm-started continuation over a descending eps list. Entries that fail
/// to converge are recorded with converged = false and the sweep continues.
std::vector<BifurcationSolveRecord> sweep_epsilon(std::span<const double> eps_list,
                                                  const SystemSpec& spec,
                                                  const TaylorTensors& tensors, double tol,
                                                  const SeriesParams& params = {});

}  // namespace responsum
