#pragma once

#include <limits>
#include <span>

#include "responsum/system.hpp"
#include "responsum/types.hpp"

namespace responsum {

/// Spectral quantities entering the frequency-domain inverse bound:
/// K is the principal square root of the damping matrix, kappa its sorted
/// eigenvalues, b the sorted eigenvalues of K^-1 A K^-1, and alphaEstimate
/// the estimated frequency threshold below which the symmetric part of the
/// scaled matrix keeps its definiteness margin.
struct SpectralData {
  Mat K;
  Mat K_inv;
  Vec kappa;
  Vec b;
  double alphaEstimate = 0.0;
};

struct SmallDivisorReport {
  int N = 0;
  double sN = 0.0;
  Mode argmin;
  double rN = 0.0;
  double deltaN = 0.0;
};

/// Throws NotPositiveDefinite unless both matrices qualify. Uses a unit mass
/// matrix for the alpha scan; pass the mass explicitly otherwise.
SpectralData spectral_data(const Mat& damping, const Mat& a);
SpectralData spectral_data(const Mat& damping, const Mat& a, const Mat& mass);

/// D(eps, s) = -eps s^2 M + i s Gamma + eps A.
CMat assemble_D(double eps, double s, const Mat& mass, const Mat& damping, const Mat& a);
CMat assemble_D(double eps, double s, const SystemSpec& spec, const Mat& a);

/// Direct solve of D u = v with a residual guarantee of 1e-12 relative to
/// ‖v‖; throws SingularMatrix when that cannot be met.
CVec apply_D_inverse(const CMat& d_matrix, const CVec& v);

/// Largest singular value of D^-1 (exact, for comparison against norm_bound).
double inverse_norm(const CMat& d_matrix);

/// Uniform upper bound (1/kappa_1^2) min{2/(b_1 eps), max(1/alpha, 1/|s|)}.
/// Throws EpsilonTooLarge when eps >= alpha / b_1.
double norm_bound(double eps, double s, const SpectralData& sd);

/// Scan for the largest alpha such that over the sampled grid, all
/// eigenvalues beta_k of eps K^-1 (A - s^2 M) K^-1 with |s| <= alpha stay
/// within b_1 eps / 2 of b_k eps; returns 0.9 times the scan result.
/// Empty grids select a built-in geometric grid.
double estimate_alpha(const SpectralData& sd, const Mat& mass, const Mat& a,
                      std::span<const double> eps_grid = {}, std::span<const double> s_grid = {});

/// Exhaustive minimum of |omega . nu| over 0 < |nu|_1 <= N. Ties are reported
/// by the sign-canonical representative (first nonzero component positive),
/// smallest in lexicographic order.
SmallDivisorReport small_divisor_scan(const Vec& omega, int N, double xi,
                                      double alpha = std::numeric_limits<double>::infinity());

}  // namespace responsum
