#include "responsum/propagator.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <functional>

#include "responsum/errors.hpp"

namespace responsum {

namespace {

Eigen::SelfAdjointEigenSolver<Mat> spd_eigen(const Mat& a, const char* name) {
  if (a.rows() != a.cols() || a.rows() < 1)
    throw ValidationError(std::string(name) + " must be square");
  double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw NotPositiveDefinite(std::string(name) + " is not symmetric");
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (a + a.transpose()));
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw NotPositiveDefinite(std::string(name) + " is not positive definite");
  return es;
}

}  // namespace

SpectralData spectral_data(const Mat& damping, const Mat& a) {
  return spectral_data(damping, a, Mat::Identity(damping.rows(), damping.cols()));
}

SpectralData spectral_data(const Mat& damping, const Mat& a, const Mat& mass) {
  auto es_damping = spd_eigen(damping, "damping matrix");
  SpectralData sd;
  Vec sqrt_eigs = es_damping.eigenvalues().cwiseSqrt();
  sd.K = es_damping.eigenvectors() * sqrt_eigs.asDiagonal() *
         es_damping.eigenvectors().transpose();
  sd.K_inv = es_damping.eigenvectors() * sqrt_eigs.cwiseInverse().asDiagonal() *
             es_damping.eigenvectors().transpose();
  sd.kappa = sqrt_eigs;
  std::sort(sd.kappa.begin(), sd.kappa.end());
  Mat scaled = sd.K_inv * a * sd.K_inv.transpose();
  sd.b = spd_eigen(scaled, "scaled linear part").eigenvalues();
  sd.alphaEstimate = estimate_alpha(sd, mass, a);
  return sd;
}

CMat assemble_D(double eps, double s, const Mat& mass, const Mat& damping, const Mat& a) {
  CMat d = (-eps * s * s) * mass.cast<cplx>();
  d += cplx(0.0, s) * damping.cast<cplx>();
  d += eps * a.cast<cplx>();
  return d;
}

CMat assemble_D(double eps, double s, const SystemSpec& spec, const Mat& a) {
  return assemble_D(eps, s, spec.mass, spec.damping, a);
}

CVec apply_D_inverse(const CMat& d_matrix, const CVec& v) {
  Eigen::FullPivLU<CMat> lu(d_matrix);
  if (!lu.isInvertible()) throw SingularMatrix("frequency-domain matrix is singular");
  CVec u = lu.solve(v);
  double target = 1e-12 * v.norm();
  for (int refine = 0; refine < 3; ++refine) {
    CVec r = v - d_matrix * u;
    if (r.norm() <= target) return u;
    u += lu.solve(r);
  }
  if ((v - d_matrix * u).norm() <= target) return u;
  throw SingularMatrix("frequency-domain solve residual exceeds tolerance");
}

double inverse_norm(const CMat& d_matrix) {
  Eigen::JacobiSVD<CMat> svd(d_matrix);
  double smin = svd.singularValues().minCoeff();
  return smin > 0.0 ? 1.0 / smin : std::numeric_limits<double>::infinity();
}

double norm_bound(double eps, double s, const SpectralData& sd) {
  if (eps <= 0.0) throw ValidationError("eps must be positive");
  double b1 = sd.b[0];
  double alpha = sd.alphaEstimate;
  if (eps >= alpha / b1)
    throw EpsilonTooLarge("eps >= alpha / b_1; the uniform bound does not apply");
  double kappa1 = sd.kappa[0];
  double freq_term =
      s == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / std::abs(s);
  return std::min(2.0 / (b1 * eps), std::max(1.0 / alpha, freq_term)) / (kappa1 * kappa1);
}

double estimate_alpha(const SpectralData& sd, const Mat& mass, const Mat& a,
                      std::span<const double> eps_grid, std::span<const double> s_grid) {
  const Mat scaled_a = sd.K_inv * a * sd.K_inv.transpose();
  const Mat scaled_m = sd.K_inv * mass * sd.K_inv.transpose();
  const double b1 = sd.b[0];
  std::vector<double> eps_samples(eps_grid.begin(), eps_grid.end());
  if (eps_samples.empty()) eps_samples = {1e-3};

  auto holds = [&](double s) {
    for (double eps : eps_samples) {
      Eigen::SelfAdjointEigenSolver<Mat> es(eps * (scaled_a - s * s * scaled_m));
      for (int k = 0; k < sd.b.size(); ++k) {
        if (std::abs(es.eigenvalues()[k] - sd.b[k] * eps) > 0.5 * b1 * eps) return false;
      }
    }
    return true;
  };

  double s_star = 0.0;
  if (!s_grid.empty()) {
    for (double s : s_grid) {
      if (!holds(std::abs(s))) break;
      s_star = std::max(s_star, std::abs(s));
    }
  } else {
    double hi = 1.0;
    while (holds(hi) && hi < 1e8) hi *= 2.0;
    if (hi >= 1e8) return 0.9 * hi;
    double lo = hi > 1.0 ? hi / 2.0 : 0.0;
    for (int iter = 0; iter < 60; ++iter) {
      double mid = 0.5 * (lo + hi);
      (holds(mid) ? lo : hi) = mid;
    }
    s_star = lo;
  }
  if (s_star > 0.0) return 0.9 * s_star;
  double curvature = Eigen::SelfAdjointEigenSolver<Mat>(scaled_m).eigenvalues().cwiseAbs().maxCoeff();
  double s_scale = 1.0 / std::sqrt(2.0 * std::max(curvature, 1e-300));
  return 0.5 * std::sqrt(b1) * s_scale;
}

SmallDivisorReport small_divisor_scan(const Vec& omega, int N, double xi, double alpha) {
  if (N < 1) throw ValidationError("scan radius must be at least 1");
  if (!(xi > 0.0) || !std::isfinite(xi)) throw ValidationError("xi must be positive and finite");
  const int d = static_cast<int>(omega.size());
  SmallDivisorReport report;
  report.N = N;
  report.sN = std::numeric_limits<double>::infinity();

  // Enumerate only sign-canonical representatives (first nonzero component
  // positive); |omega.nu| is even under nu -> -nu.
  Mode nu(d, 0);
  std::function<void(int, int, bool)> rec = [&](int pos, int budget, bool lead_set) {
    if (pos == d) {
      if (!lead_set) return;
      double val = std::abs(dot(omega, nu));
      if (val < report.sN || (val == report.sN && nu < report.argmin)) {
        report.sN = val;
        report.argmin = nu;
      }
      return;
    }
    int lo = lead_set ? -budget : 0;
    for (int c = lo; c <= budget; ++c) {
      nu[pos] = c;
      rec(pos + 1, budget - std::abs(c), lead_set || c != 0);
    }
    nu[pos] = 0;
  };
  rec(0, N, false);

  report.rN = std::min(report.sN, alpha);
  report.deltaN = std::exp(-xi * N / 4.0);
  return report;
}

}  // namespace responsum
