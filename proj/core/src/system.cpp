#include "responsum/system.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "responsum/errors.hpp"

namespace responsum {

namespace {

void check_spd(const Mat& a, int m, const char* name) {
  if (a.rows() != m || a.cols() != m)
    throw ValidationError(std::string(name) + " must be " + std::to_string(m) + "x" +
                          std::to_string(m));
  if (!a.allFinite()) throw ValidationError(std::string(name) + " has non-finite entries");
  double scale = a.cwiseAbs().maxCoeff();
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-14 * std::max(1.0, scale))
    throw ValidationError(std::string(name) + " is not symmetric");
  Eigen::SelfAdjointEigenSolver<Mat> es(a);
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw ValidationError(std::string(name) + " is not positive definite");
}

}  // namespace

void SystemSpec::validate() const {
  if (m < 1) throw ValidationError("state dimension must be at least 1");
  if (d < 1) throw ValidationError("frequency dimension must be at least 1");
  if (omega.size() != d) throw ValidationError("omega must have length d");
  if (!omega.allFinite()) throw ValidationError("omega has non-finite entries");
  for (int i = 0; i < d; ++i) {
    if (omega[i] == 0.0) throw ValidationError("omega components must be nonzero");
  }
  check_spd(damping, m, "damping matrix");
  check_spd(mass, m, "mass matrix");
  if (kind == SystemKind::GradientAutonomous) {
    if (!mass.isIdentity(1e-14))
      throw ValidationError("autonomous kind requires the identity mass matrix");
    if (potential.nvars() != m) throw ValidationError("potential variable count must equal m");
    if (potential.degree() < 2) throw ValidationError("potential degree must be at least 2");
    if (!forcing.empty() && (forcing.dim_angle() != d || forcing.dim_value() != m))
      throw ValidationError("forcing dimensions must match (d, m)");
  } else {
    if (potential_family.nvars() != m)
      throw ValidationError("potential family variable count must equal m");
    if (potential_family.dim_angle() != d)
      throw ValidationError("potential family angle dimension must equal d");
    if (potential_family.zero_mode_real().degree() < 2)
      throw ValidationError("angle-average potential degree must be at least 2");
  }
}

int SystemSpec::max_forcing_mode() const {
  if (kind == SystemKind::GradientAutonomous)
    return forcing.empty() ? 0 : forcing.max_mode_l1();
  return potential_family.max_mode_l1();
}

Polynomial build_U(const Polynomial& potential, const Vec& f0) {
  const int m = potential.nvars();
  if (f0.size() != m) throw ValidationError("constant forcing term has wrong dimension");
  Polynomial u = potential;
  for (int j = 0; j < m; ++j) {
    Polynomial::Exponent e(m, 0);
    e[j] = 1;
    u.add_term(e, -f0[j]);
  }
  return u;
}

Polynomial build_U(const SystemSpec& spec) {
  if (spec.kind == SystemKind::GradientForced) return spec.potential_family.zero_mode_real();
  Vec f0 = Vec::Zero(spec.m);
  if (!spec.forcing.empty()) f0 = spec.forcing.coeff(zero_mode(spec.d)).real();
  return build_U(spec.potential, f0);
}

Vec find_minimum(const Polynomial& U, const Vec& guess, double tol, int max_iter) {
  const int m = U.nvars();
  if (guess.size() != m) throw ValidationError("guess has wrong dimension");
  auto grad = gradient(U);
  std::vector<std::vector<Polynomial>> hess(m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) hess[i].push_back(grad[i].derivative(j));
  }
  auto grad_at = [&](const Vec& x) {
    Vec g(m);
    for (int i = 0; i < m; ++i) g[i] = grad[i].evaluate(x);
    return g;
  };
  auto hess_at = [&](const Vec& x) {
    Mat h(m, m);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) h(i, j) = hess[i][j].evaluate(x);
    }
    return Mat(0.5 * (h + h.transpose()));
  };

  double coeff_scale = 1.0;
  for (const auto& [e, c] : U.terms()) coeff_scale = std::max(coeff_scale, std::abs(c));

  Vec x = guess;
  bool converged = false;
  for (int iter = 0; iter < max_iter; ++iter) {
    Vec g = grad_at(x);
    if (!g.allFinite()) throw NonConvergence("minimum search left the finite domain");
    if (g.norm() <= tol * coeff_scale) converged = true;
    Mat h = hess_at(x);
    Eigen::FullPivLU<Mat> lu(h);
    Vec step = lu.isInvertible() ? Vec(-lu.solve(g)) : Vec(-g);
    // Once the gradient tolerance holds, keep polishing until the iterate
    // stops moving: at a flat stationary point the Newton step contracts
    // geometrically instead of vanishing, which exposes the degeneracy below.
    if (converged && step.norm() <= 1e-14 * (1.0 + x.norm())) break;
    double lambda = 1.0;
    Vec next = x + step;
    for (int halve = 0; halve < 40 && (!next.allFinite() || grad_at(next).norm() > g.norm());
         ++halve) {
      lambda *= 0.5;
      next = x + lambda * step;
    }
    x = next;
  }
  if (!converged) throw NonConvergence("minimum search did not meet the gradient tolerance");

  Eigen::SelfAdjointEigenSolver<Mat> es(hess_at(x));
  double lam_min = es.eigenvalues().minCoeff();
  double lam_max = es.eigenvalues().maxCoeff();
  double curvature_scale = std::max(std::max(lam_max, 0.0), coeff_scale);
  if (lam_min <= 1e-10 * curvature_scale)
    throw DegenerateMinimum("stationary point has a flat or unstable direction");
  return x;
}

}  // namespace responsum
