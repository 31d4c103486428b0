#include "responsum/verify.hpp"

#include <cmath>
#include <set>

#include "responsum/errors.hpp"

namespace responsum {

ResidualReport ode_residual(const FourierMap& u, const Vec& zeta, const Vec& c, double eps,
                            const SystemSpec& spec, const TaylorTensors& tensors) {
  if (eps <= 0.0) throw ValidationError("eps must be positive");
  if ((c - tensors.center).norm() > 1e-12 * (1.0 + c.norm()))
    throw ValidationError("center does not match the expansion point");
  FourierMap w(tensors.d, tensors.m);
  for (const auto& [nu, v] : u.entries()) {
    if (!is_zero(nu)) w.set(nu, v);
  }
  w.add(zero_mode(tensors.d), zeta.cast<cplx>());
  FourierMap interaction = interaction_coefficients(w, spec, tensors);

  ResidualReport report;
  report.per_mode = FourierMap(tensors.d, tensors.m);
  std::set<Mode> modes;
  for (const auto& [nu, v] : interaction.entries()) modes.insert(nu);
  for (const auto& [nu, v] : u.entries()) modes.insert(nu);
  modes.insert(zero_mode(tensors.d));
  // The composed interaction already carries the restoring force including
  // its linear part, so the operator here is the bare inertia-plus-damping
  // symbol (A zeroed out).
  const Mat a_zero = Mat::Zero(tensors.m, tensors.m);
  for (const Mode& nu : modes) {
    CVec r;
    if (is_zero(nu)) {
      r = eps * interaction.coeff(nu);
    } else {
      CMat d_matrix = assemble_D(eps, dot(spec.omega, nu), spec.mass, spec.damping, a_zero);
      r = d_matrix * u.coeff(nu) + eps * interaction.coeff(nu);
    }
    report.per_mode.set(nu, r);
  }

  report.dominant_mode = zero_mode(tensors.d);
  double sum_sq = 0.0;
  for (const auto& [nu, r] : report.per_mode.entries()) {
    double n = r.norm();
    sum_sq += n * n;
    if (n > report.sup_norm) {
      report.sup_norm = n;
      report.dominant_mode = nu;
    }
  }
  report.l2_norm = std::sqrt(sum_sq);
  return report;
}

namespace {

/// Interaction force entering eps * force: g(x) - f(psi) for the autonomous
/// kind, h(x, psi) for the forced kind; plus its x-Jacobian. Symbolic
/// derivatives are prepared once per integration.
class ForceModel {
 public:
  explicit ForceModel(const SystemSpec& spec) : spec_(spec), m_(spec.m) {
    if (spec.kind == SystemKind::GradientAutonomous) {
      grad_ = gradient(spec.potential);
      for (const auto& gi : grad_) {
        auto& row = hess_.emplace_back();
        for (int j = 0; j < m_; ++j) row.push_back(gi.derivative(j));
      }
    } else {
      for (const auto& [nu, poly] : spec.potential_family.modes()) {
        modes_.push_back(nu);
        auto& g = mode_grad_.emplace_back(gradient(poly));
        auto& h = mode_hess_.emplace_back();
        for (const auto& gi : g) {
          auto& row = h.emplace_back();
          for (int j = 0; j < m_; ++j) row.push_back(gi.derivative(j));
        }
      }
    }
  }

  Vec force(const Vec& x, const Vec& psi) const {
    if (spec_.kind == SystemKind::GradientAutonomous) {
      Vec out(m_);
      for (int i = 0; i < m_; ++i) out[i] = grad_[i].evaluate(x);
      if (!spec_.forcing.empty()) out -= spec_.forcing.evaluate(psi);
      return out;
    }
    CVec out = CVec::Zero(m_);
    CVec xc = x.cast<cplx>();
    for (size_t q = 0; q < modes_.size(); ++q) {
      cplx phase = std::exp(cplx(0.0, dot(psi, modes_[q])));
      for (int i = 0; i < m_; ++i) out[i] += mode_grad_[q][i].evaluate(xc) * phase;
    }
    return out.real();
  }

  Mat jacobian(const Vec& x, const Vec& psi) const {
    Mat out = Mat::Zero(m_, m_);
    if (spec_.kind == SystemKind::GradientAutonomous) {
      for (int i = 0; i < m_; ++i) {
        for (int j = 0; j < m_; ++j) out(i, j) = hess_[i][j].evaluate(x);
      }
      return out;
    }
    CVec xc = x.cast<cplx>();
    CMat acc = CMat::Zero(m_, m_);
    for (size_t q = 0; q < modes_.size(); ++q) {
      cplx phase = std::exp(cplx(0.0, dot(psi, modes_[q])));
      for (int i = 0; i < m_; ++i) {
        for (int j = 0; j < m_; ++j) acc(i, j) += mode_hess_[q][i][j].evaluate(xc) * phase;
      }
    }
    return acc.real();
  }

 private:
  const SystemSpec& spec_;
  int m_;
  std::vector<Polynomial> grad_;
  std::vector<std::vector<Polynomial>> hess_;
  std::vector<Mode> modes_;
  std::vector<std::vector<CPolynomial>> mode_grad_;
  std::vector<std::vector<std::vector<CPolynomial>>> mode_hess_;
};

}  // namespace

Trajectory integrate_reference(double eps, const SystemSpec& spec, const Vec& x0, const Vec& v0,
                               double t_end, double step_tol) {
  spec.validate();
  if (eps <= 0.0) throw ValidationError("eps must be positive");
  if (t_end <= 0.0) throw ValidationError("t_end must be positive");
  if (step_tol <= 0.0) throw ValidationError("step_tol must be positive");
  if (x0.size() != spec.m || v0.size() != spec.m)
    throw ValidationError("initial state has wrong dimension");

  const int m = spec.m;
  ForceModel fm(spec);
  Mat mass_inv = spec.mass.inverse();
  Mat damping_over_eps = (1.0 / eps) * (mass_inv * spec.damping);

  auto accel = [&](double t, const Vec& x, const Vec& v) {
    Vec psi = spec.omega * t;
    return Vec(-mass_inv * fm.force(x, psi) - damping_over_eps * v);
  };

  // One implicit trapezoidal step; false when the inner Newton stalls.
  auto trap_step = [&](double t, const Vec& x, const Vec& v, double h, Vec& x_out,
                       Vec& v_out) -> bool {
    Vec a0 = accel(t, x, v);
    Vec X = x + h * v;
    Vec V = v + h * a0;
    double t1 = t + h;
    Vec psi1 = spec.omega * t1;
    Mat jac(2 * m, 2 * m);
    Vec rhs(2 * m);
    for (int it = 0; it < 12; ++it) {
      Vec a1 = accel(t1, X, V);
      Vec rx = X - x - 0.5 * h * (v + V);
      Vec rv = V - v - 0.5 * h * (a0 + a1);
      double res = std::max(rx.lpNorm<Eigen::Infinity>(), rv.lpNorm<Eigen::Infinity>());
      double scale =
          1.0 + std::max(X.lpNorm<Eigen::Infinity>(), V.lpNorm<Eigen::Infinity>());
      if (res <= 1e-12 * scale) {
        x_out = X;
        v_out = V;
        return true;
      }
      jac.topLeftCorner(m, m) = Mat::Identity(m, m);
      jac.topRightCorner(m, m) = -0.5 * h * Mat::Identity(m, m);
      jac.bottomLeftCorner(m, m) = 0.5 * h * (mass_inv * fm.jacobian(X, psi1));
      jac.bottomRightCorner(m, m) = Mat::Identity(m, m) + 0.5 * h * damping_over_eps;
      rhs.head(m) = -rx;
      rhs.tail(m) = -rv;
      Vec delta = jac.partialPivLu().solve(rhs);
      if (!delta.allFinite()) return false;
      X += delta.head(m);
      V += delta.tail(m);
    }
    return false;
  };

  Trajectory traj;
  double t = 0.0;
  Vec x = x0, v = v0;
  traj.t.push_back(t);
  traj.x.push_back(x);
  traj.v.push_back(v);

  double h = std::clamp(t_end * 1e-4, 1e-8, 1e-1);
  const double h_min = 1e-12 * std::max(1.0, t_end);
  while (t < t_end) {
    double step = std::min(h, t_end - t);
    Vec xb(m), vb(m), xm(m), vm(m), xf(m), vf(m);
    bool ok = trap_step(t, x, v, step, xb, vb) &&
              trap_step(t, x, v, 0.5 * step, xm, vm) &&
              trap_step(t + 0.5 * step, xm, vm, 0.5 * step, xf, vf);
    if (ok) {
      double err = std::max((xb - xf).lpNorm<Eigen::Infinity>(),
                            (vb - vf).lpNorm<Eigen::Infinity>()) /
                   3.0;
      double target = step_tol * (1.0 + std::max(xf.lpNorm<Eigen::Infinity>(),
                                                 vf.lpNorm<Eigen::Infinity>()));
      if (err <= target) {
        t += step;
        x = xf;
        v = vf;
        traj.t.push_back(t);
        traj.x.push_back(x);
        traj.v.push_back(v);
        ++traj.steps;
        double grow = 0.9 * std::cbrt(target / std::max(err, 1e-300));
        h = step * std::clamp(grow, 0.2, 4.0);
        continue;
      }
      ++traj.rejected;
      double shrink = 0.9 * std::cbrt(target / err);
      h = step * std::clamp(shrink, 0.1, 0.5);
    } else {
      ++traj.rejected;
      h = 0.25 * step;
    }
    if (h < h_min) throw StepFailure("integrator step size underflow");
  }
  return traj;
}

double attractor_compare(const Trajectory& trajectory, const FourierMap& u, const Vec& zeta,
                         const Vec& c, const Vec& omega, double transient_fraction) {
  if (trajectory.t.empty()) throw ValidationError("trajectory is empty");
  if (transient_fraction < 0.0 || transient_fraction >= 1.0)
    throw ValidationError("transient fraction must lie in [0, 1)");
  double cutoff = transient_fraction * trajectory.t.back();
  double dev = 0.0;
  for (size_t i = 0; i < trajectory.t.size(); ++i) {
    if (trajectory.t[i] < cutoff) continue;
    Vec psi = omega * trajectory.t[i];
    dev = std::max(dev, (trajectory.x[i] - evaluate(u, zeta, c, psi)).norm());
  }
  return dev;
}

double default_t_end(double eps, const SpectralData& sd) {
  double kappa_m = sd.kappa[sd.kappa.size() - 1];
  return 20.0 * kappa_m * kappa_m / (eps * sd.b[0]);
}

DecayReport decay_report(const OrderSeries& orders, const SystemSpec& spec,
                         const TaylorTensors& tensors, double rho, double xi) {
  if (rho <= 0.0 || xi <= 0.0) throw ValidationError("rho and xi must be positive");
  SummedSeries summed = sum_series(orders);
  DecayReport report;
  report.per_order_norms = summed.diagnostics.per_order_norms;
  report.ratio = summed.diagnostics.ratio;

  int nonzero_orders = 0;
  for (double a : report.per_order_norms) {
    if (a > 0.0) ++nonzero_orders;
  }
  if (nonzero_orders < 2)
    throw InsufficientData("decay fit needs at least two nonzero orders");

  std::map<int, double> radial;
  for (const auto& [nu, v] : summed.u.entries()) {
    int r = l1_norm(nu);
    radial[r] = std::max(radial[r], v.norm());
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int n = 0;
  for (const auto& [r, a] : radial) {
    if (a <= 0.0) continue;
    double lx = r, ly = std::log(a);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n >= 2) {
    double denom = n * sxx - sx * sx;
    if (denom != 0.0) report.xi_fit = -(n * sxy - sx * sy) / denom;
  }

  if (spec.kind == SystemKind::GradientAutonomous) {
    for (const auto& [nu, f] : spec.forcing.modes())
      report.Phi += f.norm() * std::exp(xi * l1_norm(nu));
  } else {
    for (const auto& [nu, tv] : tensors.coeffs) {
      if (is_zero(nu)) continue;
      report.Phi += tv[0].as_vector().norm() * std::exp(xi * l1_norm(nu));
    }
  }

  for (const auto& [nu, tv] : tensors.coeffs) {
    double decay = std::exp(xi * l1_norm(nu));
    double scale = 1.0;
    for (int p = 0; p <= tensors.p_max; ++p) {
      report.Delta = std::max(report.Delta, tv[p].max_abs() * scale * decay);
      scale *= rho;
    }
  }

  SpectralData sd = spectral_data(spec.damping, tensors.A, spec.mass);
  double kappa1 = sd.kappa[0];
  double b1 = sd.b[0];
  report.C0_diag = static_cast<double>(tensors.m) * tensors.m / rho *
                   std::max(2.0 * report.Delta / (kappa1 * kappa1 * std::abs(b1)), 1.0);
  return report;
}

}  // namespace responsum
