#include "responsum/bifurcation.hpp"

#include <cmath>

#include "responsum/errors.hpp"

namespace responsum {

namespace {

FourierMap response_with_average(const Vec& zeta, double eps, const SystemSpec& spec,
                                 const TaylorTensors& tensors, const SeriesParams& params) {
  OrderSeries os = compute_series(eps, spec, tensors, zeta, params.k_max, params.n_trunc);
  SummedSeries summed = sum_series(os);
  FourierMap w(tensors.d, tensors.m);
  for (const auto& [nu, v] : summed.u.entries()) w.set(nu, v);
  w.add(zero_mode(tensors.d), zeta.cast<cplx>());
  return w;
}

}  // namespace

Vec residual_H(const Vec& zeta, double eps, const SystemSpec& spec, const TaylorTensors& tensors,
               const SeriesParams& params) {
  if (eps <= 0.0) throw ValidationError("eps must be positive");
  if (zeta.size() != tensors.m) throw ValidationError("zeta has wrong dimension");
  FourierMap w = response_with_average(zeta, eps, spec, tensors, params);
  CVec h0 = interaction_coefficients(w, spec, tensors).coeff(zero_mode(tensors.d));
  for (int i = 0; i < tensors.m; ++i) {
    if (std::abs(h0[i].imag()) > 1e-9)
      throw ComplexLeak("average-equation residual has imaginary residue");
  }
  return h0.real();
}

BifurcationSolveRecord solve_zeta(double eps, const SystemSpec& spec, const TaylorTensors& tensors,
                                  const Vec& guess, double tol, int max_iter,
                                  const SeriesParams& params) {
  if (guess.size() != tensors.m) throw ValidationError("guess has wrong dimension");
  const int m = tensors.m;
  BifurcationSolveRecord rec;
  rec.epsilon = eps;

  Vec zeta = guess;
  Vec h = residual_H(zeta, eps, spec, tensors, params);
  int iter = 0;
  while (h.norm() > tol) {
    if (iter >= max_iter)
      throw NonConvergence("average-equation Newton did not reach tolerance");
    Mat jac(m, m);
    for (int j = 0; j < m; ++j) {
      double step = 1e-6 * (1.0 + std::abs(zeta[j]));
      Vec zp = zeta, zm = zeta;
      zp[j] += step;
      zm[j] -= step;
      jac.col(j) = (residual_H(zp, eps, spec, tensors, params) -
                    residual_H(zm, eps, spec, tensors, params)) /
                   (2.0 * step);
    }
    Eigen::FullPivLU<Mat> lu(jac);
    if (!lu.isInvertible()) throw NonConvergence("average-equation Jacobian is singular");
    Vec delta = -lu.solve(h);
    double lambda = 1.0;
    Vec zeta_next = zeta + delta;
    Vec h_next = residual_H(zeta_next, eps, spec, tensors, params);
    for (int halve = 0; halve < 20 && h_next.norm() > h.norm(); ++halve) {
      lambda *= 0.5;
      zeta_next = zeta + lambda * delta;
      h_next = residual_H(zeta_next, eps, spec, tensors, params);
    }
    zeta = zeta_next;
    h = h_next;
    ++iter;
  }

  rec.zeta = zeta;
  rec.H_residual = h.norm();
  rec.newton_iters = iter;
  rec.converged = true;
  OrderSeries os = compute_series(eps, spec, tensors, zeta, params.k_max, params.n_trunc);
  rec.u_sup_norm = sup_phase_norm(sum_series(os).u);
  return rec;
}

std::vector<BifurcationSolveRecord> sweep_epsilon(std::span<const double> eps_list,
                                                  const SystemSpec& spec,
                                                  const TaylorTensors& tensors, double tol,
                                                  const SeriesParams& params) {
  for (size_t i = 1; i < eps_list.size(); ++i) {
    if (eps_list[i] >= eps_list[i - 1])
      throw ValidationError("eps list must be strictly descending");
  }
  std::vector<BifurcationSolveRecord> out;
  Vec seed = Vec::Zero(tensors.m);
  for (double eps : eps_list) {
    try {
      BifurcationSolveRecord rec = solve_zeta(eps, spec, tensors, seed, tol, 50, params);
      seed = rec.zeta;
      out.push_back(std::move(rec));
    } catch (const NonConvergence&) {
      BifurcationSolveRecord rec;
      rec.epsilon = eps;
      rec.zeta = seed;
      rec.H_residual = std::numeric_limits<double>::quiet_NaN();
      rec.converged = false;
      out.push_back(std::move(rec));
    }
  }
  return out;
}

}  // namespace responsum
