#include "responsum/series.hpp"

#include <cmath>
#include <numbers>

#include "responsum/errors.hpp"

namespace responsum {

FourierMap::FourierMap(int dim_angle, int dim_value, int truncation)
    : d_(dim_angle), m_(dim_value), n_trunc_(truncation) {
  if (d_ < 1 || m_ < 1) throw ValidationError("Fourier map dimensions must be positive");
  if (n_trunc_ < 0) throw ValidationError("truncation radius must be nonnegative");
}

CVec FourierMap::coeff(const Mode& nu) const {
  auto it = entries_.find(nu);
  return it == entries_.end() ? CVec(CVec::Zero(m_)) : it->second;
}

void FourierMap::prune(const Mode& nu) {
  auto it = entries_.find(nu);
  if (it == entries_.end()) return;
  for (int i = 0; i < m_; ++i) {
    if (std::abs(it->second[i].real()) >= 1e-300 || std::abs(it->second[i].imag()) >= 1e-300)
      return;
  }
  entries_.erase(it);
}

void FourierMap::set(const Mode& nu, const CVec& value) {
  if (static_cast<int>(nu.size()) != d_ || value.size() != m_)
    throw ValidationError("Fourier entry has wrong dimensions");
  if (l1_norm(nu) > n_trunc_) return;
  entries_[nu] = value;
  prune(nu);
}

void FourierMap::add(const Mode& nu, const CVec& value) {
  if (static_cast<int>(nu.size()) != d_ || value.size() != m_)
    throw ValidationError("Fourier entry has wrong dimensions");
  if (l1_norm(nu) > n_trunc_) return;
  auto it = entries_.find(nu);
  if (it == entries_.end()) {
    entries_.emplace(nu, value);
  } else {
    it->second += value;
  }
  prune(nu);
}

void FourierMap::add_component(const Mode& nu, int i, cplx value) {
  if (static_cast<int>(nu.size()) != d_ || i < 0 || i >= m_)
    throw ValidationError("Fourier entry has wrong dimensions");
  if (l1_norm(nu) > n_trunc_) return;
  auto it = entries_.find(nu);
  if (it == entries_.end()) it = entries_.emplace(nu, CVec::Zero(m_)).first;
  it->second[i] += value;
  prune(nu);
}

double FourierMap::sup_coeff_norm(bool include_zero_mode) const {
  double s = 0.0;
  for (const auto& [nu, v] : entries_) {
    if (!include_zero_mode && is_zero(nu)) continue;
    s = std::max(s, v.norm());
  }
  return s;
}

double FourierMap::hermitian_defect() const {
  double defect = 0.0;
  for (const auto& [nu, v] : entries_) {
    defect = std::max(defect, (coeff(negate(nu)) - v.conjugate()).norm());
  }
  return defect;
}

CVec FourierMap::eval_complex(const Vec& psi) const {
  if (psi.size() != d_) throw ValidationError("angle has wrong dimension");
  CVec total = CVec::Zero(m_);
  for (const auto& [nu, v] : entries_) total += v * std::exp(cplx(0.0, dot(psi, nu)));
  return total;
}

namespace {

constexpr int kDefaultOrder = 8;

using ScalarSeries = std::map<Mode, cplx>;
using Graded = std::vector<ScalarSeries>;  // index k-1 holds expansion order k

void conv_into(ScalarSeries& out, const ScalarSeries& a, const ScalarSeries& b, int n_trunc) {
  for (const auto& [na, va] : a) {
    for (const auto& [nb, vb] : b) {
      Mode n = add(na, nb);
      if (l1_norm(n) > n_trunc) continue;
      out[n] += va * vb;
    }
  }
}

Graded graded_mult(const Graded& a, const Graded& b, int max_order, int n_trunc) {
  Graded c(max_order);
  for (int qa = 1; qa <= static_cast<int>(a.size()); ++qa) {
    if (a[qa - 1].empty()) continue;
    for (int qb = 1; qa + qb <= max_order && qb <= static_cast<int>(b.size()); ++qb) {
      if (b[qb - 1].empty()) continue;
      conv_into(c[qa + qb - 1], a[qa - 1], b[qb - 1], n_trunc);
    }
  }
  return c;
}

/// All exponent vectors over m variables with entry sum p, lexicographic.
std::vector<std::vector<int>> multisets(int m, int p) {
  std::vector<std::vector<int>> out;
  std::vector<int> beta(m, 0);
  auto rec = [&](auto&& self, int pos, int left) -> void {
    if (pos == m - 1) {
      beta[pos] = left;
      out.push_back(beta);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      beta[pos] = v;
      self(self, pos + 1, left - v);
    }
  };
  rec(rec, 0, p);
  return out;
}

std::vector<int> sorted_tuple(const std::vector<int>& beta) {
  std::vector<int> t;
  for (int j = 0; j < static_cast<int>(beta.size()); ++j) {
    for (int r = 0; r < beta[j]; ++r) t.push_back(j);
  }
  return t;
}

double multinomial(const std::vector<int>& beta, const std::vector<double>& factorial) {
  int p = 0;
  for (int v : beta) p += v;
  double w = factorial[p];
  for (int v : beta) w /= factorial[v];
  return w;
}

/// Memoized monomial powers w^beta, each built from its predecessor by one
/// graded multiplication.
class GradedPowers {
 public:
  GradedPowers(std::vector<Graded> basis, int max_order, int n_trunc)
      : basis_(std::move(basis)), max_order_(max_order), n_trunc_(n_trunc) {}

  const Graded& get(const std::vector<int>& beta) {
    int total = 0;
    int last = -1;
    for (int j = 0; j < static_cast<int>(beta.size()); ++j) {
      total += beta[j];
      if (beta[j] > 0) last = j;
    }
    if (total == 1) return basis_[last];
    auto it = cache_.find(beta);
    if (it != cache_.end()) return it->second;
    std::vector<int> parent = beta;
    parent[last] -= 1;
    Graded value = graded_mult(get(parent), basis_[last], max_order_, n_trunc_);
    return cache_.emplace(beta, std::move(value)).first->second;
  }

 private:
  std::vector<Graded> basis_;
  int max_order_;
  int n_trunc_;
  std::map<std::vector<int>, Graded> cache_;
};

std::vector<Graded> component_basis(const OrderSeries& os, int m, int max_order) {
  std::vector<Graded> basis(m, Graded(max_order));
  for (int k = 1; k <= std::min(max_order, os.count()); ++k) {
    for (const auto& [nu, v] : os.order(k).entries()) {
      for (int j = 0; j < m; ++j) {
        if (v[j] != cplx(0.0, 0.0)) basis[j][k - 1][nu] = v[j];
      }
    }
  }
  return basis;
}

std::vector<double> factorial_table(int n) {
  std::vector<double> f(n + 1, 1.0);
  for (int k = 1; k <= n; ++k) f[k] = f[k - 1] * k;
  return f;
}

/// Order-q coefficient of the composed interaction built from orders 1..q.
FourierMap compose_at(const OrderSeries& os, const TaylorTensors& tensors, int q) {
  FourierMap out(tensors.d, tensors.m, os.n_trunc);
  GradedPowers powers(component_basis(os, tensors.m, q), q, os.n_trunc);
  auto factorial = factorial_table(tensors.p_max);

  for (int p = 2; p <= tensors.p_max; ++p) {
    std::vector<std::pair<const Mode*, const SymTensor*>> active;
    for (const auto& [nu0, tv] : tensors.coeffs) {
      if (!tv[p].is_zero()) active.emplace_back(&nu0, &tv[p]);
    }
    if (active.empty()) continue;
    for (const auto& beta : multisets(tensors.m, p)) {
      const ScalarSeries& piece = powers.get(beta)[q - 1];
      if (piece.empty()) continue;
      double mult = multinomial(beta, factorial);
      std::vector<int> tuple = sorted_tuple(beta);
      for (const auto& [nu0, tens] : active) {
        for (int i = 0; i < tensors.m; ++i) {
          cplx coef = tens->at(i, tuple) * mult;
          if (coef == cplx(0.0, 0.0)) continue;
          for (const auto& [nus, val] : piece) out.add_component(add(nus, *nu0), i, coef * val);
        }
      }
    }
  }

  if (tensors.kind == SystemKind::GradientForced && q <= os.count()) {
    for (const auto& [nu0, tv] : tensors.coeffs) {
      if (is_zero(nu0) || tv[1].is_zero()) continue;
      CMat lin = tv[1].as_matrix();
      for (const auto& [nus, v] : os.order(q).entries()) out.add(add(nus, nu0), CVec(lin * v));
    }
  }
  return out;
}

/// Memoized plain (ungraded) monomial powers of a fixed Fourier field.
class PlainPowers {
 public:
  PlainPowers(std::vector<ScalarSeries> basis, int n_trunc)
      : basis_(std::move(basis)), n_trunc_(n_trunc) {}

  const ScalarSeries& get(const std::vector<int>& beta) {
    int total = 0;
    int last = -1;
    for (int j = 0; j < static_cast<int>(beta.size()); ++j) {
      total += beta[j];
      if (beta[j] > 0) last = j;
    }
    if (total == 1) return basis_[last];
    auto it = cache_.find(beta);
    if (it != cache_.end()) return it->second;
    std::vector<int> parent = beta;
    parent[last] -= 1;
    ScalarSeries value;
    conv_into(value, get(parent), basis_[last], n_trunc_);
    return cache_.emplace(beta, std::move(value)).first->second;
  }

 private:
  std::vector<ScalarSeries> basis_;
  int n_trunc_;
  std::map<std::vector<int>, ScalarSeries> cache_;
};

/// Sum of tensor terms H_{p,nu0} w^p e^{i nu0.psi} with p >= pmin_zero on the
/// zero mode and p >= pmin_off elsewhere.
FourierMap composite_sum(const FourierMap& w, const TaylorTensors& tensors, int pmin_zero,
                         int pmin_off) {
  FourierMap out(tensors.d, tensors.m, w.truncation());
  std::vector<ScalarSeries> basis(tensors.m);
  for (const auto& [nu, v] : w.entries()) {
    for (int j = 0; j < tensors.m; ++j) {
      if (v[j] != cplx(0.0, 0.0)) basis[j][nu] = v[j];
    }
  }
  PlainPowers powers(std::move(basis), w.truncation());
  auto factorial = factorial_table(tensors.p_max);

  for (const auto& [nu0, tv] : tensors.coeffs) {
    int pmin = is_zero(nu0) ? pmin_zero : pmin_off;
    for (int p = pmin; p <= tensors.p_max; ++p) {
      const SymTensor& tens = tv[p];
      if (tens.is_zero()) continue;
      if (p == 0) {
        out.add(nu0, tens.as_vector());
        continue;
      }
      for (const auto& beta : multisets(tensors.m, p)) {
        const ScalarSeries& piece = powers.get(beta);
        if (piece.empty()) continue;
        double mult = multinomial(beta, factorial);
        std::vector<int> tuple = sorted_tuple(beta);
        for (int i = 0; i < tensors.m; ++i) {
          cplx coef = tens.at(i, tuple) * mult;
          if (coef == cplx(0.0, 0.0)) continue;
          for (const auto& [nus, val] : piece) out.add_component(add(nus, nu0), i, coef * val);
        }
      }
    }
  }
  return out;
}

CVec solve_mode(double eps, const Mode& nu, const SystemSpec& spec, const TaylorTensors& tensors,
                const CVec& rhs) {
  CMat d_matrix = assemble_D(eps, dot(spec.omega, nu), spec, tensors.A);
  return apply_D_inverse(d_matrix, rhs);
}

}  // namespace

int default_truncation(const SystemSpec& spec, int k_max) {
  return k_max * std::max(1, spec.max_forcing_mode());
}

FourierMap first_order(double eps, const SystemSpec& spec, const TaylorTensors& tensors,
                       const Vec& zeta, int n_trunc) {
  if (eps <= 0.0) throw ValidationError("eps must be positive");
  if (zeta.size() != tensors.m) throw ValidationError("zeta has wrong dimension");
  if (spec.max_forcing_mode() > n_trunc)
    throw ValidationError("forcing support exceeds the truncation radius");
  FourierMap out(tensors.d, tensors.m, n_trunc);
  if (spec.kind == SystemKind::GradientAutonomous) {
    for (const auto& [nu, f] : spec.forcing.modes()) {
      if (is_zero(nu)) continue;
      out.set(nu, solve_mode(eps, nu, spec, tensors, CVec(eps * f)));
    }
  } else {
    for (const auto& [nu0, tv] : tensors.coeffs) {
      if (is_zero(nu0) || tv[0].is_zero()) continue;
      out.set(nu0, solve_mode(eps, nu0, spec, tensors, CVec(-eps * tv[0].as_vector())));
    }
  }
  out.set(zero_mode(tensors.d), zeta.cast<cplx>());
  return out;
}

FourierMap compose_nonlinearity(const OrderSeries& orders, const TaylorTensors& tensors) {
  if (orders.count() < 1) throw ValidationError("at least one order is required");
  return compose_at(orders, tensors, orders.count());
}

FourierMap next_order(int k, const OrderSeries& orders, double eps, const SystemSpec& spec,
                      const TaylorTensors& tensors) {
  if (k < 2) throw ValidationError("next_order needs k >= 2");
  if (orders.count() < k - 1) throw ValidationError("orders 1..k-1 must be present");
  FourierMap comp = compose_at(orders, tensors, k - 1);
  FourierMap out(tensors.d, tensors.m, orders.n_trunc);
  for (const auto& [nu, val] : comp.entries()) {
    if (is_zero(nu)) continue;
    out.set(nu, solve_mode(eps, nu, spec, tensors, CVec(-eps * val)));
  }
  return out;
}

OrderSeries compute_series(double eps, const SystemSpec& spec, const TaylorTensors& tensors,
                           const Vec& zeta, int k_max, int n_trunc) {
  if (k_max < 1) throw ValidationError("k_max must be at least 1");
  if (n_trunc < 0) n_trunc = default_truncation(spec, k_max);
  OrderSeries os;
  os.zeta = zeta;
  os.epsilon = eps;
  os.k_max = k_max;
  os.n_trunc = n_trunc;
  os.orders.push_back(first_order(eps, spec, tensors, zeta, n_trunc));
  for (int k = 2; k <= k_max; ++k) os.orders.push_back(next_order(k, os, eps, spec, tensors));
  return os;
}

SummedSeries sum_series(const OrderSeries& orders, double mu) {
  if (orders.count() < 1) throw ValidationError("at least one order is required");
  SummedSeries out;
  const FourierMap& first = orders.order(1);
  out.u = FourierMap(first.dim_angle(), first.dim_value(), orders.n_trunc);
  double mu_k = 1.0;
  for (int k = 1; k <= orders.count(); ++k) {
    mu_k *= mu;
    for (const auto& [nu, v] : orders.order(k).entries()) {
      if (is_zero(nu)) continue;
      out.u.add(nu, CVec(mu_k * v));
    }
    out.diagnostics.per_order_norms.push_back(orders.order(k).sup_coeff_norm(false));
  }
  std::vector<double> nonzero;
  for (double a : out.diagnostics.per_order_norms) {
    if (a > 0.0) nonzero.push_back(a);
  }
  if (nonzero.size() >= 2) {
    out.diagnostics.ratio = nonzero.back() / nonzero[nonzero.size() - 2];
    out.diagnostics.non_convergent = out.diagnostics.ratio >= 1.0;
  }
  return out;
}

FourierMap picard_solve(double eps, const SystemSpec& spec, const TaylorTensors& tensors,
                        const Vec& zeta, double tol, int max_iter, int n_trunc) {
  if (eps <= 0.0) throw ValidationError("eps must be positive");
  if (n_trunc < 0) n_trunc = default_truncation(spec, kDefaultOrder);
  double seed_scale = zeta.norm();
  if (spec.kind == SystemKind::GradientAutonomous) {
    for (const auto& [nu, f] : spec.forcing.modes()) seed_scale = std::max(seed_scale, f.norm());
  } else {
    for (const auto& [nu0, tv] : tensors.coeffs) seed_scale = std::max(seed_scale, tv[0].max_abs());
  }

  FourierMap u(tensors.d, tensors.m, n_trunc);
  for (int iter = 0; iter < max_iter; ++iter) {
    FourierMap w = u;
    w.add(zero_mode(tensors.d), zeta.cast<cplx>());
    FourierMap comp = composite_sum(w, tensors, 2, 0);
    std::map<Mode, CVec> rhs;
    for (const auto& [nu, v] : comp.entries()) {
      if (!is_zero(nu)) rhs.emplace(nu, -eps * v);
    }
    if (spec.kind == SystemKind::GradientAutonomous) {
      for (const auto& [nu, f] : spec.forcing.modes()) {
        if (is_zero(nu) || l1_norm(nu) > n_trunc) continue;
        auto [it, inserted] = rhs.emplace(nu, CVec::Zero(tensors.m));
        it->second += eps * f;
      }
    }
    FourierMap next(tensors.d, tensors.m, n_trunc);
    for (const auto& [nu, r] : rhs) next.set(nu, solve_mode(eps, nu, spec, tensors, r));

    double diff = 0.0;
    for (const auto& [nu, v] : next.entries()) diff = std::max(diff, (v - u.coeff(nu)).norm());
    for (const auto& [nu, v] : u.entries()) {
      if (!next.has(nu)) diff = std::max(diff, v.norm());
    }
    u = std::move(next);
    if (diff <= tol) return u;
    if (u.sup_coeff_norm() > 1e8 * (1.0 + seed_scale))
      throw NonConvergence("fixed-point iteration diverged");
  }
  throw NonConvergence("fixed-point iteration did not reach tolerance");
}

Vec evaluate(const FourierMap& u, const Vec& zeta, const Vec& c, const Vec& psi) {
  if (zeta.size() != u.dim_value() || c.size() != u.dim_value())
    throw ValidationError("zeta or center has wrong dimension");
  CVec s = u.eval_complex(psi);
  for (int i = 0; i < u.dim_value(); ++i) {
    if (std::abs(s[i].imag()) > 1e-9)
      throw ComplexLeak("field evaluation has imaginary residue " +
                        std::to_string(s[i].imag()));
  }
  return c + zeta + s.real();
}

double sup_phase_norm(const FourierMap& u, int points_per_dim) {
  int d = u.dim_angle();
  if (points_per_dim <= 0) points_per_dim = d == 1 ? 256 : d == 2 ? 64 : d == 3 ? 24 : 12;
  std::vector<int> idx(d, 0);
  double best = 0.0;
  do {
    Vec psi(d);
    for (int j = 0; j < d; ++j)
      psi[j] = 2.0 * std::numbers::pi * idx[j] / points_per_dim;
    best = std::max(best, u.eval_complex(psi).real().norm());
  } while (next_tuple(idx, points_per_dim));
  return best;
}

FourierMap interaction_coefficients(const FourierMap& w, const SystemSpec& spec,
                                    const TaylorTensors& tensors) {
  FourierMap out = composite_sum(w, tensors, 0, 0);
  if (spec.kind == SystemKind::GradientAutonomous) {
    for (const auto& [nu, f] : spec.forcing.modes()) out.add(nu, CVec(-f));
  }
  return out;
}

}  // namespace responsum
