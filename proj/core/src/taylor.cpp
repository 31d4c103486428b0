#include "responsum/taylor.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "responsum/errors.hpp"

namespace responsum {

SymTensor::SymTensor(int m, int p) : m_(m), p_(p) {
  size_t n = m;
  for (int k = 0; k < p; ++k) n *= m;
  a_.assign(n, cplx(0.0, 0.0));
}

size_t SymTensor::index(int i, const std::vector<int>& t) const {
  size_t idx = i;
  for (int j = 0; j < p_; ++j) idx = idx * m_ + t[j];
  return idx;
}

cplx& SymTensor::at(int i, const std::vector<int>& trailing) { return a_[index(i, trailing)]; }

cplx SymTensor::at(int i, const std::vector<int>& trailing) const {
  return a_[index(i, trailing)];
}

bool SymTensor::is_zero() const {
  for (const cplx& v : a_) {
    if (v != cplx(0.0, 0.0)) return false;
  }
  return true;
}

double SymTensor::max_abs() const {
  double s = 0.0;
  for (const cplx& v : a_) s = std::max(s, std::abs(v));
  return s;
}

CVec SymTensor::contract(const std::vector<CVec>& args) const {
  if (static_cast<int>(args.size()) != p_)
    throw ValidationError("contraction needs one vector per trailing index");
  CVec out = CVec::Zero(m_);
  std::vector<int> t(p_, 0);
  do {
    cplx w(1.0, 0.0);
    for (int j = 0; j < p_; ++j) w *= args[j][t[j]];
    if (w == cplx(0.0, 0.0)) continue;
    for (int i = 0; i < m_; ++i) out[i] += a_[index(i, t)] * w;
  } while (next_tuple(t, m_));
  return out;
}

CVec SymTensor::as_vector() const {
  if (p_ != 0) throw ValidationError("as_vector needs a trailing order 0 tensor");
  CVec v(m_);
  for (int i = 0; i < m_; ++i) v[i] = a_[i];
  return v;
}

CMat SymTensor::as_matrix() const {
  if (p_ != 1) throw ValidationError("as_matrix needs a trailing order 1 tensor");
  CMat mtx(m_, m_);
  for (int i = 0; i < m_; ++i) {
    for (int j = 0; j < m_; ++j) mtx(i, j) = a_[i * m_ + j];
  }
  return mtx;
}

const SymTensor& TaylorTensors::tensor(const Mode& nu, int p) const {
  static const std::vector<SymTensor> empty;
  auto it = coeffs.find(nu);
  if (it == coeffs.end() || p > p_max) {
    static thread_local std::map<std::pair<int, int>, SymTensor> zeros;
    auto& z = zeros[{m, p}];
    if (z.dim() != m || z.order() != p) z = SymTensor(m, p);
    return z;
  }
  return it->second[p];
}

namespace {

/// Fill tensors[p] for one driving mode from the shifted gradient components.
void fill_mode(std::vector<SymTensor>& tensors, const std::vector<CPolynomial>& shifted_grad,
               int m, int p_max, const std::vector<double>& factorial) {
  for (int p = 0; p <= p_max; ++p) tensors.emplace_back(m, p);
  for (int i = 0; i < m; ++i) {
    for (const auto& [expo, coeff] : shifted_grad[i].terms()) {
      int p = 0;
      for (int k : expo) p += k;
      if (p > p_max) throw ValidationError("interaction degree exceeds the expansion order");
      double weight = 1.0;
      for (int k : expo) weight *= factorial[k];
      weight /= factorial[p];
      // Write the same value at every tuple whose index multiset matches expo.
      std::vector<int> t(p, 0);
      if (p == 0) {
        tensors[0].at(i, t) += coeff;
        continue;
      }
      do {
        std::vector<int> counts(m, 0);
        for (int idx : t) ++counts[idx];
        bool match = true;
        for (int j = 0; j < m; ++j) {
          if (counts[j] != expo[j]) {
            match = false;
            break;
          }
        }
        if (match) tensors[p].at(i, t) += coeff * weight;
      } while (next_tuple(t, m));
    }
  }
}

}  // namespace

TaylorTensors taylor_tensors(const SystemSpec& spec, const Vec& center) {
  spec.validate();
  if (center.size() != spec.m) throw ValidationError("center has wrong dimension");

  TaylorTensors out;
  out.kind = spec.kind;
  out.center = center;
  out.m = spec.m;
  out.d = spec.d;

  int max_deg = spec.kind == SystemKind::GradientAutonomous ? spec.potential.degree()
                                                            : spec.potential_family.max_degree();
  out.p_max = std::max(1, max_deg - 1);

  std::vector<double> factorial(out.p_max + 2, 1.0);
  for (size_t k = 1; k < factorial.size(); ++k) factorial[k] = factorial[k - 1] * k;

  if (spec.kind == SystemKind::GradientAutonomous) {
    std::vector<CPolynomial> shifted;
    for (const Polynomial& gi : gradient(spec.potential))
      shifted.push_back(to_complex(gi.shifted(center)));
    fill_mode(out.coeffs[zero_mode(spec.d)], shifted, spec.m, out.p_max, factorial);
  } else {
    for (const auto& [nu, poly] : spec.potential_family.modes()) {
      std::vector<CPolynomial> shifted;
      for (const CPolynomial& gi : gradient(poly)) shifted.push_back(gi.shifted(center));
      fill_mode(out.coeffs[nu], shifted, spec.m, out.p_max, factorial);
    }
  }

  const SymTensor& lin = out.tensor(zero_mode(spec.d), 1);
  Mat a(spec.m, spec.m);
  for (int i = 0; i < spec.m; ++i) {
    for (int j = 0; j < spec.m; ++j) {
      cplx v = lin.at(i, {j});
      if (std::abs(v.imag()) > 1e-13 * (1.0 + std::abs(v.real())))
        throw HypothesisViolation("linear part of the angle average is not real");
      a(i, j) = v.real();
    }
  }
  out.A = 0.5 * (a + a.transpose());
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + a.cwiseAbs().maxCoeff()))
    throw HypothesisViolation("linear part of the angle average is not symmetric");
  Eigen::SelfAdjointEigenSolver<Mat> es(out.A);
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw HypothesisViolation("linear part of the angle average is not positive definite");
  return out;
}

}  // namespace responsum
