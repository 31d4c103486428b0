#include "responsum/trig.hpp"

#include <cmath>

#include "responsum/errors.hpp"

namespace responsum {

namespace {

void check_mode_dim(const Mode& nu, int d) {
  if (static_cast<int>(nu.size()) != d)
    throw ValidationError("mode " + mode_to_string(nu) + " has wrong dimension");
}

double poly_scale(const CPolynomial& p) {
  double s = 0.0;
  for (const auto& [e, c] : p.terms()) s = std::max(s, std::abs(c));
  return s;
}

}  // namespace

TrigVectorField::TrigVectorField(int dim_angle, int dim_value) : d_(dim_angle), m_(dim_value) {
  if (d_ < 1 || m_ < 1) throw ValidationError("trig field dimensions must be positive");
}

TrigVectorField::TrigVectorField(int dim_angle, int dim_value,
                                 const std::vector<ModeEntry>& entries)
    : TrigVectorField(dim_angle, dim_value) {
  for (const auto& e : entries) {
    check_mode_dim(e.nu, d_);
    if (e.coeff.size() != m_) throw ValidationError("mode coefficient has wrong dimension");
    if (!e.coeff.allFinite()) throw ValidationError("mode coefficient is not finite");
    auto [it, inserted] = modes_.emplace(e.nu, e.coeff);
    if (!inserted && (it->second - e.coeff).norm() > 1e-13 * (1.0 + it->second.norm()))
      throw ValidationError("conflicting duplicate entries at mode " + mode_to_string(e.nu));
  }
  // Complete Hermitian mirrors and check the ones given explicitly.
  for (const auto& [nu, c] : std::map<Mode, CVec>(modes_)) {
    Mode neg = negate(nu);
    auto it = modes_.find(neg);
    if (it == modes_.end()) {
      modes_.emplace(neg, c.conjugate());
    } else if ((it->second - c.conjugate()).norm() > 1e-13 * (1.0 + c.norm())) {
      throw ValidationError("entries at " + mode_to_string(nu) + " and " + mode_to_string(neg) +
                            " break Hermitian symmetry");
    }
  }
  auto z = modes_.find(zero_mode(d_));
  if (z != modes_.end()) z->second = z->second.real().template cast<cplx>();
  for (auto it = modes_.begin(); it != modes_.end();) {
    it = it->second.isZero(0.0) ? modes_.erase(it) : std::next(it);
  }
}

CVec TrigVectorField::coeff(const Mode& nu) const {
  check_mode_dim(nu, d_);
  auto it = modes_.find(nu);
  return it == modes_.end() ? CVec(CVec::Zero(m_)) : it->second;
}

int TrigVectorField::max_mode_l1() const {
  int n = 0;
  for (const auto& [nu, c] : modes_) n = std::max(n, l1_norm(nu));
  return n;
}

Vec TrigVectorField::evaluate(const Vec& psi) const {
  if (psi.size() != d_) throw ValidationError("angle has wrong dimension");
  CVec total = CVec::Zero(m_);
  for (const auto& [nu, c] : modes_) {
    total += c * std::exp(cplx(0.0, dot(psi, nu)));
  }
  double leak = total.imag().cwiseAbs().maxCoeff();
  if (leak > 1e-13 * (1.0 + total.real().cwiseAbs().maxCoeff()))
    throw ComplexLeak("trig field evaluation has imaginary residue " + std::to_string(leak));
  return total.real();
}

TrigPolynomialFamily::TrigPolynomialFamily(int dim_angle, int nvars)
    : d_(dim_angle), nvars_(nvars), zero_(nvars) {
  if (d_ < 1 || nvars_ < 1) throw ValidationError("trig family dimensions must be positive");
}

TrigPolynomialFamily::TrigPolynomialFamily(int dim_angle, int nvars,
                                           const std::vector<ModeEntry>& entries)
    : TrigPolynomialFamily(dim_angle, nvars) {
  for (const auto& e : entries) {
    check_mode_dim(e.nu, d_);
    if (e.poly.nvars() != nvars_) throw ValidationError("mode polynomial has wrong variable count");
    auto [it, inserted] = modes_.emplace(e.nu, e.poly);
    if (!inserted) throw ValidationError("duplicate entries at mode " + mode_to_string(e.nu));
  }
  for (const auto& [nu, p] : std::map<Mode, CPolynomial>(modes_)) {
    Mode neg = negate(nu);
    auto it = modes_.find(neg);
    if (it == modes_.end()) {
      modes_.emplace(neg, conjugate(p));
    } else {
      CPolynomial diff = it->second + conjugate(p) * cplx(-1.0, 0.0);
      if (poly_scale(diff) > 1e-13 * (1.0 + poly_scale(p)))
        throw ValidationError("entries at " + mode_to_string(nu) + " and " + mode_to_string(neg) +
                              " break Hermitian symmetry");
    }
  }
  for (auto it = modes_.begin(); it != modes_.end();) {
    it = it->second.empty() ? modes_.erase(it) : std::next(it);
  }
}

const CPolynomial& TrigPolynomialFamily::poly(const Mode& nu) const {
  check_mode_dim(nu, d_);
  auto it = modes_.find(nu);
  return it == modes_.end() ? zero_ : it->second;
}

int TrigPolynomialFamily::max_mode_l1() const {
  int n = 0;
  for (const auto& [nu, p] : modes_) n = std::max(n, l1_norm(nu));
  return n;
}

int TrigPolynomialFamily::max_degree() const {
  int deg = 0;
  for (const auto& [nu, p] : modes_) deg = std::max(deg, p.degree());
  return deg;
}

Polynomial TrigPolynomialFamily::zero_mode_real() const {
  const CPolynomial& z = poly(zero_mode(d_));
  Polynomial out(nvars_);
  double scale = 1.0 + poly_scale(z);
  for (const auto& [e, c] : z.terms()) {
    if (std::abs(c.imag()) > 1e-13 * scale)
      throw ComplexLeak("angle-average polynomial has complex coefficient");
    out.add_term(e, c.real());
  }
  return out;
}

double TrigPolynomialFamily::evaluate(const Vec& x, const Vec& psi) const {
  if (psi.size() != d_) throw ValidationError("angle has wrong dimension");
  cplx total(0.0, 0.0);
  for (const auto& [nu, p] : modes_) {
    total += p.evaluate(x.cast<cplx>()) * std::exp(cplx(0.0, dot(psi, nu)));
  }
  if (std::abs(total.imag()) > 1e-13 * (1.0 + std::abs(total.real())))
    throw ComplexLeak("trig family evaluation has imaginary residue");
  return total.real();
}

}  // namespace responsum
