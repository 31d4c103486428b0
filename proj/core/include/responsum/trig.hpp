#pragma once

#include <map>
#include <vector>

#include "responsum/polynomial.hpp"
#include "responsum/types.hpp"

namespace responsum {

/// Finite trigonometric vector field psi -> sum_nu c_nu e^{i nu.psi} with
/// psi in T^d and values in R^m. Hermitian symmetry (c_{-nu} = conj(c_nu))
/// is completed and checked at construction, so evaluation is real.
class TrigVectorField {
 public:
  struct ModeEntry {
    Mode nu;
    CVec coeff;
  };

  TrigVectorField() = default;
  TrigVectorField(int dim_angle, int dim_value);
  TrigVectorField(int dim_angle, int dim_value, const std::vector<ModeEntry>& entries);

  int dim_angle() const { return d_; }
  int dim_value() const { return m_; }
  bool empty() const { return modes_.empty(); }

  CVec coeff(const Mode& nu) const;
  const std::map<Mode, CVec>& modes() const { return modes_; }
  int max_mode_l1() const;

  Vec evaluate(const Vec& psi) const;

 private:
  int d_ = 0;
  int m_ = 0;
  std::map<Mode, CVec> modes_;
};

/// Family of polynomials in x indexed by trig mode: (x, psi) ->
/// sum_nu P_nu(x) e^{i nu.psi}, Hermitian in nu so values at real (x, psi)
/// are real. Used for angle-dependent potentials.
class TrigPolynomialFamily {
 public:
  struct ModeEntry {
    Mode nu;
    CPolynomial poly;
  };

  TrigPolynomialFamily() = default;
  TrigPolynomialFamily(int dim_angle, int nvars);
  TrigPolynomialFamily(int dim_angle, int nvars, const std::vector<ModeEntry>& entries);

  int dim_angle() const { return d_; }
  int nvars() const { return nvars_; }
  bool empty() const { return modes_.empty(); }

  const CPolynomial& poly(const Mode& nu) const;  // zero polynomial if absent
  const std::map<Mode, CPolynomial>& modes() const { return modes_; }
  int max_mode_l1() const;
  int max_degree() const;

  /// Angle-average part as a real polynomial.
  Polynomial zero_mode_real() const;

  double evaluate(const Vec& x, const Vec& psi) const;

 private:
  int d_ = 0;
  int nvars_ = 0;
  std::map<Mode, CPolynomial> modes_;
  CPolynomial zero_;
};

}  // namespace responsum
