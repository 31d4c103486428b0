#pragma once

#include <limits>
#include <map>

#include "responsum/types.hpp"

namespace responsum {

/// Sparse map from integer frequency vectors to complex m-vector Fourier
/// coefficients. Entries beyond the l1 truncation radius are dropped on
/// insertion; entries whose components all fall below 1e-300 are pruned.
class FourierMap {
 public:
  static constexpr int kUnlimited = std::numeric_limits<int>::max();

  FourierMap() = default;
  FourierMap(int dim_angle, int dim_value, int truncation = kUnlimited);

  int dim_angle() const { return d_; }
  int dim_value() const { return m_; }
  int truncation() const { return n_trunc_; }
  bool empty() const { return entries_.empty(); }
  size_t size() const { return entries_.size(); }

  bool has(const Mode& nu) const { return entries_.count(nu) > 0; }
  CVec coeff(const Mode& nu) const;

  void set(const Mode& nu, const CVec& value);
  void add(const Mode& nu, const CVec& value);
  void add_component(const Mode& nu, int i, cplx value);

  const std::map<Mode, CVec>& entries() const { return entries_; }

  /// Largest Euclidean coefficient norm, optionally ignoring the zero mode.
  double sup_coeff_norm(bool include_zero_mode = true) const;

  /// Max deviation from coeff(-nu) == conj(coeff(nu)) over stored modes.
  double hermitian_defect() const;

  /// Complex value sum_nu c_nu e^{i nu.psi}.
  CVec eval_complex(const Vec& psi) const;

 private:
  void prune(const Mode& nu);

  int d_ = 0;
  int m_ = 0;
  int n_trunc_ = kUnlimited;
  std::map<Mode, CVec> entries_;
};

}  // namespace responsum
