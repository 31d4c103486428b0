#pragma once

#include <map>
#include <vector>

#include "responsum/system.hpp"
#include "responsum/types.hpp"

namespace responsum {

/// Advance a trailing index tuple in [0, m)^p odometer-style; returns false
/// once the tuple wraps back to all zeros.
inline bool next_tuple(std::vector<int>& t, int m) {
  for (int j = static_cast<int>(t.size()) - 1; j >= 0; --j) {
    if (++t[j] < m) return true;
    t[j] = 0;
  }
  return false;
}

/// Dense tensor with one output index and p trailing indices, each in [0, m).
/// Trailing indices are symmetric by construction.
class SymTensor {
 public:
  SymTensor() = default;
  SymTensor(int m, int p);

  int dim() const { return m_; }
  int order() const { return p_; }

  cplx& at(int i, const std::vector<int>& trailing);
  cplx at(int i, const std::vector<int>& trailing) const;

  bool is_zero() const;
  double max_abs() const;

  /// Contract the p trailing indices against p vectors of length m.
  CVec contract(const std::vector<CVec>& args) const;

  CVec as_vector() const;  // p == 0
  CMat as_matrix() const;  // p == 1

 private:
  size_t index(int i, const std::vector<int>& t) const;

  int m_ = 0;
  int p_ = 0;
  std::vector<cplx> a_;
};

/// Taylor data of the interaction around an equilibrium point: for each
/// driving mode nu, tensors of the mode's force expansion in powers of
/// (x - center); A is the symmetric linear part of the angle average.
struct TaylorTensors {
  SystemKind kind = SystemKind::GradientAutonomous;
  Vec center;
  int m = 0;
  int d = 0;
  int p_max = 0;
  Mat A;
  std::map<Mode, std::vector<SymTensor>> coeffs;

  bool has_mode(const Mode& nu) const { return coeffs.count(nu) > 0; }
  /// Tensor of trailing order p at mode nu; a zero tensor if absent.
  const SymTensor& tensor(const Mode& nu, int p) const;
};

/// Expand the interaction force around center and validate that the linear
/// part of the angle average is symmetric positive definite (throws
/// HypothesisViolation otherwise).
TaylorTensors taylor_tensors(const SystemSpec& spec, const Vec& center);

}  // namespace responsum
