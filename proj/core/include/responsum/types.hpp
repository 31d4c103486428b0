#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdlib>
#include <numeric>
#include <string>
#include <vector>

namespace responsum {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using cplx = std::complex<double>;

/// Integer frequency vector nu in Z^d. Lexicographic (std::vector) ordering is
/// used wherever modes key a map, so iteration order is deterministic.
using Mode = std::vector<int>;

inline int l1_norm(const Mode& nu) {
  int s = 0;
  for (int c : nu) s += std::abs(c);
  return s;
}

inline Mode negate(Mode nu) {
  for (int& c : nu) c = -c;
  return nu;
}

inline Mode add(const Mode& a, const Mode& b) {
  Mode r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline bool is_zero(const Mode& nu) {
  for (int c : nu) {
    if (c != 0) return false;
  }
  return true;
}

inline Mode zero_mode(int d) { return Mode(d, 0); }

inline double dot(const Vec& omega, const Mode& nu) {
  double s = 0.0;
  for (int i = 0; i < static_cast<int>(nu.size()); ++i) s += omega[i] * nu[i];
  return s;
}

inline std::string mode_to_string(const Mode& nu) {
  std::string s = "(";
  for (size_t i = 0; i < nu.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(nu[i]);
  }
  return s + ")";
}

}  // namespace responsum
