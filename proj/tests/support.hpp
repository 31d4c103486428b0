#pragma once

// Standard systems shared by the test binaries, plus small helpers.

#include <cmath>
#include <vector>

#include "responsum/system.hpp"
#include "responsum/types.hpp"

namespace testsys {

using namespace responsum;

inline const double kSqrt2 = std::sqrt(2.0);

inline Mode mode1(int a) { return Mode{a}; }
inline Mode mode2(int a, int b) { return Mode{a, b}; }

inline TrigVectorField two_cos(int d, int m, const std::vector<Mode>& modes) {
  std::vector<TrigVectorField::ModeEntry> entries;
  for (const Mode& nu : modes) {
    CVec c = CVec::Zero(m);
    for (int i = 0; i < m; ++i) c[i] = 1.0;
    entries.push_back({nu, c});
  }
  return TrigVectorField(d, m, entries);
}

/// m=1, d=1: restoring force x, driving 2 cos psi.
inline SystemSpec linear_system() {
  SystemSpec s;
  s.kind = SystemKind::GradientAutonomous;
  s.m = 1;
  s.d = 1;
  s.omega = Vec::Constant(1, 1.0);
  s.mass = Mat::Identity(1, 1);
  s.damping = Mat::Identity(1, 1);
  Polynomial v(1);
  v.add_term({2}, 0.5);
  s.potential = v;
  s.forcing = two_cos(1, 1, {mode1(1)});
  s.validate();
  return s;
}

/// m=1, d=1: restoring force x + x^3, driving 2 cos psi.
inline SystemSpec cubic_system() {
  SystemSpec s = linear_system();
  Polynomial v(1);
  v.add_term({2}, 0.5);
  v.add_term({4}, 0.25);
  s.potential = v;
  s.validate();
  return s;
}

/// m=1, d=1: restoring force x + x^2 + x^3 (no odd symmetry, so the average
/// equation has a nonzero root).
inline SystemSpec asymmetric_cubic_system() {
  SystemSpec s = linear_system();
  Polynomial v(1);
  v.add_term({2}, 0.5);
  v.add_term({3}, 1.0 / 3.0);
  v.add_term({4}, 0.25);
  s.potential = v;
  s.validate();
  return s;
}

/// m=2, d=2: potential (x1^2+x2^2)/2 + x1^2 x2, frequencies (1, sqrt 2),
/// driving (cos psi_1 + cos psi_2) in both components.
inline SystemSpec coupled_system() {
  SystemSpec s;
  s.kind = SystemKind::GradientAutonomous;
  s.m = 2;
  s.d = 2;
  s.omega = Vec(2);
  s.omega << 1.0, kSqrt2;
  s.mass = Mat::Identity(2, 2);
  s.damping = Mat::Identity(2, 2);
  Polynomial v(2);
  v.add_term({2, 0}, 0.5);
  v.add_term({0, 2}, 0.5);
  v.add_term({2, 1}, 1.0);
  s.potential = v;
  std::vector<TrigVectorField::ModeEntry> entries;
  {
    CVec c(2);
    c << 0.5, 0.0;
    entries.push_back({mode2(1, 0), c});
  }
  {
    CVec c(2);
    c << 0.0, 0.5;
    entries.push_back({mode2(0, 1), c});
  }
  s.forcing = TrigVectorField(2, 2, entries);
  s.validate();
  return s;
}

/// m=1, d=2: asymmetric restoring force with nearly rationally dependent
/// frequencies (1, 1.0001), driving 2 cos psi_1 + 2 cos psi_2.
inline SystemSpec near_resonant_system() {
  SystemSpec s;
  s.kind = SystemKind::GradientAutonomous;
  s.m = 1;
  s.d = 2;
  s.omega = Vec(2);
  s.omega << 1.0, 1.0001;
  s.mass = Mat::Identity(1, 1);
  s.damping = Mat::Identity(1, 1);
  Polynomial v(1);
  v.add_term({2}, 0.5);
  v.add_term({3}, 1.0 / 3.0);
  v.add_term({4}, 0.25);
  s.potential = v;
  s.forcing = two_cos(2, 1, {mode2(1, 0), mode2(0, 1)});
  s.validate();
  return s;
}

/// m=2, d=2 forced-potential system with a non-identity mass matrix and
/// coupled damping; the angle-dependent part carries both a genuine
/// nonlinearity at mode (1,0) and a pure driving seed at mode (0,1).
inline SystemSpec forced_system() {
  SystemSpec s;
  s.kind = SystemKind::GradientForced;
  s.m = 2;
  s.d = 2;
  s.omega = Vec(2);
  s.omega << 1.0, kSqrt2;
  s.mass = Mat(2, 2);
  s.mass << 1.0, 0.0, 0.0, 2.0;
  s.damping = Mat(2, 2);
  s.damping << 2.0, 1.0, 1.0, 2.0;

  CPolynomial v0(2);
  v0.add_term({2, 0}, 0.5);
  v0.add_term({0, 2}, 0.5);
  CPolynomial v10(2);
  v10.add_term({2, 1}, 0.5);
  v10.add_term({0, 2}, 0.25);
  CPolynomial v01(2);
  v01.add_term({1, 0}, -0.5);
  std::vector<TrigPolynomialFamily::ModeEntry> entries{
      {mode2(0, 0), v0}, {mode2(1, 0), v10}, {mode2(0, 1), v01}};
  s.potential_family = TrigPolynomialFamily(2, 2, entries);
  s.validate();
  return s;
}

}  // namespace testsys
