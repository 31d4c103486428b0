// End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
// the exit status is the number of failed criteria. With arguments, only the
// listed criteria run (e.g. "acceptance 3 7").
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "responsum/bifurcation.hpp"
#include "responsum/errors.hpp"
#include "responsum/propagator.hpp"
#include "responsum/series.hpp"
#include "responsum/system.hpp"
#include "responsum/taylor.hpp"
#include "responsum/trees.hpp"
#include "responsum/verify.hpp"
#include "support.hpp"

using namespace responsum;
using testsys::mode1;
using testsys::mode2;

namespace {

struct Outcome {
  bool ok = true;
  std::vector<std::string> notes;
};

void expect(Outcome& o, bool cond, const std::string& what) {
  if (!cond) {
    o.ok = false;
    o.notes.push_back(what);
  }
}

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3e", x);
  return buf;
}

struct Prepared {
  SystemSpec spec;
  Vec c;
  TaylorTensors tensors;
};

Prepared prepare(const SystemSpec& spec) {
  Prepared p{spec, {}, {}};
  p.c = find_minimum(build_U(spec), Vec::Zero(spec.m), 1e-13, 100);
  p.tensors = taylor_tensors(spec, p.c);
  return p;
}

std::vector<Mode> mode_ball(int d, int radius) {
  std::vector<Mode> out;
  Mode nu(d, 0);
  std::function<void(int, int)> rec = [&](int pos, int left) {
    if (pos == d) {
      if (!is_zero(nu)) out.push_back(nu);
      return;
    }
    for (int v = -left; v <= left; ++v) {
      nu[pos] = v;
      rec(pos + 1, left - std::abs(v));
    }
  };
  rec(0, radius);
  return out;
}

// --- criterion 1: scalar linear closed form -------------------------------

Outcome criterion1() {
  Outcome o;
  Prepared p = prepare(testsys::linear_system());
  for (double eps : {0.1, 0.01}) {
    BifurcationSolveRecord rec = solve_zeta(eps, p.spec, p.tensors, Vec::Zero(1), 1e-12, 50);
    expect(o, std::abs(rec.zeta[0]) <= 1e-14, "zeta nonzero at eps " + num(eps));
    OrderSeries os = compute_series(eps, p.spec, p.tensors, rec.zeta, 8);
    FourierMap u = sum_series(os).u;
    cplx u1 = u.coeff(mode1(1))[0], um1 = u.coeff(mode1(-1))[0];
    expect(o, std::abs(u1 - cplx(0.0, -eps)) <= 1e-14, "u_1 off at eps " + num(eps));
    expect(o, std::abs(um1 - cplx(0.0, eps)) <= 1e-14, "u_-1 off at eps " + num(eps));
    double worst = 0.0;
    for (int j = 0; j < 100; ++j) {
      Vec psi = Vec::Constant(1, 2.0 * std::numbers::pi * j / 100.0);
      double x = evaluate(u, rec.zeta, p.c, psi)[0];
      worst = std::max(worst, std::abs(x - 2.0 * eps * std::sin(psi[0])));
    }
    expect(o, worst <= 1e-12, "phase evaluation off by " + num(worst));
    ResidualReport rr = ode_residual(u, rec.zeta, p.c, eps, p.spec, p.tensors);
    expect(o, rr.sup_norm <= 1e-13, "residual sup " + num(rr.sup_norm));
  }
  return o;
}

// --- criterion 2: second order vanishes exactly ---------------------------

Outcome criterion2() {
  Outcome o;
  struct Named {
    const char* name;
    SystemSpec spec;
  };
  std::vector<Named> systems{{"linear", testsys::linear_system()},
                             {"cubic", testsys::cubic_system()},
                             {"asymmetric", testsys::asymmetric_cubic_system()},
                             {"coupled", testsys::coupled_system()},
                             {"near-resonant", testsys::near_resonant_system()}};
  for (const Named& n : systems) {
    Prepared p = prepare(n.spec);
    for (double z0 : {0.0, 0.1}) {
      Vec zeta = Vec::Constant(n.spec.m, z0);
      OrderSeries os = compute_series(0.05, p.spec, p.tensors, zeta, 2);
      expect(o, os.order(2).empty(),
             std::string("order 2 not the zero map for ") + n.name + " at offset " + num(z0));
    }
  }
  return o;
}

// --- criterion 3: tree sum vs recursion -----------------------------------

void compare_orders(Outcome& o, const char* name, const SystemSpec& spec, int k_hi, double eps,
                    const Vec& zeta) {
  Prepared p = prepare(spec);
  OrderSeries os = compute_series(eps, p.spec, p.tensors, zeta, k_hi);
  for (int k = 2; k <= k_hi; ++k) {
    for (const Mode& nu : mode_ball(spec.d, k)) {
      CVec rec = os.order(k).coeff(nu);
      CVec orc = oracle_coefficient(k, nu, eps, zeta, p.tensors, p.spec);
      double diff = (orc - rec).norm();
      if (diff > 1e-10 * std::max(1.0, rec.norm())) {
        expect(o, false,
               std::string(name) + " k=" + std::to_string(k) + " nu=" + mode_to_string(nu) +
                   " diff " + num(diff));
      }
    }
  }
}

Outcome criterion3() {
  Outcome o;
  compare_orders(o, "cubic", testsys::cubic_system(), 4, 0.05, Vec::Zero(1));
  compare_orders(o, "coupled", testsys::coupled_system(), 4, 0.05, Vec::Zero(2));
  compare_orders(o, "forced", testsys::forced_system(), 4, 0.01, Vec::Constant(2, 0.02));
  return o;
}

// --- criterion 4: counting inequalities, exhaustive -----------------------

Outcome criterion4() {
  Outcome o;
  long checked = 0, failures = 0;
  std::vector<Mode> support1{mode1(1), mode1(-1)};
  for (int k = 1; k <= kTreeOrderCeilingAutonomous; ++k) {
    for (const TreeTopology& topo : enumerate_topologies(k, TreeFamily::Autonomous)) {
      for (const LabelledTree& lt : enumerate_labelled(topo, support1, true)) {
        ++checked;
        if (!check_counting(lt).ok) ++failures;
      }
    }
  }
  std::vector<Mode> support2{mode2(1, 0), mode2(-1, 0), mode2(0, 1), mode2(0, -1)};
  for (int k = 1; k <= kTreeOrderCeilingForced; ++k) {
    for (const TreeTopology& topo : enumerate_topologies(k, TreeFamily::Forced)) {
      for (const LabelledTree& lt : enumerate_labelled(topo, support2, true)) {
        ++checked;
        if (!check_counting(lt).ok) ++failures;
      }
    }
  }
  expect(o, checked > 1000, "enumeration unexpectedly small: " + std::to_string(checked));
  expect(o, failures == 0, std::to_string(failures) + " counting violations of " +
                               std::to_string(checked) + " trees");
  return o;
}

// --- criterion 5: inverse norm bound on random samples --------------------

Outcome criterion5() {
  Outcome o;
  struct Family {
    const char* name;
    Mat damping, a, mass;
  };
  Mat g2(2, 2), a2(2, 2), m2(2, 2);
  g2 << 2.0, 1.0, 1.0, 2.0;
  a2 << 2.0, 0.5, 0.5, 1.0;
  m2 << 1.0, 0.0, 0.0, 2.0;
  std::vector<Family> families{
      {"scalar", Mat::Identity(1, 1), Mat::Identity(1, 1), Mat::Identity(1, 1)},
      {"coupled damping", g2, Mat::Identity(2, 2), Mat::Identity(2, 2)},
      {"full", g2, a2, m2}};

  std::mt19937 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (const Family& f : families) {
    SpectralData sd = spectral_data(f.damping, f.a, f.mass);
    double alpha = estimate_alpha(sd, f.mass, f.a);
    double eps_star = alpha / sd.b[0];
    long violations = 0;
    for (int i = 0; i < 10000; ++i) {
      double eps = eps_star * 0.99 * std::pow(10.0, -5.0 * unit(rng));
      double s;
      double pick = unit(rng);
      if (pick < 0.4) {
        s = alpha * (2.0 * unit(rng) - 1.0);
      } else if (pick < 0.7) {
        s = 4.0 * alpha * (2.0 * unit(rng) - 1.0);
      } else {
        s = 20.0 * (2.0 * unit(rng) - 1.0);
      }
      double bound = norm_bound(eps, s, sd);
      double measured = inverse_norm(assemble_D(eps, s, f.mass, f.damping, f.a));
      if (bound < measured * (1.0 - 1e-12)) ++violations;
    }
    expect(o, violations == 0,
           std::string(f.name) + ": " + std::to_string(violations) + " bound violations");
  }
  return o;
}

// --- criterion 6: fixed point vs series, average equation solved ----------

Outcome criterion6() {
  Outcome o;
  Prepared p = prepare(testsys::cubic_system());
  double eps = 0.01;
  FourierMap via_picard = picard_solve(eps, p.spec, p.tensors, Vec::Zero(1), 1e-14, 300);
  OrderSeries os = compute_series(eps, p.spec, p.tensors, Vec::Zero(1), 8);
  FourierMap via_series = sum_series(os).u;
  double diff = 0.0;
  std::set<Mode> modes;
  for (const auto& [nu, v] : via_picard.entries()) modes.insert(nu);
  for (const auto& [nu, v] : via_series.entries()) modes.insert(nu);
  for (const Mode& nu : modes)
    diff = std::max(diff, (via_picard.coeff(nu) - via_series.coeff(nu)).norm());
  expect(o, diff <= 1e-10, "route sup difference " + num(diff));

  BifurcationSolveRecord rec = solve_zeta(eps, p.spec, p.tensors, Vec::Zero(1), 1e-12, 50);
  double h = residual_H(rec.zeta, eps, p.spec, p.tensors).norm();
  expect(o, h <= 1e-10, "average residual " + num(h));
  return o;
}

// --- criterion 7: reference integration meets the assembled solution ------

Outcome criterion7() {
  Outcome o;
  Prepared p = prepare(testsys::cubic_system());
  double eps = 0.01;
  BifurcationSolveRecord rec = solve_zeta(eps, p.spec, p.tensors, Vec::Zero(1), 1e-12, 50);
  OrderSeries os = compute_series(eps, p.spec, p.tensors, rec.zeta, 8);
  FourierMap u = sum_series(os).u;

  SpectralData sd = spectral_data(p.spec.damping, p.tensors.A, p.spec.mass);
  double t_end = default_t_end(eps, sd);
  Trajectory traj = integrate_reference(eps, p.spec, Vec::Zero(1), Vec::Zero(1), t_end, 1e-10);
  double dev = attractor_compare(traj, u, rec.zeta, p.c, p.spec.omega, 0.75);
  expect(o, dev <= 1e-5, "attractor deviation " + num(dev));

  double wrong = attractor_compare(traj, u, Vec(rec.zeta + Vec::Constant(1, 0.1)), p.c,
                                   p.spec.omega, 0.75);
  expect(o, wrong > 0.05, "metric insensitive to an offset error: " + num(wrong));
  return o;
}

// --- criterion 8: shrinking response along descending eps -----------------

Outcome criterion8() {
  Outcome o;
  std::vector<double> eps_list{1e-1, 1e-2, 1e-3, 1e-4};
  struct Named {
    const char* name;
    SystemSpec spec;
  };
  for (const Named& n : {Named{"cubic", testsys::cubic_system()},
                         Named{"asymmetric", testsys::asymmetric_cubic_system()}}) {
    Prepared p = prepare(n.spec);
    std::vector<BifurcationSolveRecord> recs =
        sweep_epsilon(eps_list, p.spec, p.tensors, 1e-12);
    for (size_t i = 0; i < recs.size(); ++i) {
      expect(o, recs[i].converged,
             std::string(n.name) + " unconverged at eps " + num(eps_list[i]));
      if (i > 0 && recs[i].converged && recs[i - 1].converged) {
        expect(o, recs[i].u_sup_norm < recs[i - 1].u_sup_norm,
               std::string(n.name) + " response sup not decreasing at eps " + num(eps_list[i]));
        expect(o, recs[i].zeta.norm() <= recs[i - 1].zeta.norm(),
               std::string(n.name) + " offset norm not decreasing at eps " + num(eps_list[i]));
      }
    }
    if (!recs.empty() && recs.back().converged) {
      expect(o, recs.back().u_sup_norm < 1e-3,
             std::string(n.name) + " response does not approach zero");
    }
  }

  Prepared lin = prepare(testsys::linear_system());
  for (double eps : eps_list) {
    BifurcationSolveRecord rec = solve_zeta(eps, lin.spec, lin.tensors, Vec::Zero(1), 1e-12, 50);
    expect(o, std::abs(rec.u_sup_norm - 2.0 * eps) <= 1e-12,
           "linear response sup differs from 2 eps at eps " + num(eps));
  }
  return o;
}

// --- criterion 9: small divisors and a near resonant solve ----------------

Outcome criterion9() {
  Outcome o;
  Vec omega1(2);
  omega1 << 1.0, std::sqrt(2.0);
  SmallDivisorReport r1 = small_divisor_scan(omega1, 2, 1.0);
  expect(o, std::abs(r1.sN - (std::sqrt(2.0) - 1.0)) <= 1e-12,
         "sqrt2 scan sN " + num(r1.sN));

  Vec omega2(2);
  double phi = 0.5 * (1.0 + std::sqrt(5.0));
  omega2 << 1.0, phi;
  SmallDivisorReport r2 = small_divisor_scan(omega2, 3, 1.0);
  expect(o, std::abs(r2.sN - (2.0 - phi)) <= 1e-12, "golden scan sN " + num(r2.sN));

  Prepared p = prepare(testsys::near_resonant_system());
  double eps = 1e-3;
  BifurcationSolveRecord rec = solve_zeta(eps, p.spec, p.tensors, Vec::Zero(1), 1e-12, 50);
  expect(o, rec.converged, "near resonant solve did not converge");
  OrderSeries os = compute_series(eps, p.spec, p.tensors, rec.zeta, 8);
  SummedSeries summed = sum_series(os);
  expect(o, !summed.diagnostics.non_convergent, "near resonant series flagged non-convergent");
  ResidualReport rr = ode_residual(summed.u, rec.zeta, p.c, eps, p.spec, p.tensors);
  expect(o, rr.sup_norm <= 1e-8, "near resonant residual " + num(rr.sup_norm));
  return o;
}

// --- criterion 10: forced potential family end to end ---------------------

Outcome criterion10() {
  Outcome o;
  Prepared p = prepare(testsys::forced_system());
  double eps = 1e-3;
  BifurcationSolveRecord rec = solve_zeta(eps, p.spec, p.tensors, Vec::Zero(2), 1e-12, 50);
  expect(o, rec.converged, "forced solve did not converge");
  OrderSeries os = compute_series(eps, p.spec, p.tensors, rec.zeta, 8);
  FourierMap u = sum_series(os).u;
  ResidualReport rr = ode_residual(u, rec.zeta, p.c, eps, p.spec, p.tensors);
  expect(o, rr.sup_norm <= 1e-8, "forced residual " + num(rr.sup_norm));

  OrderSeries short_os = compute_series(eps, p.spec, p.tensors, rec.zeta, 3);
  for (int k = 2; k <= 3; ++k) {
    for (const Mode& nu : mode_ball(2, k)) {
      CVec recv = short_os.order(k).coeff(nu);
      CVec orc = oracle_coefficient(k, nu, eps, rec.zeta, p.tensors, p.spec);
      double diff = (orc - recv).norm();
      if (diff > 1e-10 * std::max(1.0, recv.norm())) {
        expect(o, false,
               "tree mismatch k=" + std::to_string(k) + " nu=" + mode_to_string(nu) + " diff " +
                   num(diff));
      }
    }
  }
  return o;
}

struct Criterion {
  int id;
  double time_limit;  // seconds; 0 disables the check
  Outcome (*run)();
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<Criterion> criteria{
      {1, 1.0, criterion1},  {2, 0.0, criterion2}, {3, 60.0, criterion3},
      {4, 30.0, criterion4}, {5, 10.0, criterion5}, {6, 10.0, criterion6},
      {7, 120.0, criterion7}, {8, 0.0, criterion8}, {9, 0.0, criterion9},
      {10, 0.0, criterion10}};

  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failed = 0;
  for (const Criterion& c : criteria) {
    if (!selected.empty() && selected.count(c.id) == 0) continue;
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.notes.push_back(std::string("exception: ") + e.what());
    }
    double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit > 0.0 && elapsed >= c.time_limit) {
      o.ok = false;
      o.notes.push_back("runtime " + num(elapsed) + " s exceeds the " + num(c.time_limit) +
                        " s limit");
    }
    std::printf("criterion %d %s (%.2f s)\n", c.id, o.ok ? "PASS" : "FAIL", elapsed);
    for (const std::string& note : o.notes) std::printf("    - %s\n", note.c_str());
    if (!o.ok) ++failed;
  }
  return failed;
}
