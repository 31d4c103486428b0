#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "responsum/errors.hpp"
#include "responsum/series.hpp"
#include "responsum/system.hpp"
#include "responsum/taylor.hpp"
#include "support.hpp"

using namespace responsum;
using testsys::mode1;
using testsys::mode2;

namespace {

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

Vec random_angle(std::mt19937& rng, int d) {
  std::uniform_real_distribution<double> dist(0.0, 2.0 * std::numbers::pi);
  Vec psi(d);
  for (int i = 0; i < d; ++i) psi[i] = dist(rng);
  return psi;
}

/// Order-q coefficient of the composed interaction, extracted from dense
/// evaluations over complex weights mu_j on a circle (discrete Cauchy
/// integral). Fully independent of the sparse graded convolution engine.
CVec dense_composite_order(const OrderSeries& os, const TaylorTensors& tensors, int q,
                           const Vec& psi) {
  const int M = 32;
  const double r = 0.8;
  CVec acc = CVec::Zero(tensors.m);
  for (int j = 0; j < M; ++j) {
    cplx mu = r * std::exp(cplx(0.0, 2.0 * std::numbers::pi * j / M));
    CVec w = CVec::Zero(tensors.m);
    cplx mu_k = 1.0;
    for (int k = 1; k <= os.count(); ++k) {
      mu_k *= mu;
      w += mu_k * os.order(k).eval_complex(psi);
    }
    CVec f = CVec::Zero(tensors.m);
    for (const auto& [nu0, tv] : tensors.coeffs) {
      cplx phase = std::exp(cplx(0.0, dot(psi, nu0)));
      int pmin = 2;
      if (!is_zero(nu0) && tensors.kind == SystemKind::GradientForced) pmin = 1;
      for (int p = pmin; p <= tensors.p_max; ++p) {
        const SymTensor& t = tensors.tensor(nu0, p);
        if (t.is_zero()) continue;
        std::vector<CVec> args(p, w);
        f += phase * t.contract(args);
      }
    }
    acc += f * std::exp(cplx(0.0, -2.0 * std::numbers::pi * q * j / M));
  }
  return acc / (double(M) * std::pow(r, q));
}

}  // namespace

TEST_CASE("fourier map enforces truncation and symmetry accounting") {
  FourierMap u(2, 1, 2);
  CVec v(1);
  v << cplx(1.0, 2.0);
  u.set(mode2(1, 1), v);
  u.set(mode2(2, 1), v);  // beyond the radius, silently dropped
  CHECK(u.size() == 1);
  CHECK(u.coeff(mode2(2, 1)).norm() == 0.0);
  CHECK(u.hermitian_defect() > 1.0);  // mirror missing entirely
  u.set(mode2(-1, -1), CVec(v.conjugate()));
  CHECK(u.hermitian_defect() < 1e-15);

  u.add(mode2(1, 1), CVec(-v));  // exact cancellation prunes the entry
  CHECK_FALSE(u.has(mode2(1, 1)));
}

TEST_CASE("first order matches the scalar hand solve") {
  Prepared p = prepare(testsys::linear_system());
  Vec zeta = Vec::Constant(1, 0.3);
  FourierMap u1 = first_order(0.1, p.spec, p.tensors, zeta, 8);
  CHECK(std::abs(u1.coeff(mode1(1))[0] - cplx(0.0, -0.1)) < 1e-15);
  CHECK(std::abs(u1.coeff(mode1(-1))[0] - cplx(0.0, 0.1)) < 1e-15);
  CHECK(std::abs(u1.coeff(mode1(0))[0] - cplx(0.3, 0.0)) < 1e-15);
}

TEST_CASE("first order with no driving holds only the offset") {
  SystemSpec s = testsys::linear_system();
  s.forcing = TrigVectorField(1, 1);
  s.validate();
  Prepared p = prepare(s);
  FourierMap u1 = first_order(0.1, p.spec, p.tensors, Vec::Constant(1, 0.2), 8);
  CHECK(u1.size() == 1);
  CHECK(std::abs(u1.coeff(mode1(0))[0] - cplx(0.2, 0.0)) < 1e-15);
}

TEST_CASE("forced first order solves against the driving seeds") {
  Prepared p = prepare(testsys::forced_system());
  FourierMap u1 = first_order(1e-3, p.spec, p.tensors, Vec::Zero(2), 8);
  // seed at (0,1) is (-1/2, 0); the (1,0) family term has no constant force
  CHECK(u1.coeff(mode2(0, 1)).norm() > 0.0);
  CHECK(u1.coeff(mode2(1, 0)).norm() == 0.0);
  // direct check of the mode solve: D u = -eps h
  CMat d = assemble_D(1e-3, dot(p.spec.omega, mode2(0, 1)), p.spec, p.tensors.A);
  CVec h = p.tensors.tensor(mode2(0, 1), 0).as_vector();
  CHECK((d * u1.coeff(mode2(0, 1)) + 1e-3 * h).norm() < 1e-15);
}

TEST_CASE("second order vanishes identically for gradient systems") {
  for (const SystemSpec& s : {testsys::cubic_system(), testsys::asymmetric_cubic_system(),
                              testsys::coupled_system()}) {
    Prepared p = prepare(s);
    Vec zeta = Vec::Constant(s.m, 0.17);
    OrderSeries os = compute_series(0.1, p.spec, p.tensors, zeta, 2);
    CHECK(os.order(2).empty());
  }
}

TEST_CASE("cubic order stack reproduces the frozen hand values") {
  Prepared p = prepare(testsys::cubic_system());
  OrderSeries os = compute_series(0.1, p.spec, p.tensors, Vec::Zero(1), 4);
  CHECK(os.order(3).empty());

  cplx u4_3 = os.order(4).coeff(mode1(3))[0];
  cplx expected = -0.1 * cplx(0.0, 1e-3) / cplx(-0.8, 3.0);
  CHECK(std::abs(u4_3 - expected) < 1e-17);
  CHECK(std::abs(os.order(4).coeff(mode1(-3))[0] - std::conj(expected)) < 1e-17);

  cplx u4_1 = os.order(4).coeff(mode1(1))[0];
  CHECK(std::abs(u4_1 - cplx(3e-4, 0.0)) < 1e-17);
}

TEST_CASE("composition engine against the dense circle oracle") {
  std::mt19937 rng(41);
  struct Case {
    SystemSpec spec;
    int q;
    double zeta0;
  };
  std::vector<Case> cases{{testsys::cubic_system(), 3, 0.0},
                          {testsys::asymmetric_cubic_system(), 3, 0.05},
                          {testsys::coupled_system(), 4, 0.02},
                          {testsys::forced_system(), 3, 0.01}};
  for (const Case& cs : cases) {
    Prepared p = prepare(cs.spec);
    Vec zeta = Vec::Constant(cs.spec.m, cs.zeta0);
    OrderSeries os = compute_series(0.1, p.spec, p.tensors, zeta, cs.q + 2);
    OrderSeries head = os;
    head.orders.resize(cs.q);
    head.k_max = cs.q;
    FourierMap composed = compose_nonlinearity(head, p.tensors);
    for (int trial = 0; trial < 6; ++trial) {
      Vec psi = random_angle(rng, cs.spec.d);
      CVec sparse = composed.eval_complex(psi);
      CVec dense = dense_composite_order(os, p.tensors, cs.q, psi);
      CHECK((sparse - dense).norm() < 1e-11 * (1.0 + dense.norm()));
    }
  }
}

TEST_CASE("series orders keep conjugate symmetry") {
  Prepared p = prepare(testsys::coupled_system());
  OrderSeries os = compute_series(0.08, p.spec, p.tensors, Vec::Zero(2), 6);
  for (int k = 1; k <= 6; ++k) CHECK(os.order(k).hermitian_defect() < 1e-13);
}

TEST_CASE("summed series diagnostics skip vanished orders") {
  Prepared p = prepare(testsys::cubic_system());
  OrderSeries os = compute_series(0.1, p.spec, p.tensors, Vec::Zero(1), 4);
  SummedSeries s = sum_series(os);
  REQUIRE(s.diagnostics.per_order_norms.size() == 4);
  CHECK(s.diagnostics.per_order_norms[1] == 0.0);
  CHECK(s.diagnostics.per_order_norms[2] == 0.0);
  CHECK(s.diagnostics.per_order_norms[3] > 0.0);
  CHECK(s.diagnostics.ratio ==
        doctest::Approx(s.diagnostics.per_order_norms[3] / s.diagnostics.per_order_norms[0]));
  CHECK_FALSE(s.diagnostics.non_convergent);

  // the sum excludes the zero mode; mu = 0 empties it entirely
  CHECK_FALSE(s.u.has(mode1(0)));
  SummedSeries at_zero = sum_series(os, 0.0);
  CHECK(at_zero.u.empty());
}

TEST_CASE("linear series terminates at order one") {
  Prepared p = prepare(testsys::linear_system());
  OrderSeries os = compute_series(0.1, p.spec, p.tensors, Vec::Zero(1), 6);
  for (int k = 2; k <= 6; ++k) CHECK(os.order(k).empty());
  SummedSeries s = sum_series(os);
  CHECK(std::abs(s.u.coeff(mode1(1))[0] - cplx(0.0, -0.1)) < 1e-15);
}

TEST_CASE("large driving flags non-convergence without failing") {
  Prepared p = prepare(testsys::cubic_system());
  OrderSeries os = compute_series(5.0, p.spec, p.tensors, Vec::Zero(1), 8);
  SummedSeries s = sum_series(os);
  CHECK(s.diagnostics.non_convergent);
  CHECK(s.diagnostics.ratio >= 1.0);
}

TEST_CASE("picard iteration cross-validates the summed series") {
  Prepared p = prepare(testsys::cubic_system());
  FourierMap via_picard = picard_solve(0.01, p.spec, p.tensors, Vec::Zero(1), 1e-14, 200);
  OrderSeries os = compute_series(0.01, p.spec, p.tensors, Vec::Zero(1), 8);
  FourierMap via_series = sum_series(os).u;
  double diff = 0.0;
  for (const auto& [nu, v] : via_picard.entries()) {
    if (!is_zero(nu)) diff = std::max(diff, (v - via_series.coeff(nu)).norm());
  }
  for (const auto& [nu, v] : via_series.entries()) diff = std::max(diff, (v - via_picard.coeff(nu)).norm());
  CHECK(diff < 1e-10);

  CHECK_THROWS_AS(picard_solve(1000.0, p.spec, p.tensors, Vec::Zero(1), 1e-12, 60),
                  NonConvergence);
}

TEST_CASE("field evaluation and phase sup") {
  Prepared p = prepare(testsys::linear_system());
  OrderSeries os = compute_series(0.1, p.spec, p.tensors, Vec::Zero(1), 4);
  FourierMap u = sum_series(os).u;

  Vec psi(1);
  psi << std::numbers::pi / 2.0;
  Vec x = evaluate(u, Vec::Zero(1), Vec::Zero(1), psi);
  CHECK(x[0] == doctest::Approx(0.2).epsilon(1e-14));

  Vec shifted(1);
  shifted << std::numbers::pi / 2.0 + 2.0 * std::numbers::pi;
  CHECK(evaluate(u, Vec::Zero(1), Vec::Zero(1), shifted)[0] ==
        doctest::Approx(x[0]).epsilon(1e-12));

  Vec c = Vec::Constant(1, 1.5), zeta = Vec::Constant(1, -0.25);
  Vec base = evaluate(FourierMap(1, 1), zeta, c, psi);
  CHECK(base[0] == doctest::Approx(1.25));

  CHECK(sup_phase_norm(u) == doctest::Approx(0.2).epsilon(1e-12));

  // a lone unmirrored coefficient leaks an imaginary part
  FourierMap broken(1, 1);
  CVec v(1);
  v << cplx(0.0, -0.1);
  broken.set(mode1(1), v);
  Vec at(1);
  at << 0.7;
  CHECK_THROWS_AS(evaluate(broken, Vec::Zero(1), Vec::Zero(1), at), ComplexLeak);
}

TEST_CASE("interaction coefficients follow the composed force") {
  Prepared p = prepare(testsys::linear_system());
  FourierMap w(1, 1);
  CVec v(1);
  v << cplx(0.0, -0.1);
  w.set(mode1(1), v);
  w.set(mode1(-1), CVec(v.conjugate()));
  w.set(mode1(0), CVec(CVec::Constant(1, cplx(0.2, 0.0))));
  FourierMap inter = interaction_coefficients(w, p.spec, p.tensors);
  // linear force: [g]_nu = w_nu, minus the driving at modes +-1
  CHECK(std::abs(inter.coeff(mode1(1))[0] - (cplx(0.0, -0.1) - 1.0)) < 1e-15);
  CHECK(std::abs(inter.coeff(mode1(0))[0] - cplx(0.2, 0.0)) < 1e-15);
}

TEST_CASE("truncation radius defaults and spillover control") {
  CHECK(default_truncation(testsys::cubic_system(), 8) == 8);
  CHECK(default_truncation(testsys::forced_system(), 6) == 6);

  Prepared p = prepare(testsys::cubic_system());
  OrderSeries tight = compute_series(0.1, p.spec, p.tensors, Vec::Zero(1), 4, 2);
  CHECK_FALSE(tight.order(4).has(mode1(3)));
  // modes inside the radius are unaffected at these orders
  OrderSeries full = compute_series(0.1, p.spec, p.tensors, Vec::Zero(1), 4);
  CHECK(std::abs(tight.order(4).coeff(mode1(1))[0] - full.order(4).coeff(mode1(1))[0]) < 1e-18);
}

TEST_CASE("per order mode decay beyond the driving support") {
  Prepared p = prepare(testsys::coupled_system());
  OrderSeries os = compute_series(0.05, p.spec, p.tensors, Vec::Zero(2), 5);
  // order 3 lives at radius 2 only; order 5 spreads to radii 1 and 3 and sits
  // far below order 3 in magnitude
  double sup3 = 0.0;
  for (const auto& [nu, v] : os.order(3).entries()) {
    CHECK(l1_norm(nu) == 2);
    sup3 = std::max(sup3, v.cwiseAbs().maxCoeff());
  }
  std::map<int, double> radial;
  for (const auto& [nu, v] : os.order(5).entries()) {
    int r = l1_norm(nu);
    radial[r] = std::max(radial[r], v.cwiseAbs().maxCoeff());
  }
  REQUIRE(radial.count(1) == 1);
  REQUIRE(radial.count(3) == 1);
  CHECK(radial.size() == 2);
  CHECK(std::max(radial[1], radial[3]) < 0.01 * sup3);
}
