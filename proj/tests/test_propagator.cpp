#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "responsum/errors.hpp"
#include "responsum/propagator.hpp"
#include "support.hpp"

using namespace responsum;
using testsys::mode2;

namespace {

struct Family {
  Mat damping;
  Mat a;
  Mat mass;
};

std::vector<Family> bound_families() {
  std::vector<Family> fams;
  fams.push_back({Mat::Identity(1, 1), Mat::Identity(1, 1), Mat::Identity(1, 1)});
  Mat gamma(2, 2);
  gamma << 2.0, 1.0, 1.0, 2.0;
  fams.push_back({gamma, Mat::Identity(2, 2), Mat::Identity(2, 2)});
  Mat a(2, 2);
  a << 2.0, 0.5, 0.5, 1.0;
  Mat mass(2, 2);
  mass << 1.0, 0.0, 0.0, 2.0;
  fams.push_back({gamma, a, mass});
  return fams;
}

}  // namespace

TEST_CASE("spectral data on the coupled damping example") {
  Mat gamma(2, 2);
  gamma << 2.0, 1.0, 1.0, 2.0;
  SpectralData sd = spectral_data(gamma, Mat::Identity(2, 2));
  CHECK((sd.K * sd.K).isApprox(gamma, 1e-12));
  CHECK((sd.K * sd.K_inv).isApprox(Mat::Identity(2, 2), 1e-12));
  CHECK(sd.kappa[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sd.kappa[1] == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
  CHECK(sd.b[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(sd.b[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sd.alphaEstimate > 0.0);
}

TEST_CASE("spectral data on the scalar example") {
  SpectralData sd = spectral_data(Mat::Constant(1, 1, 4.0), Mat::Constant(1, 1, 9.0));
  CHECK(sd.K(0, 0) == doctest::Approx(2.0));
  CHECK(sd.kappa[0] == doctest::Approx(2.0));
  CHECK(sd.b[0] == doctest::Approx(2.25));
}

TEST_CASE("non positive definite inputs are rejected") {
  Mat bad(2, 2);
  bad << 1.0, 3.0, 3.0, 1.0;
  CHECK_THROWS_AS(spectral_data(bad, Mat::Identity(2, 2)), NotPositiveDefinite);
  CHECK_THROWS_AS(spectral_data(Mat::Identity(2, 2), bad), NotPositiveDefinite);
}

TEST_CASE("assembled symbol at the scalar reference point") {
  // -eps s^2 + i s + eps with s = 1 collapses to i for every eps
  for (double eps : {0.1, 0.01}) {
    CMat d = assemble_D(eps, 1.0, Mat::Identity(1, 1), Mat::Identity(1, 1), Mat::Identity(1, 1));
    CHECK(std::abs(d(0, 0) - cplx(0.0, 1.0)) < 1e-15);
  }
  SystemSpec s = testsys::linear_system();
  CMat via_spec = assemble_D(0.1, 1.0, s, Mat::Identity(1, 1));
  CHECK(std::abs(via_spec(0, 0) - cplx(0.0, 1.0)) < 1e-15);

  CMat at_zero = assemble_D(0.1, 0.0, s, Mat::Identity(1, 1));
  CHECK(std::abs(at_zero(0, 0) - cplx(0.1, 0.0)) < 1e-15);
}

TEST_CASE("propagator application matches a dense solve") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Mat gamma(2, 2);
  gamma << 2.0, 1.0, 1.0, 2.0;
  Mat a(2, 2);
  a << 2.0, 0.5, 0.5, 1.0;
  CMat d = assemble_D(0.05, 0.7, Mat::Identity(2, 2), gamma, a);
  for (int trial = 0; trial < 25; ++trial) {
    CVec v(2);
    v << cplx(dist(rng), dist(rng)), cplx(dist(rng), dist(rng));
    CVec x = apply_D_inverse(d, v);
    CHECK((d * x - v).norm() < 1e-12 * v.norm());
  }
  CHECK_THROWS_AS(apply_D_inverse(CMat::Zero(2, 2), CVec::Ones(2)), SingularMatrix);
}

TEST_CASE("inverse norm equals the reciprocal smallest singular value") {
  CMat d = CMat::Zero(2, 2);
  d(0, 0) = cplx(0.0, 2.0);
  d(1, 1) = 4.0;
  CHECK(inverse_norm(d) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("certified bound dominates the measured norm") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (const Family& fam : bound_families()) {
    SpectralData sd = spectral_data(fam.damping, fam.a, fam.mass);
    const double eps_star = sd.alphaEstimate / sd.b[0];
    for (int trial = 0; trial < 500; ++trial) {
      double eps = eps_star * (1e-4 + 0.9 * unit(rng));
      double s = (unit(rng) < 0.3 ? 0.02 : 10.0) * (2.0 * unit(rng) - 1.0);
      double measured = inverse_norm(assemble_D(eps, s, fam.mass, fam.damping, fam.a));
      CHECK(norm_bound(eps, s, sd) >= measured * (1.0 - 1e-12));
    }
    CHECK_THROWS_AS(norm_bound(1.01 * eps_star, 0.5, sd), EpsilonTooLarge);
  }
}

TEST_CASE("alpha scan reproduces the scalar closed form") {
  SpectralData sd = spectral_data(Mat::Identity(1, 1), Mat::Identity(1, 1));
  CHECK(sd.alphaEstimate == doctest::Approx(0.9 / std::sqrt(2.0)).epsilon(1e-3));

  // explicit grids reproduce the same value when they include the transition
  std::vector<double> eps_grid{1e-3};
  std::vector<double> s_grid;
  for (int i = 1; i <= 2000; ++i) s_grid.push_back(2.0 * i / 2000.0);
  double scanned = estimate_alpha(sd, Mat::Identity(1, 1), Mat::Identity(1, 1), eps_grid, s_grid);
  CHECK(scanned == doctest::Approx(0.9 / std::sqrt(2.0)).epsilon(1e-2));
}

TEST_CASE("small divisor scan hits the classical minima") {
  Vec omega(2);
  omega << 1.0, testsys::kSqrt2;
  SmallDivisorReport r = small_divisor_scan(omega, 2, 1.0);
  CHECK(r.sN == doctest::Approx(testsys::kSqrt2 - 1.0).epsilon(1e-12));
  CHECK(r.argmin == mode2(1, -1));
  CHECK(r.deltaN == doctest::Approx(std::exp(-1.0 * 2.0 / 4.0)).epsilon(1e-12));

  Vec golden(2);
  golden << 1.0, (1.0 + std::sqrt(5.0)) / 2.0;
  SmallDivisorReport g = small_divisor_scan(golden, 3, 1.0);
  CHECK(g.sN == doctest::Approx(2.0 - (1.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-9));
  CHECK(g.argmin == mode2(2, -1));

  // alpha caps the effective radius
  SmallDivisorReport capped = small_divisor_scan(omega, 2, 1.0, 0.1);
  CHECK(capped.rN == doctest::Approx(0.1));

  Vec one(1);
  one << 1.0;
  SmallDivisorReport single = small_divisor_scan(one, 3, 2.0);
  CHECK(single.sN == doctest::Approx(1.0));
  CHECK(single.argmin == Mode{1});
}
