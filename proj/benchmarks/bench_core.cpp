#include <benchmark/benchmark.h>

#include <cmath>

#include "responsum/bifurcation.hpp"
#include "responsum/propagator.hpp"
#include "responsum/series.hpp"
#include "responsum/system.hpp"
#include "responsum/taylor.hpp"
#include "responsum/trees.hpp"
#include "responsum/verify.hpp"

using namespace responsum;

namespace {

SystemSpec coupled_system() {
  SystemSpec s;
  s.kind = SystemKind::GradientAutonomous;
  s.m = 2;
  s.d = 2;
  s.omega = Vec(2);
  s.omega << 1.0, std::sqrt(2.0);
  s.mass = Mat::Identity(2, 2);
  s.damping = Mat::Identity(2, 2);
  Polynomial v(2);
  v.add_term({2, 0}, 0.5);
  v.add_term({0, 2}, 0.5);
  v.add_term({2, 1}, 1.0);
  s.potential = v;
  CVec half = CVec::Constant(2, cplx(0.0, 0.0));
  CVec f1 = half, f2 = half;
  f1[0] = cplx(0.5, 0.0);
  f2[1] = cplx(0.5, 0.0);
  s.forcing = TrigVectorField(2, 2, {{{1, 0}, f1}, {{-1, 0}, f1}, {{0, 1}, f2}, {{0, -1}, f2}});
  s.validate();
  return s;
}

SystemSpec cubic_system() {
  SystemSpec s;
  s.kind = SystemKind::GradientAutonomous;
  s.m = 1;
  s.d = 1;
  s.omega = Vec::Constant(1, 1.0);
  s.mass = Mat::Identity(1, 1);
  s.damping = Mat::Identity(1, 1);
  Polynomial v(1);
  v.add_term({2}, 0.5);
  v.add_term({4}, 0.25);
  s.potential = v;
  CVec f = CVec::Constant(1, cplx(1.0, 0.0));
  s.forcing = TrigVectorField(1, 1, {{{1}, f}, {{-1}, f}});
  s.validate();
  return s;
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

void BM_series_orders(benchmark::State& state) {
  Prepared p = prepare(coupled_system());
  int k_max = static_cast<int>(state.range(0));
  for (auto _ : state) {
    OrderSeries os = compute_series(0.05, p.spec, p.tensors, Vec::Zero(2), k_max);
    benchmark::DoNotOptimize(os.orders.back());
  }
}

void BM_compose(benchmark::State& state) {
  Prepared p = prepare(coupled_system());
  OrderSeries os = compute_series(0.05, p.spec, p.tensors, Vec::Zero(2), 6);
  for (auto _ : state) {
    FourierMap f = compose_nonlinearity(os, p.tensors);
    benchmark::DoNotOptimize(f.size());
  }
}

void BM_tree_enumeration(benchmark::State& state) {
  std::vector<Mode> support{{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  int k = static_cast<int>(state.range(0));
  for (auto _ : state) {
    long count = 0;
    for (const TreeTopology& topo : enumerate_topologies(k, TreeFamily::Forced))
      count += static_cast<long>(enumerate_labelled(topo, support, true).size());
    benchmark::DoNotOptimize(count);
  }
}

void BM_oracle_sum(benchmark::State& state) {
  Prepared p = prepare(coupled_system());
  Mode nu{1, 0};
  for (auto _ : state) {
    OracleResult r = oracle_sum(3, nu, 0.05, Vec::Zero(2), p.tensors, p.spec);
    benchmark::DoNotOptimize(r.value);
  }
}

void BM_propagator_solve(benchmark::State& state) {
  Prepared p = prepare(coupled_system());
  CVec rhs = CVec::Constant(2, cplx(1.0, -0.5));
  for (auto _ : state) {
    for (int j = 1; j <= 32; ++j) {
      CMat d = assemble_D(0.01, 0.1 * j, p.spec, p.tensors.A);
      benchmark::DoNotOptimize(apply_D_inverse(d, rhs));
    }
  }
}

void BM_picard(benchmark::State& state) {
  Prepared p = prepare(cubic_system());
  for (auto _ : state) {
    FourierMap u = picard_solve(0.01, p.spec, p.tensors, Vec::Zero(1), 1e-12, 200);
    benchmark::DoNotOptimize(u.size());
  }
}

void BM_integrator(benchmark::State& state) {
  Prepared p = prepare(cubic_system());
  for (auto _ : state) {
    Trajectory t = integrate_reference(0.05, p.spec, Vec::Zero(1), Vec::Zero(1), 50.0, 1e-8);
    benchmark::DoNotOptimize(t.steps);
  }
}

}  // namespace

BENCHMARK(BM_series_orders)->Arg(3)->Arg(5)->Arg(7);
BENCHMARK(BM_compose);
BENCHMARK(BM_tree_enumeration)->Arg(3)->Arg(4)->Arg(5);
BENCHMARK(BM_oracle_sum);
BENCHMARK(BM_propagator_solve);
BENCHMARK(BM_picard);
BENCHMARK(BM_integrator);

BENCHMARK_MAIN();
