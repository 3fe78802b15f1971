#include <benchmark/benchmark.h>

#include "feynred/builders.hpp"
#include "feynred/factor.hpp"
#include "feynred/reduction.hpp"
#include "feynred/symanzik.hpp"

using namespace feynred;

namespace {

Multigraph family(int which, int n) {
  switch (which) {
    case 0: return wheel_graph(n);
    case 1: return complete_graph(n);
    default: return cycle_graph(n);
  }
}

void BM_FirstSymanzik(benchmark::State& state) {
  Multigraph g = family(0, static_cast<int>(state.range(0)));
  KinematicsContext k = massless_context(g);
  RingPtr ring = symanzik_ring(g, k);
  for (auto _ : state) benchmark::DoNotOptimize(first_symanzik(g, ring));
}
BENCHMARK(BM_FirstSymanzik)->DenseRange(3, 5)->Unit(benchmark::kMillisecond);

void BM_SecondSymanzik(benchmark::State& state) {
  Multigraph g = cycle_graph(static_cast<int>(state.range(0)));
  std::vector<VertexId> ext;
  for (int v = 0; v < state.range(0); ++v) ext.push_back(v);
  KinematicsContext k = attach_onshell_momenta(g, ext);
  RingPtr ring = symanzik_ring(g, k);
  for (auto _ : state) benchmark::DoNotOptimize(second_symanzik(g, k, ring));
}
BENCHMARK(BM_SecondSymanzik)->DenseRange(3, 6)->Unit(benchmark::kMillisecond);

// First Symanzik polynomial of a wheel times a shifted copy.
void BM_FactorProduct(benchmark::State& state) {
  Multigraph g = wheel_graph(static_cast<int>(state.range(0)));
  KinematicsContext k = massless_context(g);
  RingPtr ring = symanzik_ring(g, k);
  Polynomial u = first_symanzik(g, ring);
  std::vector<VarId> xs = ring->of_kind(VariableKind::kSchwinger);
  Polynomial v = substitute(u, xs[0], Polynomial::variable(ring, xs[0]) + Polynomial::constant(ring, 1));
  Polynomial p = u * v;
  for (auto _ : state) benchmark::DoNotOptimize(factor_over_q(p));
}
BENCHMARK(BM_FactorProduct)->DenseRange(3, 4)->Unit(benchmark::kMillisecond);

void BM_IsReducible(benchmark::State& state) {
  Multigraph g = family(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  KinematicsContext k = massless_context(g);
  RingPtr ring = symanzik_ring(g, k);
  std::vector<Polynomial> polys{first_symanzik(g, ring)};
  std::vector<VarId> xs = ring->of_kind(VariableKind::kSchwinger);
  for (auto _ : state) benchmark::DoNotOptimize(is_reducible(polys, xs));
}
BENCHMARK(BM_IsReducible)->Args({2, 4})->Args({2, 6})->Args({0, 3})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
