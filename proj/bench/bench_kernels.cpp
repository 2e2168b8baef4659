// Serial reference vs OpenMP kernels, plus one full solver iteration per policy.
// Benchmarks take the grid edge as their argument; the policy is the second argument
// (0 = serial, 1 = parallel).

#include <random>

#include <benchmark/benchmark.h>

#include "duadmm/data.hpp"
#include "duadmm/kernels.hpp"
#include "duadmm/operators.hpp"
#include "duadmm/solvers.hpp"

using namespace duadmm;

namespace {

CVector noise(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> g;
  CVector v(n);
  for (auto& z : v) z = {g(gen), g(gen)};
  return v;
}

const KernelTable& table(const benchmark::State& s) {
  return kernel_table(s.range(1) ? ExecPolicy::parallel : ExecPolicy::serial);
}

GridShape grid(const benchmark::State& s) {
  const auto n = static_cast<std::size_t>(s.range(0));
  return {n, n};
}

void BM_grad(benchmark::State& s) {
  const GridShape g = grid(s);
  const CVector u = noise(g.size(), 1);
  CVector out(2 * g.size());
  for (auto _ : s) {
    table(s).grad(g, u, out);
    benchmark::DoNotOptimize(out.data());
  }
  s.SetItemsProcessed(s.iterations() * static_cast<long>(g.size()));
}

void BM_grad_adjoint(benchmark::State& s) {
  const GridShape g = grid(s);
  const CVector x = noise(2 * g.size(), 2);
  CVector out(g.size());
  for (auto _ : s) {
    table(s).grad_adjoint(g, x, out);
    benchmark::DoNotOptimize(out.data());
  }
  s.SetItemsProcessed(s.iterations() * static_cast<long>(g.size()));
}

void BM_haar(benchmark::State& s) {
  const GridShape g = grid(s);
  const CVector u = noise(g.size(), 3);
  CVector out(4 * g.size());
  for (auto _ : s) {
    table(s).haar(g, u, out);
    benchmark::DoNotOptimize(out.data());
  }
  s.SetItemsProcessed(s.iterations() * static_cast<long>(g.size()));
}

void BM_haar_adjoint(benchmark::State& s) {
  const GridShape g = grid(s);
  const CVector x = noise(4 * g.size(), 4);
  CVector out(g.size());
  for (auto _ : s) {
    table(s).haar_adjoint(g, x, out);
    benchmark::DoNotOptimize(out.data());
  }
  s.SetItemsProcessed(s.iterations() * static_cast<long>(g.size()));
}

void BM_project_group(benchmark::State& s) {
  const GridShape g = grid(s);
  const CVector y = noise(2 * g.size(), 5);
  CVector out(y.size());
  for (auto _ : s) {
    table(s).project_group_l2(y, 3.0, out);
    benchmark::DoNotOptimize(out.data());
  }
  s.SetItemsProcessed(s.iterations() * static_cast<long>(g.size()));
}

void BM_project_box(benchmark::State& s) {
  const GridShape g = grid(s);
  const CVector y = noise(4 * g.size(), 6);
  const std::vector<double> radii(y.size(), 0.5);
  CVector out(y.size());
  for (auto _ : s) {
    table(s).project_box_linf(y, radii, out);
    benchmark::DoNotOptimize(out.data());
  }
  s.SetItemsProcessed(s.iterations() * static_cast<long>(y.size()));
}

void BM_squared_norm(benchmark::State& s) {
  const GridShape g = grid(s);
  const CVector x = noise(4 * g.size(), 7);
  for (auto _ : s) benchmark::DoNotOptimize(table(s).squared_norm(x));
  s.SetItemsProcessed(s.iterations() * static_cast<long>(x.size()));
}

void BM_solver_iteration(benchmark::State& s) {
  const GridShape g = grid(s);
  const ExecPolicy policy = s.range(1) ? ExecPolicy::parallel : ExecPolicy::serial;
  const Image truth = shepp_logan(g.rows, g.cols);
  MaskSpec spec;
  spec.grid = g;
  const OperatorEnsemble ops(make_mask(spec), 0.5, policy);
  const CVector b = ops.apply_fourier(truth.vec());
  const SolverConfig config;
  DualState state = DualState::zeros(ops.d(), ops.p());
  SolverWorkspace ws(ops);
  ws.refresh(state, ops);
  for (auto _ : s) {
    sgs_admm_step(state, ws, config, ops, b, config.sigma0);
    benchmark::DoNotOptimize(state.u.data());
  }
}

void grid_args(benchmark::internal::Benchmark* b) {
  for (long n : {128, 256, 512})
    for (long policy : {0, 1}) b->Args({n, policy});
}

}  // namespace

BENCHMARK(BM_grad)->Apply(grid_args);
BENCHMARK(BM_grad_adjoint)->Apply(grid_args);
BENCHMARK(BM_haar)->Apply(grid_args);
BENCHMARK(BM_haar_adjoint)->Apply(grid_args);
BENCHMARK(BM_project_group)->Apply(grid_args);
BENCHMARK(BM_project_box)->Apply(grid_args);
BENCHMARK(BM_squared_norm)->Apply(grid_args);
BENCHMARK(BM_solver_iteration)->Apply(grid_args)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
