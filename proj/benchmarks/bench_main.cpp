#include <benchmark/benchmark.h>

#include <cmath>

#include "inflap/geometry.hpp"
#include "inflap/solver.hpp"

namespace {

using namespace inflap;

ScalarField cone_field(int n) {
  const Grid g = Grid::build(2, {-1.0, -1.0}, {1.0, 1.0}, n);
  ScalarField u(g);
  for (std::size_t k = 0; k < g.node_count(); ++k) {
    const Point x = g.coords(k);
    u[k] = std::max(0.0, std::hypot(x[0], x[1]) - 0.3);
  }
  return u;
}

void BM_ApplyField(benchmark::State& state) {
  const ScalarField u = cone_field(int(state.range(0)));
  const StencilOperator op(2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(op.apply_field(u));
  }
}
BENCHMARK(BM_ApplyField)->Arg(65)->Arg(129)->Arg(257);

void BM_SolveIterations(benchmark::State& state) {
  const Grid g = Grid::build(2, {-1.0, -1.0}, {1.0, 1.0}, int(state.range(0)));
  const ScalarField phi(g, 1.0);
  ReactionTerm rt;
  rt.eps = 0.25;
  rt.beta = BumpProfile::parse("bump6");
  DirichletProblem p(g, phi, RhsReaction{rt}, StencilOperator(2));
  SolverOptions opts;
  opts.max_iter = 200;
  opts.tol = 1e-300;  // run exactly max_iter sweeps
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_singular(p, opts));
  }
}
BENCHMARK(BM_SolveIterations)->Arg(65)->Arg(129)->Unit(benchmark::kMillisecond);

void BM_DistanceField(benchmark::State& state) {
  const ScalarField u = cone_field(int(state.range(0)));
  const auto level = LevelDecomposition::build(u, 0.05);
  for (auto _ : state) {
    benchmark::DoNotOptimize(DistanceField::build(u, level));
  }
}
BENCHMARK(BM_DistanceField)->Arg(65)->Arg(129)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
