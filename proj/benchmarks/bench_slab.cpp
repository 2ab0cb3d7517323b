#include <benchmark/benchmark.h>

#include "stheat/analytic.hpp"
#include "stheat/baselines.hpp"
#include "stheat/heat_solver.hpp"
#include "stheat/mesh.hpp"

namespace {

stheat::HeatProblem rod_problem() {
  stheat::HeatProblem p;
  p.bcs = {stheat::BoundaryCondition::neumann_flux(stheat::BoundaryTag::Left, 1.0)};
  return p;
}

void BM_Assemble(benchmark::State& state) {
  const auto slab = stheat::extrude(stheat::make_rectangle_mesh(20.0, 1.0, state.range(0), 1), 1);
  const auto trace = stheat::make_initial_trace(slab, [](const stheat::SpatialPoint&) { return 0.0; });
  const auto problem = rod_problem();
  const auto interval = stheat::SlabInterval::from_step(0.0, 0.1);
  for (auto _ : state) {
    auto system = stheat::assemble_slab(slab, interval, problem, trace, stheat::JumpMode::Flipped);
    benchmark::DoNotOptimize(system.rhs.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(slab.element_count()));
}
BENCHMARK(BM_Assemble)->Arg(1000)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_Solve(benchmark::State& state) {
  const auto slab = stheat::extrude(stheat::make_rectangle_mesh(20.0, 1.0, state.range(0), 1), 1);
  const auto trace = stheat::make_initial_trace(slab, [](const stheat::SpatialPoint&) { return 0.0; });
  const auto system = stheat::assemble_slab(slab, stheat::SlabInterval::from_step(0.0, 0.1), rod_problem(), trace,
                                            stheat::JumpMode::Flipped);
  for (auto _ : state) {
    auto r = stheat::solve_system(system);
    benchmark::DoNotOptimize(r.x.data());
  }
}
BENCHMARK(BM_Solve)->Arg(1000)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_ImplicitEulerStep(benchmark::State& state) {
  const auto op = stheat::assemble_spatial(stheat::make_rectangle_mesh(20.0, 1.0, state.range(0), 1), {},
                                           {stheat::BoundaryCondition::neumann_flux(stheat::BoundaryTag::Left, 1.0)});
  const stheat::ThetaStepper stepper(op, 0.1, 1.0);
  Eigen::VectorXd T = Eigen::VectorXd::Zero(op.mass.rows());
  for (auto _ : state) {
    T = stepper.step(T);
    benchmark::DoNotOptimize(T.data());
  }
}
BENCHMARK(BM_ImplicitEulerStep)->Arg(2000)->Unit(benchmark::kMicrosecond);

void BM_Flip(benchmark::State& state) {
  auto slab = stheat::extrude(stheat::make_rectangle_mesh(20.0, 1.0, state.range(0), 1), 4);
  for (auto _ : state) {
    slab = stheat::flip_time(std::move(slab));
    benchmark::DoNotOptimize(slab.nodes.data());
  }
}
BENCHMARK(BM_Flip)->Arg(2000);

void BM_Erfc(benchmark::State& state) {
  double x = 0.0;
  double sum = 0.0;
  for (auto _ : state) {
    sum += stheat::erfc(x);
    x = x > 6.0 ? 0.0 : x + 0.01;
  }
  benchmark::DoNotOptimize(sum);
}
BENCHMARK(BM_Erfc);

void BM_RodExact(benchmark::State& state) {
  double x = 0.0;
  double sum = 0.0;
  for (auto _ : state) {
    sum += stheat::rod_exact(x, 1.0);
    x = x > 20.0 ? 0.0 : x + 0.02;
  }
  benchmark::DoNotOptimize(sum);
}
BENCHMARK(BM_RodExact);

}  // namespace

BENCHMARK_MAIN();
