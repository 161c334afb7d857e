#include <benchmark/benchmark.h>

#include <random>

#include "pentapod/pentapod.hpp"

using namespace pentapod;

namespace {

PentapodDesign example() {
  PentapodDesign d;
  d.base = {Point3(0, 0, 0), Point3(1, 0, 0.1), Point3(0.2, 1, 0), Point3(-0.8, 0.3, 0.4), Point3(0.5, -0.6, 0.2)};
  d.platform = {0.0, 0.6, 1.1, -0.4, 0.3};
  return d;
}

PentapodDesign planar_template() {
  PentapodDesign d;
  d.base = {Point3(0, 2, 0), Point3(-1.5, 2.25, 0), Point3(-3, 1, 0), Point3(-1, 0, 0), Point3(0, 0, 0)};
  d.platform = {0, 1, 2, 3, 4};
  return d;
}

void BM_Distance(benchmark::State& state) {
  const auto a = example();
  const auto b = a.scaled(1.1);
  for (auto _ : state) benchmark::DoNotOptimize(distance(a, b));
}
BENCHMARK(BM_Distance);

void BM_EnclosingBall(benchmark::State& state) {
  const auto d = example();
  for (auto _ : state) benchmark::DoNotOptimize(min_enclosing_ball(d.base).radius);
}
BENCHMARK(BM_EnclosingBall);

void BM_ClosedForm(benchmark::State& state) {
  const auto c = static_cast<CaseId>(state.range(0));
  const auto d = example();
  const auto combos = enumerate_combinations(c);
  for (auto _ : state) {
    for (const auto& comb : combos) benchmark::DoNotOptimize(closed_form_minimizer(c, d, comb).distance);
  }
  state.SetLabel(std::string(to_string(c)));
}
BENCHMARK(BM_ClosedForm)->DenseRange(index_of(CaseId::C0), index_of(CaseId::C2))->Arg(index_of(CaseId::C4))
    ->Arg(index_of(CaseId::C5b))->Arg(index_of(CaseId::C6));

void BM_KktEvaluate(benchmark::State& state) {
  const auto c = static_cast<CaseId>(state.range(0));
  const CaseProblem problem(c, enumerate_combinations(c).front(), example(), false);
  std::vector<double> x(problem.unknown_count(), 0.25);
  for (auto _ : state) benchmark::DoNotOptimize(problem.objective(x));
  state.SetLabel(std::string(to_string(c)));
}
BENCHMARK(BM_KktEvaluate)->Arg(index_of(CaseId::C3b))->Arg(index_of(CaseId::C8))->Arg(index_of(CaseId::C9));

void BM_Multistart(benchmark::State& state) {
  const auto c = static_cast<CaseId>(state.range(0));
  SolveConfig cfg;
  cfg.multistart_count = 32;
  cfg.threads = 1;
  const CaseProblem problem(c, enumerate_combinations(c).front(), example(), false);
  for (auto _ : state) benchmark::DoNotOptimize(multistart_minimize(problem, cfg).solutions.size());
  state.SetLabel(std::string(to_string(c)));
}
BENCHMARK(BM_Multistart)->Arg(index_of(CaseId::C7))->Arg(index_of(CaseId::C8))->Arg(index_of(CaseId::C9))
    ->Unit(benchmark::kMillisecond);

void BM_PlanarAbInitio(benchmark::State& state) {
  const auto c = static_cast<CaseId>(state.range(0));
  SolveConfig cfg;
  cfg.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(ab_initio(c, true, cfg).solutions.solutions.size());
  state.SetLabel(std::string(to_string(c)));
}
BENCHMARK(BM_PlanarAbInitio)->Arg(index_of(CaseId::C2))->Arg(index_of(CaseId::C3a))->Unit(benchmark::kMillisecond)
    ->Iterations(1);

void BM_ArchitectureDistance(benchmark::State& state) {
  PipelineConfig cfg;
  cfg.solve.threads = 0;
  AbInitioStore store(std::string(PENTAPOD_BENCH_DATA_DIR) + "/abinitio", cfg.solve);
  const auto d = sweep_design(planar_template(), 0.383206);
  for (auto _ : state) benchmark::DoNotOptimize(architecture_distance(d, cfg, store).distance);
}
BENCHMARK(BM_ArchitectureDistance)->Unit(benchmark::kSecond)->Iterations(1);

}  // namespace

BENCHMARK_MAIN();
