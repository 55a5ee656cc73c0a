#include <benchmark/benchmark.h>

#include <random>

#include "minrate/engine.hpp"
#include "minrate/generator.hpp"
#include "minrate/oracle.hpp"
#include "minrate/transfer.hpp"
#include "minrate/yds.hpp"

using namespace minrate;

namespace {

Instance worked_example() {
  Instance in;
  in.profile = SpeedProfile({Rational(1), Rational(2)}, {Rational(1), Rational(4)});
  in.jobs = {{1, Rational(0), Rational(4), Rational(3)}, {2, Rational(1), Rational(2), Rational(2)}};
  return in;
}

std::vector<Instance> corpus(std::size_t jobs, bool mixed, std::size_t count = 32) {
  std::mt19937_64 rng(jobs * 977 + mixed);
  GeneratorBounds b;
  b.max_jobs = jobs;
  b.mixed_windows = mixed;
  std::vector<Instance> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(generate_instance(rng, b));
  return out;
}

void BM_SolveWorkedExample(benchmark::State& state) {
  const auto in = worked_example();
  for (auto _ : state) benchmark::DoNotOptimize(solve(in).rate);
}
BENCHMARK(BM_SolveWorkedExample);

void BM_YdsGlobal(benchmark::State& state) {
  const auto instances = corpus(static_cast<std::size_t>(state.range(0)), false);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(yds_global(instances[i++ % instances.size()]).intervals.size());
}
BENCHMARK(BM_YdsGlobal)->Arg(4)->Arg(8)->Arg(16);

void BM_EngineMixed(benchmark::State& state) {
  const auto instances = corpus(static_cast<std::size_t>(state.range(0)), true);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(solve(instances[i++ % instances.size()]).rate);
}
BENCHMARK(BM_EngineMixed)->Arg(3)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_RefinedLp(benchmark::State& state) {
  const auto instances = corpus(static_cast<std::size_t>(state.range(0)), true);
  std::size_t i = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(refine_until_stable(instances[i++ % instances.size()], Rational(1)).rate);
}
BENCHMARK(BM_RefinedLp)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_BuildGraphInitial(benchmark::State& state) {
  const auto instances = corpus(static_cast<std::size_t>(state.range(0)), true);
  std::vector<WorkState> states;
  for (const auto& in : instances) states.push_back(initial_state(in));
  std::size_t i = 0;
  for (auto _ : state) {
    const auto k = i++ % instances.size();
    TransferContext ctx{instances[k], states[k], {}, SlrMode::Pointwise};
    benchmark::DoNotOptimize(build_graph(ctx).edges.size());
  }
}
BENCHMARK(BM_BuildGraphInitial)->Arg(3)->Arg(5);

}  // namespace
BENCHMARK_MAIN();
