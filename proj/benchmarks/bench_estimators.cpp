#include <benchmark/benchmark.h>

#include "cpsbl/cpsbl.hpp"

namespace {

using namespace cpsbl;

LinearModel random_model(Index rows, Index cols, std::uint64_t seed) {
  auto rng = make_stream(seed, 0, StreamTag::kChannel);
  LinearModel model;
  model.sensing_matrix.resize(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) model.sensing_matrix(i, j) = complex_normal(rng);
  model.observation.resize(rows);
  for (Index i = 0; i < rows; ++i) model.observation(i) = complex_normal(rng);
  model.noise_variance = 1.0;
  return model;
}

void BM_Posterior(benchmark::State& state) {
  const Index d = state.range(0);
  const auto model = random_model(d / 2, d, 1);
  const RVector precision = RVector::Ones(d);
  for (auto _ : state) {
    auto post = gaussian_posterior(model.sensing_matrix, model.observation, 1.0, precision);
    benchmark::DoNotOptimize(post.mean.data());
  }
  state.SetComplexityN(d);
}
BENCHMARK(BM_Posterior)->RangeMultiplier(2)->Range(16, 256)->Complexity(benchmark::oNCubed);

void BM_CpEvaluate(benchmark::State& state) {
  const Index d = state.range(0);
  const auto model = random_model(d / 2, d, 2);
  auto rng = make_stream(2, 0, StreamTag::kCrossPredictive);
  const auto split = split_model(model, random_half_split(model.num_measurements(), rng));
  const RVector r = RVector::Zero(d);
  for (auto _ : state) {
    auto ev = cp_evaluate(r, split, 1.0);
    benchmark::DoNotOptimize(ev.objective);
  }
}
BENCHMARK(BM_CpEvaluate)->RangeMultiplier(2)->Range(16, 256);

void BM_Esbl(benchmark::State& state) {
  const auto model = random_model(64, state.range(0), 3);
  EsblOptions opts;
  opts.tol = 0.0;
  for (auto _ : state) benchmark::DoNotOptimize(run_esbl(model, opts).estimate.data());
}
BENCHMARK(BM_Esbl)->Arg(52)->Arg(104)->Unit(benchmark::kMillisecond);

void BM_Cpsbl(benchmark::State& state) {
  const auto model = random_model(64, state.range(0), 4);
  for (auto _ : state) {
    auto rng = make_stream(4, 0, StreamTag::kCrossPredictive);
    benchmark::DoNotOptimize(run_cpsbl(model, CpsblOptions{}, rng).estimate.data());
  }
}
BENCHMARK(BM_Cpsbl)->Arg(52)->Arg(104)->Unit(benchmark::kMillisecond);

void BM_DeskTrial(benchmark::State& state) {
  const auto ctx = make_trial_context(desk_preset());
  std::uint64_t trial = 0;
  for (auto _ : state) benchmark::DoNotOptimize(run_trial(ctx, trial++).channel_energy);
}
BENCHMARK(BM_DeskTrial)->Unit(benchmark::kMillisecond);

void BM_PolarDictionary(benchmark::State& state) {
  const auto config = desk_preset();
  for (auto _ : state) {
    auto dict = build_polar_dictionary(config.geometry(), config.grid_config());
    benchmark::DoNotOptimize(dict.matrix.data());
  }
}
BENCHMARK(BM_PolarDictionary);

}  // namespace

BENCHMARK_MAIN();
