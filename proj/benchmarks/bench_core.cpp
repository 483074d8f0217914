#include <benchmark/benchmark.h>

#include "wmstat/agnostic.hpp"
#include "wmstat/product_rates.hpp"
#include "wmstat/rng.hpp"
#include "wmstat/robust.hpp"
#include "wmstat/schemes.hpp"
#include "wmstat/ump.hpp"

using namespace wmstat;

static void BM_UmpBuild(benchmark::State& state) {
  RngStream rng(1, 0);
  const auto rho = random_distribution(static_cast<std::size_t>(state.range(0)), rng, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(type2_exact(ump_build(rho, 0.05)));
}
BENCHMARK(BM_UmpBuild)->Arg(8)->Arg(64)->Arg(512);

static void BM_RobustSimplex(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  const auto g = hamming_graph(k, 3, 1);
  RngStream rng(2, 0);
  const auto rho = random_distribution(g.size(), rng, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(robust_solve(rho, 0.1, g).beta);
}
BENCHMARK(BM_RobustSimplex)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

static void BM_AgnosticCoupling(benchmark::State& state) {
  const auto n = state.range(0);
  const EtaStar es(n, 2);
  RngStream rng(3, 0);
  const auto rho = random_distribution(static_cast<std::size_t>(n), rng, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(build_agnostic_coupling(rho, es).loss);
}
BENCHMARK(BM_AgnosticCoupling)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

static void BM_Type2ProductExact(benchmark::State& state) {
  const DiscreteDist rho({0.5, 0.3, 0.2});
  for (auto _ : state) benchmark::DoNotOptimize(type2_product_exact(rho, state.range(0), 0.01));
}
BENCHMARK(BM_Type2ProductExact)->Arg(10)->Arg(40)->Arg(160);

static void BM_ItsDetect(benchmark::State& state) {
  const auto lm = ToyLM::uniform(8);
  const SchemeConfig cfg{InverseTransformParams{99, 10, true}, 0.01, state.range(0)};
  const auto text = its_generate(lm, WatermarkKey{7}, cfg).tokens;
  for (auto _ : state) benchmark::DoNotOptimize(its_detect(WatermarkKey{7}, text, cfg, 8).p_value);
}
BENCHMARK(BM_ItsDetect)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
