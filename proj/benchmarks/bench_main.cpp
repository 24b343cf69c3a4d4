#include <benchmark/benchmark.h>

#include <cstdint>

#include "jtmc/ggm.hpp"
#include "jtmc/perturbation.hpp"
#include "jtmc/random.hpp"
#include "jtmc/samplers.hpp"
#include "jtmc/tree_gen.hpp"

namespace {

using namespace jtmc;

Eigen::MatrixXd ar_data(std::size_t p, std::size_t n) {
  SplitMix64 rng(p);
  const Graph g = random_ar_graph(p, 5, rng);
  return simulate_intraclass(g, {1.0, 0.9}, n, rng);
}

// A state taken from a short parallel run, so cliques have realistic sizes.
JunctionTree warm_state(const GaussianEvidence& ev, std::size_t steps) {
  JunctionTree out;
  ChainConfig cfg;
  cfg.iterations = steps;
  cfg.seed = 1;
  run_chain(cfg, ev, std::nullopt, [&](const StepRecord& r, const ChainState& s) {
    if (r.step + 1 == steps) out = s.tree();
    return true;
  });
  return out;
}

void BM_PartitionSets(benchmark::State& state) {
  const auto p = static_cast<std::size_t>(state.range(0));
  const GaussianEvidence ev(ar_data(p, 100));
  const JunctionTree t = warm_state(ev, 20000);
  Vertex v = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(partition_sets(t, v));
    v = static_cast<Vertex>((v + 1) % p);
  }
}
BENCHMARK(BM_PartitionSets)->Arg(50)->Arg(150);

void BM_LogRho(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  const std::size_t p = 50;
  const GaussianEvidence ev(ar_data(p, 100));
  std::uint64_t offset = 0;
  for (auto _ : state) {
    VertexSet c(p);
    for (std::size_t i = 0; i < k; ++i) c.insert(static_cast<Vertex>((offset + i) % p));
    benchmark::DoNotOptimize(ev.log_rho_uncached(c));
    ++offset;
  }
}
BENCHMARK(BM_LogRho)->Arg(2)->Arg(6)->Arg(12);

template <SamplerKind Kind>
void BM_Step(benchmark::State& state) {
  const auto p = static_cast<std::size_t>(state.range(0));
  const GaussianEvidence ev(ar_data(p, 100), 5.0);
  const auto law = CliqueSeparatorLaw::uniform();
  ChainState chain(warm_state(ev, 20000), ev, law);
  std::uint64_t step = 0;
  for (auto _ : state) {
    const StepKey key{7, step++};
    benchmark::DoNotOptimize(Kind == SamplerKind::Parallel ? parallel_step(chain, ev, law, key)
                                                           : single_move_step(chain, ev, law, key));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(step));
}
BENCHMARK(BM_Step<SamplerKind::SingleMove>)->Arg(50)->Arg(150);
BENCHMARK(BM_Step<SamplerKind::Parallel>)->Arg(50)->Arg(150);

void BM_SkeletonResample(benchmark::State& state) {
  const auto p = static_cast<std::size_t>(state.range(0));
  const GaussianEvidence ev(ar_data(p, 100));
  ChainState chain(warm_state(ev, 20000), ev, CliqueSeparatorLaw::uniform());
  std::uint64_t step = 0;
  for (auto _ : state) resample_skeleton_step(chain, {3, step++});
}
BENCHMARK(BM_SkeletonResample)->Arg(50)->Arg(150);

}  // namespace

BENCHMARK_MAIN();
