#include <benchmark/benchmark.h>

#include "cpnet/genbench.hpp"
#include "cpnet/rank.hpp"

namespace {

cpnet::CPNet net_of(std::size_t n, int d_u)
{
    cpnet::GenSpec spec;
    spec.n = n;
    spec.d_u = d_u;
    spec.seed = 7;
    return cpnet::generate_net(spec);
}

// Matrix procedure from scratch on every call.
void BM_RankFree(benchmark::State& state)
{
    const auto net = net_of(static_cast<std::size_t>(state.range(0)), 5);
    std::uint64_t rng = 1;
    const auto o = cpnet::random_outcome(net, rng);
    for (auto _ : state) benchmark::DoNotOptimize(cpnet::rank(net, o));
}
BENCHMARK(BM_RankFree)->Arg(10)->Arg(25)->Arg(50)->Unit(benchmark::kMicrosecond);

// Cached weights: one pass over the variables.
void BM_RankModel(benchmark::State& state)
{
    const cpnet::RankModel model(net_of(static_cast<std::size_t>(state.range(0)), 5));
    std::uint64_t rng = 1;
    const auto o = cpnet::random_outcome(model.net(), rng);
    for (auto _ : state) benchmark::DoNotOptimize(model.rank(o));
}
BENCHMARK(BM_RankModel)->Arg(10)->Arg(25)->Arg(50)->Unit(benchmark::kMicrosecond);

void BM_RankModelBuild(benchmark::State& state)
{
    const auto net = net_of(static_cast<std::size_t>(state.range(0)), 5);
    for (auto _ : state) benchmark::DoNotOptimize(cpnet::RankModel(net));
}
BENCHMARK(BM_RankModelBuild)->Arg(10)->Arg(50)->Unit(benchmark::kMicrosecond);

} // namespace
