#include <benchmark/benchmark.h>

#include "cpnet/dominance.hpp"
#include "cpnet/genbench.hpp"

namespace {

// Ten queries on one binary net per measure set; range(0) = n, range(1) = measure bits.
void BM_Dominance(benchmark::State& state)
{
    cpnet::GenSpec spec;
    spec.n = static_cast<std::size_t>(state.range(0));
    spec.d_u = 2;
    spec.seed = 11;
    const cpnet::DominanceSolver solver(cpnet::generate_net(spec));
    const auto queries = cpnet::generate_queries(solver.net(), 10, 3);
    cpnet::PruningConfig config;
    for (const auto& m : cpnet::MeasureSet::all()) {
        if (m.bits() == static_cast<unsigned>(state.range(1))) config.measures = m;
    }
    std::size_t traversed = 0;
    for (auto _ : state) {
        for (const auto& [o, o_prime] : queries) traversed += solver.dominates(o, o_prime, config).outcomes_traversed;
    }
    state.counters["ot/query"] = benchmark::Counter(static_cast<double>(traversed) / 10.0, benchmark::Counter::kAvgIterations);
    state.SetLabel(config.measures.label());
}
BENCHMARK(BM_Dominance)->ArgsProduct({{6, 10}, {1, 2, 4, 5, 7}})->Unit(benchmark::kMicrosecond);

} // namespace
