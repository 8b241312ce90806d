#pragma once

// Random CP-net and query generation plus the pruning experiment harness.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cpnet/dominance.hpp"
#include "cpnet/model.hpp"

namespace cpnet {

/// splitmix64 finalizer; used to derive independent per-cell/net/query seeds.
std::uint64_t mix_seed(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0);

struct GenSpec {
    std::size_t n = 5;
    int d_u = 2;
    std::uint64_t seed = 1;
    /// Probability of each candidate edge i -> j (i < j). Unset means
    /// min(1, 4/(n-1)), i.e. about two parents per variable on average.
    std::optional<double> edge_density;
    /// Probability that a value ties with the next one in a CPT row's order.
    double indifference_rate = 0.0;
    std::size_t max_parents = 5;

    double effective_edge_density() const;
    CptMode mode() const { return indifference_rate > 0.0 ? CptMode::Indifference : CptMode::Strict; }
};

/// Deterministic in `spec`. Every edge of the result is relevant and the net
/// passes validate() in spec.mode(); irrelevant edges are repaired by
/// re-rolling the child's CPT and dropped if that keeps failing.
CPNet generate_net(const GenSpec& spec);

/// Empty when `net` validates in `mode` and every edge is relevant; otherwise
/// one message per problem.
std::vector<std::string> audit(const CPNet& net, CptMode mode);

/// Uniform random outcome.
Outcome random_outcome(const CPNet& net, std::uint64_t& state);
/// `count` independent uniform (o, o') pairs; o == o' may occur.
std::vector<std::pair<Outcome, Outcome>> generate_queries(const CPNet& net, std::size_t count, std::uint64_t seed);

struct GridCell {
    std::size_t n;
    int d_u;
};

struct ExperimentConfig {
    std::vector<GridCell> grid;
    std::size_t nets_per_cell = 100;
    std::size_t queries_per_net = 10;
    std::vector<MeasureSet> methods = MeasureSet::methods();
    std::uint64_t seed = 1;
    LeafStrategy strategy = LeafStrategy::Fifo;
    std::optional<double> edge_density;
    /// Worker threads; 0 picks the hardware concurrency.
    std::size_t threads = 0;
    /// Run every query once untimed per (net, method) before the timed pass.
    bool warm_up = true;
    /// Per-search node limit (0 = unlimited).
    std::size_t node_limit = 0;
};

struct QueryRecord {
    std::size_t n;
    int d_u;
    std::size_t cpnet_id;
    std::size_t query_id;
    MeasureSet method;
    bool answer;
    std::size_t outcomes_traversed;
    std::int64_t time_ns;
    std::optional<ZeroReason> zero_reason;
};

struct MethodStats {
    std::size_t n;
    int d_u;
    MeasureSet method;
    std::size_t count;
    double mean_ot;
    double se_ot;
    double mean_time_ns;
    double se_time_ns;
    /// Share of queries settled by an initial condition (no tree node created).
    double z_p;
    double prop_false;
};

struct ExperimentResult {
    std::vector<QueryRecord> records;
    std::vector<MethodStats> stats;
};

/// Runs every method on every query. Throws MethodDisagreement if two
/// methods answer a query differently. Records are ordered by cell, net,
/// query, method regardless of thread count.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Per (n, d_U, method) summary, cells in first-seen order, methods in `methods` order.
std::vector<MethodStats> aggregate(const std::vector<QueryRecord>& records, const std::vector<MeasureSet>& methods);

/// Z_P over all records of one method, pooled across cells.
double pooled_z_p(const std::vector<QueryRecord>& records, MeasureSet method);

void write_raw_csv(std::ostream& out, const std::vector<QueryRecord>& records);
void write_aggregate_csv(std::ostream& out, const std::vector<MethodStats>& stats);
/// Seeds and settings of a run as JSON.
std::string manifest_json(const ExperimentConfig& config);

} // namespace cpnet
