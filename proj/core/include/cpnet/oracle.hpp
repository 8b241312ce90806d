#pragma once

// Exhaustive preference graph over Omega, for small nets only. This is the
// reference the search procedures are checked against, so it never prunes
// and refuses to run past its budget instead of approximating.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "cpnet/model.hpp"

namespace cpnet {

enum class Entailment {
    Equal,             // o == o'
    StrictlyPreferred, // o' reaches o through at least one improving edge
    Reverse,           // o reaches o' through at least one improving edge
    Indifferent,       // connected through indifferent edges only
    Incomparable,
};

std::string_view to_string(Entailment e);

class PreferenceGraph {
public:
    /// Builds the graph on all of Omega; throws BudgetExceeded if |Omega| > budget.
    static PreferenceGraph build(const CPNet& net, std::size_t budget);

    std::size_t node_count() const { return outcomes_.size(); }
    const Outcome& outcome(std::size_t index) const { return outcomes_[index]; }
    std::size_t index_of(const Outcome& o) const;

    /// Better neighbours of node `index` (edges index -> better).
    const std::vector<std::uint32_t>& improving(std::size_t index) const { return improving_[index]; }
    /// Neighbours reached by an indifferent flip (symmetric).
    const std::vector<std::uint32_t>& indifferent(std::size_t index) const { return indifferent_[index]; }

    /// Classification of the pair (o, o'), answering "is o preferred to o'".
    Entailment entails(const Outcome& o, const Outcome& o_prime) const;

    /// Nodes reachable from `from` along a path with at least one improving
    /// edge (indifferent edges allowed anywhere on the path).
    std::vector<char> strictly_above(std::size_t from) const;
    /// Nodes connected to `from` by indifferent edges only (includes `from`).
    std::vector<char> indifference_class(std::size_t from) const;

    /// True if some improving edge lies on a cycle of the mixed graph, i.e.
    /// the net entails o > o for some o.
    bool has_directed_cycle() const;

private:
    std::vector<int> domains_;
    std::vector<Outcome> outcomes_;
    std::vector<std::vector<std::uint32_t>> improving_;
    std::vector<std::vector<std::uint32_t>> indifferent_;
};

struct OrderingCheck {
    bool ok = true;
    /// When !ok: (better, worse) with better entailed over worse but placed
    /// at or after it.
    std::optional<std::pair<Outcome, Outcome>> witness;
};

/// Checks that no entailed pair is inverted or merged by an ordering given as
/// tie groups from most to least preferred. Outcomes may be any subset of
/// Omega; entailment is still judged on the full graph.
OrderingCheck verify_consistent_ordering(const PreferenceGraph& graph, const std::vector<std::vector<Outcome>>& groups);

} // namespace cpnet
