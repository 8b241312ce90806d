#pragma once

// Rank-induced consistent orderings. Sorting by descending rank never
// inverts an entailed pair; equal ranks are left as tie groups or broken
// lexicographically on request.

#include <cstddef>
#include <optional>
#include <vector>

#include "cpnet/model.hpp"
#include "cpnet/rank.hpp"

namespace cpnet {

struct RankedOutcome {
    Outcome outcome;
    Rational rank;
};

struct Ordering {
    /// Most preferred first. With strict ordering every group is a singleton.
    std::vector<std::vector<RankedOutcome>> groups;
    /// Set when a strict ordering had to separate equal-rank outcomes.
    bool tie_broken = false;

    /// Flattened outcomes in order.
    std::vector<Outcome> sequence() const;
    /// Outcomes grouped, ranks dropped; the form verify_consistent_ordering expects.
    std::vector<std::vector<Outcome>> outcome_groups() const;
};

/// Orders `subset` (Omega when absent, under `budget`) by descending rank.
/// Only members are ranked. Equal-rank outcomes share a group, in ascending
/// lexicographic order; with `strict` each becomes its own group.
Ordering consistent_order(const RankModel& model, const std::optional<std::vector<Outcome>>& subset, bool strict,
                          std::size_t budget);

/// consistent_order over the members of P.
Ordering constrained_order(const RankModel& model, const ConstraintSet& constraints, bool strict, std::size_t budget);

} // namespace cpnet
