#include "cpnet/ordering.hpp"

#include <algorithm>

namespace cpnet {

std::vector<Outcome> Ordering::sequence() const
{
    std::vector<Outcome> out;
    for (const auto& g : groups) {
        for (const auto& r : g) out.push_back(r.outcome);
    }
    return out;
}

std::vector<std::vector<Outcome>> Ordering::outcome_groups() const
{
    std::vector<std::vector<Outcome>> out;
    for (const auto& g : groups) {
        auto& dst = out.emplace_back();
        for (const auto& r : g) dst.push_back(r.outcome);
    }
    return out;
}

Ordering consistent_order(const RankModel& model, const std::optional<std::vector<Outcome>>& subset, bool strict,
                          std::size_t budget)
{
    const CPNet& net = model.net();
    std::vector<Outcome> members;
    if (subset) {
        for (const auto& o : *subset) net.check_outcome(o);
        members = *subset;
        std::sort(members.begin(), members.end());
        members.erase(std::unique(members.begin(), members.end()), members.end());
    } else {
        members = enumerate_outcomes(net, budget);
    }

    std::vector<RankedOutcome> ranked;
    ranked.reserve(members.size());
    for (auto& o : members) {
        Rational r = model.rank(o);
        ranked.push_back({std::move(o), std::move(r)});
    }
    std::sort(ranked.begin(), ranked.end(), [](const RankedOutcome& a, const RankedOutcome& b) {
        if (a.rank != b.rank) return a.rank > b.rank;
        return a.outcome < b.outcome;
    });

    Ordering ordering;
    for (auto& r : ranked) {
        const bool same_rank = !ordering.groups.empty() && ordering.groups.back().back().rank == r.rank;
        if (same_rank && strict) ordering.tie_broken = true;
        if (same_rank && !strict) ordering.groups.back().push_back(std::move(r));
        else ordering.groups.push_back({std::move(r)});
    }
    return ordering;
}

Ordering constrained_order(const RankModel& model, const ConstraintSet& constraints, bool strict, std::size_t budget)
{
    return consistent_order(model, constraints.members(model.net(), budget), strict, budget);
}

} // namespace cpnet
