#include "cpnet/dominance.hpp"

#include <algorithm>
#include <deque>
#include <queue>
#include <unordered_set>

namespace cpnet {

// ---------------------------------------------------------------------------
// MeasureSet

namespace {

constexpr std::pair<Measure, std::string_view> kMeasureNames[] = {
    {Measure::Rank, "rank"},
    {Measure::Penalty, "penalty"},
    {Measure::Suffix, "suffix"},
};

} // namespace

MeasureSet::MeasureSet(std::initializer_list<Measure> measures)
{
    for (auto m : measures) bits_ |= static_cast<unsigned>(m);
}

std::string MeasureSet::label() const
{
    std::string out;
    for (const auto& [m, name] : kMeasureNames) {
        if (!has(m)) continue;
        if (!out.empty()) out += '+';
        out += name;
    }
    return out.empty() ? "none" : out;
}

MeasureSet MeasureSet::parse(std::string_view text)
{
    MeasureSet set;
    if (text.empty() || text == "none") return set;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = text.find_first_of(",+", pos);
        const std::string_view item = text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
        bool known = false;
        for (const auto& [m, name] : kMeasureNames) {
            if (item == name) {
                set = set.with(m);
                known = true;
            }
        }
        if (!known) throw std::invalid_argument("unknown measure '" + std::string(item) + "' (expected rank, penalty, suffix)");
        if (end == std::string_view::npos) break;
        pos = end + 1;
    }
    return set;
}

std::vector<MeasureSet> MeasureSet::all()
{
    std::vector<MeasureSet> out;
    for (unsigned b = 0; b < 8; ++b) out.emplace_back(b);
    return out;
}

std::vector<MeasureSet> MeasureSet::methods()
{
    return {
        MeasureSet{Measure::Rank},
        MeasureSet{Measure::Penalty},
        MeasureSet{Measure::Suffix},
        MeasureSet{Measure::Rank, Measure::Penalty},
        MeasureSet{Measure::Rank, Measure::Suffix},
        MeasureSet{Measure::Penalty, Measure::Suffix},
        MeasureSet{Measure::Rank, Measure::Penalty, Measure::Suffix},
    };
}

std::string_view to_string(LeafStrategy s)
{
    return s == LeafStrategy::Fifo ? "fifo" : "rank-priority";
}

LeafStrategy parse_leaf_strategy(std::string_view text)
{
    if (text == "fifo") return LeafStrategy::Fifo;
    if (text == "rank-priority") return LeafStrategy::RankPriority;
    throw std::invalid_argument("unknown strategy '" + std::string(text) + "' (expected fifo|rank-priority)");
}

std::string_view to_string(ZeroReason r)
{
    switch (r) {
    case ZeroReason::EqualOutcomes: return "equal-outcomes";
    case ZeroReason::PenaltyInitial: return "penalty-initial";
    case ZeroReason::RankInitial: return "rank-initial";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------
// Flips, penalty, suffix

std::vector<Outcome> improving_flips(const CPNet& net, const Outcome& o)
{
    net.check_outcome(o);
    std::vector<Outcome> out;
    for (std::size_t x = 0; x < net.size(); ++x) {
        const auto& row = net.row_for(x, o);
        for (int v = 1; v <= net.domain_size(x); ++v) {
            if (row[v - 1] < row[o[x] - 1]) out.push_back(o.with(x, v));
        }
    }
    return out;
}

std::vector<Outcome> indifferent_flips(const CPNet& net, const Outcome& o)
{
    net.check_outcome(o);
    std::vector<Outcome> out;
    for (std::size_t x = 0; x < net.size(); ++x) {
        const auto& row = net.row_for(x, o);
        for (int v = 1; v <= net.domain_size(x); ++v) {
            if (v != o[x] && row[v - 1] == row[o[x] - 1]) out.push_back(o.with(x, v));
        }
    }
    return out;
}

PenaltyTable::PenaltyTable(const CPNet& net) : weights_(net.size())
{
    for (std::size_t x = net.size(); x-- > 0;) {
        BigInt w = 1;
        for (std::size_t y : net.children(x)) w += weights_[y] * (net.domain_size(y) - 1);
        weights_[x] = w;
    }
}

BigInt PenaltyTable::penalty(const CPNet& net, const Outcome& o) const
{
    BigInt pen = 0;
    for (std::size_t x = 0; x < net.size(); ++x) pen += weights_[x] * (net.position(x, o) - 1);
    return pen;
}

namespace {

void require_strict_for_penalty(const CPNet& net)
{
    if (net.has_ties()) throw ConfigError("penalty pruning is only defined for nets without indifference");
}

} // namespace

BigInt penalty(const CPNet& net, const Outcome& o)
{
    require_strict_for_penalty(net);
    net.check_outcome(o);
    return PenaltyTable(net).penalty(net, o);
}

BigInt eval_f(const CPNet& net, const Outcome& target, const Outcome& o_star)
{
    require_strict_for_penalty(net);
    net.check_outcome(target);
    net.check_outcome(o_star);
    const PenaltyTable table(net);
    return BigInt(table.penalty(net, o_star) - table.penalty(net, target) - hamming_distance(o_star, target));
}

std::size_t shared_suffix_start(const Outcome& leaf, const Outcome& target)
{
    std::size_t k = leaf.size();
    while (k > 0 && leaf[k - 1] == target[k - 1]) --k;
    return k;
}

bool suffix_prunes(const Outcome& leaf, const Outcome& candidate, const Outcome& target)
{
    const std::size_t k = shared_suffix_start(leaf, target);
    for (std::size_t j = k; j < leaf.size(); ++j) {
        if (candidate[j] != leaf[j]) return true;
    }
    return false;
}

// ---------------------------------------------------------------------------
// Search

DominanceSolver::DominanceSolver(CPNet net) : model_(std::move(net)), has_ties_(model_.net().has_ties())
{
    if (!has_ties_) penalties_.emplace(model_.net());
}

namespace {

struct Node {
    Outcome outcome;
    std::size_t parent;
    std::size_t depth;
    bool improved; // path from the root used at least one improving flip
    Rational rank;
};

std::vector<Outcome> trace_back(const std::vector<Node>& nodes, std::size_t index)
{
    std::vector<Outcome> path;
    for (std::size_t i = index;; i = nodes[i].parent) {
        path.push_back(nodes[i].outcome);
        if (i == 0) break;
    }
    std::reverse(path.begin(), path.end());
    return path;
}

} // namespace

SearchResult DominanceSolver::dominates(const Outcome& o, const Outcome& o_prime, const PruningConfig& config) const
{
    const CPNet& net = model_.net();
    net.check_outcome(o);
    net.check_outcome(o_prime);
    const bool indiff = config.mode == CptMode::Indifference;
    const bool use_rank = config.measures.has(Measure::Rank);
    const bool use_penalty = config.measures.has(Measure::Penalty);
    const bool use_suffix = config.measures.has(Measure::Suffix);
    if (!indiff && has_ties_) throw ConfigError("net has indifference; run the query in indifference mode");
    if (indiff && use_penalty) throw ConfigError("penalty pruning is not supported in indifference mode");

    SearchResult result;
    if (o == o_prime) {
        result.zero_reason = ZeroReason::EqualOutcomes;
        return result;
    }

    const Rational r_target = model_.rank(o);
    BigInt pen_target;
    if (use_penalty) pen_target = penalties_->penalty(net, o);

    if (use_rank) {
        const Rational r_root = model_.rank(o_prime);
        const bool initial_false = indiff ? (r_root >= r_target || r_root + model_.min_rank_difference(o_prime, o) > r_target)
                                          : (r_target - r_root < model_.least_rank_difference(o, o_prime));
        if (initial_false) {
            result.zero_reason = ZeroReason::RankInitial;
            return result;
        }
    }
    auto f_of = [&](const Outcome& x) {
        return BigInt(penalties_->penalty(net, x) - pen_target - hamming_distance(x, o));
    };
    if (use_penalty && sgn(f_of(o_prime)) < 0) {
        result.zero_reason = ZeroReason::PenaltyInitial;
        return result;
    }

    auto pruned = [&](const Outcome& leaf, const Outcome& cand, const Rational& r_cand) {
        if (use_rank) {
            if (indiff) {
                if (r_cand > r_target) return true;
                if (r_cand < r_target && r_cand + model_.min_rank_difference(cand, o) > r_target) return true;
            } else if (r_cand + model_.least_rank_difference(o, cand) > r_target) {
                return true;
            }
        }
        if (use_suffix && suffix_prunes(leaf, cand, o)) return true;
        if (use_penalty && sgn(f_of(cand)) < 0) return true;
        return false;
    };

    const bool need_rank = use_rank || config.strategy == LeafStrategy::RankPriority;
    std::vector<Node> nodes;
    nodes.push_back({o_prime, 0, 0, false, need_rank ? model_.rank(o_prime) : Rational()});
    std::unordered_set<Outcome, OutcomeHash> visited{o_prime};

    std::deque<std::size_t> fifo;
    auto by_rank = [&nodes](std::size_t a, std::size_t b) {
        if (nodes[a].rank != nodes[b].rank) return nodes[a].rank < nodes[b].rank;
        return a > b;
    };
    std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(by_rank)> ranked(by_rank);
    auto push = [&](std::size_t i) {
        if (config.strategy == LeafStrategy::Fifo) fifo.push_back(i);
        else ranked.push(i);
    };
    auto pop = [&] {
        std::size_t i;
        if (config.strategy == LeafStrategy::Fifo) {
            i = fifo.front();
            fifo.pop_front();
        } else {
            i = ranked.top();
            ranked.pop();
        }
        return i;
    };
    auto frontier_empty = [&] { return config.strategy == LeafStrategy::Fifo ? fifo.empty() : ranked.empty(); };

    push(0);
    while (!frontier_empty()) {
        const std::size_t leaf_index = pop();
        // Copy: nodes may reallocate while children are appended.
        const Outcome leaf = nodes[leaf_index].outcome;
        const std::size_t depth = nodes[leaf_index].depth;
        const bool leaf_improved = nodes[leaf_index].improved;

        auto consider = [&](Outcome cand, bool improving) -> bool {
            if (visited.count(cand)) return false;
            Rational r_cand = need_rank ? model_.rank(cand) : Rational();
            if (pruned(leaf, cand, r_cand)) return false;
            if (config.node_limit && result.outcomes_traversed >= config.node_limit) {
                throw BudgetExceeded("search tree exceeded " + std::to_string(config.node_limit) + " nodes");
            }
            visited.insert(cand);
            ++result.outcomes_traversed;
            if (config.record_tree) result.tree.push_back({cand, depth + 1});
            const bool reached = cand == o;
            nodes.push_back({std::move(cand), leaf_index, depth + 1, leaf_improved || improving, std::move(r_cand)});
            if (reached) return true;
            push(nodes.size() - 1);
            return false;
        };

        bool reached = false;
        for (auto& cand : improving_flips(net, leaf)) {
            if ((reached = consider(std::move(cand), true))) break;
        }
        if (!reached && indiff) {
            for (auto& cand : indifferent_flips(net, leaf)) {
                if ((reached = consider(std::move(cand), false))) break;
            }
        }
        if (reached) {
            // A purely indifferent route means o ~ o', which rules out o > o'
            // in a consistent net.
            result.answer = nodes.back().improved;
            if (result.answer) result.witness = trace_back(nodes, nodes.size() - 1);
            return result;
        }
    }
    return result;
}

bool DominanceSolver::indifferent(const Outcome& o, const Outcome& o_prime) const
{
    const CPNet& net = model_.net();
    net.check_outcome(o);
    net.check_outcome(o_prime);
    if (o == o_prime) return true;
    if (!has_ties_) return false;
    if (model_.rank(o) != model_.rank(o_prime)) return false;
    std::unordered_set<Outcome, OutcomeHash> visited{o_prime};
    std::deque<Outcome> queue{o_prime};
    while (!queue.empty()) {
        const Outcome leaf = std::move(queue.front());
        queue.pop_front();
        for (auto& cand : indifferent_flips(net, leaf)) {
            if (cand == o) return true;
            if (visited.insert(cand).second) queue.push_back(std::move(cand));
        }
    }
    return false;
}

SearchResult dominates(const CPNet& net, const Outcome& o, const Outcome& o_prime, const PruningConfig& config)
{
    return DominanceSolver(net).dominates(o, o_prime, config);
}

bool indifference_query(const CPNet& net, const Outcome& o, const Outcome& o_prime)
{
    return DominanceSolver(net).indifferent(o, o_prime);
}

} // namespace cpnet
