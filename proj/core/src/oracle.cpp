#include "cpnet/oracle.hpp"

#include <algorithm>
#include <deque>
#include <limits>

namespace cpnet {

std::string_view to_string(Entailment e)
{
    switch (e) {
    case Entailment::Equal: return "equal";
    case Entailment::StrictlyPreferred: return "strictly-preferred";
    case Entailment::Reverse: return "reverse";
    case Entailment::Indifferent: return "indifferent";
    case Entailment::Incomparable: return "incomparable";
    }
    return "unknown";
}

PreferenceGraph PreferenceGraph::build(const CPNet& net, std::size_t budget)
{
    PreferenceGraph g;
    g.domains_.assign(net.domain_sizes().begin(), net.domain_sizes().end());
    g.outcomes_ = enumerate_outcomes(net, budget);
    const std::size_t count = g.outcomes_.size();
    g.improving_.resize(count);
    g.indifferent_.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        const Outcome& o = g.outcomes_[i];
        for (std::size_t x = 0; x < net.size(); ++x) {
            const auto& row = net.row_for(x, o);
            const int here = row[o[x] - 1];
            for (int v = 1; v <= net.domain_size(x); ++v) {
                if (v == o[x]) continue;
                const auto j = static_cast<std::uint32_t>(g.index_of(o.with(x, v)));
                if (row[v - 1] < here) g.improving_[i].push_back(j);
                else if (row[v - 1] == here) g.indifferent_[i].push_back(j);
            }
        }
    }
    return g;
}

std::size_t PreferenceGraph::index_of(const Outcome& o) const
{
    if (o.size() != domains_.size()) throw std::invalid_argument("outcome " + o.str() + " has the wrong number of variables");
    std::size_t index = 0;
    for (std::size_t x = 0; x < domains_.size(); ++x) {
        if (o[x] < 1 || o[x] > domains_[x]) throw std::invalid_argument("outcome " + o.str() + " is out of domain");
        index = index * static_cast<std::size_t>(domains_[x]) + static_cast<std::size_t>(o[x] - 1);
    }
    return index;
}

std::vector<char> PreferenceGraph::strictly_above(std::size_t from) const
{
    // States (node, used an improving edge yet).
    const std::size_t count = node_count();
    std::vector<char> seen(2 * count, 0);
    std::deque<std::size_t> queue{from * 2};
    seen[from * 2] = 1;
    while (!queue.empty()) {
        const std::size_t state = queue.front();
        queue.pop_front();
        const std::size_t node = state / 2;
        const std::size_t used = state % 2;
        for (auto next : improving_[node]) {
            const std::size_t s = std::size_t{next} * 2 + 1;
            if (!seen[s]) {
                seen[s] = 1;
                queue.push_back(s);
            }
        }
        for (auto next : indifferent_[node]) {
            const std::size_t s = std::size_t{next} * 2 + used;
            if (!seen[s]) {
                seen[s] = 1;
                queue.push_back(s);
            }
        }
    }
    std::vector<char> out(count, 0);
    for (std::size_t i = 0; i < count; ++i) out[i] = seen[2 * i + 1];
    return out;
}

std::vector<char> PreferenceGraph::indifference_class(std::size_t from) const
{
    std::vector<char> seen(node_count(), 0);
    std::vector<std::size_t> stack{from};
    seen[from] = 1;
    while (!stack.empty()) {
        const std::size_t node = stack.back();
        stack.pop_back();
        for (auto next : indifferent_[node]) {
            if (!seen[next]) {
                seen[next] = 1;
                stack.push_back(next);
            }
        }
    }
    return seen;
}

Entailment PreferenceGraph::entails(const Outcome& o, const Outcome& o_prime) const
{
    const std::size_t a = index_of(o);
    const std::size_t b = index_of(o_prime);
    if (a == b) return Entailment::Equal;
    if (strictly_above(b)[a]) return Entailment::StrictlyPreferred;
    if (strictly_above(a)[b]) return Entailment::Reverse;
    if (indifference_class(a)[b]) return Entailment::Indifferent;
    return Entailment::Incomparable;
}

namespace {

struct Condensation {
    std::vector<std::size_t> class_of;
    std::size_t class_count = 0;
    std::vector<std::vector<std::size_t>> succ; // improving edges between classes
    std::vector<std::size_t> topo;              // empty if cyclic
};

Condensation condense(const PreferenceGraph& g)
{
    Condensation c;
    const std::size_t count = g.node_count();
    constexpr std::size_t unset = std::numeric_limits<std::size_t>::max();
    c.class_of.assign(count, unset);
    for (std::size_t i = 0; i < count; ++i) {
        if (c.class_of[i] != unset) continue;
        const auto members = g.indifference_class(i);
        for (std::size_t j = 0; j < count; ++j) {
            if (members[j]) c.class_of[j] = c.class_count;
        }
        ++c.class_count;
    }
    c.succ.resize(c.class_count);
    bool self_loop = false;
    for (std::size_t i = 0; i < count; ++i) {
        for (auto j : g.improving(i)) {
            if (c.class_of[i] == c.class_of[j]) self_loop = true;
            c.succ[c.class_of[i]].push_back(c.class_of[j]);
        }
    }
    if (self_loop) return c;
    std::vector<std::size_t> indegree(c.class_count, 0);
    for (const auto& s : c.succ) {
        for (auto d : s) ++indegree[d];
    }
    std::vector<std::size_t> ready;
    for (std::size_t k = 0; k < c.class_count; ++k) {
        if (indegree[k] == 0) ready.push_back(k);
    }
    std::vector<std::size_t> order;
    while (!ready.empty()) {
        const std::size_t k = ready.back();
        ready.pop_back();
        order.push_back(k);
        for (auto d : c.succ[k]) {
            if (--indegree[d] == 0) ready.push_back(d);
        }
    }
    if (order.size() == c.class_count) c.topo = std::move(order);
    return c;
}

} // namespace

bool PreferenceGraph::has_directed_cycle() const
{
    if (node_count() == 0) return false;
    return condense(*this).topo.empty();
}

OrderingCheck verify_consistent_ordering(const PreferenceGraph& graph, const std::vector<std::vector<Outcome>>& groups)
{
    OrderingCheck result;
    constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> pos(graph.node_count(), none);
    std::vector<std::size_t> placed;
    for (std::size_t level = 0; level < groups.size(); ++level) {
        for (const auto& o : groups[level]) {
            const std::size_t i = graph.index_of(o);
            pos[i] = level;
            placed.push_back(i);
        }
    }
    if (placed.empty()) return result;

    auto find_witness = [&](std::size_t worse) {
        const auto above = graph.strictly_above(worse);
        for (std::size_t b = 0; b < graph.node_count(); ++b) {
            if (above[b] && pos[b] != none && pos[b] >= pos[worse]) {
                result.ok = false;
                result.witness = std::make_pair(graph.outcome(b), graph.outcome(worse));
                return true;
            }
        }
        return false;
    };

    const Condensation c = condense(graph);
    if (c.topo.empty()) {
        for (auto i : placed) {
            if (find_witness(i)) return result;
        }
        return result;
    }

    // highest[k]: the largest (least preferred) level of any placed node
    // strictly above class k. Classes in reverse topological order, so every
    // successor is final before its predecessors.
    constexpr long unset = -1;
    std::vector<long> max_level(c.class_count, unset);
    for (std::size_t i = 0; i < graph.node_count(); ++i) {
        if (pos[i] != none) max_level[c.class_of[i]] = std::max(max_level[c.class_of[i]], static_cast<long>(pos[i]));
    }
    std::vector<long> highest(c.class_count, unset);
    for (auto it = c.topo.rbegin(); it != c.topo.rend(); ++it) {
        long h = unset;
        for (auto d : c.succ[*it]) h = std::max({h, highest[d], max_level[d]});
        highest[*it] = h;
    }
    for (auto i : placed) {
        if (highest[c.class_of[i]] != unset && highest[c.class_of[i]] >= static_cast<long>(pos[i])) {
            find_witness(i);
            return result;
        }
    }
    return result;
}

} // namespace cpnet
