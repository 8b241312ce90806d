#include "cpnet/rank.hpp"

#include <algorithm>
#include <stdexcept>

namespace cpnet {

std::vector<std::size_t> ancestors(const CPNet& net, std::size_t var)
{
    const std::size_t n = net.size();
    // a starts as column `var` of A; each step a <- A a moves one level up.
    // Boolean arithmetic keeps the same support as the integer product.
    std::vector<char> a(n, 0);
    std::vector<char> anc(n, 0);
    for (std::size_t j = 0; j < n; ++j) a[j] = net.has_edge(j, var);
    for (std::size_t step = 0; step <= n && std::find(a.begin(), a.end(), 1) != a.end(); ++step) {
        std::vector<char> next(n, 0);
        for (std::size_t k = 0; k < n; ++k) {
            if (!a[k]) continue;
            anc[k] = 1;
            for (std::size_t p : net.parents(k)) next[p] = 1;
        }
        a = std::move(next);
    }
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < n; ++j) {
        if (anc[j]) out.push_back(j);
    }
    return out;
}

BigInt descendent_paths(const CPNet& net, std::size_t var)
{
    const std::size_t n = net.size();
    // a starts as row `var` of A; after k products a[j] counts paths of
    // length k+1 from var to j.
    std::vector<BigInt> a(n, 0);
    for (std::size_t j = 0; j < n; ++j) a[j] = net.has_edge(var, j) ? 1 : 0;
    BigInt total = 0;
    for (std::size_t step = 0; step <= n; ++step) {
        BigInt sum = 0;
        for (const auto& x : a) sum += x;
        if (sgn(sum) == 0) break;
        total += sum;
        std::vector<BigInt> next(n, 0);
        for (std::size_t k = 0; k < n; ++k) {
            if (sgn(a[k]) == 0) continue;
            for (std::size_t c : net.children(k)) next[c] += a[k];
        }
        a = std::move(next);
    }
    return total;
}

Rational preference_position(const Positions& row, int value)
{
    if (value < 1 || static_cast<std::size_t>(value) > row.size()) throw std::invalid_argument("value out of domain");
    const int m = *std::max_element(row.begin(), row.end());
    return Rational(m - row[value - 1] + 1, m);
}

Rational preference_position(const CPNet& net, std::size_t var, int value, std::span<const int> parent_values)
{
    return preference_position(net.row(var, net.row_index(var, parent_values)), value);
}

namespace {

Rational ancestral_factor(const CPNet& net, const std::vector<std::size_t>& anc)
{
    BigInt denominator = 1;
    for (std::size_t y : anc) denominator *= net.domain_size(y);
    return Rational(BigInt(1), denominator);
}

Rational bound_from(const CPNet& net, const std::vector<Rational>& weight, std::size_t var)
{
    Rational l = weight[var] / Rational(net.domain_size(var));
    for (std::size_t y : net.children(var)) {
        const long ny = net.domain_size(y);
        l -= weight[y] * Rational(ny - 1, ny);
    }
    return l;
}

std::vector<Rational> weights(const CPNet& net)
{
    std::vector<Rational> w;
    w.reserve(net.size());
    for (std::size_t x = 0; x < net.size(); ++x) {
        w.push_back(ancestral_factor(net, ancestors(net, x)) * Rational(BigInt(descendent_paths(net, x) + 1)));
    }
    return w;
}

void check_pair(const CPNet& net, const Outcome& o1, const Outcome& o2)
{
    net.check_outcome(o1);
    net.check_outcome(o2);
}

} // namespace

Rational rank(const CPNet& net, const Outcome& o)
{
    net.check_outcome(o);
    Rational r;
    for (std::size_t x = 0; x < net.size(); ++x) {
        const Rational af = ancestral_factor(net, ancestors(net, x));
        const Rational paths(BigInt(descendent_paths(net, x) + 1));
        r += af * paths * preference_position(net.row_for(x, o), o[x]);
    }
    return r;
}

Rational least_rank_improvement(const CPNet& net, std::size_t var)
{
    return bound_from(net, weights(net), var);
}

Rational least_rank_difference(const CPNet& net, const Outcome& o1, const Outcome& o2)
{
    check_pair(net, o1, o2);
    const auto w = weights(net);
    Rational sum;
    for (std::size_t x = 0; x < net.size(); ++x) {
        if (o1[x] != o2[x]) sum += bound_from(net, w, x);
    }
    return sum;
}

Rational min_rank_difference(const CPNet& net, const Outcome& o1, const Outcome& o2)
{
    check_pair(net, o1, o2);
    if (o1 == o2) throw EqualOutcomes("M_D is undefined for identical outcomes");
    const auto w = weights(net);
    std::optional<Rational> best;
    for (std::size_t x = 0; x < net.size(); ++x) {
        if (o1[x] == o2[x]) continue;
        Rational l = bound_from(net, w, x);
        if (!best || l < *best) best = std::move(l);
    }
    return *best;
}

// ---------------------------------------------------------------------------
// RankModel

RankModel::RankModel(CPNet net) : net_(std::move(net)), stats_(net_.size())
{
    const std::size_t n = net_.size();
    // Ancestor sets in topological order: Anc(X) = union over parents P of Anc(P) + {P}.
    std::vector<std::vector<char>> anc(n, std::vector<char>(n, 0));
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t p : net_.parents(x)) {
            anc[x][p] = 1;
            for (std::size_t y = 0; y < n; ++y) anc[x][y] |= anc[p][y];
        }
    }
    for (std::size_t x = n; x-- > 0;) {
        BigInt d = 0;
        for (std::size_t c : net_.children(x)) d += stats_[c].descendent_paths + 1;
        stats_[x].descendent_paths = d;
    }
    std::vector<Rational> w(n);
    for (std::size_t x = 0; x < n; ++x) {
        auto& s = stats_[x];
        for (std::size_t y = 0; y < n; ++y) {
            if (anc[x][y]) s.ancestors.push_back(y);
        }
        s.ancestral_factor = ancestral_factor(net_, s.ancestors);
        s.weight = s.ancestral_factor * Rational(BigInt(s.descendent_paths + 1));
        w[x] = s.weight;
    }
    for (std::size_t x = 0; x < n; ++x) stats_[x].least_improvement = bound_from(net_, w, x);
}

Rational RankModel::term(std::size_t var, const Outcome& o) const
{
    return stats_[var].weight * preference_position(net_.row_for(var, o), o[var]);
}

Rational RankModel::rank(const Outcome& o) const
{
    net_.check_outcome(o);
    Rational r;
    for (std::size_t x = 0; x < net_.size(); ++x) r += term(x, o);
    return r;
}

Rational RankModel::least_rank_difference(const Outcome& o1, const Outcome& o2) const
{
    check_pair(net_, o1, o2);
    Rational sum;
    for (std::size_t x = 0; x < net_.size(); ++x) {
        if (o1[x] != o2[x]) sum += stats_[x].least_improvement;
    }
    return sum;
}

Rational RankModel::min_rank_difference(const Outcome& o1, const Outcome& o2) const
{
    check_pair(net_, o1, o2);
    if (o1 == o2) throw EqualOutcomes("M_D is undefined for identical outcomes");
    const Rational* best = nullptr;
    for (std::size_t x = 0; x < net_.size(); ++x) {
        if (o1[x] != o2[x] && (!best || stats_[x].least_improvement < *best)) best = &stats_[x].least_improvement;
    }
    return *best;
}

} // namespace cpnet
