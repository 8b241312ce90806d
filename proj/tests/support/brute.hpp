#pragma once

// Independent reference computations for tests. Everything here works from
// the raw fields of a net (domains, adjacency, CPT rows) with its own
// indexing, fixed-width rationals and explicit path enumeration, so that it
// shares no logic with the library beyond CPNet's storage accessors.

#include <cstdint>
#include <deque>
#include <functional>
#include <set>
#include <vector>

#include <boost/rational.hpp>

#include "cpnet/model.hpp"
#include "cpnet/rational.hpp"

namespace brute {

using Q = boost::rational<std::int64_t>;
using Values = std::vector<int>;

inline std::vector<std::size_t> parents_of(const cpnet::CPNet& net, std::size_t x)
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < net.size(); ++i) {
        if (net.adjacency()[i][x]) out.push_back(i);
    }
    return out;
}

inline std::vector<std::size_t> children_of(const cpnet::CPNet& net, std::size_t x)
{
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < net.size(); ++j) {
        if (net.adjacency()[x][j]) out.push_back(j);
    }
    return out;
}

// Row of CPT(x) selected by o's parent values: mixed radix, first parent most significant.
inline const cpnet::Positions& row_of(const cpnet::CPNet& net, std::size_t x, const Values& o)
{
    std::size_t index = 0;
    for (std::size_t p : parents_of(net, x)) index = index * static_cast<std::size_t>(net.domain_size(p)) + static_cast<std::size_t>(o[p] - 1);
    return net.table(x)[index];
}

/// Number of directed paths leaving x, by depth-first enumeration.
inline std::int64_t count_paths(const cpnet::CPNet& net, std::size_t x)
{
    std::int64_t total = 0;
    for (std::size_t c : children_of(net, x)) total += 1 + count_paths(net, c);
    return total;
}

inline std::set<std::size_t> ancestors(const cpnet::CPNet& net, std::size_t x)
{
    std::set<std::size_t> out;
    std::function<void(std::size_t)> up = [&](std::size_t v) {
        for (std::size_t p : parents_of(net, v)) {
            if (out.insert(p).second) up(p);
        }
    };
    up(x);
    return out;
}

inline Q weight(const cpnet::CPNet& net, std::size_t x)
{
    std::int64_t denom = 1;
    for (std::size_t y : brute::ancestors(net, x)) denom *= net.domain_size(y);
    return Q(count_paths(net, x) + 1, denom);
}

inline Q rank(const cpnet::CPNet& net, const Values& o)
{
    Q r = 0;
    for (std::size_t x = 0; x < net.size(); ++x) {
        const auto& row = row_of(net, x, o);
        int m = 0;
        for (int p : row) m = std::max(m, p);
        r += weight(net, x) * Q(m - row[o[x] - 1] + 1, m);
    }
    return r;
}

inline Q least_improvement(const cpnet::CPNet& net, std::size_t x)
{
    Q l = weight(net, x) / Q(net.domain_size(x));
    for (std::size_t y : children_of(net, x)) l -= weight(net, y) * Q(net.domain_size(y) - 1, net.domain_size(y));
    return l;
}

inline Q to_q(const cpnet::Rational& r)
{
    return Q(r.numerator().get_si(), r.denominator().get_si());
}

/// Outcomes one flip away from o, split by whether the flip improves or ties.
inline void flips(const cpnet::CPNet& net, const Values& o, std::vector<Values>& better, std::vector<Values>& tied)
{
    better.clear();
    tied.clear();
    for (std::size_t x = 0; x < net.size(); ++x) {
        const auto& row = row_of(net, x, o);
        for (int v = 1; v <= net.domain_size(x); ++v) {
            if (v == o[x]) continue;
            Values next = o;
            next[x] = v;
            if (row[v - 1] < row[o[x] - 1]) better.push_back(next);
            else if (row[v - 1] == row[o[x] - 1]) tied.push_back(next);
        }
    }
}

enum class Verdict { Equal, Better, Worse, Indifferent, Incomparable };

/// Is there a flip path from `from` to `to` (with at least one improving step
/// when `need_improving`; through tied steps only when `only_ties`)?
inline bool reaches(const cpnet::CPNet& net, const Values& from, const Values& to, bool need_improving, bool only_ties)
{
    std::set<std::pair<Values, bool>> seen{{from, false}};
    std::deque<std::pair<Values, bool>> queue{{from, false}};
    std::vector<Values> better;
    std::vector<Values> tied;
    while (!queue.empty()) {
        auto [o, used] = queue.front();
        queue.pop_front();
        if (o == to && (used || !need_improving) && o != from) return true;
        flips(net, o, better, tied);
        if (!only_ties) {
            for (auto& b : better) {
                if (seen.insert({b, true}).second) queue.emplace_back(b, true);
            }
        }
        for (auto& t : tied) {
            if (seen.insert({t, used}).second) queue.emplace_back(t, used);
        }
    }
    return false;
}

/// Classification of "o versus o_prime".
inline Verdict classify(const cpnet::CPNet& net, const Values& o, const Values& o_prime)
{
    if (o == o_prime) return Verdict::Equal;
    if (reaches(net, o_prime, o, true, false)) return Verdict::Better;
    if (reaches(net, o, o_prime, true, false)) return Verdict::Worse;
    if (reaches(net, o_prime, o, false, true)) return Verdict::Indifferent;
    return Verdict::Incomparable;
}

inline Values values(const cpnet::Outcome& o)
{
    return Values(o.values().begin(), o.values().end());
}

} // namespace brute
