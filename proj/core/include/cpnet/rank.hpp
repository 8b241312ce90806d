#pragma once

// Rank function over outcomes and the bounds derived from it.
//
// For a variable X with ancestor set Anc(X) and d_X directed paths leaving X:
//   AF_X       = prod_{Y in Anc(X)} 1/|Dom Y|
//   weight_X   = AF_X * (d_X + 1)
//   P_P(x | u) = (m - k + 1) / m, where k is x's position in the row for u
//                and m the number of distinct positions in that row
//   r(o)       = sum_X weight_X * P_P(o[X] | o[Pa(X)])
// A strictly improving flip raises r by at least L(X) (see
// least_rank_improvement), which is what makes rank-based pruning sound.

#include <cstddef>
#include <span>
#include <vector>

#include "cpnet/model.hpp"
#include "cpnet/rational.hpp"

namespace cpnet {

/// Ancestors of `var` in ascending order, found by repeatedly multiplying the
/// column indicator of `var` by the adjacency matrix until it vanishes.
std::vector<std::size_t> ancestors(const CPNet& net, std::size_t var);

/// Number of directed paths starting at `var` (of any positive length),
/// counted by repeated row-vector products with the adjacency matrix.
/// Exact: path counts grow exponentially with depth.
BigInt descendent_paths(const CPNet& net, std::size_t var);

/// P_P of `value` in one CPT row.
Rational preference_position(const Positions& row, int value);
/// P_P of `value` for `var` under an explicit parent assignment.
Rational preference_position(const CPNet& net, std::size_t var, int value, std::span<const int> parent_values);

/// r(o) computed from scratch with the matrix procedures above.
Rational rank(const CPNet& net, const Outcome& o);

/// L(X): lower bound on the rank gain of any improving flip of X.
Rational least_rank_improvement(const CPNet& net, std::size_t var);

/// L_D(o1, o2) = sum of L(X) over the variables where o1 and o2 differ.
Rational least_rank_difference(const CPNet& net, const Outcome& o1, const Outcome& o2);

/// M_D(o1, o2) = min of L(X) over the differing variables; throws
/// EqualOutcomes when o1 == o2.
Rational min_rank_difference(const CPNet& net, const Outcome& o1, const Outcome& o2);

struct VariableStats {
    std::vector<std::size_t> ancestors;
    BigInt descendent_paths;
    Rational ancestral_factor;
    Rational weight;
    Rational least_improvement;
};

/// Precomputed per-variable quantities for repeated rank evaluation.
///
/// Descendant path counts come from a reverse-topological recursion
/// (d_X = sum over children Y of d_Y + 1) and ancestor sets from a forward
/// pass; both agree with the matrix procedures. Holds its own copy of the net.
class RankModel {
public:
    explicit RankModel(CPNet net);

    const CPNet& net() const { return net_; }
    const VariableStats& stats(std::size_t var) const { return stats_[var]; }

    Rational rank(const Outcome& o) const;
    /// Contribution of `var` to r(o).
    Rational term(std::size_t var, const Outcome& o) const;

    Rational least_rank_difference(const Outcome& o1, const Outcome& o2) const;
    Rational min_rank_difference(const Outcome& o1, const Outcome& o2) const;

private:
    CPNet net_;
    std::vector<VariableStats> stats_;
};

} // namespace cpnet
