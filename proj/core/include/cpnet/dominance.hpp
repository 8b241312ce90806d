#pragma once

// Dominance queries "is o preferred to o'?" answered by growing a search tree
// of improving flips rooted at o'. Pruning measures only discard branches
// that provably cannot reach o, so every combination stays complete.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cpnet/model.hpp"
#include "cpnet/rank.hpp"

namespace cpnet {

enum class Measure : unsigned { Rank = 1, Penalty = 2, Suffix = 4 };

/// A subset of {rank, penalty, suffix}.
class MeasureSet {
public:
    constexpr MeasureSet() = default;
    constexpr explicit MeasureSet(unsigned bits) : bits_(bits & 7u) {}
    MeasureSet(std::initializer_list<Measure> measures);

    bool has(Measure m) const { return (bits_ & static_cast<unsigned>(m)) != 0; }
    MeasureSet with(Measure m) const { return MeasureSet(bits_ | static_cast<unsigned>(m)); }
    bool empty() const { return bits_ == 0; }
    unsigned bits() const { return bits_; }
    bool is_subset_of(MeasureSet other) const { return (bits_ & ~other.bits_) == 0; }

    /// "rank", "penalty+suffix", ...; "none" for the empty set.
    std::string label() const;
    /// Accepts labels as produced by label() and comma-separated lists.
    static MeasureSet parse(std::string_view text);

    /// All eight subsets, empty set first.
    static std::vector<MeasureSet> all();
    /// The seven non-empty subsets compared in experiments.
    static std::vector<MeasureSet> methods();

    friend bool operator==(MeasureSet, MeasureSet) = default;

private:
    unsigned bits_ = 0;
};

enum class LeafStrategy { Fifo, RankPriority };

std::string_view to_string(LeafStrategy s);
LeafStrategy parse_leaf_strategy(std::string_view text);

struct PruningConfig {
    MeasureSet measures;
    LeafStrategy strategy = LeafStrategy::Fifo;
    CptMode mode = CptMode::Strict;
    /// Maximum number of tree nodes; 0 means unlimited. Exceeding it throws BudgetExceeded.
    std::size_t node_limit = 0;
    /// Keep every added node in SearchResult::tree.
    bool record_tree = false;
};

enum class ZeroReason { EqualOutcomes, PenaltyInitial, RankInitial };

std::string_view to_string(ZeroReason r);

struct TreeNode {
    Outcome outcome;
    std::size_t depth; // root o' has depth 0 and is not recorded
};

struct SearchResult {
    bool answer = false;
    /// Nodes added to the tree, root excluded.
    std::size_t outcomes_traversed = 0;
    /// o' ... o along tree edges when answer is true.
    std::vector<Outcome> witness;
    /// Set when the query was settled before the tree got its first node.
    std::optional<ZeroReason> zero_reason;
    /// Added nodes in insertion order, if requested.
    std::vector<TreeNode> tree;
};

/// Importance weights w_X = 1 + sum over children Y of w_Y (|Dom Y| - 1).
/// Each improving flip then lowers pen by at least 1 (see penalty()).
class PenaltyTable {
public:
    explicit PenaltyTable(const CPNet& net);

    const BigInt& weight(std::size_t var) const { return weights_[var]; }
    /// pen(o) = sum_X w_X * (position of o[X] in its row - 1).
    BigInt penalty(const CPNet& net, const Outcome& o) const;

private:
    std::vector<BigInt> weights_;
};

/// All outcomes one improving flip away from o (variable-major, value ascending).
std::vector<Outcome> improving_flips(const CPNet& net, const Outcome& o);
/// All outcomes one indifferent flip away from o.
std::vector<Outcome> indifferent_flips(const CPNet& net, const Outcome& o);

/// pen(o); throws ConfigError if the net has ties.
BigInt penalty(const CPNet& net, const Outcome& o);
/// f(o*) = pen(o*) - pen(target) - HD(o*, target); throws ConfigError if the net has ties.
BigInt eval_f(const CPNet& net, const Outcome& target, const Outcome& o_star);

/// Smallest k such that leaf and target agree on every variable >= k
/// (net size when they differ on the last variable).
std::size_t shared_suffix_start(const Outcome& leaf, const Outcome& target);
/// True if candidate (one flip from leaf) changes a variable inside the
/// suffix that leaf already shares with target.
bool suffix_prunes(const Outcome& leaf, const Outcome& candidate, const Outcome& target);

/// Reusable per-net query engine.
class DominanceSolver {
public:
    explicit DominanceSolver(CPNet net);

    const CPNet& net() const { return model_.net(); }
    const RankModel& model() const { return model_; }
    bool has_ties() const { return has_ties_; }

    /// Is o preferred to o_prime? Throws ConfigError for a strict-mode query
    /// on a net with ties, or penalty pruning in indifference mode.
    SearchResult dominates(const Outcome& o, const Outcome& o_prime, const PruningConfig& config) const;

    /// Are o and o_prime connected by indifferent flips only?
    bool indifferent(const Outcome& o, const Outcome& o_prime) const;

private:
    RankModel model_;
    std::optional<PenaltyTable> penalties_;
    bool has_ties_;
};

SearchResult dominates(const CPNet& net, const Outcome& o, const Outcome& o_prime, const PruningConfig& config);
bool indifference_query(const CPNet& net, const Outcome& o, const Outcome& o_prime);

} // namespace cpnet
