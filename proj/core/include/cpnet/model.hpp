#pragma once

// CP-net representation, validation, outcome encoding and outcome enumeration.
//
// Conventions used throughout the library:
//   * variables are 0-based indices into a net stored in topological order
//     (every edge i -> j has i < j);
//   * values are 1-based, matching the textual and CLI encodings: value k of
//     variable X is the k-th element of Dom(X);
//   * a CPT row is a "positions" tuple: positions[k-1] is the preference
//     position of value k under that parent assignment (1 = most preferred).
//     Tied values share a position; positions are contiguous from 1.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <iterator>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cpnet/errors.hpp"

namespace cpnet {

/// Whether CPT rows must be strict total orders or may contain ties.
enum class CptMode { Strict, Indifference };

std::string_view to_string(CptMode mode);
CptMode parse_cpt_mode(std::string_view text);

/// One value index (1-based) per variable.
class Outcome {
public:
    Outcome() = default;
    explicit Outcome(std::vector<int> values) : values_(std::move(values)) {}
    Outcome(std::initializer_list<int> values) : values_(values) {}

    std::size_t size() const { return values_.size(); }
    int operator[](std::size_t var) const { return values_[var]; }
    std::span<const int> values() const { return values_; }

    /// Copy with `var` set to `value`.
    Outcome with(std::size_t var, int value) const;

    /// Comma-separated 1-based indices, e.g. "2,1,3,1".
    std::string str() const;
    /// Inverse of str(); throws std::invalid_argument on malformed text.
    static Outcome parse(std::string_view text);

    friend bool operator==(const Outcome&, const Outcome&) = default;
    friend auto operator<=>(const Outcome&, const Outcome&) = default;

private:
    std::vector<int> values_;
};

struct OutcomeHash {
    std::size_t operator()(const Outcome& o) const noexcept;
};

/// Number of variables on which two outcomes differ.
std::size_t hamming_distance(const Outcome& a, const Outcome& b);

/// Preference positions of one CPT row; see the file comment.
using Positions = std::vector<int>;

/// Acyclic CP-net: structure as an adjacency matrix plus one CPT per variable.
///
/// The constructor only checks field shapes (matrix size, domain sizes >= 2,
/// row counts). Semantic checks (acyclicity, topological order, well-formed
/// rows, indifference consistency) belong to validate(); an instance may be
/// semantically invalid until validated. Instances are immutable.
class CPNet {
public:
    using Adjacency = std::vector<std::vector<std::uint8_t>>;

    /// `cpts[i]` holds one row per parent assignment of variable i, ordered
    /// mixed-radix over the parents in ascending variable order with the
    /// first parent most significant. An empty row marks a missing entry.
    CPNet(std::vector<int> domain_sizes, Adjacency adjacency, std::vector<std::vector<Positions>> cpts);

    std::size_t size() const { return domain_sizes_.size(); }
    int domain_size(std::size_t var) const { return domain_sizes_[var]; }
    std::span<const int> domain_sizes() const { return domain_sizes_; }

    bool has_edge(std::size_t from, std::size_t to) const { return adjacency_[from][to] != 0; }
    const Adjacency& adjacency() const { return adjacency_; }
    std::span<const std::size_t> parents(std::size_t var) const { return parents_[var]; }
    std::span<const std::size_t> children(std::size_t var) const { return children_[var]; }

    std::size_t row_count(std::size_t var) const { return cpts_[var].size(); }
    const Positions& row(std::size_t var, std::size_t row_index) const { return cpts_[var][row_index]; }
    const std::vector<Positions>& table(std::size_t var) const { return cpts_[var]; }

    /// Row index for an explicit parent assignment (1-based values, parents ascending).
    std::size_t row_index(std::size_t var, std::span<const int> parent_values) const;
    /// Row index selected by the parent values inside a full outcome.
    std::size_t row_index_in(std::size_t var, const Outcome& o) const;
    /// Parent assignment (1-based values) that selects `row_index`.
    std::vector<int> row_assignment(std::size_t var, std::size_t row_index) const;

    const Positions& row_for(std::size_t var, const Outcome& o) const { return cpts_[var][row_index_in(var, o)]; }
    /// Preference position of o[var] under o's parent assignment.
    int position(std::size_t var, const Outcome& o) const { return row_for(var, o)[o[var] - 1]; }

    /// True when some CPT row assigns one position to two values.
    bool has_ties() const;

    /// |Omega|, or nullopt if it does not fit in 64 bits.
    std::optional<std::uint64_t> outcome_count() const;

    /// True iff `o` has one in-domain value per variable.
    bool is_valid_outcome(const Outcome& o) const;
    /// Throws std::invalid_argument with a descriptive message if !is_valid_outcome(o).
    void check_outcome(const Outcome& o) const;

    friend bool operator==(const CPNet& a, const CPNet& b)
    {
        return a.domain_sizes_ == b.domain_sizes_ && a.adjacency_ == b.adjacency_ && a.cpts_ == b.cpts_;
    }

private:
    std::vector<int> domain_sizes_;
    Adjacency adjacency_;
    std::vector<std::vector<Positions>> cpts_;
    std::vector<std::vector<std::size_t>> parents_;
    std::vector<std::vector<std::size_t>> children_;
    std::vector<std::vector<std::size_t>> parent_strides_;
};

/// Product of the domain sizes of `var`'s parents in `adjacency`.
std::size_t expected_row_count(std::span<const int> domain_sizes, const CPNet::Adjacency& adjacency, std::size_t var);

// ---------------------------------------------------------------------------
// Validation

struct ValidationIssue {
    ValidationCode code;
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;

    bool ok() const { return issues.empty(); }
    /// Throws ValidationError for the first issue, if any.
    void throw_if_invalid() const;
};

/// Structural and CPT checks. In Indifference mode rows may contain ties and
/// the parent-indifference consistency condition is enforced conservatively:
/// if two values of X tie in *any* row of CPT(X), every child row pair that
/// differs only in X between those two values must be identical.
ValidationReport validate(const CPNet& net, CptMode mode = CptMode::Strict);

/// Shorthand for validate(net, mode).throw_if_invalid().
void require_valid(const CPNet& net, CptMode mode = CptMode::Strict);

/// True if some two rows of CPT(child) that differ only in `parent`'s value
/// hold different orders, i.e. the edge parent -> child carries information.
bool edge_is_relevant(const CPNet& net, std::size_t parent, std::size_t child);

// ---------------------------------------------------------------------------
// Outcome enumeration

/// Lazy lexicographic enumeration of Omega (last variable varies fastest).
class OutcomeRange {
public:
    class iterator {
    public:
        using iterator_category = std::input_iterator_tag;
        using value_type = Outcome;
        using difference_type = std::ptrdiff_t;
        using pointer = const Outcome*;
        using reference = const Outcome&;

        iterator() = default;
        reference operator*() const { return current_; }
        pointer operator->() const { return &current_; }
        iterator& operator++();
        iterator operator++(int)
        {
            iterator tmp = *this;
            ++*this;
            return tmp;
        }
        friend bool operator==(const iterator& a, const iterator& b) { return a.done_ == b.done_ && (a.done_ || a.current_ == b.current_); }

    private:
        friend class OutcomeRange;
        iterator(std::span<const int> domains, bool done);

        std::span<const int> domains_;
        Outcome current_;
        bool done_ = true;
    };

    explicit OutcomeRange(const CPNet& net) : domains_(net.domain_sizes().begin(), net.domain_sizes().end()) {}

    iterator begin() const { return iterator(domains_, domains_.empty()); }
    iterator end() const { return iterator(domains_, true); }

private:
    std::vector<int> domains_;
};

/// Lazy view of every outcome of `net`. Iterators are tied to the range, not the net.
inline OutcomeRange all_outcomes(const CPNet& net)
{
    return OutcomeRange(net);
}

/// Default limit on materialized outcome sets (oracle graphs, full orderings).
inline constexpr std::size_t kDefaultBudget = 4096;

/// kDefaultBudget, overridden by the CPNET_BUDGET environment variable.
std::size_t default_budget();

/// Materializes Omega; throws BudgetExceeded if |Omega| > budget.
std::vector<Outcome> enumerate_outcomes(const CPNet& net, std::size_t budget);

// ---------------------------------------------------------------------------
// Plausibility constraints

/// A nonempty set of permitted outcomes P, given either explicitly or as a
/// predicate over outcomes.
class ConstraintSet {
public:
    static ConstraintSet of(std::vector<Outcome> members);
    static ConstraintSet where(std::function<bool(const Outcome&)> predicate);

    bool permits(const Outcome& o) const;

    /// Members of P in lexicographic order. Explicit sets are checked against
    /// the net; predicate sets enumerate Omega under `budget`. Throws
    /// std::invalid_argument if P is empty or contains an invalid outcome.
    std::vector<Outcome> members(const CPNet& net, std::size_t budget) const;

private:
    std::vector<Outcome> explicit_;
    std::function<bool(const Outcome&)> predicate_;
};

// ---------------------------------------------------------------------------
// Text format

/// Parses the line-based text format:
///
///     cpnet <n>
///     domains <n_1> ... <n_n>
///     <n adjacency rows of 0/1>
///     cpt <i>                       (1-based, once per variable, in order)
///     <u_1,...,u_l> : <p_1,...,p_k>  (one per parent assignment; "-" if no parents)
///
/// Blank lines and '#' comments are ignored. Throws SyntaxError; semantic
/// problems are left to validate().
CPNet parse_cpnet(std::string_view text);

/// Canonical text: rows in mixed-radix order, single spaces, no comments.
std::string serialize(const CPNet& net);

CPNet read_cpnet_file(const std::string& path);

// ---------------------------------------------------------------------------
// Fixtures

namespace fixtures {

/// The four-variable seat-preference net: A (flight length, a/ā), B (term
/// time, b/b̄), C (class, c/c̄/c̄̄), D (wifi, d/d̄), edges A->C, B->C, C->D.
///
/// CPT(D) rows (c: d≻d̄, c̄: d̄≻d, c̄̄: d̄≻d) are the only choice consistent
/// with the worked rank values (61/12, 77/12, 39/12, 121/24).
CPNet flight_example();

} // namespace fixtures

} // namespace cpnet
