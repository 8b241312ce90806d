#include "cpnet/model.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <limits>
#include <set>
#include <sstream>
#include <utility>

namespace cpnet {

std::string_view to_string(ValidationCode code)
{
    switch (code) {
    case ValidationCode::CyclicStructure: return "CyclicStructure";
    case ValidationCode::NonTopologicalOrder: return "NonTopologicalOrder";
    case ValidationCode::MissingCptRow: return "MissingCPTRow";
    case ValidationCode::MalformedPositions: return "MalformedPositions";
    case ValidationCode::IndifferenceInconsistency: return "IndifferenceInconsistency";
    }
    return "Unknown";
}

std::string_view to_string(CptMode mode)
{
    return mode == CptMode::Strict ? "strict" : "indifference";
}

CptMode parse_cpt_mode(std::string_view text)
{
    if (text == "strict") return CptMode::Strict;
    if (text == "indifference") return CptMode::Indifference;
    throw std::invalid_argument("unknown mode '" + std::string(text) + "' (expected strict|indifference)");
}

// ---------------------------------------------------------------------------
// Outcome

Outcome Outcome::with(std::size_t var, int value) const
{
    Outcome copy = *this;
    copy.values_[var] = value;
    return copy;
}

std::string Outcome::str() const
{
    std::string out;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(values_[i]);
    }
    return out;
}

Outcome Outcome::parse(std::string_view text)
{
    std::vector<int> values;
    std::size_t pos = 0;
    while (true) {
        const std::size_t comma = text.find(',', pos);
        std::string_view item = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
        while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
        int value = 0;
        auto [end, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
        if (item.empty() || ec != std::errc() || end != item.data() + item.size() || value < 1) {
            throw std::invalid_argument("malformed outcome '" + std::string(text) + "': expected comma-separated positive indices");
        }
        values.push_back(value);
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return Outcome(std::move(values));
}

std::size_t OutcomeHash::operator()(const Outcome& o) const noexcept
{
    std::size_t h = 1469598103934665603ull;
    for (int v : o.values()) {
        h ^= static_cast<std::size_t>(v);
        h *= 1099511628211ull;
    }
    return h;
}

std::size_t hamming_distance(const Outcome& a, const Outcome& b)
{
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
    return d;
}

// ---------------------------------------------------------------------------
// CPNet

namespace {

constexpr std::size_t kMaxRowsPerTable = std::size_t{1} << 24;

} // namespace

std::size_t expected_row_count(std::span<const int> domain_sizes, const CPNet::Adjacency& adjacency, std::size_t var)
{
    std::size_t rows = 1;
    for (std::size_t p = 0; p < domain_sizes.size(); ++p) {
        if (p == var || !adjacency[p][var]) continue;
        rows *= static_cast<std::size_t>(domain_sizes[p]);
        if (rows > kMaxRowsPerTable) throw std::invalid_argument("CPT for variable " + std::to_string(var + 1) + " is too large");
    }
    return rows;
}

CPNet::CPNet(std::vector<int> domain_sizes, Adjacency adjacency, std::vector<std::vector<Positions>> cpts)
    : domain_sizes_(std::move(domain_sizes)), adjacency_(std::move(adjacency)), cpts_(std::move(cpts))
{
    const std::size_t n = domain_sizes_.size();
    if (n == 0) throw std::invalid_argument("CP-net needs at least one variable");
    if (adjacency_.size() != n) throw std::invalid_argument("adjacency matrix must have one row per variable");
    for (const auto& row : adjacency_) {
        if (row.size() != n) throw std::invalid_argument("adjacency matrix must be square");
        for (auto a : row) {
            if (a > 1) throw std::invalid_argument("adjacency entries must be 0 or 1");
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (domain_sizes_[i] < 2) throw std::invalid_argument("variable " + std::to_string(i + 1) + " has domain size < 2");
    }
    if (cpts_.size() != n) throw std::invalid_argument("need one CPT per variable");

    parents_.resize(n);
    children_.resize(n);
    parent_strides_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (adjacency_[i][j]) {
                parents_[j].push_back(i);
                children_[i].push_back(j);
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t rows = expected_row_count(domain_sizes_, adjacency_, i);
        if (cpts_[i].size() != rows) {
            throw std::invalid_argument("CPT for variable " + std::to_string(i + 1) + " has " + std::to_string(cpts_[i].size()) +
                                        " rows, expected " + std::to_string(rows));
        }
        auto& strides = parent_strides_[i];
        strides.assign(parents_[i].size(), 1);
        for (std::size_t k = parents_[i].size(); k-- > 1;) {
            strides[k - 1] = strides[k] * static_cast<std::size_t>(domain_sizes_[parents_[i][k]]);
        }
    }
}

std::size_t CPNet::row_index(std::size_t var, std::span<const int> parent_values) const
{
    const auto& pa = parents_[var];
    if (parent_values.size() != pa.size()) throw std::invalid_argument("parent assignment has wrong arity");
    std::size_t index = 0;
    for (std::size_t k = 0; k < pa.size(); ++k) {
        if (parent_values[k] < 1 || parent_values[k] > domain_sizes_[pa[k]]) throw std::invalid_argument("parent value out of domain");
        index += static_cast<std::size_t>(parent_values[k] - 1) * parent_strides_[var][k];
    }
    return index;
}

std::size_t CPNet::row_index_in(std::size_t var, const Outcome& o) const
{
    const auto& pa = parents_[var];
    const auto& strides = parent_strides_[var];
    std::size_t index = 0;
    for (std::size_t k = 0; k < pa.size(); ++k) index += static_cast<std::size_t>(o[pa[k]] - 1) * strides[k];
    return index;
}

std::vector<int> CPNet::row_assignment(std::size_t var, std::size_t row_index) const
{
    const auto& pa = parents_[var];
    std::vector<int> values(pa.size());
    for (std::size_t k = 0; k < pa.size(); ++k) {
        values[k] = static_cast<int>(row_index / parent_strides_[var][k]) + 1;
        row_index %= parent_strides_[var][k];
    }
    return values;
}

bool CPNet::has_ties() const
{
    for (const auto& table : cpts_) {
        for (const auto& row : table) {
            std::vector<int> sorted = row;
            std::sort(sorted.begin(), sorted.end());
            if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return true;
        }
    }
    return false;
}

std::optional<std::uint64_t> CPNet::outcome_count() const
{
    std::uint64_t count = 1;
    for (int d : domain_sizes_) {
        if (count > std::numeric_limits<std::uint64_t>::max() / static_cast<std::uint64_t>(d)) return std::nullopt;
        count *= static_cast<std::uint64_t>(d);
    }
    return count;
}

bool CPNet::is_valid_outcome(const Outcome& o) const
{
    if (o.size() != size()) return false;
    for (std::size_t i = 0; i < size(); ++i) {
        if (o[i] < 1 || o[i] > domain_sizes_[i]) return false;
    }
    return true;
}

void CPNet::check_outcome(const Outcome& o) const
{
    if (o.size() != size()) {
        throw std::invalid_argument("outcome " + o.str() + " has " + std::to_string(o.size()) + " values, net has " +
                                    std::to_string(size()) + " variables");
    }
    for (std::size_t i = 0; i < size(); ++i) {
        if (o[i] < 1 || o[i] > domain_sizes_[i]) {
            throw std::invalid_argument("outcome " + o.str() + ": value " + std::to_string(o[i]) + " out of domain 1.." +
                                        std::to_string(domain_sizes_[i]) + " for variable " + std::to_string(i + 1));
        }
    }
}

// ---------------------------------------------------------------------------
// Validation

void ValidationReport::throw_if_invalid() const
{
    if (!issues.empty()) throw ValidationError(issues.front().code, issues.front().message);
}

namespace {

bool has_cycle(const CPNet& net)
{
    const std::size_t n = net.size();
    std::vector<std::size_t> indegree(n, 0);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) indegree[j] += net.has_edge(i, j);
    }
    std::vector<std::size_t> ready;
    for (std::size_t i = 0; i < n; ++i) {
        if (indegree[i] == 0) ready.push_back(i);
    }
    std::size_t removed = 0;
    while (!ready.empty()) {
        const std::size_t v = ready.back();
        ready.pop_back();
        ++removed;
        for (std::size_t j = 0; j < n; ++j) {
            if (net.has_edge(v, j) && --indegree[j] == 0) ready.push_back(j);
        }
    }
    return removed != n;
}

std::string row_label(const CPNet& net, std::size_t var, std::size_t row)
{
    const auto u = net.row_assignment(var, row);
    if (u.empty()) return "CPT(" + std::to_string(var + 1) + ")[-]";
    std::string s = "CPT(" + std::to_string(var + 1) + ")[";
    for (std::size_t k = 0; k < u.size(); ++k) s += (k ? "," : "") + std::to_string(u[k]);
    return s + "]";
}

std::optional<std::string> check_positions(const Positions& row, int domain, CptMode mode)
{
    if (row.size() != static_cast<std::size_t>(domain)) {
        return "has " + std::to_string(row.size()) + " positions, expected " + std::to_string(domain);
    }
    std::vector<int> sorted = row;
    std::sort(sorted.begin(), sorted.end());
    if (sorted.front() != 1) return "positions must start at 1";
    for (std::size_t k = 1; k < sorted.size(); ++k) {
        const int step = sorted[k] - sorted[k - 1];
        if (mode == CptMode::Strict && step != 1) return "positions are not a permutation of 1.." + std::to_string(domain);
        if (mode == CptMode::Indifference && step != 0 && step != 1) return "tied positions must be contiguous from 1";
    }
    return std::nullopt;
}

} // namespace

ValidationReport validate(const CPNet& net, CptMode mode)
{
    ValidationReport report;
    const std::size_t n = net.size();

    if (has_cycle(net)) {
        report.issues.push_back({ValidationCode::CyclicStructure, "structure contains a directed cycle"});
        return report;
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            if (net.has_edge(i, j)) {
                report.issues.push_back({ValidationCode::NonTopologicalOrder, "edge " + std::to_string(i + 1) + " -> " +
                                                                                  std::to_string(j + 1) +
                                                                                  " violates the variable order"});
            }
        }
    }
    if (!report.ok()) return report;

    bool rows_ok = true;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t r = 0; r < net.row_count(i); ++r) {
            const auto& row = net.row(i, r);
            if (row.empty()) {
                report.issues.push_back({ValidationCode::MissingCptRow, row_label(net, i, r) + " is missing"});
                rows_ok = false;
                continue;
            }
            if (auto problem = check_positions(row, net.domain_size(i), mode)) {
                report.issues.push_back({ValidationCode::MalformedPositions, row_label(net, i, r) + " " + *problem});
                rows_ok = false;
            }
        }
    }
    if (!rows_ok || mode == CptMode::Strict) return report;

    // Indifference consistency: a child must not distinguish parent values
    // that the parent's own CPT ties anywhere.
    for (std::size_t y = 0; y < n; ++y) {
        const auto parents = net.parents(y);
        for (std::size_t k = 0; k < parents.size(); ++k) {
            const std::size_t x = parents[k];
            std::set<std::pair<int, int>> tied;
            for (const auto& row : net.table(x)) {
                for (int a = 1; a <= net.domain_size(x); ++a) {
                    for (int b = a + 1; b <= net.domain_size(x); ++b) {
                        if (row[a - 1] == row[b - 1]) tied.emplace(a, b);
                    }
                }
            }
            for (const auto& [a, b] : tied) {
                for (std::size_t r = 0; r < net.row_count(y); ++r) {
                    auto u = net.row_assignment(y, r);
                    if (u[k] != a) continue;
                    u[k] = b;
                    const std::size_t other = net.row_index(y, u);
                    if (net.row(y, r) != net.row(y, other)) {
                        report.issues.push_back({ValidationCode::IndifferenceInconsistency,
                                                 row_label(net, y, r) + " and " + row_label(net, y, other) +
                                                     " differ although values " + std::to_string(a) + " and " +
                                                     std::to_string(b) + " of variable " + std::to_string(x + 1) +
                                                     " are tied in CPT(" + std::to_string(x + 1) + ")"});
                    }
                }
            }
        }
    }
    return report;
}

void require_valid(const CPNet& net, CptMode mode)
{
    validate(net, mode).throw_if_invalid();
}

bool edge_is_relevant(const CPNet& net, std::size_t parent, std::size_t child)
{
    const auto parents = net.parents(child);
    const auto it = std::find(parents.begin(), parents.end(), parent);
    if (it == parents.end()) return false;
    const auto k = static_cast<std::size_t>(it - parents.begin());
    for (std::size_t r = 0; r < net.row_count(child); ++r) {
        auto u = net.row_assignment(child, r);
        if (u[k] != 1) continue;
        for (int v = 2; v <= net.domain_size(parent); ++v) {
            u[k] = v;
            if (net.row(child, r) != net.row(child, net.row_index(child, u))) return true;
        }
    }
    return false;
}

// ---------------------------------------------------------------------------
// Enumeration

OutcomeRange::iterator::iterator(std::span<const int> domains, bool done) : domains_(domains), done_(done)
{
    if (!done_) current_ = Outcome(std::vector<int>(domains.size(), 1));
}

OutcomeRange::iterator& OutcomeRange::iterator::operator++()
{
    std::vector<int> values(current_.values().begin(), current_.values().end());
    std::size_t i = values.size();
    while (i > 0) {
        --i;
        if (values[i] < domains_[i]) {
            ++values[i];
            current_ = Outcome(std::move(values));
            return *this;
        }
        values[i] = 1;
    }
    done_ = true;
    current_ = Outcome();
    return *this;
}

std::size_t default_budget()
{
    if (const char* env = std::getenv("CPNET_BUDGET")) {
        std::size_t value = 0;
        const std::string_view text(env);
        auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec == std::errc() && end == text.data() + text.size() && value > 0) return value;
    }
    return kDefaultBudget;
}

std::vector<Outcome> enumerate_outcomes(const CPNet& net, std::size_t budget)
{
    const auto count = net.outcome_count();
    if (!count || *count > budget) {
        throw BudgetExceeded("outcome space has " + (count ? std::to_string(*count) : std::string("more than 2^64")) +
                             " outcomes, budget is " + std::to_string(budget));
    }
    std::vector<Outcome> out;
    out.reserve(static_cast<std::size_t>(*count));
    for (const auto& o : all_outcomes(net)) out.push_back(o);
    return out;
}

// ---------------------------------------------------------------------------
// ConstraintSet

ConstraintSet ConstraintSet::of(std::vector<Outcome> members)
{
    ConstraintSet set;
    set.explicit_ = std::move(members);
    return set;
}

ConstraintSet ConstraintSet::where(std::function<bool(const Outcome&)> predicate)
{
    ConstraintSet set;
    set.predicate_ = std::move(predicate);
    return set;
}

bool ConstraintSet::permits(const Outcome& o) const
{
    if (predicate_) return predicate_(o);
    return std::find(explicit_.begin(), explicit_.end(), o) != explicit_.end();
}

std::vector<Outcome> ConstraintSet::members(const CPNet& net, std::size_t budget) const
{
    std::vector<Outcome> out;
    if (predicate_) {
        for (auto& o : enumerate_outcomes(net, budget)) {
            if (predicate_(o)) out.push_back(std::move(o));
        }
    } else {
        for (const auto& o : explicit_) net.check_outcome(o);
        out = explicit_;
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
    }
    if (out.empty()) throw std::invalid_argument("constraint set permits no outcomes");
    return out;
}

} // namespace cpnet
