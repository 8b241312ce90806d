#include "cli.hpp"

#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "cpnet/dominance.hpp"
#include "cpnet/genbench.hpp"
#include "cpnet/model.hpp"
#include "cpnet/oracle.hpp"
#include "cpnet/ordering.hpp"
#include "cpnet/rank.hpp"

namespace cpnet::cli {

namespace {

struct Globals {
    std::uint64_t seed = 1;
    std::optional<std::size_t> budget;
    std::string format = "lines";

    std::size_t effective_budget() const { return budget ? *budget : default_budget(); }
    bool csv() const { return format == "csv"; }
};

// Thrown for bad flag values detected after CLI11 parsing.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

CptMode resolve_mode(const std::string& mode, const CPNet& net)
{
    if (mode == "auto") return net.has_ties() ? CptMode::Indifference : CptMode::Strict;
    return parse_cpt_mode(mode);
}

CPNet load_valid(const std::string& path, const std::string& mode_flag, CptMode& mode)
{
    CPNet net = read_cpnet_file(path);
    mode = resolve_mode(mode_flag, net);
    require_valid(net, mode);
    return net;
}

Outcome parse_outcome(const CPNet& net, const std::string& text)
{
    Outcome o = Outcome::parse(text);
    net.check_outcome(o);
    return o;
}

std::vector<std::size_t> parse_sizes(const std::string& text)
{
    // "3-10", "3,4,5" or "4".
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto dash = item.find('-');
        try {
            if (dash == std::string::npos) {
                out.push_back(std::stoul(item));
            } else {
                const auto lo = std::stoul(item.substr(0, dash));
                const auto hi = std::stoul(item.substr(dash + 1));
                if (lo > hi) throw UsageError("empty range '" + item + "'");
                for (auto v = lo; v <= hi; ++v) out.push_back(v);
            }
        } catch (const std::logic_error&) {
            throw UsageError("malformed size list '" + text + "'");
        }
    }
    if (out.empty()) throw UsageError("empty size list");
    return out;
}

std::string join_path(const std::vector<Outcome>& path)
{
    std::string s;
    for (std::size_t i = 0; i < path.size(); ++i) s += (i ? " -> " : "") + path[i].str();
    return s;
}

void write_file(const std::string& path, const std::string& content)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + path + "'");
    f << content;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"CP-net ranking, ordering and dominance tool", "cpnet"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--seed", g.seed, "Seed for generate and bench");
    app.add_option("--budget", g.budget, "Outcome enumeration limit for order and oracle (default 4096 or $CPNET_BUDGET)");
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"lines", "csv"}));

    const auto modes = CLI::IsMember({"auto", "strict", "indifference"});

    // validate
    std::string net_path;
    std::string mode_flag = "auto";
    auto* validate_cmd = app.add_subcommand("validate", "Check a net file");
    validate_cmd->add_option("--net", net_path, "Net file")->required();
    validate_cmd->add_option("--mode", mode_flag, "CPT mode (auto picks indifference when rows have ties)")->check(modes);

    // rank
    std::vector<std::string> outcome_texts;
    bool decimal = false;
    auto* rank_cmd = app.add_subcommand("rank", "Exact rank of outcomes");
    rank_cmd->add_option("--net", net_path, "Net file")->required();
    rank_cmd->add_option("--outcome", outcome_texts, "Outcome such as 2,1,3,2 (repeatable)")->required();
    rank_cmd->add_flag("--decimal", decimal, "Also print an approximate decimal value");
    rank_cmd->add_option("--mode", mode_flag)->check(modes);

    // order
    bool strict_order = false;
    auto* order_cmd = app.add_subcommand("order", "Consistent ordering of all outcomes or a subset");
    order_cmd->add_option("--net", net_path, "Net file")->required();
    order_cmd->add_option("--outcome", outcome_texts, "Restrict to these outcomes (repeatable)");
    order_cmd->add_flag("--strict", strict_order, "Break rank ties lexicographically");
    order_cmd->add_option("--mode", mode_flag)->check(modes);

    // dominate
    std::string o_text;
    std::string o_prime_text;
    std::string measures_text = "rank";
    std::string strategy_text = "fifo";
    std::string query = "dominance";
    std::size_t node_limit = 0;
    auto* dominate_cmd = app.add_subcommand("dominate", "Answer whether o is preferred to o'");
    dominate_cmd->add_option("--net", net_path, "Net file")->required();
    dominate_cmd->add_option("--o", o_text, "Outcome o")->required();
    dominate_cmd->add_option("--oprime", o_prime_text, "Outcome o'")->required();
    dominate_cmd->add_option("--measures", measures_text, "Comma-separated subset of rank,penalty,suffix, or none");
    dominate_cmd->add_option("--strategy", strategy_text)->check(CLI::IsMember({"fifo", "rank-priority"}));
    dominate_cmd->add_option("--mode", mode_flag)->check(modes);
    dominate_cmd->add_option("--query", query, "dominance, or indifference to test o ~ o'")
        ->check(CLI::IsMember({"dominance", "indifference"}));
    dominate_cmd->add_option("--node-limit", node_limit, "Abort past this many tree nodes (0 = none)");

    // oracle
    auto* oracle_cmd = app.add_subcommand("oracle", "Exhaustive preference-graph classification of (o, o')");
    oracle_cmd->add_option("--net", net_path, "Net file")->required();
    oracle_cmd->add_option("--o", o_text, "Outcome o")->required();
    oracle_cmd->add_option("--oprime", o_prime_text, "Outcome o'")->required();
    oracle_cmd->add_option("--mode", mode_flag)->check(modes);

    // generate
    GenSpec spec;
    std::string out_path;
    std::size_t query_count = 0;
    auto* generate_cmd = app.add_subcommand("generate", "Random net (and optionally queries)");
    generate_cmd->add_option("--n", spec.n, "Variables")->required()->check(CLI::PositiveNumber);
    generate_cmd->add_option("--d-u", spec.d_u, "Maximum domain size")->check(CLI::Range(2, 64));
    generate_cmd->add_option("--edge-density", spec.edge_density, "Edge probability (default min(1, 4/(n-1)))")
        ->check(CLI::Range(0.0, 1.0));
    generate_cmd->add_option("--indifference-rate", spec.indifference_rate, "Tie probability per CPT position")
        ->check(CLI::Range(0.0, 1.0));
    generate_cmd->add_option("--out", out_path, "Write the net here instead of stdout");
    generate_cmd->add_option("--queries", query_count, "Also print this many random (o, o') pairs");

    // bench
    std::string n_list = "3-10";
    std::string d_list = "2";
    ExperimentConfig bench;
    std::string methods_text;
    std::string raw_path;
    std::string agg_path;
    std::string manifest_path;
    auto* bench_cmd = app.add_subcommand("bench", "Run the pruning experiment and print the aggregate CSV");
    bench_cmd->add_option("--n", n_list, "Variable counts, e.g. 3-10 or 3,5,8");
    bench_cmd->add_option("--d-u", d_list, "Maximum domain sizes, e.g. 2 or 2,3");
    bench_cmd->add_option("--nets", bench.nets_per_cell, "Nets per (n, d_U) cell");
    bench_cmd->add_option("--queries", bench.queries_per_net, "Queries per net");
    bench_cmd->add_option("--methods", methods_text, "Semicolon-separated methods, e.g. rank;rank+suffix (default: all seven)");
    bench_cmd->add_option("--strategy", strategy_text)->check(CLI::IsMember({"fifo", "rank-priority"}));
    bench_cmd->add_option("--edge-density", bench.edge_density)->check(CLI::Range(0.0, 1.0));
    bench_cmd->add_option("--threads", bench.threads, "Worker threads (0 = all cores, 1 for low-noise timing)");
    bench_cmd->add_flag("!--no-warm-up", bench.warm_up, "Skip the untimed warm-up pass");
    bench_cmd->add_option("--node-limit", bench.node_limit);
    bench_cmd->add_option("--raw", raw_path, "Write per-query records as CSV");
    bench_cmd->add_option("--aggregate", agg_path, "Write the aggregate CSV here instead of stdout");
    bench_cmd->add_option("--manifest", manifest_path, "Write seeds and settings as JSON");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsageError;
    }

    try {
        CptMode mode = CptMode::Strict;
        if (*validate_cmd) {
            CPNet net = read_cpnet_file(net_path);
            mode = resolve_mode(mode_flag, net);
            const auto report = validate(net, mode);
            if (report.ok()) {
                out << "valid (" << to_string(mode) << ")\n";
                return kOk;
            }
            for (const auto& issue : report.issues) err << "model: " << to_string(issue.code) << ": " << issue.message << "\n";
            return kDomainError;
        }
        if (*rank_cmd) {
            const CPNet net = load_valid(net_path, mode_flag, mode);
            const RankModel model(net);
            if (g.csv()) out << "outcome,rank" << (decimal ? ",approx" : "") << "\n";
            for (const auto& text : outcome_texts) {
                const Rational r = model.rank(parse_outcome(net, text));
                if (g.csv()) {
                    out << '"' << text << "\"," << r.str();
                    if (decimal) out << ',' << std::fixed << std::setprecision(6) << r.to_double();
                } else {
                    if (outcome_texts.size() > 1) out << text << ' ';
                    out << r.str();
                    if (decimal) out << " (approx " << std::fixed << std::setprecision(6) << r.to_double() << ")";
                }
                out << "\n";
            }
            return kOk;
        }
        if (*order_cmd) {
            const CPNet net = load_valid(net_path, mode_flag, mode);
            std::optional<std::vector<Outcome>> subset;
            if (!outcome_texts.empty()) {
                subset.emplace();
                for (const auto& text : outcome_texts) subset->push_back(parse_outcome(net, text));
            }
            const Ordering ordering = consistent_order(RankModel(net), subset, strict_order, g.effective_budget());
            if (g.csv()) out << "group,outcome,rank\n";
            for (std::size_t gi = 0; gi < ordering.groups.size(); ++gi) {
                const auto& group = ordering.groups[gi];
                const bool bracket = !g.csv() && group.size() > 1;
                if (bracket) out << "[\n";
                for (const auto& r : group) {
                    if (g.csv()) out << gi + 1 << ",\"" << r.outcome.str() << "\"," << r.rank.str() << "\n";
                    else out << (bracket ? "  " : "") << r.outcome.str() << ' ' << r.rank.str() << "\n";
                }
                if (bracket) out << "]\n";
            }
            if (ordering.tie_broken && !g.csv()) out << "# equal ranks separated lexicographically\n";
            return kOk;
        }
        if (*dominate_cmd) {
            const CPNet net = load_valid(net_path, mode_flag, mode);
            const Outcome o = parse_outcome(net, o_text);
            const Outcome o_prime = parse_outcome(net, o_prime_text);
            const DominanceSolver solver(net);
            if (query == "indifference") {
                out << (solver.indifferent(o, o_prime) ? "true" : "false") << "\n";
                return kOk;
            }
            PruningConfig config;
            try {
                config.measures = MeasureSet::parse(measures_text);
                config.strategy = parse_leaf_strategy(strategy_text);
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }
            config.mode = mode;
            config.node_limit = node_limit;
            const SearchResult res = solver.dominates(o, o_prime, config);
            const std::string reason = res.zero_reason ? std::string(to_string(*res.zero_reason)) : "";
            if (g.csv()) {
                out << "answer,outcomes_traversed,witness,zero_reason\n"
                    << (res.answer ? "true" : "false") << ',' << res.outcomes_traversed << ",\"" << join_path(res.witness)
                    << "\"," << reason << "\n";
            } else {
                out << (res.answer ? "true" : "false") << "\n";
                out << "outcomes traversed: " << res.outcomes_traversed << "\n";
                if (res.answer) out << "witness: " << join_path(res.witness) << "\n";
                if (res.zero_reason) out << "zero-traversal reason: " << reason << "\n";
            }
            return kOk;
        }
        if (*oracle_cmd) {
            const CPNet net = load_valid(net_path, mode_flag, mode);
            const Outcome o = parse_outcome(net, o_text);
            const Outcome o_prime = parse_outcome(net, o_prime_text);
            const auto graph = PreferenceGraph::build(net, g.effective_budget());
            out << to_string(graph.entails(o, o_prime)) << "\n";
            return kOk;
        }
        if (*generate_cmd) {
            spec.seed = g.seed;
            const CPNet net = generate_net(spec);
            const std::string text = serialize(net);
            if (out_path.empty()) out << text;
            else write_file(out_path, text);
            if (query_count) {
                for (const auto& [o, o_prime] : generate_queries(net, query_count, derive_seed(g.seed, 0x71u))) {
                    out << (g.csv() ? "" : "query ") << o.str() << (g.csv() ? ";" : " ") << o_prime.str() << "\n";
                }
            }
            return kOk;
        }
        if (*bench_cmd) {
            bench.seed = g.seed;
            for (auto n : parse_sizes(n_list)) {
                for (auto d : parse_sizes(d_list)) {
                    if (n == 0 || d < 2) throw UsageError("grid needs n >= 1 and d_U >= 2");
                    bench.grid.push_back({n, static_cast<int>(d)});
                }
            }
            try {
                bench.strategy = parse_leaf_strategy(strategy_text);
                if (!methods_text.empty()) {
                    bench.methods.clear();
                    std::stringstream ss(methods_text);
                    std::string item;
                    while (std::getline(ss, item, ';')) bench.methods.push_back(MeasureSet::parse(item));
                }
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }
            const ExperimentResult result = run_experiment(bench);
            std::ostringstream agg;
            write_aggregate_csv(agg, result.stats);
            if (agg_path.empty()) out << agg.str();
            else write_file(agg_path, agg.str());
            if (!raw_path.empty()) {
                std::ostringstream raw;
                write_raw_csv(raw, result.records);
                write_file(raw_path, raw.str());
            }
            if (!manifest_path.empty()) write_file(manifest_path, manifest_json(bench));
            return kOk;
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsageError;
    } catch (const SyntaxError& e) {
        err << "model: " << e.what() << "\n";
        return kDomainError;
    } catch (const ValidationError& e) {
        err << "model: " << e.what() << "\n";
        return kDomainError;
    } catch (const BudgetExceeded& e) {
        err << "budget: " << e.what() << "\n";
        return kDomainError;
    } catch (const ConfigError& e) {
        err << "dominance: " << e.what() << "\n";
        return kDomainError;
    } catch (const MethodDisagreement& e) {
        err << "genbench: " << e.what() << "\n";
        return kDomainError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kDomainError;
    }
    return kUsageError;
}

} // namespace cpnet::cli
