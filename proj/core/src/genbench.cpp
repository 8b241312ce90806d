#include "cpnet/genbench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <iomanip>
#include <map>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

#include "json.hpp"

namespace cpnet {

// ---------------------------------------------------------------------------
// Randomness. A splitmix64 stream keeps results identical across standard
// library implementations, which the std distributions do not guarantee.

std::uint64_t mix_seed(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b, std::uint64_t c)
{
    std::uint64_t h = mix_seed(base);
    h = mix_seed(h ^ a);
    h = mix_seed(h ^ b);
    return mix_seed(h ^ c);
}

namespace {

std::uint64_t next_u64(std::uint64_t& state)
{
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Uniform in [lo, hi], rejection-sampled to avoid modulo bias.
int uniform_int(std::uint64_t& state, int lo, int hi)
{
    const auto range = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
    std::uint64_t x;
    do {
        x = next_u64(state);
    } while (x >= limit);
    return lo + static_cast<int>(x % range);
}

bool bernoulli(std::uint64_t& state, double p)
{
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return static_cast<double>(next_u64(state) >> 11) * 0x1.0p-53 < p;
}

template <typename T>
void shuffle(std::vector<T>& v, std::uint64_t& state)
{
    for (std::size_t i = v.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(uniform_int(state, 0, static_cast<int>(i - 1)));
        std::swap(v[i - 1], v[j]);
    }
}

Positions random_row(int domain, double tie_rate, std::uint64_t& state)
{
    std::vector<int> order(domain);
    std::iota(order.begin(), order.end(), 1);
    shuffle(order, state);
    Positions row(domain, 0);
    int pos = 1;
    for (int t = 0; t < domain; ++t) {
        if (t > 0 && !bernoulli(state, tie_rate)) ++pos;
        row[order[t] - 1] = pos;
    }
    return row;
}

// Tie classes of a variable: class_of[v-1] is the smallest value tied to v
// (transitively) in any row of its CPT.
std::vector<int> tie_classes(const std::vector<Positions>& table, int domain)
{
    std::vector<int> parent(domain);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    for (const auto& row : table) {
        for (int a = 0; a < domain; ++a) {
            for (int b = a + 1; b < domain; ++b) {
                if (row[a] == row[b]) {
                    const int ra = find(a);
                    const int rb = find(b);
                    parent[std::max(ra, rb)] = std::min(ra, rb);
                }
            }
        }
    }
    std::vector<int> out(domain);
    for (int v = 0; v < domain; ++v) out[v] = find(v) + 1;
    return out;
}

struct Table {
    std::vector<std::size_t> parents;
    std::vector<std::size_t> strides;
    std::vector<Positions> rows;

    void layout(const std::vector<int>& domains)
    {
        strides.assign(parents.size(), 1);
        for (std::size_t k = parents.size(); k-- > 1;) strides[k - 1] = strides[k] * domains[parents[k]];
        std::size_t count = 1;
        for (auto p : parents) count *= domains[p];
        rows.assign(count, Positions{});
    }

    std::vector<int> decode(std::size_t r) const
    {
        std::vector<int> u(parents.size());
        for (std::size_t k = 0; k < parents.size(); ++k) {
            u[k] = static_cast<int>(r / strides[k]) + 1;
            r %= strides[k];
        }
        return u;
    }

    std::size_t encode(const std::vector<int>& u) const
    {
        std::size_t r = 0;
        for (std::size_t k = 0; k < u.size(); ++k) r += static_cast<std::size_t>(u[k] - 1) * strides[k];
        return r;
    }

    bool relevant(std::size_t k, int parent_domain) const
    {
        for (std::size_t r = 0; r < rows.size(); ++r) {
            auto u = decode(r);
            if (u[k] != 1) continue;
            for (int v = 2; v <= parent_domain; ++v) {
                u[k] = v;
                if (rows[r] != rows[encode(u)]) return true;
            }
        }
        return false;
    }
};

constexpr int kRerollAttempts = 32;

} // namespace

double GenSpec::effective_edge_density() const
{
    if (edge_density) return *edge_density;
    if (n <= 1) return 0.0;
    return std::min(1.0, 4.0 / static_cast<double>(n - 1));
}

CPNet generate_net(const GenSpec& spec)
{
    if (spec.n == 0) throw std::invalid_argument("GenSpec.n must be >= 1");
    if (spec.d_u < 2) throw std::invalid_argument("GenSpec.d_u must be >= 2");
    std::uint64_t state = spec.seed;
    const std::size_t n = spec.n;
    const double density = spec.effective_edge_density();
    const double tie_rate = spec.indifference_rate;

    std::vector<int> domains(n);
    for (auto& d : domains) d = uniform_int(state, 2, spec.d_u);

    std::vector<Table> tables(n);
    std::vector<std::vector<int>> classes(n);
    for (std::size_t y = 0; y < n; ++y) {
        std::vector<std::size_t> candidates(y);
        std::iota(candidates.begin(), candidates.end(), std::size_t{0});
        shuffle(candidates, state);
        std::vector<std::size_t> parents;
        for (auto c : candidates) {
            if (parents.size() < spec.max_parents && bernoulli(state, density)) parents.push_back(c);
        }
        std::sort(parents.begin(), parents.end());
        // A parent whose values are all tied can never influence y.
        std::erase_if(parents, [&](std::size_t p) {
            const auto& cl = classes[p];
            return std::all_of(cl.begin(), cl.end(), [](int c) { return c == 1; });
        });

        Table& t = tables[y];
        while (true) {
            t.parents = parents;
            t.layout(domains);
            std::optional<std::size_t> irrelevant;
            for (int attempt = 0; attempt < kRerollAttempts; ++attempt) {
                for (std::size_t r = 0; r < t.rows.size(); ++r) {
                    // Rows whose parent values are tie-equivalent must agree;
                    // the class representative is never larger, so it exists already.
                    auto u = t.decode(r);
                    for (std::size_t k = 0; k < u.size(); ++k) u[k] = classes[parents[k]][u[k] - 1];
                    const std::size_t rep = t.encode(u);
                    t.rows[r] = rep == r ? random_row(domains[y], tie_rate, state) : t.rows[rep];
                }
                irrelevant.reset();
                for (std::size_t k = 0; k < parents.size(); ++k) {
                    if (!t.relevant(k, domains[parents[k]])) {
                        irrelevant = k;
                        break;
                    }
                }
                if (!irrelevant) break;
            }
            if (!irrelevant) break;
            parents.erase(parents.begin() + static_cast<std::ptrdiff_t>(*irrelevant));
        }
        classes[y] = tie_classes(t.rows, domains[y]);
    }

    CPNet::Adjacency adjacency(n, std::vector<std::uint8_t>(n, 0));
    std::vector<std::vector<Positions>> cpts(n);
    for (std::size_t y = 0; y < n; ++y) {
        for (auto p : tables[y].parents) adjacency[p][y] = 1;
        cpts[y] = std::move(tables[y].rows);
    }
    return CPNet(std::move(domains), std::move(adjacency), std::move(cpts));
}

std::vector<std::string> audit(const CPNet& net, CptMode mode)
{
    std::vector<std::string> problems;
    for (const auto& issue : validate(net, mode).issues) problems.push_back(std::string(to_string(issue.code)) + ": " + issue.message);
    for (std::size_t y = 0; y < net.size(); ++y) {
        for (auto p : net.parents(y)) {
            if (!edge_is_relevant(net, p, y)) {
                problems.push_back("edge " + std::to_string(p + 1) + " -> " + std::to_string(y + 1) + " is not relevant");
            }
        }
    }
    return problems;
}

Outcome random_outcome(const CPNet& net, std::uint64_t& state)
{
    std::vector<int> values(net.size());
    for (std::size_t x = 0; x < net.size(); ++x) values[x] = uniform_int(state, 1, net.domain_size(x));
    return Outcome(std::move(values));
}

std::vector<std::pair<Outcome, Outcome>> generate_queries(const CPNet& net, std::size_t count, std::uint64_t seed)
{
    std::uint64_t state = seed;
    std::vector<std::pair<Outcome, Outcome>> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Outcome o = random_outcome(net, state);
        Outcome o_prime = random_outcome(net, state);
        out.emplace_back(std::move(o), std::move(o_prime));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Experiment

namespace {

struct Unit {
    std::size_t cell;
    std::size_t net_id;
};

std::vector<QueryRecord> run_unit(const ExperimentConfig& config, const Unit& unit)
{
    const GridCell& cell = config.grid[unit.cell];
    GenSpec spec;
    spec.n = cell.n;
    spec.d_u = cell.d_u;
    spec.seed = derive_seed(config.seed, cell.n, static_cast<std::uint64_t>(cell.d_u), unit.net_id);
    spec.edge_density = config.edge_density;
    const DominanceSolver solver(generate_net(spec));
    const auto queries = generate_queries(solver.net(), config.queries_per_net, derive_seed(spec.seed, 0x71u));

    const std::size_t methods = config.methods.size();
    std::vector<QueryRecord> records(queries.size() * methods);
    for (std::size_t m = 0; m < methods; ++m) {
        PruningConfig pc;
        pc.measures = config.methods[m];
        pc.strategy = config.strategy;
        pc.node_limit = config.node_limit;
        if (config.warm_up) {
            for (const auto& [o, o_prime] : queries) (void)solver.dominates(o, o_prime, pc);
        }
        for (std::size_t q = 0; q < queries.size(); ++q) {
            const auto start = std::chrono::steady_clock::now();
            const SearchResult res = solver.dominates(queries[q].first, queries[q].second, pc);
            const auto stop = std::chrono::steady_clock::now();
            records[q * methods + m] = QueryRecord{cell.n,
                                                   cell.d_u,
                                                   unit.net_id,
                                                   q,
                                                   config.methods[m],
                                                   res.answer,
                                                   res.outcomes_traversed,
                                                   std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count(),
                                                   res.zero_reason};
        }
    }
    for (std::size_t q = 0; q < queries.size(); ++q) {
        const QueryRecord* first = &records[q * methods];
        for (std::size_t m = 1; m < methods; ++m) {
            if (records[q * methods + m].answer == first->answer) continue;
            std::ostringstream msg;
            msg << "methods disagree on n=" << cell.n << " d_U=" << cell.d_u << " net=" << unit.net_id << " (seed "
                << spec.seed << ") query=" << q << " o=" << queries[q].first.str() << " o'=" << queries[q].second.str()
                << ":";
            for (std::size_t k = 0; k < methods; ++k) {
                msg << ' ' << config.methods[k].label() << '=' << (records[q * methods + k].answer ? "true" : "false");
            }
            throw MethodDisagreement(msg.str());
        }
    }
    return records;
}

std::string format_double(double v)
{
    std::ostringstream out;
    out << std::setprecision(10) << v;
    return out.str();
}

} // namespace

ExperimentResult run_experiment(const ExperimentConfig& config)
{
    if (config.methods.empty()) throw std::invalid_argument("experiment needs at least one method");
    for (const auto& cell : config.grid) {
        if (cell.n == 0 || cell.d_u < 2) throw std::invalid_argument("grid cells need n >= 1 and d_U >= 2");
    }
    std::vector<Unit> units;
    for (std::size_t c = 0; c < config.grid.size(); ++c) {
        for (std::size_t k = 0; k < config.nets_per_cell; ++k) units.push_back({c, k});
    }
    std::vector<std::vector<QueryRecord>> parts(units.size());

    std::size_t threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, std::max<std::size_t>(units.size(), 1));
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        while (!failed) {
            const std::size_t i = next++;
            if (i >= units.size()) return;
            try {
                parts[i] = run_unit(config, units[i]);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                failed = true;
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (error) std::rethrow_exception(error);

    ExperimentResult result;
    for (auto& p : parts) {
        for (auto& r : p) result.records.push_back(std::move(r));
    }
    result.stats = aggregate(result.records, config.methods);
    return result;
}

std::vector<MethodStats> aggregate(const std::vector<QueryRecord>& records, const std::vector<MeasureSet>& methods)
{
    std::vector<std::pair<std::size_t, int>> cells;
    std::map<std::tuple<std::size_t, int, unsigned>, std::vector<const QueryRecord*>> groups;
    for (const auto& r : records) {
        const std::pair<std::size_t, int> cell{r.n, r.d_u};
        if (std::find(cells.begin(), cells.end(), cell) == cells.end()) cells.push_back(cell);
        groups[{r.n, r.d_u, r.method.bits()}].push_back(&r);
    }
    auto mean_se = [](const std::vector<double>& xs) {
        const double n = static_cast<double>(xs.size());
        const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
        if (xs.size() < 2) return std::make_pair(mean, 0.0);
        double ss = 0.0;
        for (double x : xs) ss += (x - mean) * (x - mean);
        return std::make_pair(mean, std::sqrt(ss / (n - 1.0)) / std::sqrt(n));
    };

    std::vector<MethodStats> out;
    for (const auto& [n, d_u] : cells) {
        for (const auto& m : methods) {
            const auto it = groups.find({n, d_u, m.bits()});
            if (it == groups.end()) continue;
            const auto& rs = it->second;
            std::vector<double> ot;
            std::vector<double> time;
            std::size_t zero = 0;
            std::size_t negative = 0;
            for (const auto* r : rs) {
                ot.push_back(static_cast<double>(r->outcomes_traversed));
                time.push_back(static_cast<double>(r->time_ns));
                zero += r->zero_reason.has_value();
                negative += !r->answer;
            }
            const auto [mean_ot, se_ot] = mean_se(ot);
            const auto [mean_t, se_t] = mean_se(time);
            const double count = static_cast<double>(rs.size());
            out.push_back({n, d_u, m, rs.size(), mean_ot, se_ot, mean_t, se_t, static_cast<double>(zero) / count,
                           static_cast<double>(negative) / count});
        }
    }
    return out;
}

double pooled_z_p(const std::vector<QueryRecord>& records, MeasureSet method)
{
    std::size_t count = 0;
    std::size_t zero = 0;
    for (const auto& r : records) {
        if (r.method != method) continue;
        ++count;
        zero += r.zero_reason.has_value();
    }
    return count ? static_cast<double>(zero) / static_cast<double>(count) : 0.0;
}

void write_raw_csv(std::ostream& out, const std::vector<QueryRecord>& records)
{
    out << "n,d_U,cpnet_id,query_id,method,answer,outcomes_traversed,time_ns,zero_reason\n";
    for (const auto& r : records) {
        out << r.n << ',' << r.d_u << ',' << r.cpnet_id << ',' << r.query_id << ',' << r.method.label() << ','
            << (r.answer ? "true" : "false") << ',' << r.outcomes_traversed << ',' << r.time_ns << ','
            << (r.zero_reason ? to_string(*r.zero_reason) : "") << '\n';
    }
}

void write_aggregate_csv(std::ostream& out, const std::vector<MethodStats>& stats)
{
    out << "n,d_U,method,mean_ot,se_ot,mean_time_ns,se_time_ns,z_p,prop_false\n";
    for (const auto& s : stats) {
        out << s.n << ',' << s.d_u << ',' << s.method.label() << ',' << format_double(s.mean_ot) << ','
            << format_double(s.se_ot) << ',' << format_double(s.mean_time_ns) << ',' << format_double(s.se_time_ns) << ','
            << format_double(s.z_p) << ',' << format_double(s.prop_false) << '\n';
    }
}

std::string manifest_json(const ExperimentConfig& config)
{
    nlohmann::ordered_json j;
    j["seed"] = config.seed;
    j["nets_per_cell"] = config.nets_per_cell;
    j["queries_per_net"] = config.queries_per_net;
    j["strategy"] = std::string(to_string(config.strategy));
    j["warm_up"] = config.warm_up;
    j["node_limit"] = config.node_limit;
    j["edge_density"] = config.edge_density ? nlohmann::ordered_json(*config.edge_density) : nlohmann::ordered_json("default: min(1, 4/(n-1))");
    auto& grid = j["grid"] = nlohmann::ordered_json::array();
    for (const auto& c : config.grid) {
        GenSpec spec;
        spec.n = c.n;
        spec.d_u = c.d_u;
        spec.edge_density = config.edge_density;
        grid.push_back({{"n", c.n}, {"d_U", c.d_u}, {"edge_density", spec.effective_edge_density()}});
    }
    auto& methods = j["methods"] = nlohmann::ordered_json::array();
    for (const auto& m : config.methods) methods.push_back(m.label());
    j["net_seed"] = "derive_seed(seed, n, d_U, cpnet_id)";
    j["query_seed"] = "derive_seed(net_seed, 0x71)";
    return j.dump(2) + "\n";
}

} // namespace cpnet
