#include "cpnet/model.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace cpnet {

namespace {

struct Token {
    std::string_view text;
    std::size_t column; // 1-based
};

struct Line {
    std::size_t number;
    std::string_view text;
};

std::vector<Token> split_ws(std::string_view text, std::size_t base_column = 1)
{
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && (text[i] == ' ' || text[i] == '\t' || text[i] == '\r')) ++i;
        const std::size_t start = i;
        while (i < text.size() && text[i] != ' ' && text[i] != '\t' && text[i] != '\r') ++i;
        if (i > start) out.push_back({text.substr(start, i - start), base_column + start});
    }
    return out;
}

std::vector<Token> split_commas(std::string_view text, std::size_t base_column)
{
    std::vector<Token> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = text.find(',', start);
        const std::size_t end = comma == std::string_view::npos ? text.size() : comma;
        std::size_t a = start;
        std::size_t b = end;
        while (a < b && (text[a] == ' ' || text[a] == '\t')) ++a;
        while (b > a && (text[b - 1] == ' ' || text[b - 1] == '\t' || text[b - 1] == '\r')) --b;
        out.push_back({text.substr(a, b - a), base_column + a});
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

int parse_int(const Line& line, const Token& tok, int min_value)
{
    int value = 0;
    auto [end, ec] = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), value);
    if (tok.text.empty() || ec != std::errc() || end != tok.text.data() + tok.text.size()) {
        throw SyntaxError(line.number, tok.column, "expected an integer, found '" + std::string(tok.text) + "'");
    }
    if (value < min_value) {
        throw SyntaxError(line.number, tok.column, "value " + std::to_string(value) + " must be >= " + std::to_string(min_value));
    }
    return value;
}

std::vector<Line> meaningful_lines(std::string_view text)
{
    std::vector<Line> lines;
    std::size_t number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        ++number;
        if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
        if (!split_ws(raw).empty()) lines.push_back({number, raw});
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    return lines;
}

} // namespace

CPNet parse_cpnet(std::string_view text)
{
    const auto lines = meaningful_lines(text);
    std::size_t li = 0;
    auto expect_line = [&](const char* what) -> const Line& {
        if (li >= lines.size()) {
            const std::size_t last = lines.empty() ? 1 : lines.back().number + 1;
            throw SyntaxError(last, 1, std::string("unexpected end of input, expected ") + what);
        }
        return lines[li++];
    };

    const Line& header = expect_line("'cpnet <n>'");
    auto htoks = split_ws(header.text);
    if (htoks[0].text != "cpnet") throw SyntaxError(header.number, htoks[0].column, "expected 'cpnet'");
    if (htoks.size() != 2) throw SyntaxError(header.number, htoks[0].column, "expected 'cpnet <n>'");
    const int n = parse_int(header, htoks[1], 1);

    const Line& dom_line = expect_line("'domains ...'");
    auto dtoks = split_ws(dom_line.text);
    if (dtoks[0].text != "domains") throw SyntaxError(dom_line.number, dtoks[0].column, "expected 'domains'");
    if (dtoks.size() != static_cast<std::size_t>(n) + 1) {
        throw SyntaxError(dom_line.number, dtoks[0].column,
                          "expected " + std::to_string(n) + " domain sizes, found " + std::to_string(dtoks.size() - 1));
    }
    std::vector<int> domains;
    for (std::size_t k = 1; k < dtoks.size(); ++k) domains.push_back(parse_int(dom_line, dtoks[k], 2));

    CPNet::Adjacency adjacency(n, std::vector<std::uint8_t>(n, 0));
    for (int i = 0; i < n; ++i) {
        const Line& row = expect_line("an adjacency row");
        auto toks = split_ws(row.text);
        if (toks.size() != static_cast<std::size_t>(n)) {
            throw SyntaxError(row.number, toks[0].column, "adjacency row needs " + std::to_string(n) + " entries");
        }
        for (int j = 0; j < n; ++j) {
            if (toks[j].text != "0" && toks[j].text != "1") throw SyntaxError(row.number, toks[j].column, "adjacency entries must be 0 or 1");
            adjacency[i][j] = toks[j].text == "1";
        }
    }

    std::vector<std::vector<std::size_t>> parents(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (adjacency[i][j]) parents[j].push_back(static_cast<std::size_t>(i));
        }
    }

    std::vector<std::vector<Positions>> cpts(n);
    for (int var = 0; var < n; ++var) {
        const Line& head = expect_line("'cpt <i>'");
        auto toks = split_ws(head.text);
        if (toks[0].text != "cpt" || toks.size() != 2) throw SyntaxError(head.number, toks[0].column, "expected 'cpt " + std::to_string(var + 1) + "'");
        if (parse_int(head, toks[1], 1) != var + 1) {
            throw SyntaxError(head.number, toks[1].column, "CPT blocks must appear in variable order; expected " + std::to_string(var + 1));
        }

        std::size_t rows = 0;
        try {
            rows = expected_row_count(domains, adjacency, var);
        } catch (const std::invalid_argument& e) {
            throw SyntaxError(head.number, 1, e.what());
        }
        std::vector<std::size_t> strides(parents[var].size(), 1);
        for (std::size_t k = strides.size(); k-- > 1;) strides[k - 1] = strides[k] * domains[parents[var][k]];
        cpts[var].assign(rows, Positions{});

        while (li < lines.size()) {
            const Line& line = lines[li];
            const auto first = split_ws(line.text);
            if (first[0].text == "cpt") break;
            ++li;
            const std::size_t colon = line.text.find(':');
            if (colon == std::string_view::npos) throw SyntaxError(line.number, first[0].column, "expected '<parents> : <positions>'");

            const auto lhs_tokens = split_ws(line.text.substr(0, colon));
            std::size_t row_index = 0;
            if (parents[var].empty()) {
                if (lhs_tokens.size() != 1 || lhs_tokens[0].text != "-") {
                    throw SyntaxError(line.number, lhs_tokens.empty() ? 1 : lhs_tokens[0].column, "variable has no parents; use '-' before ':'");
                }
            } else {
                const auto values = split_commas(line.text.substr(0, colon), 1);
                if (values.size() != parents[var].size()) {
                    throw SyntaxError(line.number, values[0].column,
                                      "expected " + std::to_string(parents[var].size()) + " parent values, found " +
                                          std::to_string(values.size()));
                }
                for (std::size_t k = 0; k < values.size(); ++k) {
                    const int v = parse_int(line, values[k], 1);
                    if (v > domains[parents[var][k]]) {
                        throw SyntaxError(line.number, values[k].column,
                                          "value " + std::to_string(v) + " out of domain of variable " +
                                              std::to_string(parents[var][k] + 1));
                    }
                    row_index += static_cast<std::size_t>(v - 1) * strides[k];
                }
            }

            const auto pos_tokens = split_commas(line.text.substr(colon + 1), colon + 2);
            Positions positions;
            for (const auto& tok : pos_tokens) positions.push_back(parse_int(line, tok, 1));
            if (positions.size() != static_cast<std::size_t>(domains[var])) {
                throw SyntaxError(line.number, pos_tokens[0].column,
                                  "expected " + std::to_string(domains[var]) + " positions, found " + std::to_string(positions.size()));
            }
            if (!cpts[var][row_index].empty()) throw SyntaxError(line.number, first[0].column, "duplicate CPT row");
            cpts[var][row_index] = std::move(positions);
        }
    }
    if (li < lines.size()) {
        throw SyntaxError(lines[li].number, 1, "unexpected content after the last CPT");
    }
    return CPNet(std::move(domains), std::move(adjacency), std::move(cpts));
}

std::string serialize(const CPNet& net)
{
    std::ostringstream out;
    out << "cpnet " << net.size() << "\ndomains";
    for (int d : net.domain_sizes()) out << ' ' << d;
    out << '\n';
    for (std::size_t i = 0; i < net.size(); ++i) {
        for (std::size_t j = 0; j < net.size(); ++j) out << (j ? " " : "") << (net.has_edge(i, j) ? 1 : 0);
        out << '\n';
    }
    for (std::size_t var = 0; var < net.size(); ++var) {
        out << "cpt " << var + 1 << '\n';
        for (std::size_t r = 0; r < net.row_count(var); ++r) {
            const auto& row = net.row(var, r);
            if (row.empty()) continue;
            const auto u = net.row_assignment(var, r);
            if (u.empty()) out << '-';
            for (std::size_t k = 0; k < u.size(); ++k) out << (k ? "," : "") << u[k];
            out << " : ";
            for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << row[k];
            out << '\n';
        }
    }
    return out.str();
}

CPNet read_cpnet_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_cpnet(buffer.str());
}

} // namespace cpnet
