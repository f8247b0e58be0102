#include "katzrank/edge_list.hpp"

#include "katzrank/errors.hpp"

#include <charconv>
#include <limits>
#include <string>
#include <string_view>

namespace katzrank {

namespace {

constexpr std::uint64_t max_node_id = std::numeric_limits<node>::max() - 1;

std::string_view trim(std::string_view s) {
    const char *ws = " \t\r\n";
    auto first = s.find_first_not_of(ws);
    if (first == std::string_view::npos)
        return {};
    auto last = s.find_last_not_of(ws);
    return s.substr(first, last - first + 1);
}

bool is_comment(std::string_view s) { return !s.empty() && (s[0] == '#' || s[0] == '%'); }

// Splits on spaces/tabs.
std::vector<std::string_view> tokens(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t'))
            ++i;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t')
            ++j;
        if (j > i)
            out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

std::uint64_t parse_id(std::string_view tok, std::size_t line) {
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec == std::errc::result_out_of_range)
        throw RangeError("line " + std::to_string(line) + ": node id " + std::string(tok)
                         + " overflows the node id type");
    if (ec != std::errc() || ptr != tok.data() + tok.size())
        throw ParseError(line, "expected a non-negative integer, got '" + std::string(tok) + "'");
    if (value > max_node_id)
        throw RangeError("line " + std::to_string(line) + ": node id " + std::string(tok)
                         + " overflows the node id type");
    return value;
}

} // namespace

Graph load_edge_list(std::istream &in, Orientation mode, LoadDiagnostics *diagnostics) {
    LoadDiagnostics diag;
    std::vector<Arc> edges;
    std::uint64_t declared = 0;
    std::uint64_t max_id = 0;
    bool any = false;
    bool first_content = true;

    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        auto s = trim(raw);
        if (s.empty() || is_comment(s))
            continue;
        auto tok = tokens(s);
        if (first_content && tok.size() == 2 && tok[0] == "NODES") {
            declared = parse_id(tok[1], line);
            diag.declared_node_count = true;
            first_content = false;
            continue;
        }
        first_content = false;
        if (tok.size() != 2)
            throw ParseError(line, "expected two node ids, got " + std::to_string(tok.size())
                                       + " fields");
        auto u = parse_id(tok[0], line);
        auto v = parse_id(tok[1], line);
        if (diag.declared_node_count && (u >= declared || v >= declared))
            throw RangeError("line " + std::to_string(line) + ": node id exceeds declared NODES "
                             + std::to_string(declared));
        max_id = std::max({max_id, u, v});
        any = true;
        edges.push_back({static_cast<node>(u), static_cast<node>(v)});
        ++diag.edge_lines;
    }
    if (in.bad())
        throw Error("read error while loading edge list");

    std::size_t n = diag.declared_node_count ? declared : (any ? max_id + 1 : 0);
    Graph g(n);
    for (const auto &e : edges) {
        bool fresh = g.add_arc(e.source, e.target);
        if (mode == Orientation::undirected)
            fresh = g.add_arc(e.target, e.source) || fresh;
        if (!fresh)
            ++diag.duplicate_lines;
    }
    diag.self_loops = g.self_loop_count();
    if (diagnostics)
        *diagnostics = diag;
    return g;
}

void write_edge_list(std::ostream &out, std::size_t node_count, const std::vector<Arc> &edges) {
    out << "NODES " << node_count << '\n';
    for (const auto &e : edges)
        out << e.source << ' ' << e.target << '\n';
}

std::vector<EdgeBatch> load_batches(std::istream &in, Orientation mode) {
    std::vector<EdgeBatch> batches;
    EdgeBatch current;
    auto flush = [&] {
        if (!current.empty())
            batches.push_back(std::move(current));
        current = {};
    };

    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        auto s = trim(raw);
        if (s.empty()) {
            flush();
            continue;
        }
        if (is_comment(s))
            continue;
        auto tok = tokens(s);
        if (tok.size() != 3 || (tok[0] != "+" && tok[0] != "-"))
            throw ParseError(line, "expected '+ u v' or '- u v'");
        auto u = static_cast<node>(parse_id(tok[1], line));
        auto v = static_cast<node>(parse_id(tok[2], line));
        auto &target = tok[0] == "+" ? current.insertions : current.deletions;
        target.push_back({u, v});
        if (mode == Orientation::undirected && u != v)
            target.push_back({v, u});
    }
    if (in.bad())
        throw Error("read error while loading batches");
    flush();
    return batches;
}

} // namespace katzrank
