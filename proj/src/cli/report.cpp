#include "katzrank/cli/report.hpp"

#include <cmath>
#include <cstdio>

namespace katzrank::cli {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

template <typename T>
ordered_json optional_value(const std::optional<T> &v) {
    return v ? ordered_json(*v) : ordered_json(nullptr);
}

template <typename T>
std::optional<T> optional_from(const json &j, const char *key) {
    if (!j.contains(key) || j.at(key).is_null())
        return std::nullopt;
    return j.at(key).get<T>();
}

std::string format_double(double x) {
    if (!std::isfinite(x))
        return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void emit(const ordered_json &j, std::string &out, int indent, int depth) {
    auto newline = [&](int d) {
        if (indent < 0)
            return;
        out += '\n';
        out.append(static_cast<std::size_t>(indent * d), ' ');
    };
    switch (j.type()) {
    case json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += '{';
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first)
                out += ',';
            first = false;
            newline(depth + 1);
            out += json(it.key()).dump();
            out += indent < 0 ? ":" : ": ";
            emit(it.value(), out, indent, depth + 1);
        }
        newline(depth);
        out += '}';
        return;
    }
    case json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            return;
        }
        out += '[';
        bool first = true;
        for (const auto &item : j) {
            if (!first)
                out += ',';
            first = false;
            newline(depth + 1);
            emit(item, out, indent, depth + 1);
        }
        newline(depth);
        out += ']';
        return;
    }
    case json::value_t::number_float:
        out += format_double(j.get<double>());
        return;
    default:
        out += j.dump();
        return;
    }
}

} // namespace

ordered_json to_json(const RunReport &r) {
    ordered_json params;
    params["criterion"] = r.parameters.criterion;
    params["alpha"] = r.parameters.alpha;
    params["epsilon"] = r.parameters.epsilon;
    params["k"] = optional_value(r.parameters.k);
    if (r.parameters.pair)
        params["pair"] = ordered_json::array({r.parameters.pair->first, r.parameters.pair->second});
    else
        params["pair"] = nullptr;
    params["undirected"] = r.parameters.undirected;
    params["threads"] = r.parameters.threads;

    ordered_json graph;
    graph["nodes"] = r.graph.nodes;
    graph["arcs"] = r.graph.arcs;
    graph["max_out_degree"] = r.graph.max_out_degree;
    graph["self_loops"] = r.graph.self_loops;

    ordered_json j;
    j["method"] = r.method;
    j["parameters"] = std::move(params);
    j["graph"] = std::move(graph);
    j["iterations"] = r.iterations;
    j["wall_time_seconds"] = r.wall_time_seconds;
    j["separated_fraction"] = optional_value(r.separated_fraction);
    j["residual"] = optional_value(r.residual);
    j["agreement"] = optional_value(r.agreement);
    j["ranking_prefix"] = r.ranking_prefix;

    ordered_json rows = ordered_json::array();
    for (const auto &row : r.nodes) {
        ordered_json item;
        item["node_id"] = row.id;
        item["lower"] = row.lower;
        item["upper"] = row.upper;
        item["rank"] = row.rank;
        rows.push_back(std::move(item));
    }
    j["nodes"] = std::move(rows);
    j["nodes_truncated"] = r.nodes_truncated;

    if (r.batch) {
        const auto &b = *r.batch;
        ordered_json batch;
        batch["index"] = b.index;
        batch["insertions"] = b.insertions;
        batch["deletions"] = b.deletions;
        batch["visited"] = b.visited;
        batch["targets"] = b.targets;
        batch["abort_level"] = b.abort_level;
        batch["reactivated"] = b.reactivated;
        batch["iterations_before"] = b.iterations_before;
        batch["verified"] = optional_value(b.verified);
        j["batch"] = std::move(batch);
    } else {
        j["batch"] = nullptr;
    }
    return j;
}

RunReport report_from_json(const json &j) {
    RunReport r;
    r.method = j.at("method").get<std::string>();
    const auto &p = j.at("parameters");
    r.parameters.criterion = p.at("criterion").get<std::string>();
    r.parameters.alpha = p.at("alpha").get<double>();
    r.parameters.epsilon = p.at("epsilon").get<double>();
    r.parameters.k = optional_from<std::size_t>(p, "k");
    if (p.contains("pair") && !p.at("pair").is_null())
        r.parameters.pair = std::pair<node, node>{p.at("pair").at(0).get<node>(),
                                                  p.at("pair").at(1).get<node>()};
    r.parameters.undirected = p.at("undirected").get<bool>();
    r.parameters.threads = p.at("threads").get<int>();

    const auto &g = j.at("graph");
    r.graph.nodes = g.at("nodes").get<std::size_t>();
    r.graph.arcs = g.at("arcs").get<std::size_t>();
    r.graph.max_out_degree = g.at("max_out_degree").get<std::size_t>();
    r.graph.self_loops = g.at("self_loops").get<std::size_t>();

    r.iterations = j.at("iterations").get<std::size_t>();
    r.wall_time_seconds = j.at("wall_time_seconds").get<double>();
    r.separated_fraction = optional_from<double>(j, "separated_fraction");
    r.residual = optional_from<double>(j, "residual");
    r.agreement = optional_from<double>(j, "agreement");
    r.ranking_prefix = j.at("ranking_prefix").get<std::vector<node>>();
    for (const auto &item : j.at("nodes")) {
        r.nodes.push_back({item.at("node_id").get<node>(), item.at("lower").get<double>(),
                           item.at("upper").get<double>(), item.at("rank").get<std::size_t>()});
    }
    r.nodes_truncated = j.at("nodes_truncated").get<bool>();
    if (j.contains("batch") && !j.at("batch").is_null()) {
        const auto &b = j.at("batch");
        BatchSummary s;
        s.index = b.at("index").get<std::size_t>();
        s.insertions = b.at("insertions").get<std::size_t>();
        s.deletions = b.at("deletions").get<std::size_t>();
        s.visited = b.at("visited").get<std::size_t>();
        s.targets = b.at("targets").get<std::size_t>();
        s.abort_level = b.at("abort_level").get<std::size_t>();
        s.reactivated = b.at("reactivated").get<std::size_t>();
        s.iterations_before = b.at("iterations_before").get<std::size_t>();
        s.verified = optional_from<bool>(b, "verified");
        r.batch = s;
    }
    return r;
}

std::string emit_json(const ordered_json &j, int indent) {
    std::string out;
    emit(j, out, indent, 0);
    return out;
}

void write_csv(std::ostream &out, const std::vector<NodeRow> &rows) {
    out << "node_id,lower,upper,rank\n";
    for (const auto &row : rows)
        out << row.id << ',' << format_double(row.lower) << ',' << format_double(row.upper) << ','
            << row.rank << '\n';
}

} // namespace katzrank::cli
