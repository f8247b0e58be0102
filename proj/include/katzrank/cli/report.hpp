#pragma once

#include "katzrank/graph.hpp"

#include <json.hpp>

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace katzrank::cli {

struct NodeRow {
    node id = 0;
    double lower = 0.0;
    double upper = 0.0;
    std::size_t rank = 0; // 1-based

    friend bool operator==(const NodeRow &, const NodeRow &) = default;
};

struct RunParameters {
    std::string criterion;
    double alpha = 0.0;
    double epsilon = 0.0;
    std::optional<std::size_t> k;
    std::optional<std::pair<node, node>> pair;
    bool undirected = false;
    int threads = 0;

    friend bool operator==(const RunParameters &, const RunParameters &) = default;
};

struct GraphSummary {
    std::size_t nodes = 0;
    std::size_t arcs = 0;
    std::size_t max_out_degree = 0;
    std::size_t self_loops = 0;

    friend bool operator==(const GraphSummary &, const GraphSummary &) = default;
};

struct BatchSummary {
    std::size_t index = 0;
    std::size_t insertions = 0;
    std::size_t deletions = 0;
    std::size_t visited = 0;
    std::size_t targets = 0;
    std::size_t abort_level = 0;
    std::size_t reactivated = 0;
    std::size_t iterations_before = 0;
    std::optional<bool> verified;

    friend bool operator==(const BatchSummary &, const BatchSummary &) = default;
};

/// One method run, serialized with a fixed field order.
struct RunReport {
    std::string method;
    RunParameters parameters;
    GraphSummary graph;
    std::size_t iterations = 0;
    double wall_time_seconds = 0.0;
    std::optional<double> separated_fraction;
    std::optional<double> residual;
    std::optional<double> agreement; // concordant-pair fraction vs. the bound ranking
    std::vector<node> ranking_prefix;
    std::vector<NodeRow> nodes;
    bool nodes_truncated = false;
    std::optional<BatchSummary> batch;

    friend bool operator==(const RunReport &, const RunReport &) = default;
};

nlohmann::ordered_json to_json(const RunReport &report);
RunReport report_from_json(const nlohmann::json &j);

/// JSON text with every float printed to 17 significant digits.
std::string emit_json(const nlohmann::ordered_json &j, int indent = 2);

/// node_id,lower,upper,rank
void write_csv(std::ostream &out, const std::vector<NodeRow> &rows);

} // namespace katzrank::cli
