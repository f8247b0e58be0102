#pragma once

#include "katzrank/graph.hpp"

#include <cstddef>
#include <istream>
#include <ostream>
#include <vector>

namespace katzrank {

enum class Orientation { directed, undirected };

struct LoadDiagnostics {
    std::size_t edge_lines = 0;
    std::size_t duplicate_lines = 0;
    std::size_t self_loops = 0;
    bool declared_node_count = false;
};

/**
 * Reads a SNAP/KONECT-style edge list.
 *
 * Lines starting with '#' or '%' are comments. An optional first line
 * "NODES <n>" fixes the node count; otherwise it is 1 + the largest id.
 * In undirected mode every line u v stores the arcs (u,v) and (v,u).
 */
Graph load_edge_list(std::istream &in, Orientation mode, LoadDiagnostics *diagnostics = nullptr);

/// Writes "NODES n" followed by one "u v" line per edge.
void write_edge_list(std::ostream &out, std::size_t node_count, const std::vector<Arc> &edges);

/**
 * Batch files: "+ u v" inserts, "- u v" deletes; blank lines separate
 * batches. In undirected mode each line carries both arc directions.
 */
std::vector<EdgeBatch> load_batches(std::istream &in, Orientation mode);

} // namespace katzrank
