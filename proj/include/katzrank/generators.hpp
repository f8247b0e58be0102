#pragma once

#include "katzrank/edge_list.hpp"
#include "katzrank/graph.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace katzrank::gen {

/// Undirected edge list, each edge once with source < target.
struct EdgeList {
    std::size_t node_count = 0;
    std::vector<Arc> edges;
};

EdgeList complete(std::size_t n);
/// Node 0 is the center.
EdgeList star(std::size_t n);
EdgeList path(std::size_t n);
/// Row-major ids, 4-neighborhood.
EdgeList grid(std::size_t rows, std::size_t cols);
EdgeList erdos_renyi(std::size_t n, double p, std::uint64_t seed);

struct RmatParams {
    unsigned scale = 16;
    std::size_t edge_factor = 8;
    double a = 0.57, b = 0.19, c = 0.19; // d = 1 - a - b - c
};

/// Recursive-matrix generator. Self-loops and duplicates are dropped.
EdgeList rmat(const RmatParams &params, std::uint64_t seed);

Graph build(const EdgeList &edges, Orientation mode = Orientation::undirected);

} // namespace katzrank::gen
