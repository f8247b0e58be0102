#include "katzrank/generators.hpp"

#include "katzrank/errors.hpp"

#include <algorithm>
#include <random>

namespace katzrank::gen {

namespace {

// Portable uniform [0,1) from the raw engine output; the std distributions
// are not bit-reproducible across standard libraries.
double uniform01(std::mt19937_64 &rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

void canonicalize(EdgeList &list) {
    for (auto &e : list.edges)
        if (e.source > e.target)
            std::swap(e.source, e.target);
    std::sort(list.edges.begin(), list.edges.end());
    list.edges.erase(std::unique(list.edges.begin(), list.edges.end()), list.edges.end());
}

} // namespace

EdgeList complete(std::size_t n) {
    EdgeList out{n, {}};
    for (node u = 0; u < n; ++u)
        for (node v = u + 1; v < n; ++v)
            out.edges.push_back({u, v});
    return out;
}

EdgeList star(std::size_t n) {
    EdgeList out{n, {}};
    for (node v = 1; v < n; ++v)
        out.edges.push_back({0, v});
    return out;
}

EdgeList path(std::size_t n) {
    EdgeList out{n, {}};
    for (node v = 1; v < n; ++v)
        out.edges.push_back({v - 1, v});
    return out;
}

EdgeList grid(std::size_t rows, std::size_t cols) {
    EdgeList out{rows * cols, {}};
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            auto id = static_cast<node>(r * cols + c);
            if (c + 1 < cols)
                out.edges.push_back({id, id + 1});
            if (r + 1 < rows)
                out.edges.push_back({id, static_cast<node>(id + cols)});
        }
    }
    return out;
}

EdgeList erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
    if (p < 0.0 || p > 1.0)
        throw ParameterError("edge probability must lie in [0,1]");
    std::mt19937_64 rng(seed);
    EdgeList out{n, {}};
    for (node u = 0; u < n; ++u)
        for (node v = u + 1; v < n; ++v)
            if (uniform01(rng) < p)
                out.edges.push_back({u, v});
    return out;
}

EdgeList rmat(const RmatParams &params, std::uint64_t seed) {
    if (params.scale == 0 || params.scale > 31)
        throw ParameterError("rmat scale must lie in [1,31]");
    if (params.a < 0 || params.b < 0 || params.c < 0 || params.a + params.b + params.c > 1.0)
        throw ParameterError("rmat probabilities must be non-negative and sum to at most 1");
    std::mt19937_64 rng(seed);
    const std::size_t n = std::size_t{1} << params.scale;
    const std::size_t m = params.edge_factor * n;
    const double ab = params.a + params.b;
    const double abc = ab + params.c;

    EdgeList out{n, {}};
    out.edges.reserve(m);
    for (std::size_t e = 0; e < m; ++e) {
        node u = 0, v = 0;
        for (unsigned bit = 0; bit < params.scale; ++bit) {
            double x = uniform01(rng);
            u <<= 1;
            v <<= 1;
            if (x < params.a) {
            } else if (x < ab) {
                v |= 1;
            } else if (x < abc) {
                u |= 1;
            } else {
                u |= 1;
                v |= 1;
            }
        }
        if (u != v)
            out.edges.push_back({u, v});
    }
    canonicalize(out);
    return out;
}

Graph build(const EdgeList &edges, Orientation mode) {
    Graph g(edges.node_count);
    for (const auto &e : edges.edges) {
        if (mode == Orientation::undirected)
            g.add_edge(e.source, e.target);
        else
            g.add_arc(e.source, e.target);
    }
    return g;
}

} // namespace katzrank::gen
