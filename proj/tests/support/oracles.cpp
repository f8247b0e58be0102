#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace katzrank::testing {

double enumerate_walks(const Graph &g, node v, unsigned length) {
    if (length == 0)
        return 1.0;
    double total = 0.0;
    for (node u : g.out_neighbors(v))
        total += enumerate_walks(g, u, length - 1);
    return total;
}

std::vector<std::vector<double>> damped_levels_by_powers(const Graph &g, double alpha, unsigned r) {
    const std::size_t n = g.node_count();
    std::vector<double> adj(n * n, 0.0);
    for (const auto &a : g.arcs())
        adj[a.source * n + a.target] = 1.0;
    // power = (αA)^i, starting from the identity
    std::vector<double> power(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        power[i * n + i] = 1.0;
    std::vector<std::vector<double>> levels;
    std::vector<double> next(n * n);
    for (unsigned level = 0; level <= r; ++level) {
        std::vector<double> sums(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                sums[i] += power[i * n + j];
        levels.push_back(std::move(sums));
        if (level == r)
            break;
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) {
                const double p = power[i * n + k];
                if (p == 0.0)
                    continue;
                for (std::size_t j = 0; j < n; ++j)
                    next[i * n + j] += p * alpha * adj[k * n + j];
            }
        power.swap(next);
    }
    return levels;
}

std::vector<double> truncated_katz_by_powers(const Graph &g, double alpha, unsigned r) {
    auto levels = damped_levels_by_powers(g, alpha, r);
    std::vector<double> out(g.node_count(), 0.0);
    for (unsigned i = 1; i <= r; ++i)
        for (std::size_t v = 0; v < out.size(); ++v)
            out[v] += levels[i][v];
    return out;
}

bool close_rel(double a, double b, double rel) {
    return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

bool close_abs(double a, double b, double abs) { return std::abs(a - b) <= abs; }

double uniform(std::mt19937_64 &rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t uniform_index(std::mt19937_64 &rng, std::size_t bound) {
    return static_cast<std::size_t>(uniform(rng) * static_cast<double>(bound));
}

Graph random_digraph(std::size_t n, double p, std::mt19937_64 &rng, bool self_loops) {
    Graph g(n);
    for (node u = 0; u < n; ++u)
        for (node v = 0; v < n; ++v)
            if ((u != v || self_loops) && uniform(rng) < p)
                g.add_arc(u, v);
    return g;
}

Graph random_undirected(std::size_t n, double p, std::mt19937_64 &rng) {
    Graph g(n);
    for (node u = 0; u < n; ++u)
        for (node v = u + 1; v < n; ++v)
            if (uniform(rng) < p)
                g.add_edge(u, v);
    return g;
}

EdgeBatch random_batch(const Graph &g, std::size_t max_changes, bool undirected,
                       std::mt19937_64 &rng, double insert_share) {
    const std::size_t n = g.node_count();
    std::vector<Arc> existing;
    for (const auto &a : g.arcs())
        if (!undirected || a.source < a.target)
            existing.push_back(a);
    const std::size_t changes = 1 + uniform_index(rng, max_changes);
    std::set<Arc> used;
    EdgeBatch batch;
    auto push = [&](std::vector<Arc> &into, node u, node v) {
        into.push_back({u, v});
        if (undirected)
            into.push_back({v, u});
    };
    for (std::size_t c = 0, attempts = 0; c < changes && attempts < 100 * max_changes; ++attempts) {
        if (uniform(rng) < insert_share || existing.empty()) {
            node u = static_cast<node>(uniform_index(rng, n));
            node v = static_cast<node>(uniform_index(rng, n));
            if (u == v || g.has_arc(u, v))
                continue;
            if (undirected && u > v)
                std::swap(u, v);
            if (!used.insert({u, v}).second)
                continue;
            push(batch.insertions, u, v);
        } else {
            const Arc a = existing[uniform_index(rng, existing.size())];
            if (!used.insert(a).second)
                continue;
            push(batch.deletions, a.source, a.target);
        }
        ++c;
    }
    return batch;
}

} // namespace katzrank::testing
