#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace katzrank {

using node = std::uint32_t;

struct Arc {
    node source;
    node target;

    friend auto operator<=>(const Arc &, const Arc &) = default;
};

/// One dynamic update: arcs to insert and arcs to delete, applied together.
struct EdgeBatch {
    std::vector<Arc> insertions;
    std::vector<Arc> deletions;

    bool empty() const noexcept { return insertions.empty() && deletions.empty(); }
    std::size_t size() const noexcept { return insertions.size() + deletions.size(); }
};

/// Swaps the roles of insertions and deletions (undoes a batch).
EdgeBatch inverse(const EdgeBatch &batch);

/**
 * Directed graph over a fixed node universe [0, node_count).
 *
 * Arcs form a set; self-loops are allowed. Both the forward and the reverse
 * adjacency are kept sorted by node id so neighbor iteration order (and with
 * it every floating-point sum over neighbors) is deterministic.
 *
 * Concurrent const access is safe; mutation needs exclusive access.
 */
class Graph {
public:
    Graph() = default;
    explicit Graph(std::size_t node_count);

    std::size_t node_count() const noexcept { return out_.size(); }
    std::size_t arc_count() const noexcept { return arc_count_; }
    std::size_t self_loop_count() const noexcept { return self_loops_; }

    bool has_arc(node source, node target) const;

    /// Inserts source→target; returns false if the arc already existed.
    bool add_arc(node source, node target);
    /// Inserts both directions of an undirected edge.
    void add_edge(node u, node v);
    /// Removes source→target; returns false if the arc was absent.
    bool remove_arc(node source, node target);

    std::span<const node> out_neighbors(node v) const;
    std::span<const node> in_neighbors(node v) const;
    std::size_t out_degree(node v) const;
    std::size_t in_degree(node v) const;
    std::size_t max_out_degree() const noexcept { return max_out_degree_; }

    /// True iff (u,v) ∈ E ⇔ (v,u) ∈ E for all pairs.
    bool is_symmetric() const;

    /// Throws PreconditionError (or RangeError) unless the batch can be applied.
    void validate_batch(const EdgeBatch &batch) const;
    /// Maximum out-degree the graph would have after applying a valid batch.
    std::size_t max_out_degree_after(const EdgeBatch &batch) const;
    /// E ← (E \ D) ∪ I, after validation.
    void apply_batch(const EdgeBatch &batch);

    /// Raw halves of apply_batch. No cross-checking between I and D.
    void remove_arcs(std::span<const Arc> arcs);
    void insert_arcs(std::span<const Arc> arcs);

    std::vector<Arc> arcs() const;

private:
    void check_node(node v) const;
    void bump_degree(node v, bool increase);

    std::vector<std::vector<node>> out_;
    std::vector<std::vector<node>> in_;
    // degree_histogram_[d] = number of nodes with out-degree d
    std::vector<std::size_t> degree_histogram_;
    std::size_t max_out_degree_ = 0;
    std::size_t arc_count_ = 0;
    std::size_t self_loops_ = 0;
};

} // namespace katzrank
