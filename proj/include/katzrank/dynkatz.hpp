#pragma once

#include "katzrank/graph.hpp"
#include "katzrank/katz.hpp"

#include <cstddef>
#include <limits>
#include <unordered_map>
#include <vector>

namespace katzrank {

/// How update_level computes the new damped walk counts of affected nodes.
enum class LevelArithmetic {
    /// ŵ'_i(w) = α·Σ ŵ'_{i−1}(x) over w's post-update out-neighbors, summed in
    /// the same order as the static engine. Bit-identical to a static rerun.
    recompute,
    /// ŵ'_i(w) = ŵ_i(w) + α·(ŵ'_{i−1}(v) − ŵ_{i−1}(v)) per affected out-neighbor v,
    /// plus ±α terms for inserted/deleted arcs. Equal up to rounding.
    delta,
};

struct DynamicOptions {
    /// Switch to full-level recomputation once |S| > abort_fraction · n.
    double abort_fraction = 0.5;
    LevelArithmetic arithmetic = LevelArithmetic::recompute;
};

/**
 * Scratch state of one batch update.
 *
 * `sources` is the growing set S of nodes whose walk counts may change; at
 * level i it holds every node within reverse distance i−1 of a batch arc
 * source. `targets` is T, the heads of the batch arcs.
 */
struct UpdateWorkspace {
    std::vector<node> sources;
    std::vector<char> in_sources;
    std::vector<node> targets;

    /// Arcs of I sorted by (source, target) for merged neighbor scans.
    std::vector<Arc> insertions;
    std::vector<Arc> deletions;

    /// ŵ_{i−1} before overwrite, for nodes of S (delta arithmetic only).
    std::unordered_map<node, double> previous_old;

    double abort_fraction = 0.5;
    std::size_t expanded = 0; // S[0..expanded) already contributed their in-neighbors
    bool full_mode = false;
    std::size_t abort_level = 0; // level at which full mode began, 0 = never
    std::size_t delta_visits = 0; // |S| when the delta phase ended
};

struct UpdateStats {
    std::size_t levels_updated = 0;
    std::size_t visited = 0;        // |S| at the end of the delta phase
    std::size_t targets = 0;        // |T|
    std::size_t abort_level = 0;    // 0 when the BFS never aborted
    std::size_t reactivated = 0;    // nodes returned to the active set
    std::size_t iterations_before = 0;
    std::size_t iterations_after = 0;
    bool gamma_changed = false;
};

/// Seeds S and T from the batch. `g` must already reflect E \ D.
UpdateWorkspace make_workspace(const KatzState &state, const Graph &g, const EdgeBatch &batch,
                               double abort_fraction = 0.5);

/// True when |S| > θ·n; the caller then recomputes whole levels.
bool bfs_abort_threshold(const KatzState &state, const UpdateWorkspace &ws, double fraction);

/**
 * Recomputes level i for the nodes of S (growing S by one reverse-BFS step
 * first when i ≥ 2), or for every node once the workspace is in full mode.
 * Full mode starts the first time bfs_abort_threshold fires and then holds
 * for all remaining levels.
 * Levels 1..i−1 must already be updated and g must reflect E \ D.
 * katz_r is corrected for every touched node.
 */
void update_level(KatzState &state, UpdateWorkspace &ws, const Graph &g, std::size_t i,
                  LevelArithmetic arithmetic = LevelArithmetic::recompute);

/**
 * Applies a batch to both the graph and a converged static state.
 *
 * Deletions are removed first, levels 1..r are repaired along a reverse BFS,
 * bounds are recomputed, nodes are reactivated under ranking/top-k, the
 * insertions are added and static iterations resume until the criterion
 * holds again. Throws ParameterError, before touching anything, if the batch
 * would raise deg_max to the point where α ≥ 1/deg_max.
 */
UpdateStats update_batch(KatzState &state, Graph &g, const EdgeBatch &batch,
                         const DynamicOptions &options = {});

} // namespace katzrank
