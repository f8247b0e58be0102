#include "katzrank/dynkatz.hpp"

#include "katzrank/errors.hpp"

#include <omp.h>

#include <algorithm>
#include <string>

namespace katzrank {

namespace {

int thread_count(int requested) { return requested > 0 ? requested : omp_get_max_threads(); }

// α·Σ prev[x] over w's out-neighbors in E \ D merged with w's inserted
// targets, visited in ascending id order exactly like the static loop on the
// post-update adjacency.
double merged_level(const Graph &g, const std::vector<Arc> &insertions, node w,
                    const std::vector<double> &prev, double alpha) {
    auto out = g.out_neighbors(w);
    auto range = std::equal_range(insertions.begin(), insertions.end(), Arc{w, 0},
                                  [](const Arc &a, const Arc &b) { return a.source < b.source; });
    auto it = out.begin();
    auto jt = range.first;
    double sum = 0.0;
    while (it != out.end() || jt != range.second) {
        if (jt == range.second || (it != out.end() && *it < jt->target)) {
            sum += prev[*it++];
        } else {
            sum += prev[jt->target];
            ++jt;
        }
    }
    return alpha * sum;
}

bool is_symmetric_set(std::vector<Arc> arcs) {
    std::sort(arcs.begin(), arcs.end());
    for (const auto &a : arcs)
        if (!std::binary_search(arcs.begin(), arcs.end(), Arc{a.target, a.source}))
            return false;
    return true;
}

void resum_katz(KatzState &s, node v) {
    double sum = 0.0;
    for (std::size_t j = 1; j <= s.r; ++j)
        sum += s.levels[j][v];
    s.katz[v] = sum;
}

} // namespace

UpdateWorkspace make_workspace(const KatzState &state, const Graph &g, const EdgeBatch &batch,
                               double abort_fraction) {
    const std::size_t n = state.node_count();
    if (g.node_count() != n)
        throw ParameterError("graph does not match the state's node count");
    UpdateWorkspace ws;
    ws.abort_fraction = abort_fraction;
    ws.in_sources.assign(n, 0);
    ws.insertions = batch.insertions;
    ws.deletions = batch.deletions;
    std::sort(ws.insertions.begin(), ws.insertions.end());
    std::sort(ws.deletions.begin(), ws.deletions.end());

    std::vector<char> in_targets(n, 0);
    auto seed = [&](const Arc &a) {
        if (!ws.in_sources[a.source]) {
            ws.in_sources[a.source] = 1;
            ws.sources.push_back(a.source);
        }
        if (!in_targets[a.target]) {
            in_targets[a.target] = 1;
            ws.targets.push_back(a.target);
        }
    };
    for (const auto &a : ws.insertions)
        seed(a);
    for (const auto &a : ws.deletions)
        seed(a);
    std::sort(ws.sources.begin(), ws.sources.end());
    std::sort(ws.targets.begin(), ws.targets.end());
    ws.delta_visits = ws.sources.size();
    return ws;
}

bool bfs_abort_threshold(const KatzState &state, const UpdateWorkspace &ws, double fraction) {
    return static_cast<double>(ws.sources.size())
           > fraction * static_cast<double>(state.node_count());
}

void update_level(KatzState &s, UpdateWorkspace &ws, const Graph &g, std::size_t i,
                  LevelArithmetic arithmetic) {
    if (i == 0 || i > s.r)
        throw ParameterError("update_level: level " + std::to_string(i) + " outside 1.."
                             + std::to_string(s.r));
    const double alpha = s.alpha;
    const std::vector<double> &prev = s.levels[i - 1];
    std::vector<double> &cur = s.levels[i];

    if (!ws.full_mode && bfs_abort_threshold(s, ws, ws.abort_fraction)) {
        ws.full_mode = true;
        ws.abort_level = i;
    }
    if (ws.full_mode) {
        const auto count = static_cast<long long>(s.node_count());
#pragma omp parallel for schedule(static) num_threads(thread_count(s.threads))
        for (long long k = 0; k < count; ++k) {
            const auto v = static_cast<node>(k);
            cur[v] = merged_level(g, ws.insertions, v, prev, alpha);
        }
        if (i == s.r) {
#pragma omp parallel for schedule(static) num_threads(thread_count(s.threads))
            for (long long k = 0; k < count; ++k)
                resum_katz(s, static_cast<node>(k));
        }
        return;
    }

    // S currently holds every node whose level i−1 may have changed.
    const std::size_t changed_before = i == 1 ? 0 : ws.sources.size();
    if (i >= 2) {
        // The frontier is everything appended since the previous expansion;
        // the sources themselves are the frontier of level 2.
        for (std::size_t idx = ws.expanded; idx < changed_before; ++idx) {
            const node v = ws.sources[idx];
            for (node w : g.in_neighbors(v)) {
                if (!ws.in_sources[w]) {
                    ws.in_sources[w] = 1;
                    ws.sources.push_back(w);
                }
            }
        }
        ws.expanded = changed_before;
    }
    ws.delta_visits = ws.sources.size();

    if (arithmetic == LevelArithmetic::recompute) {
        for (node w : ws.sources)
            cur[w] = merged_level(g, ws.insertions, w, prev, alpha);
        if (i == s.r)
            for (node w : ws.sources)
                resum_katz(s, w);
        return;
    }

    // Delta arithmetic, in place: remember ŵ_i(S) before overwriting.
    std::unordered_map<node, double> saved;
    saved.reserve(ws.sources.size());
    for (node w : ws.sources)
        saved.emplace(w, cur[w]);

    auto old_prev = [&](node v) {
        auto it = ws.previous_old.find(v);
        return it == ws.previous_old.end() ? prev[v] : it->second;
    };
    for (std::size_t idx = 0; idx < changed_before; ++idx) {
        const node v = ws.sources[idx];
        const double change = prev[v] - old_prev(v);
        if (change == 0.0)
            continue;
        for (node w : g.in_neighbors(v))
            cur[w] += alpha * change;
    }
    for (const auto &a : ws.insertions)
        cur[a.source] += alpha * prev[a.target];
    for (const auto &a : ws.deletions)
        cur[a.source] -= alpha * old_prev(a.target);
    for (node w : ws.sources)
        s.katz[w] += cur[w] - saved[w];
    ws.previous_old = std::move(saved);
}

UpdateStats update_batch(KatzState &s, Graph &g, const EdgeBatch &batch,
                         const DynamicOptions &options) {
    if (!s.keep_all_levels)
        throw ParameterError("dynamic updates need a state built with keep_all_levels");
    if (g.node_count() != s.node_count())
        throw ParameterError("graph does not match the state's node count");
    g.validate_batch(batch);
    if (s.undirected && (!is_symmetric_set(batch.insertions) || !is_symmetric_set(batch.deletions)))
        throw PreconditionError("undirected state requires batches containing both arc directions");

    const std::size_t new_max_degree = g.max_out_degree_after(batch);
    try {
        check_alpha(s.alpha, new_max_degree);
    } catch (const ParameterError &e) {
        throw ParameterError(std::string("batch invalidates alpha (deg_max becomes ")
                             + std::to_string(new_max_degree) + "): " + e.what()
                             + "; re-initialize statically with a smaller alpha");
    }

    UpdateStats stats;
    stats.iterations_before = s.r;

    g.remove_arcs(batch.deletions);
    UpdateWorkspace ws = make_workspace(s, g, batch, options.abort_fraction);
    for (std::size_t i = 1; i <= s.r; ++i)
        update_level(s, ws, g, i, options.arithmetic);
    stats.levels_updated = s.r;
    stats.visited = ws.delta_visits;
    stats.targets = ws.targets.size();
    stats.abort_level = ws.abort_level;

    stats.gamma_changed = new_max_degree != s.max_out_degree;
    s.max_out_degree = new_max_degree;
    s.gamma = katz_gamma(s.alpha, new_max_degree);
    if (s.r > 0) {
        if (stats.gamma_changed || ws.full_mode) {
            for (node v = 0; v < s.node_count(); ++v)
                refresh_bounds(s, v);
        } else {
            for (node w : ws.sources)
                refresh_bounds(s, w);
        }
    }

    if (s.criterion.uses_active_set() && !s.active.empty()) {
        double min_lower = s.lower[s.active.front()];
        for (node x : s.active)
            min_lower = std::min(min_lower, s.lower[x]);
        const double threshold = min_lower - s.criterion.epsilon;
        for (node w = 0; w < s.node_count(); ++w) {
            if (!s.is_active[w] && s.upper[w] >= threshold) {
                s.is_active[w] = 1;
                s.active.push_back(w);
                ++stats.reactivated;
            }
        }
    }

    g.insert_arcs(batch.insertions);
    run(s, g);
    stats.iterations_after = s.r;
    return stats;
}

} // namespace katzrank
