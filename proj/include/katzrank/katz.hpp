#pragma once

#include "katzrank/graph.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace katzrank {

/// Stopping rule for the bound iteration.
struct Criterion {
    enum class Kind { ranking, topk, score, pair };

    Kind kind = Kind::ranking;
    double epsilon = 1e-6;
    std::size_t k = 0; // topk only
    node u = 0, v = 0; // pair only

    static Criterion ranking(double epsilon = 1e-6) { return {Kind::ranking, epsilon}; }
    static Criterion topk(std::size_t k, double epsilon = 1e-6) { return {Kind::topk, epsilon, k}; }
    static Criterion score(double epsilon = 1e-6) { return {Kind::score, epsilon}; }
    static Criterion pair(node u, node v, double epsilon = 1e-6) {
        return {Kind::pair, epsilon, 0, u, v};
    }

    /// Ranking and top-k maintain an active set; score and pair do not.
    bool uses_active_set() const noexcept { return kind == Kind::ranking || kind == Kind::topk; }

    friend bool operator==(const Criterion &, const Criterion &) = default;
};

std::string to_string(Criterion::Kind kind);
Criterion::Kind criterion_kind_from_string(const std::string &name);

struct KatzOptions {
    /// Defaults to 1/(1 + max_out_degree), or 1/2 for edgeless graphs.
    std::optional<double> alpha;
    /// Lower bounds gain the α·ŵ_r walk-extension term. Requires a symmetric graph.
    bool undirected = false;
    /// Keep ŵ_1..ŵ_r (needed for dynamic updates) or only the last two levels.
    bool keep_all_levels = true;
    /// 0 selects the default cap, see default_iteration_cap().
    std::size_t max_iterations = 0;
    /// Worker threads for the per-node loops; 0 = OpenMP default.
    int threads = 0;
};

/**
 * Bound iteration state after r rounds.
 *
 * Walk counts are stored damped: levels[i][v] = α^i · ω_i(v), where ω_i(v)
 * is the number of length-i walks leaving v. Raw counts overflow quickly;
 * the damped values stay below n · (α·deg_max)^i. With ŵ = levels[r]:
 *
 *   katz[v]  = Σ_{i=1..r} ŵ_i(v)
 *   lower[v] = katz[v]                (directed)
 *            = katz[v] + α·ŵ_r(v)     (undirected)
 *   upper[v] = katz[v] + α·γ·ŵ_r(v),  γ = deg_max / (1 − α·deg_max)
 *
 * `active` is the candidate set M of the ranking/top-k criteria. Nodes leave
 * it permanently during a static run because bounds are monotone in r.
 */
struct KatzState {
    Criterion criterion;
    double alpha = 0.0;
    double gamma = 0.0;
    std::size_t max_out_degree = 0;
    bool undirected = false;
    bool keep_all_levels = true;
    std::size_t max_iterations = 0;
    int threads = 0;

    std::size_t r = 0;
    std::vector<std::vector<double>> levels; // levels[0] ≡ 1; dropped levels are empty
    std::vector<double> katz;
    std::vector<double> lower;
    std::vector<double> upper;

    std::vector<node> active;
    std::vector<char> is_active;

    std::size_t node_count() const noexcept { return katz.size(); }
    /// Damped walk counts of level i; throws if the level was not retained.
    const std::vector<double> &level(std::size_t i) const;
    /// Largest upper − lower over all nodes.
    double max_gap() const;
};

struct RankedNode {
    node id;
    double lower;
    double upper;

    friend bool operator==(const RankedNode &, const RankedNode &) = default;
};

struct RankingResult {
    /// All nodes by descending lower bound, ties by ascending id.
    std::vector<RankedNode> order;
    std::size_t iterations = 0;
    Criterion criterion;
    /// Length of the prefix whose order the criterion certifies (k, n, or 0).
    std::size_t certified = 0;
};

/// γ = d / (1 − α·d); 0 for d = 0.
double katz_gamma(double alpha, std::size_t max_out_degree);
double default_alpha(std::size_t max_out_degree);
/// Throws ParameterError unless 0 < α < 1/d (or 0 < α < 1 when d = 0).
void check_alpha(double alpha, std::size_t max_out_degree);
/// Ten times the worst-case round count for the bound gap to drop below ε.
std::size_t default_iteration_cap(double alpha, std::size_t max_out_degree, double epsilon);

KatzState init(const Graph &g, const Criterion &criterion, const KatzOptions &options = {});

/// One round of the walk recurrence for every node, active or not.
void iterate_once(KatzState &state, const Graph &g);

/// ℓ_r(w) > u_r(v) − ε. Callers pass w with the larger lower bound.
bool epsilon_separated(const KatzState &state, node w, node v);

/// Evaluates the criterion; under ranking/top-k also shrinks the active set.
bool check_converged(KatzState &state);

/// Iterates until check_converged; throws ConvergenceError at the cap.
RankingResult run(KatzState &state, const Graph &g);

/// Current ranking extracted from the bounds, without iterating.
RankingResult ranking(const KatzState &state);

/// Share of unordered pairs strictly ordered by the bounds (1.0 when n < 2).
double separated_fraction(const KatzState &state);
/// Same metric from raw bound vectors.
double separated_fraction(const std::vector<double> &lower, const std::vector<double> &upper);

/// Recomputes lower/upper of v from katz, levels[r] and gamma.
void refresh_bounds(KatzState &state, node v);

} // namespace katzrank
