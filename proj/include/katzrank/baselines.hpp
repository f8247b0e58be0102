#pragma once

#include "katzrank/graph.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace katzrank {

struct ScoreVector {
    std::vector<double> scores;
    std::string method;
    std::size_t iterations = 0;
    /// Last max-norm change (foster), absolute 2-norm residual (cg), 0 (dense).
    double residual = 0.0;
};

/**
 * Fixed-point heuristic c_{i+1} = αA·c_i + 1 from c_0 = 1, stopped once the
 * max-norm change drops below tol. Returns c − 1, which after i rounds is
 * exactly the truncated Katz sum over walks of length 1..i.
 */
ScoreVector foster(const Graph &g, double alpha, double tol, std::size_t max_iter,
                   int threads = 0);

/// Exactly `rounds` rounds of the Foster recurrence, shifted by −1.
std::vector<double> foster_rounds(const Graph &g, double alpha, std::size_t rounds,
                                  int threads = 0);

/**
 * Unpreconditioned conjugate gradient on (I − αA) z = 1 from z_0 = 1,
 * stopped when the absolute 2-norm residual drops below residual_tol.
 * Returns αA·z. Needs a symmetric arc set.
 */
ScoreVector cg_katz(const Graph &g, double alpha, double residual_tol, std::size_t max_iter,
                    int threads = 0);

/// Dense Gaussian elimination with partial pivoting on (I − αA) z = 1.
/// Works for directed graphs; limited to 2000 nodes.
ScoreVector dense_oracle(const Graph &g, double alpha);

inline constexpr std::size_t dense_oracle_max_nodes = 2000;

} // namespace katzrank
