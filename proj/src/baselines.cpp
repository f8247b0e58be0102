#include "katzrank/baselines.hpp"

#include "katzrank/errors.hpp"
#include "katzrank/katz.hpp"

#include <Eigen/Dense>
#include <omp.h>

#include <cmath>
#include <sstream>

namespace katzrank {

namespace {

int thread_count(int requested) { return requested > 0 ? requested : omp_get_max_threads(); }

// y = x − α·A x, i.e. (I − αA) x.
void apply_system(const Graph &g, double alpha, const std::vector<double> &x,
                  std::vector<double> &y, int threads) {
    const auto n = static_cast<long long>(g.node_count());
#pragma omp parallel for schedule(static) num_threads(thread_count(threads))
    for (long long i = 0; i < n; ++i) {
        double sum = 0.0;
        for (node u : g.out_neighbors(static_cast<node>(i)))
            sum += x[u];
        y[i] = x[i] - alpha * sum;
    }
}

// y = α·A x.
std::vector<double> damped_product(const Graph &g, double alpha, const std::vector<double> &x,
                                   int threads) {
    const auto n = static_cast<long long>(g.node_count());
    std::vector<double> y(g.node_count());
#pragma omp parallel for schedule(static) num_threads(thread_count(threads))
    for (long long i = 0; i < n; ++i) {
        double sum = 0.0;
        for (node u : g.out_neighbors(static_cast<node>(i)))
            sum += x[u];
        y[i] = alpha * sum;
    }
    return y;
}

// Sequential so the result does not depend on the thread count.
double dot(const std::vector<double> &a, const std::vector<double> &b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

} // namespace

std::vector<double> foster_rounds(const Graph &g, double alpha, std::size_t rounds, int threads) {
    check_alpha(alpha, g.max_out_degree());
    std::vector<double> c(g.node_count(), 1.0);
    for (std::size_t i = 0; i < rounds; ++i) {
        c = damped_product(g, alpha, c, threads);
        for (double &x : c)
            x += 1.0;
    }
    for (double &x : c)
        x -= 1.0;
    return c;
}

ScoreVector foster(const Graph &g, double alpha, double tol, std::size_t max_iter, int threads) {
    check_alpha(alpha, g.max_out_degree());
    if (!(tol > 0.0))
        throw ParameterError("foster tolerance must be positive");
    std::vector<double> c(g.node_count(), 1.0);
    double change = 0.0;
    for (std::size_t it = 1; it <= max_iter; ++it) {
        std::vector<double> next = damped_product(g, alpha, c, threads);
        change = 0.0;
        for (std::size_t v = 0; v < next.size(); ++v) {
            next[v] += 1.0;
            change = std::max(change, std::abs(next[v] - c[v]));
        }
        c = std::move(next);
        if (change < tol) {
            for (double &x : c)
                x -= 1.0;
            return {std::move(c), "foster", it, change};
        }
    }
    for (double &x : c)
        x -= 1.0;
    std::ostringstream msg;
    msg.precision(17);
    msg << "foster: no fixed point within " << max_iter << " iterations (last change " << change
        << ")";
    throw ConvergenceError(msg.str(), change, std::move(c));
}

ScoreVector cg_katz(const Graph &g, double alpha, double residual_tol, std::size_t max_iter,
                    int threads) {
    if (!g.is_symmetric())
        throw MethodInapplicableError(
            "cg needs a symmetric (undirected) graph; (I - alpha A) is not symmetric here");
    check_alpha(alpha, g.max_out_degree());
    const std::size_t n = g.node_count();

    std::vector<double> z(n, 1.0);
    std::vector<double> az(n);
    apply_system(g, alpha, z, az, threads);
    std::vector<double> residual(n);
    for (std::size_t i = 0; i < n; ++i)
        residual[i] = 1.0 - az[i];
    std::vector<double> direction = residual;
    std::vector<double> q(n);
    double rr = dot(residual, residual);

    std::size_t it = 0;
    while (std::sqrt(rr) >= residual_tol) {
        if (it == max_iter) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "cg: residual " << std::sqrt(rr) << " above " << residual_tol << " after "
                << it << " iterations";
            throw ConvergenceError(msg.str(), std::sqrt(rr), damped_product(g, alpha, z, threads));
        }
        apply_system(g, alpha, direction, q, threads);
        const double step = rr / dot(direction, q);
        for (std::size_t i = 0; i < n; ++i) {
            z[i] += step * direction[i];
            residual[i] -= step * q[i];
        }
        const double rr_next = dot(residual, residual);
        const double beta = rr_next / rr;
        for (std::size_t i = 0; i < n; ++i)
            direction[i] = residual[i] + beta * direction[i];
        rr = rr_next;
        ++it;
    }
    return {damped_product(g, alpha, z, threads), "cg", it, std::sqrt(rr)};
}

ScoreVector dense_oracle(const Graph &g, double alpha) {
    const std::size_t n = g.node_count();
    if (n > dense_oracle_max_nodes)
        throw ParameterError("dense oracle limited to " + std::to_string(dense_oracle_max_nodes)
                             + " nodes");
    check_alpha(alpha, g.max_out_degree());

    Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n);
    for (node v = 0; v < n; ++v)
        for (node u : g.out_neighbors(v))
            system(v, u) -= alpha;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
    // PartialPivLU does not flag singularity itself
    const auto &factors = lu.matrixLU();
    for (Eigen::Index i = 0; i < factors.rows(); ++i)
        if (!(std::abs(factors(i, i)) > 1e-300))
            throw NumericError("dense oracle: singular system");
    const Eigen::VectorXd solution = lu.solve(Eigen::VectorXd::Ones(n));
    std::vector<double> z(solution.data(), solution.data() + n);
    return {damped_product(g, alpha, z, 1), "dense", 1, 0.0};
}

} // namespace katzrank
