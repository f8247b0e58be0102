#include "katzrank/katz.hpp"

#include "katzrank/errors.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace katzrank {

namespace {

int thread_count(int requested) { return requested > 0 ? requested : omp_get_max_threads(); }

// Descending lower bound, ascending id.
struct ByLowerDesc {
    const std::vector<double> &lower;
    bool operator()(node a, node b) const {
        if (lower[a] != lower[b])
            return lower[a] > lower[b];
        return a < b;
    }
};

void validate_criterion(const Criterion &c, std::size_t n) {
    if (!(c.epsilon > 0.0) || !std::isfinite(c.epsilon))
        throw ParameterError("epsilon must be a positive finite number");
    switch (c.kind) {
    case Criterion::Kind::topk:
        if (c.k == 0 || c.k > n)
            throw ParameterError("top-k requires 1 <= k <= node_count (k = " + std::to_string(c.k)
                                 + ", n = " + std::to_string(n) + ")");
        break;
    case Criterion::Kind::pair:
        if (c.u >= n || c.v >= n)
            throw RangeError("pair criterion node out of range");
        if (c.u == c.v)
            throw ParameterError("pair criterion needs two distinct nodes");
        break;
    default:
        break;
    }
}

} // namespace

std::string to_string(Criterion::Kind kind) {
    switch (kind) {
    case Criterion::Kind::ranking:
        return "ranking";
    case Criterion::Kind::topk:
        return "topk";
    case Criterion::Kind::score:
        return "score";
    case Criterion::Kind::pair:
        return "pair";
    }
    return "unknown";
}

Criterion::Kind criterion_kind_from_string(const std::string &name) {
    if (name == "ranking")
        return Criterion::Kind::ranking;
    if (name == "topk")
        return Criterion::Kind::topk;
    if (name == "score")
        return Criterion::Kind::score;
    if (name == "pair")
        return Criterion::Kind::pair;
    throw ParameterError("unknown criterion '" + name + "'");
}

const std::vector<double> &KatzState::level(std::size_t i) const {
    if (i > r || levels[i].size() != node_count())
        throw ParameterError("walk level " + std::to_string(i) + " is not retained");
    return levels[i];
}

double KatzState::max_gap() const {
    double gap = 0.0;
    for (std::size_t v = 0; v < katz.size(); ++v)
        gap = std::max(gap, upper[v] - lower[v]);
    return gap;
}

double katz_gamma(double alpha, std::size_t max_out_degree) {
    if (max_out_degree == 0)
        return 0.0;
    const double d = static_cast<double>(max_out_degree);
    return d / (1.0 - alpha * d);
}

double default_alpha(std::size_t max_out_degree) {
    // 1/(1+0) would sit on the boundary of the admissible interval (0, 1)
    if (max_out_degree == 0)
        return 0.5;
    return 1.0 / (1.0 + static_cast<double>(max_out_degree));
}

void check_alpha(double alpha, std::size_t max_out_degree) {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw ParameterError("alpha must be positive");
    if (max_out_degree == 0) {
        if (alpha >= 1.0)
            throw ParameterError("alpha must be below 1");
        return;
    }
    if (alpha * static_cast<double>(max_out_degree) >= 1.0) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "alpha = " << alpha << " violates alpha < 1/deg_max = 1/" << max_out_degree
            << "; the per-node upper bound needs alpha * deg_max < 1";
        throw ParameterError(msg.str());
    }
}

std::size_t default_iteration_cap(double alpha, std::size_t max_out_degree, double epsilon) {
    // Every gap is at most α·γ·(α·d)^r, so r* rounds reach gap < ε for any
    // criterion.
    const double contraction = alpha * static_cast<double>(max_out_degree);
    if (contraction <= 0.0)
        return 10;
    const double scale = std::max(1.0, alpha * katz_gamma(alpha, max_out_degree));
    const double rounds = std::ceil(std::log(scale / epsilon) / std::log(1.0 / contraction));
    const double cap = 10.0 * std::max(1.0, rounds);
    if (!std::isfinite(cap) || cap > 1e9)
        return 1'000'000'000;
    return static_cast<std::size_t>(cap);
}

KatzState init(const Graph &g, const Criterion &criterion, const KatzOptions &options) {
    const std::size_t n = g.node_count();
    if (n == 0)
        throw ParameterError("graph has no nodes");
    validate_criterion(criterion, n);
    if (options.undirected && !g.is_symmetric())
        throw ParameterError("undirected mode requires a symmetric arc set");

    KatzState s;
    s.criterion = criterion;
    s.max_out_degree = g.max_out_degree();
    s.alpha = options.alpha.value_or(default_alpha(s.max_out_degree));
    check_alpha(s.alpha, s.max_out_degree);
    s.gamma = katz_gamma(s.alpha, s.max_out_degree);
    s.undirected = options.undirected;
    s.keep_all_levels = options.keep_all_levels;
    s.threads = options.threads;
    s.max_iterations = options.max_iterations
                           ? options.max_iterations
                           : default_iteration_cap(s.alpha, s.max_out_degree, criterion.epsilon);

    s.r = 0;
    s.levels.assign(1, std::vector<double>(n, 1.0));
    s.katz.assign(n, 0.0);
    s.lower.assign(n, 0.0);
    s.upper.assign(n, 0.0);
    s.active.resize(n);
    for (node v = 0; v < n; ++v)
        s.active[v] = v;
    s.is_active.assign(n, 1);
    return s;
}

void refresh_bounds(KatzState &s, node v) {
    const double last = s.levels[s.r][v];
    const double k = s.katz[v];
    s.lower[v] = s.undirected ? k + s.alpha * last : k;
    s.upper[v] = k + s.alpha * last * s.gamma;
}

void iterate_once(KatzState &s, const Graph &g) {
    const std::size_t n = s.node_count();
    if (g.node_count() != n)
        throw ParameterError("graph does not match the state's node count");

    s.levels.emplace_back(n, 0.0);
    ++s.r;
    const std::vector<double> &prev = s.levels[s.r - 1];
    std::vector<double> &cur = s.levels[s.r];
    const double alpha = s.alpha;
    const auto count = static_cast<long long>(n);

#pragma omp parallel for schedule(static) num_threads(thread_count(s.threads))
    for (long long i = 0; i < count; ++i) {
        const auto v = static_cast<node>(i);
        double sum = 0.0;
        for (node u : g.out_neighbors(v))
            sum += prev[u];
        cur[v] = alpha * sum;
        s.katz[v] += cur[v];
        refresh_bounds(s, v);
    }

    if (!s.keep_all_levels && s.r >= 2) {
        s.levels[s.r - 2].clear();
        s.levels[s.r - 2].shrink_to_fit();
    }
}

bool epsilon_separated(const KatzState &s, node w, node v) {
    return s.lower[w] > s.upper[v] - s.criterion.epsilon;
}

bool check_converged(KatzState &s) {
    const double eps = s.criterion.epsilon;
    switch (s.criterion.kind) {
    case Criterion::Kind::score:
        return s.max_gap() < eps;
    case Criterion::Kind::pair: {
        node a = s.criterion.u, b = s.criterion.v;
        if (ByLowerDesc{s.lower}(b, a))
            std::swap(a, b);
        return epsilon_separated(s, a, b);
    }
    case Criterion::Kind::ranking:
    case Criterion::Kind::topk:
        break;
    }

    const std::size_t k =
        s.criterion.kind == Criterion::Kind::ranking ? s.node_count() : s.criterion.k;
    auto &m = s.active;
    const ByLowerDesc by_lower{s.lower};
    const std::size_t prefix = std::min(k, m.size());
    if (prefix < m.size())
        std::nth_element(m.begin(), m.begin() + static_cast<std::ptrdiff_t>(prefix), m.end(),
                         by_lower);
    std::sort(m.begin(), m.begin() + static_cast<std::ptrdiff_t>(prefix), by_lower);

    if (m.size() > k) {
        const double threshold = s.lower[m[k - 1]];
        auto tail = m.begin() + static_cast<std::ptrdiff_t>(k);
        auto kept = std::stable_partition(tail, m.end(), [&](node x) {
            return !(s.upper[x] - eps < threshold);
        });
        for (auto it = kept; it != m.end(); ++it)
            s.is_active[*it] = 0;
        m.erase(kept, m.end());
        if (m.size() > k)
            return false;
    }
    for (std::size_t i = 1; i < m.size(); ++i) {
        if (s.upper[m[i]] - eps >= s.lower[m[i - 1]])
            return false;
    }
    return true;
}

RankingResult ranking(const KatzState &s) {
    const std::size_t n = s.node_count();
    std::vector<node> ids(n);
    for (node v = 0; v < n; ++v)
        ids[v] = v;
    std::sort(ids.begin(), ids.end(), ByLowerDesc{s.lower});

    RankingResult result;
    result.order.reserve(n);
    for (node v : ids)
        result.order.push_back({v, s.lower[v], s.upper[v]});
    result.iterations = s.r;
    result.criterion = s.criterion;
    switch (s.criterion.kind) {
    case Criterion::Kind::ranking:
    case Criterion::Kind::score:
        result.certified = n;
        break;
    case Criterion::Kind::topk:
        result.certified = s.criterion.k;
        break;
    case Criterion::Kind::pair:
        result.certified = 0;
        break;
    }
    return result;
}

RankingResult run(KatzState &s, const Graph &g) {
    if (s.r == 0)
        iterate_once(s, g);
    while (!check_converged(s)) {
        if (s.r >= s.max_iterations) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "no convergence after " << s.r << " iterations (max bound gap "
                << s.max_gap() << ", epsilon " << s.criterion.epsilon << ")";
            throw ConvergenceError(msg.str(), s.max_gap());
        }
        iterate_once(s, g);
    }
    return ranking(s);
}

double separated_fraction(const std::vector<double> &lower, const std::vector<double> &upper) {
    const std::size_t n = lower.size();
    if (n < 2)
        return 1.0;
    // lower ≤ upper per node, so a pair can only be separated in one
    // direction and counting "upper(w) < lower(v)" over all v counts it once.
    std::vector<double> sorted_upper = upper;
    std::sort(sorted_upper.begin(), sorted_upper.end());
    std::uint64_t separated = 0;
    for (double l : lower)
        separated += static_cast<std::uint64_t>(
            std::lower_bound(sorted_upper.begin(), sorted_upper.end(), l) - sorted_upper.begin());
    const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
    return static_cast<double>(separated) / pairs;
}

double separated_fraction(const KatzState &s) { return separated_fraction(s.lower, s.upper); }

} // namespace katzrank
