#include "katzrank/cli/commands.hpp"

#include "katzrank/baselines.hpp"
#include "katzrank/cli/report.hpp"
#include "katzrank/dynkatz.hpp"
#include "katzrank/edge_list.hpp"
#include "katzrank/errors.hpp"
#include "katzrank/generators.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <numeric>
#include <sstream>

namespace katzrank::cli {

namespace {

constexpr std::size_t default_row_cap = 1'000'000;

struct UsageError : Error {
    using Error::Error;
};

struct InputError : Error {
    using Error::Error;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct KatzFlags {
    std::string graph_path;
    double alpha = 0.0;
    CLI::Option *alpha_opt = nullptr;
    double epsilon = 1e-6;
    std::string criterion;
    std::size_t k = 0;
    std::vector<node> pair;
    bool undirected = false;
    int threads = 0;
    CLI::Option *threads_opt = nullptr;
    std::string out_format = "json";
    std::string out_file;
    bool per_node = false;
    bool full = false;
    std::size_t prefix = 10;
    std::size_t max_iterations = 0;
};

void add_katz_flags(CLI::App *cmd, KatzFlags &f, bool with_criterion) {
    cmd->add_option("graph", f.graph_path, "Edge-list file")->required();
    f.alpha_opt = cmd->add_option("--alpha", f.alpha, "Attenuation factor (default 1/(1+deg_max))");
    cmd->add_option("--epsilon", f.epsilon, "Separation slack")->capture_default_str();
    if (with_criterion) {
        cmd->add_option("--criterion", f.criterion, "Stopping rule")
            ->check(CLI::IsMember({"ranking", "topk", "score", "pair"}));
        cmd->add_option("--k", f.k, "Top-k size");
        cmd->add_option("--pair", f.pair, "Two nodes for the pair criterion")->expected(2);
    }
    cmd->add_flag("--undirected", f.undirected, "Store both directions of every edge");
    f.threads_opt = cmd->add_option("--threads", f.threads, "Worker threads (env KATZ_THREADS)");
    cmd->add_option("--out", f.out_format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    cmd->add_option("--out-file", f.out_file, "Write output here instead of stdout");
    cmd->add_flag("--per-node", f.per_node, "Include per-node bounds in JSON reports");
    cmd->add_flag("--full", f.full, "Do not cap per-node output at 10^6 rows");
    cmd->add_option("--prefix", f.prefix, "Ranking prefix length in reports")
        ->capture_default_str();
    cmd->add_option("--max-iterations", f.max_iterations, "Iteration cap (0 = automatic)");
}

int resolve_threads(const KatzFlags &f) {
    if (f.threads_opt && f.threads_opt->count() > 0) {
        if (f.threads < 0)
            throw UsageError("--threads must be non-negative");
        return f.threads;
    }
    if (const char *env = std::getenv("KATZ_THREADS")) {
        char *end = nullptr;
        long value = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || value < 0)
            throw UsageError("KATZ_THREADS must be a non-negative integer");
        return static_cast<int>(value);
    }
    return 0;
}

Criterion resolve_criterion(const KatzFlags &f, const std::string &fallback) {
    std::string name = f.criterion;
    if (name.empty())
        name = f.k > 0 ? "topk" : fallback;
    switch (criterion_kind_from_string(name)) {
    case Criterion::Kind::ranking:
        return Criterion::ranking(f.epsilon);
    case Criterion::Kind::score:
        return Criterion::score(f.epsilon);
    case Criterion::Kind::topk:
        if (f.k == 0)
            throw UsageError("--criterion topk needs --k");
        return Criterion::topk(f.k, f.epsilon);
    case Criterion::Kind::pair:
        if (f.pair.size() != 2)
            throw UsageError("--criterion pair needs --pair u v");
        return Criterion::pair(f.pair[0], f.pair[1], f.epsilon);
    }
    throw UsageError("unknown criterion");
}

Graph load_graph(const std::string &path, Orientation mode) {
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open graph file '" + path + "'");
    try {
        return load_edge_list(in, mode);
    } catch (const Error &e) {
        throw InputError(path + ": " + e.what());
    }
}

std::vector<EdgeBatch> load_batch_file(const std::string &path, Orientation mode) {
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open batch file '" + path + "'");
    try {
        return load_batches(in, mode);
    } catch (const Error &e) {
        throw InputError(path + ": " + e.what());
    }
}

GraphSummary summarize(const Graph &g) {
    return {g.node_count(), g.arc_count(), g.max_out_degree(), g.self_loop_count()};
}

RunParameters parameters_of(const KatzState &s, int threads) {
    RunParameters p;
    p.criterion = to_string(s.criterion.kind);
    p.alpha = s.alpha;
    p.epsilon = s.criterion.epsilon;
    if (s.criterion.kind == Criterion::Kind::topk)
        p.k = s.criterion.k;
    if (s.criterion.kind == Criterion::Kind::pair)
        p.pair = std::pair<node, node>{s.criterion.u, s.criterion.v};
    p.undirected = s.undirected;
    p.threads = threads;
    return p;
}

std::vector<NodeRow> rows_of(const RankingResult &result) {
    std::vector<NodeRow> rows;
    rows.reserve(result.order.size());
    for (std::size_t i = 0; i < result.order.size(); ++i) {
        const auto &entry = result.order[i];
        rows.push_back({entry.id, entry.lower, entry.upper, i + 1});
    }
    return rows;
}

void fill_ranking(RunReport &report, const RankingResult &result, const KatzFlags &f,
                  bool want_rows) {
    std::size_t prefix = result.criterion.kind == Criterion::Kind::topk ? result.criterion.k
                                                                         : f.prefix;
    prefix = std::min(prefix, result.order.size());
    for (std::size_t i = 0; i < prefix; ++i)
        report.ranking_prefix.push_back(result.order[i].id);
    if (want_rows) {
        report.nodes = rows_of(result);
        if (!f.full && report.nodes.size() > default_row_cap) {
            report.nodes.resize(default_row_cap);
            report.nodes_truncated = true;
        }
    }
}

class Output {
public:
    Output(const std::string &path, std::ostream &fallback) : stream_(&fallback) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_)
                throw InputError("cannot open output file '" + path + "'");
            stream_ = file_.get();
        }
    }
    std::ostream &stream() { return *stream_; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream *stream_;
};

void write_reports(Output &output, const std::vector<RunReport> &reports, bool single) {
    if (single && reports.size() == 1) {
        output.stream() << emit_json(to_json(reports.front())) << '\n';
        return;
    }
    nlohmann::ordered_json array = nlohmann::ordered_json::array();
    for (const auto &r : reports)
        array.push_back(to_json(r));
    output.stream() << emit_json(array) << '\n';
}

KatzOptions options_of(const KatzFlags &f, int threads) {
    KatzOptions opts;
    if (f.alpha_opt && f.alpha_opt->count() > 0)
        opts.alpha = f.alpha;
    opts.undirected = f.undirected;
    opts.max_iterations = f.max_iterations;
    opts.threads = threads;
    return opts;
}

// ---------------------------------------------------------------- static

int cmd_static(const KatzFlags &f, std::ostream &out) {
    const int threads = resolve_threads(f);
    const Criterion criterion = resolve_criterion(f, "ranking");
    const auto mode = f.undirected ? Orientation::undirected : Orientation::directed;
    Graph g = load_graph(f.graph_path, mode);
    Output output(f.out_file, out);

    auto start = Clock::now();
    KatzState state = init(g, criterion, options_of(f, threads));
    RankingResult result = run(state, g);
    const double elapsed = seconds_since(start);

    RunReport report;
    report.method = "katz";
    report.parameters = parameters_of(state, threads);
    report.graph = summarize(g);
    report.iterations = result.iterations;
    report.wall_time_seconds = elapsed;
    report.separated_fraction = separated_fraction(state);
    const bool csv = f.out_format == "csv";
    fill_ranking(report, result, f, f.per_node || csv);

    if (csv)
        write_csv(output.stream(), report.nodes);
    else
        write_reports(output, {report}, true);
    return exit_ok;
}

// --------------------------------------------------------------- dynamic

struct DynamicFlags {
    std::string batch_path;
    bool verify = false;
    double abort_fraction = 0.5;
    std::string arithmetic = "recompute";
};

bool matches_fresh_run(const KatzState &state, const Graph &g) {
    KatzOptions opts;
    opts.alpha = state.alpha;
    opts.undirected = state.undirected;
    opts.threads = state.threads;
    opts.max_iterations = std::max(state.max_iterations, state.r);
    KatzState fresh = init(g, state.criterion, opts);
    while (fresh.r < state.r)
        iterate_once(fresh, g);
    auto close = [](double a, double b) {
        return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b));
    };
    for (std::size_t i = 1; i <= state.r; ++i)
        for (std::size_t v = 0; v < state.node_count(); ++v)
            if (!close(state.levels[i][v], fresh.levels[i][v]))
                return false;
    for (std::size_t v = 0; v < state.node_count(); ++v)
        if (!close(state.katz[v], fresh.katz[v]) || !close(state.lower[v], fresh.lower[v])
            || !close(state.upper[v], fresh.upper[v]))
            return false;
    auto a = ranking(state).order;
    auto b = ranking(fresh).order;
    return std::equal(a.begin(), a.end(), b.begin(), b.end(),
                      [](const RankedNode &x, const RankedNode &y) { return x.id == y.id; });
}

int cmd_dynamic(const KatzFlags &f, const DynamicFlags &d, std::ostream &out, std::ostream &err) {
    const int threads = resolve_threads(f);
    const Criterion criterion = resolve_criterion(f, "ranking");
    if (!(d.abort_fraction >= 0.0))
        throw UsageError("--abort-fraction must be non-negative");
    const auto mode = f.undirected ? Orientation::undirected : Orientation::directed;
    Graph g = load_graph(f.graph_path, mode);
    std::vector<EdgeBatch> batches = load_batch_file(d.batch_path, mode);
    Output output(f.out_file, out);

    DynamicOptions dyn;
    dyn.abort_fraction = d.abort_fraction;
    dyn.arithmetic = d.arithmetic == "delta" ? LevelArithmetic::delta : LevelArithmetic::recompute;

    std::vector<RunReport> reports;
    auto start = Clock::now();
    KatzState state = init(g, criterion, options_of(f, threads));
    RankingResult result = run(state, g);

    RunReport initial;
    initial.method = "katz-static";
    initial.parameters = parameters_of(state, threads);
    initial.graph = summarize(g);
    initial.iterations = result.iterations;
    initial.wall_time_seconds = seconds_since(start);
    initial.separated_fraction = separated_fraction(state);
    fill_ranking(initial, result, f, f.per_node);
    reports.push_back(std::move(initial));

    const bool csv = f.out_format == "csv";
    for (std::size_t b = 0; b < batches.size(); ++b) {
        UpdateStats stats;
        auto batch_start = Clock::now();
        try {
            stats = update_batch(state, g, batches[b], dyn);
        } catch (const Error &) {
            if (!csv)
                write_reports(output, reports, false);
            err << "batch " << b << ": ";
            throw;
        }
        const double elapsed = seconds_since(batch_start);

        RunReport report;
        report.method = "katz-dynamic";
        report.parameters = parameters_of(state, threads);
        report.graph = summarize(g);
        report.iterations = state.r;
        report.wall_time_seconds = elapsed;
        report.separated_fraction = separated_fraction(state);
        fill_ranking(report, ranking(state), f, f.per_node);
        BatchSummary summary;
        summary.index = b;
        summary.insertions = batches[b].insertions.size();
        summary.deletions = batches[b].deletions.size();
        summary.visited = stats.visited;
        summary.targets = stats.targets;
        summary.abort_level = stats.abort_level;
        summary.reactivated = stats.reactivated;
        summary.iterations_before = stats.iterations_before;
        if (d.verify)
            summary.verified = matches_fresh_run(state, g);
        report.batch = summary;
        reports.push_back(std::move(report));
    }

    if (csv) {
        write_csv(output.stream(), rows_of(ranking(state)));
    } else {
        write_reports(output, reports, false);
    }
    for (const auto &r : reports)
        if (r.batch && r.batch->verified && !*r.batch->verified)
            return exit_failure;
    return exit_ok;
}

// --------------------------------------------------------------- compare

struct CompareFlags {
    std::string methods = "katz,foster,cg";
    double foster_tol = 1e-9;
    double cg_tol = 1e-15;
    std::size_t baseline_max_iterations = 0;
};

std::vector<node> order_by_score(const std::vector<double> &scores) {
    std::vector<node> ids(scores.size());
    std::iota(ids.begin(), ids.end(), node{0});
    std::sort(ids.begin(), ids.end(), [&](node a, node b) {
        if (scores[a] != scores[b])
            return scores[a] > scores[b];
        return a < b;
    });
    return ids;
}

int cmd_compare(const KatzFlags &f, const CompareFlags &c, std::ostream &out) {
    const int threads = resolve_threads(f);
    if (f.out_format != "json")
        throw UsageError("compare only emits json");
    std::vector<std::string> methods;
    {
        std::stringstream ss(c.methods);
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty())
                methods.push_back(item);
    }
    if (methods.empty())
        throw UsageError("--methods is empty");
    for (const auto &m : methods)
        if (m != "katz" && m != "foster" && m != "cg")
            throw UsageError("unknown method '" + m + "'");

    const auto mode = f.undirected ? Orientation::undirected : Orientation::directed;
    Graph g = load_graph(f.graph_path, mode);
    Output output(f.out_file, out);

    const double alpha =
        f.alpha_opt && f.alpha_opt->count() > 0 ? f.alpha : default_alpha(g.max_out_degree());
    const std::size_t baseline_cap =
        c.baseline_max_iterations ? c.baseline_max_iterations : 10 * g.node_count() + 1000;

    std::vector<RunReport> reports;
    std::vector<std::vector<node>> orders;
    std::vector<node> reference;
    KatzState state;
    for (const auto &m : methods) {
        RunReport report;
        report.method = m;
        report.graph = summarize(g);
        std::vector<node> order;
        auto start = Clock::now();
        if (m == "katz") {
            KatzOptions opts = options_of(f, threads);
            opts.alpha = alpha;
            state = init(g, Criterion::ranking(f.epsilon), opts);
            RankingResult result = run(state, g);
            report.wall_time_seconds = seconds_since(start);
            report.parameters = parameters_of(state, threads);
            report.iterations = result.iterations;
            report.separated_fraction = separated_fraction(state);
            fill_ranking(report, result, f, f.per_node);
            for (const auto &e : result.order)
                order.push_back(e.id);
            if (reference.empty())
                reference = order;
        } else {
            ScoreVector scores = m == "foster"
                                     ? foster(g, alpha, c.foster_tol, baseline_cap, threads)
                                     : cg_katz(g, alpha, c.cg_tol, baseline_cap, threads);
            report.wall_time_seconds = seconds_since(start);
            report.parameters.criterion = "none";
            report.parameters.alpha = alpha;
            report.parameters.epsilon = m == "foster" ? c.foster_tol : c.cg_tol;
            report.parameters.undirected = f.undirected;
            report.parameters.threads = threads;
            report.iterations = scores.iterations;
            report.residual = scores.residual;
            order = order_by_score(scores.scores);
            std::size_t prefix = std::min(f.prefix, order.size());
            report.ranking_prefix.assign(order.begin(), order.begin() + prefix);
            if (f.per_node) {
                for (std::size_t i = 0; i < order.size(); ++i) {
                    const double s = scores.scores[order[i]];
                    report.nodes.push_back({order[i], s, s, i + 1});
                }
                if (!f.full && report.nodes.size() > default_row_cap) {
                    report.nodes.resize(default_row_cap);
                    report.nodes_truncated = true;
                }
            }
        }
        orders.push_back(std::move(order));
        reports.push_back(std::move(report));
    }
    if (!reference.empty())
        for (std::size_t i = 0; i < reports.size(); ++i)
            reports[i].agreement = concordant_fraction(reference, orders[i]);

    write_reports(output, reports, false);
    return exit_ok;
}

// ------------------------------------------------------------------- gen

struct GenFlags {
    std::string model;
    std::size_t nodes = 0;
    std::uint64_t seed = 1;
    std::size_t rows = 0, cols = 0;
    unsigned scale = 0;
    std::size_t edge_factor = 8;
    double p = 0.05;
    std::string out_path = "-";
};

int cmd_gen(const GenFlags &f, std::ostream &out) {
    gen::EdgeList edges;
    if (f.model == "complete") {
        edges = gen::complete(f.nodes);
    } else if (f.model == "star") {
        edges = gen::star(f.nodes);
    } else if (f.model == "path") {
        edges = gen::path(f.nodes);
    } else if (f.model == "grid") {
        std::size_t rows = f.rows, cols = f.cols;
        if (rows == 0 || cols == 0) {
            auto side = static_cast<std::size_t>(std::llround(std::sqrt(double(f.nodes))));
            if (side * side != f.nodes || side == 0)
                throw UsageError("grid needs --rows/--cols or a square --nodes");
            rows = cols = side;
        }
        edges = gen::grid(rows, cols);
    } else if (f.model == "gnp") {
        edges = gen::erdos_renyi(f.nodes, f.p, f.seed);
    } else if (f.model == "rmat") {
        gen::RmatParams params;
        if (f.scale) {
            params.scale = f.scale;
        } else {
            if (f.nodes < 2 || (f.nodes & (f.nodes - 1)))
                throw UsageError("rmat needs --scale or a power-of-two --nodes");
            params.scale = static_cast<unsigned>(std::log2(double(f.nodes)));
        }
        params.edge_factor = f.edge_factor;
        edges = gen::rmat(params, f.seed);
    }

    if (f.out_path == "-") {
        write_edge_list(out, edges.node_count, edges.edges);
    } else {
        std::ofstream file(f.out_path);
        if (!file)
            throw InputError("cannot open output file '" + f.out_path + "'");
        write_edge_list(file, edges.node_count, edges.edges);
        if (!file)
            throw InputError("write failed for '" + f.out_path + "'");
    }
    return exit_ok;
}

} // namespace

double concordant_fraction(const std::vector<node> &reference, const std::vector<node> &other) {
    const std::size_t n = reference.size();
    if (other.size() != n)
        throw ParameterError("rankings differ in length");
    if (n < 2)
        return 1.0;
    std::vector<std::size_t> position(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (reference[i] >= n)
            throw RangeError("ranking entry out of range");
        position[reference[i]] = i;
    }
    std::vector<std::size_t> seq(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (other[i] >= n)
            throw RangeError("ranking entry out of range");
        seq[i] = position[other[i]];
    }
    // Inversions by bottom-up merge sort.
    std::vector<std::size_t> buffer(n);
    std::uint64_t inversions = 0;
    for (std::size_t width = 1; width < n; width *= 2) {
        for (std::size_t lo = 0; lo < n; lo += 2 * width) {
            std::size_t mid = std::min(lo + width, n), hi = std::min(lo + 2 * width, n);
            std::size_t i = lo, j = mid, k = lo;
            while (i < mid && j < hi) {
                if (seq[i] <= seq[j]) {
                    buffer[k++] = seq[i++];
                } else {
                    inversions += mid - i;
                    buffer[k++] = seq[j++];
                }
            }
            while (i < mid)
                buffer[k++] = seq[i++];
            while (j < hi)
                buffer[k++] = seq[j++];
        }
        seq.swap(buffer);
    }
    const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
    return 1.0 - static_cast<double>(inversions) / pairs;
}

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Katz centrality rankings with per-node bounds"};
    app.require_subcommand(1);

    KatzFlags static_flags, dynamic_flags, compare_flags;
    DynamicFlags dyn;
    CompareFlags cmp;
    GenFlags gen_flags;

    auto *st = app.add_subcommand("static", "Bound iteration on a static graph");
    add_katz_flags(st, static_flags, true);

    auto *dy = app.add_subcommand("dynamic", "Static run followed by batch updates");
    add_katz_flags(dy, dynamic_flags, true);
    dy->add_option("batches", dyn.batch_path, "Batch file ('+ u v' / '- u v' lines)")->required();
    dy->add_flag("--verify", dyn.verify, "Check every batch against a static recompute");
    dy->add_option("--abort-fraction", dyn.abort_fraction, "BFS abort threshold θ")
        ->capture_default_str();
    dy->add_option("--arithmetic", dyn.arithmetic, "Level update arithmetic")
        ->check(CLI::IsMember({"recompute", "delta"}))
        ->capture_default_str();

    auto *cp = app.add_subcommand("compare", "Bound ranking vs. Foster and CG");
    add_katz_flags(cp, compare_flags, false);
    cp->add_option("--methods", cmp.methods, "Comma-separated subset of katz,foster,cg")
        ->capture_default_str();
    cp->add_option("--tol", cmp.foster_tol, "Foster max-norm tolerance")->capture_default_str();
    cp->add_option("--cg-tol", cmp.cg_tol, "CG absolute residual tolerance")
        ->capture_default_str();
    cp->add_option("--baseline-max-iterations", cmp.baseline_max_iterations,
                   "Iteration cap for foster and cg (0 = 10n + 1000)");

    auto *gn = app.add_subcommand("gen", "Write a generated edge list");
    gn->add_option("--model", gen_flags.model, "Graph model")
        ->required()
        ->check(CLI::IsMember({"complete", "star", "path", "grid", "rmat", "gnp"}));
    gn->add_option("--nodes", gen_flags.nodes, "Node count");
    gn->add_option("--seed", gen_flags.seed, "Random seed")->capture_default_str();
    gn->add_option("--rows", gen_flags.rows, "Grid rows");
    gn->add_option("--cols", gen_flags.cols, "Grid columns");
    gn->add_option("--scale", gen_flags.scale, "RMAT scale (nodes = 2^scale)");
    gn->add_option("--edge-factor", gen_flags.edge_factor, "RMAT edges per node")
        ->capture_default_str();
    gn->add_option("--p", gen_flags.p, "Edge probability (gnp)")->capture_default_str();
    gn->add_option("out_path", gen_flags.out_path, "Output file ('-' for stdout)");

    std::vector<const char *> argv;
    argv.reserve(args.size());
    for (const auto &a : args)
        argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*st)
            return cmd_static(static_flags, out);
        if (*dy)
            return cmd_dynamic(dynamic_flags, dyn, out, err);
        if (*cp)
            return cmd_compare(compare_flags, cmp, out);
        if (*gn)
            return cmd_gen(gen_flags, out);
    } catch (const UsageError &e) {
        err << "usage error: " << e.what() << '\n';
        return exit_usage;
    } catch (const InputError &e) {
        err << "input error: " << e.what() << '\n';
        return exit_io;
    } catch (const ParseError &e) {
        err << "input error: " << e.what() << '\n';
        return exit_io;
    } catch (const Error &e) {
        err << "error: " << e.what() << '\n';
        return exit_domain;
    } catch (const std::exception &e) {
        err << "internal error: " << e.what() << '\n';
        return exit_failure;
    }
    return exit_usage;
}

} // namespace katzrank::cli
