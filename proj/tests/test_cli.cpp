#include "katzrank/cli/commands.hpp"
#include "katzrank/cli/report.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

using namespace katzrank;
using namespace katzrank::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
    json parsed() const { return json::parse(out); }
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "katzrank");
    std::ostringstream out, err;
    int code = katzrank::cli::run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

class TempDir {
public:
    TempDir() {
        static int counter = 0;
        path_ = fs::temp_directory_path()
                / ("katzrank_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    std::string write(const std::string &name, const std::string &content) const {
        auto p = path_ / name;
        std::ofstream(p) << content;
        return p.string();
    }
    std::string file(const std::string &name) const { return (path_ / name).string(); }

private:
    fs::path path_;
};

std::string gen_file(const TempDir &dir, const std::string &name,
                     const std::vector<std::string> &args) {
    std::vector<std::string> full{"gen"};
    full.insert(full.end(), args.begin(), args.end());
    full.push_back(dir.file(name));
    Result r = run(full);
    REQUIRE(r.code == exit_ok);
    return dir.file(name);
}

std::string slurp(const std::string &path) {
    std::ifstream in(path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace

TEST_CASE("static: K4 score bounds bracket 3") {
    TempDir dir;
    auto k4 = gen_file(dir, "k4.txt", {"--model", "complete", "--nodes", "4"});
    Result r = run({"static", k4, "--undirected", "--criterion", "score", "--epsilon", "1e-9",
                    "--per-node"});
    REQUIRE(r.code == exit_ok);
    json j = r.parsed();
    CHECK(j["method"] == "katz");
    CHECK(j["parameters"]["criterion"] == "score");
    CHECK(j["graph"]["nodes"] == 4);
    CHECK(j["graph"]["arcs"] == 12);
    REQUIRE(j["nodes"].size() == 4);
    for (const auto &row : j["nodes"]) {
        CHECK(row["lower"].get<double>() <= 3.0);
        CHECK(row["upper"].get<double>() >= 3.0 - 1e-12);
    }
}

TEST_CASE("static: top-1 on a star is the center") {
    TempDir dir;
    auto star = gen_file(dir, "star.txt", {"--model", "star", "--nodes", "4"});
    Result r = run({"static", star, "--undirected", "--criterion", "topk", "--k", "1"});
    REQUIRE(r.code == exit_ok);
    CHECK(r.parsed()["ranking_prefix"] == json::array({0}));
    CHECK(r.parsed()["parameters"]["k"] == 1);

    // --k alone selects top-k
    Result implicit = run({"static", star, "--undirected", "--k", "1"});
    CHECK(implicit.parsed()["parameters"]["criterion"] == "topk");
}

TEST_CASE("static: iterations grow as epsilon shrinks") {
    TempDir dir;
    auto g = gen_file(dir, "g.txt", {"--model", "rmat", "--scale", "9", "--seed", "4"});
    Result loose = run({"static", g, "--undirected", "--epsilon", "1e-1"});
    Result tight = run({"static", g, "--undirected", "--epsilon", "1e-12"});
    REQUIRE(loose.code == exit_ok);
    REQUIRE(tight.code == exit_ok);
    CHECK(loose.parsed()["iterations"] <= tight.parsed()["iterations"]);
    CHECK(loose.parsed()["separated_fraction"].get<double>()
          <= tight.parsed()["separated_fraction"].get<double>());
}

TEST_CASE("static: csv output") {
    TempDir dir;
    auto star = gen_file(dir, "star.txt", {"--model", "star", "--nodes", "4"});
    auto out = dir.file("out.csv");
    Result r = run({"static", star, "--undirected", "--out", "csv", "--out-file", out});
    REQUIRE(r.code == exit_ok);
    CHECK(r.out.empty());
    std::istringstream csv(slurp(out));
    std::string line;
    std::getline(csv, line);
    CHECK(line == "node_id,lower,upper,rank");
    std::getline(csv, line);
    CHECK(line.rfind("0,", 0) == 0);
    CHECK(line.substr(line.size() - 2) == ",1");
    int rows = 1;
    while (std::getline(csv, line))
        ++rows;
    CHECK(rows == 4);
}

TEST_CASE("static: pair criterion") {
    TempDir dir;
    auto star = gen_file(dir, "star.txt", {"--model", "star", "--nodes", "4"});
    Result r = run({"static", star, "--undirected", "--criterion", "pair", "--pair", "0", "2"});
    REQUIRE(r.code == exit_ok);
    CHECK(r.parsed()["parameters"]["pair"] == json::array({0, 2}));
    CHECK(run({"static", star, "--criterion", "pair"}).code == exit_usage);
}

TEST_CASE("exit codes") {
    TempDir dir;
    auto k3 = gen_file(dir, "k3.txt", {"--model", "complete", "--nodes", "3"});
    auto directed = dir.write("directed.txt", "0 1\n1 2\n");

    CHECK(run({}).code == exit_usage);
    CHECK(run({"static"}).code == exit_usage);
    CHECK(run({"static", k3, "--bogus"}).code == exit_usage);
    CHECK(run({"static", k3, "--criterion", "topk"}).code == exit_usage);
    CHECK(run({"static", k3, "--out", "xml"}).code == exit_usage);

    Result alpha = run({"static", k3, "--undirected", "--alpha", "0.5"});
    CHECK(alpha.code == exit_domain);
    CHECK(alpha.err.find("alpha") != std::string::npos);
    CHECK(run({"static", k3, "--undirected", "--epsilon", "1e-12", "--max-iterations", "1",
               "--criterion", "score"})
              .code
          == exit_domain);
    CHECK(run({"compare", directed, "--methods", "cg"}).code == exit_domain);

    CHECK(run({"static", dir.file("missing.txt")}).code == exit_io);
    auto broken = dir.write("broken.txt", "0 1\n1 2 3\n");
    Result parse = run({"static", broken});
    CHECK(parse.code == exit_io);
    CHECK(parse.err.find("2") != std::string::npos);
    CHECK(run({"static", k3, "--out-file", dir.file("no/such/dir/out.json")}).code == exit_io);
    CHECK(run({"gen", "--model", "complete", "--nodes", "3", dir.file("no/such/dir/g.txt")}).code
          == exit_io);

    CHECK(run({"--help"}).code == exit_ok);
}

TEST_CASE("JSON reports round-trip") {
    TempDir dir;
    auto g = gen_file(dir, "g.txt", {"--model", "gnp", "--nodes", "60", "--p", "0.1"});
    Result r = run({"static", g, "--undirected", "--per-node", "--criterion", "topk", "--k", "5"});
    REQUIRE(r.code == exit_ok);
    json j = r.parsed();
    RunReport report = report_from_json(j);
    CHECK(report.nodes.size() == 60);
    CHECK(report.ranking_prefix.size() == 5);
    CHECK(report_from_json(json::parse(emit_json(to_json(report)))) == report);
    // every float survives the text form exactly
    CHECK(emit_json(to_json(report)) + "\n" == r.out);

    RunReport dyn;
    dyn.method = "katz-dynamic";
    dyn.parameters.pair = std::pair<node, node>{3, 4};
    dyn.separated_fraction = 0.1 + 0.2;
    dyn.batch = BatchSummary{2, 3, 1, 40, 2, 0, 7, 11, true};
    CHECK(report_from_json(json::parse(emit_json(to_json(dyn)))) == dyn);
    CHECK(emit_json(nlohmann::ordered_json(0.1), -1) == "0.10000000000000001");
}

TEST_CASE("thread count does not change rankings") {
    TempDir dir;
    auto g = gen_file(dir, "g.txt", {"--model", "rmat", "--scale", "10", "--seed", "9"});
    Result one = run({"static", g, "--undirected", "--threads", "1", "--per-node"});
    Result eight = run({"static", g, "--undirected", "--threads", "8", "--per-node"});
    REQUIRE(one.code == exit_ok);
    REQUIRE(eight.code == exit_ok);
    CHECK(one.parsed()["nodes"] == eight.parsed()["nodes"]);
    CHECK(eight.parsed()["parameters"]["threads"] == 8);
}

TEST_CASE("KATZ_THREADS is the fallback for --threads") {
    TempDir dir;
    auto k4 = gen_file(dir, "k4.txt", {"--model", "complete", "--nodes", "4"});
    ::setenv("KATZ_THREADS", "3", 1);
    CHECK(run({"static", k4, "--undirected"}).parsed()["parameters"]["threads"] == 3);
    CHECK(run({"static", k4, "--undirected", "--threads", "2"}).parsed()["parameters"]["threads"]
          == 2);
    ::setenv("KATZ_THREADS", "many", 1);
    CHECK(run({"static", k4, "--undirected"}).code == exit_usage);
    ::unsetenv("KATZ_THREADS");
    CHECK(run({"static", k4, "--undirected"}).parsed()["parameters"]["threads"] == 0);
}

TEST_CASE("dynamic: verified deletion on a grid") {
    TempDir dir;
    auto grid = gen_file(dir, "grid.txt", {"--model", "grid", "--rows", "10", "--cols", "10"});
    auto batch = dir.write("batch.txt", "- 44 45\n");
    Result r = run({"dynamic", grid, batch, "--undirected", "--verify", "--epsilon", "1e-4"});
    REQUIRE(r.code == exit_ok);
    json j = r.parsed();
    REQUIRE(j.size() == 2);
    CHECK(j[0]["method"] == "katz-static");
    CHECK(j[0]["batch"].is_null());
    const auto &b = j[1]["batch"];
    CHECK(j[1]["method"] == "katz-dynamic");
    CHECK(b["verified"] == true);
    CHECK(b["deletions"] == 2);
    CHECK(b["visited"].get<std::size_t>() < 100);
    CHECK(j[1]["graph"]["arcs"] == j[0]["graph"]["arcs"].get<std::size_t>() - 2);
}

TEST_CASE("dynamic: delta arithmetic and several batches") {
    TempDir dir;
    auto g = gen_file(dir, "g.txt", {"--model", "gnp", "--nodes", "80", "--p", "0.05"});
    auto batch = dir.write("b.txt", "+ 0 79\n\n- 79 0\n");
    for (const char *arith : {"recompute", "delta"}) {
        Result r = run({"dynamic", g, batch, "--undirected", "--alpha", "0.02", "--verify",
                        "--arithmetic", arith, "--k", "4"});
        INFO(r.err);
        REQUIRE(r.code == exit_ok);
        json j = r.parsed();
        REQUIRE(j.size() == 3);
        CHECK(j[2]["batch"]["index"] == 1);
        CHECK(j[2]["ranking_prefix"] == j[0]["ranking_prefix"]);
    }
}

TEST_CASE("dynamic: empty batch file and alpha invalidation") {
    TempDir dir;
    auto path = gen_file(dir, "path.txt", {"--model", "path", "--nodes", "4"});
    auto empty = dir.write("empty.txt", "# nothing\n");
    Result none = run({"dynamic", path, empty, "--undirected"});
    REQUIRE(none.code == exit_ok);
    CHECK(none.parsed().size() == 1);

    auto raise = dir.write("raise.txt", "+ 1 3\n");
    Result bad = run({"dynamic", path, raise, "--undirected"});
    CHECK(bad.code == exit_domain);
    CHECK(bad.err.find("batch 0") != std::string::npos);
    CHECK(bad.err.find("alpha") != std::string::npos);

    auto missing = dir.write("missing.txt", "- 0 3\n");
    Result pre = run({"dynamic", path, missing, "--undirected"});
    CHECK(pre.code == exit_domain);
    CHECK(pre.err.find("(0,3)") != std::string::npos);

    CHECK(run({"dynamic", path, empty, "--arithmetic", "magic"}).code == exit_usage);
}

TEST_CASE("compare: K4 and star") {
    TempDir dir;
    auto k4 = gen_file(dir, "k4.txt", {"--model", "complete", "--nodes", "4"});
    Result r = run({"compare", k4, "--undirected", "--per-node"});
    REQUIRE(r.code == exit_ok);
    json j = r.parsed();
    REQUIRE(j.size() == 3);
    CHECK(j[0]["method"] == "katz");
    CHECK(j[1]["method"] == "foster");
    CHECK(j[2]["method"] == "cg");
    for (const auto &report : j) {
        CHECK(report["agreement"] == 1.0);
        for (const auto &row : report["nodes"])
            CHECK(std::abs(row["upper"].get<double>() - 3.0) < 1e-8);
    }

    auto star = gen_file(dir, "star.txt", {"--model", "star", "--nodes", "4"});
    Result s = run({"compare", star, "--undirected"});
    REQUIRE(s.code == exit_ok);
    for (const auto &report : s.parsed())
        CHECK(report["ranking_prefix"][0] == 0);

    CHECK(run({"compare", star, "--undirected", "--out", "csv"}).code == exit_usage);
    CHECK(run({"compare", star, "--methods", "katz,pagerank"}).code == exit_usage);
}

TEST_CASE("gen: edge counts and determinism") {
    TempDir dir;
    Result k4 = run({"gen", "--model", "complete", "--nodes", "4", "-"});
    REQUIRE(k4.code == exit_ok);
    std::istringstream lines(k4.out);
    std::string line;
    int edges = 0;
    while (std::getline(lines, line))
        if (!line.empty() && line[0] != '#' && line.rfind("NODES", 0) != 0)
            ++edges;
    CHECK(edges == 6);

    Result path = run({"gen", "--model", "path", "--nodes", "3"});
    CHECK(path.out.find("0 1\n1 2\n") != std::string::npos);

    auto a = gen_file(dir, "a.txt", {"--model", "rmat", "--scale", "8", "--seed", "5"});
    auto b = gen_file(dir, "b.txt", {"--model", "rmat", "--scale", "8", "--seed", "5"});
    CHECK(slurp(a) == slurp(b));
    auto c = gen_file(dir, "c.txt", {"--model", "rmat", "--scale", "8", "--seed", "6"});
    CHECK(slurp(a) != slurp(c));

    CHECK(run({"gen", "--model", "grid", "--nodes", "10"}).code == exit_usage);
    CHECK(run({"gen", "--model", "hypercube", "--nodes", "8"}).code == exit_usage);
}

TEST_CASE("concordant fraction") {
    CHECK(concordant_fraction({0, 1, 2, 3}, {0, 1, 2, 3}) == 1.0);
    CHECK(concordant_fraction({0, 1, 2, 3}, {3, 2, 1, 0}) == 0.0);
    CHECK(concordant_fraction({0, 1, 2}, {1, 0, 2}) == doctest::Approx(2.0 / 3.0));
    CHECK(concordant_fraction({0}, {0}) == 1.0);

    std::vector<node> ref(300), other(300);
    for (node i = 0; i < 300; ++i) {
        ref[i] = i;
        other[i] = (i * 7) % 300;
    }
    std::size_t concordant = 0;
    for (node i = 0; i < 300; ++i)
        for (node j = i + 1; j < 300; ++j)
            concordant += other[i] < other[j];
    CHECK(concordant_fraction(ref, other) == doctest::Approx(concordant / 44850.0));
}
