#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "keller/commands.hpp"
#include "keller/corpus.hpp"
#include "keller/errors.hpp"
#include "keller/mapfile.hpp"
#include "support.hpp"

using namespace keller;
using keller::testing::map_of;

namespace {

struct Run {
    int exit_code;
    std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
    const std::string command = env + (env.empty() ? "" : " ") + KELLER_BIN + " " + args + " 2>/dev/null";
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    std::array<char, 4096> buffer{};
    while (std::size_t got = std::fread(buffer.data(), 1, buffer.size(), pipe)) out.append(buffer.data(), got);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string fixture(const std::string& name) { return std::string(KELLER_CORPUS_DIR) + "/" + name + ".json"; }

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream b;
    b << in.rdbuf();
    return b.str();
}

std::filesystem::path scratch(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / "keller_cli_test";
    std::filesystem::create_directories(dir);
    return dir / name;
}

// The error must point at the first occurrence of `anchor` (plus `skip`).
void expect_parse_error(const std::string& text, const std::string& anchor, const std::string& fragment,
                        std::size_t skip = 0) {
    const std::size_t offset = text.find(anchor) + skip;
    REQUIRE(offset < text.size());
    std::size_t line = 1;
    std::size_t line_start = 0;
    for (std::size_t k = 0; k < offset; ++k) {
        if (text[k] == '\n') {
            ++line;
            line_start = k + 1;
        }
    }
    try {
        mapfile::parse(text);
        FAIL("expected a parse error for: " << text);
    } catch (const ParseError& e) {
        INFO(e.what());
        CHECK(e.line() == line);
        CHECK(e.column() == offset - line_start + 1);
        CHECK(std::string(e.what()).find(fragment) != std::string::npos);
    }
}

} // namespace

TEST_CASE("map files round-trip canonically") {
    for (const auto& f : corpus::standard_corpus()) {
        const std::string text = mapfile::write(f.map);
        CHECK(mapfile::parse(text) == f.map);
        CHECK(mapfile::write(mapfile::parse(text)) == text);
    }
    // Repeated monomials sum, zeros vanish, fractions reduce, order normalizes.
    PolyMap m = mapfile::parse(R"({"n": 2, "d": 2, "components": [
        [{"coeff": "2/4", "exps": [0, 2]}, {"coeff": "1/2", "exps": [0, 2]}, {"coeff": "0", "exps": [1, 1]},
         {"coeff": "-3", "exps": [0, 1]}],
        []]})");
    CHECK(m == map_of(2, 2, {"x2^2 - 3*x2", "0"}));
    CHECK(mapfile::write(m) ==
          "{\n  \"components\": [\n    [\n      {\"coeff\": \"-3\", \"exps\": [0, 1]},\n"
          "      {\"coeff\": \"1\", \"exps\": [0, 2]}\n    ],\n    []\n  ],\n  \"d\": 2,\n  \"n\": 2\n}\n");
}

TEST_CASE("map file errors carry positions") {
    expect_parse_error("{\"n\": 2,\n \"d\": 2,\n \"components\": [[{\"coeff\": \"1\", \"exps\": [2]}], []]}", "[2]",
                       "expected 2 exponents");
    expect_parse_error("{\"n\": 1, \"d\": 2, \"components\": [[{\"coeff\": \"1/0\", \"exps\": [2]}]]}", "\"1/0\"",
                       "coeff");
    expect_parse_error("{\"n\": 1, \"d\": 2, \"components\": [[{\"coeff\": 3, \"exps\": [2]}]]}", "3,",
                       "must be a string");
    expect_parse_error("{\"n\": 1, \"d\": 2, \"components\": [[{\"coeff\": \"1\", \"exps\": [0]}]]}", "[0]",
                       "constant terms");
    expect_parse_error("{\"n\": 1, \"d\": 2, \"components\": [[{\"coeff\": \"1\", \"exps\": [3]}]]}", "[3]",
                       "exceeds d = 2");
    expect_parse_error("{\"n\": 1, \"d\": 2, \"components\": [[{\"coeff\": \"1\", \"exps\": [-1]}]]}", "-1",
                       "outside");
    expect_parse_error("{\"n\": 2, \"d\": 2, \"components\": [[]]}", "[[", "expected 2 components");
    expect_parse_error("{\"n\": 1, \"d\": 2}", "{", "missing key \"components\"");
    expect_parse_error("{\"n\": 1, \"d\": 2, \"components\": [[]], \"extra\": 1}", "1}", "unknown key");
    expect_parse_error("{\"n\": 0, \"d\": 2, \"components\": []}", "0", "outside");
    expect_parse_error("{\"n\": 1,\n  \"d\": 2,,\n}", ",,", "invalid JSON", 1);
    expect_parse_error("[1, 2]", "[", "expected an object");
}

TEST_CASE("locate finds values by path") {
    const std::string text = R"({"a": [1, {"b": "x,]"}, [2]], "c": {"d": 3}})";
    using mapfile::PathStep;
    CHECK(text.substr(mapfile::locate(text, {std::string("c"), std::string("d")}), 1) == "3");
    CHECK(text.substr(mapfile::locate(text, {std::string("a"), std::size_t{2}, std::size_t{0}}), 1) == "2");
    CHECK(text.substr(mapfile::locate(text, {std::string("a"), std::size_t{1}, std::string("b")}), 5) == "\"x,]\"");
}

TEST_CASE("library commands report outcomes") {
    auto check = cli::run_check(map_of(2, 2, {"x1^2", "0"}), {});
    CHECK(check.exit_code == cli::exit_false);
    CHECK(check.report["keller"]["witness"]["monomial"] == "x1");
    CHECK(check.report["keller"]["witness"]["coefficient"] == "-2");

    auto trees = cli::run_trees(map_of(1, 2, {"x1^2"}), {4, std::nullopt, false});
    CHECK(trees.report["count_by_order"] == cli::Json::parse("[1, 1, 2, 5]"));
    auto bare = cli::run_trees(map_of(3, 2, {"x2^2", "x3^2", "0"}), {1, std::nullopt, false});
    CHECK(bare.report["count_by_order"] == cli::Json::parse("[3]"));

    auto zero = cli::run_invert(PolyMap::zero(2, 2), {4, true});
    CHECK(zero.report["inverse"] == cli::Json::parse(R"(["y1", "y2"])"));
    auto trace = cli::run_trace(PolyMap::zero(2, 2), {});
    CHECK(trace.exit_code == cli::exit_ok);

    auto catalan = cli::run_invert(map_of(1, 2, {"x1^2"}), {4, true});
    CHECK(catalan.report["inverse"][0] == "5*y1^4 + 2*y1^3 + y1^2 + y1");
    CHECK(catalan.report["certificate"]["polynomial_so_far"] == false);
    CHECK(catalan.exit_code == cli::exit_ok);
}

TEST_CASE("every exit code is reachable from the bundled corpus") {
    CHECK(run("check " + fixture("hand_x2sq")).exit_code == 0);
    CHECK(run("check " + fixture("nonkeller_x1sq")).exit_code == 1);
    CHECK(run("check " + fixture("malformed_exps")).exit_code == 2);
    CHECK(run("check " + fixture("malformed_syntax")).exit_code == 2);
    CHECK(run("check " + fixture("nonnil_x1") + " --reduce-linear").exit_code == 3);
    CHECK(run("invert " + fixture("nonnil_x1")).exit_code == 3);
    CHECK(run("invert " + fixture("tri_n3_d3_0") + " --cap 20", "KELLER_GUARD_CAP=8").exit_code == 4);
    CHECK(run("trees " + fixture("hand_x2sq") + " --order 9").exit_code == 4);
    CHECK(run("invert " + fixture("hand_x2sq") + " --cap 4 --certify", "KELLER_INJECT_RESIDUAL_FAULT=1").exit_code ==
          5);
    CHECK(run("trees " + fixture("nonkeller_x1sq") + " --factorization").exit_code == 6);
    CHECK(run("bogus").exit_code == 2);
    CHECK(run("check /nonexistent/file.json").exit_code == 2);
}

TEST_CASE("documented command examples") {
    auto inv = run("invert " + fixture("hand_x2sq") + " --cap 4 --certify");
    CHECK(inv.exit_code == 0);
    auto j = cli::Json::parse(inv.out);
    CHECK(j["inverse"] == cli::Json::parse(R"(["y2^2 + y1", "y2"])"));
    CHECK(j["degree_bound"]["within_bound"] == true);

    auto trees = run("trees " + fixture("hand_x2sq") + " --order 4 --factorization");
    CHECK(trees.exit_code == 0);
    CHECK(cli::Json::parse(trees.out)["factorization"]["holds"] == true);

    auto trace = run("trace " + fixture("hand_x2x3_x3sq") + " --cap 8");
    CHECK(trace.exit_code == 0);

    auto bad = run("trace " + fixture("nonkeller_x1sq") + " --cap 4");
    CHECK(bad.exit_code == 1);
    auto b = cli::Json::parse(bad.out);
    CHECK(b["restricted_product"]["partition"]["holds"] == true);
    CHECK(b["restricted_product"]["vanishing"]["first_discrepancy"]["monomial"] == "x1");
    CHECK(b["restricted_product"]["vanishing"]["first_discrepancy"]["lhs"] == "2");

    auto parse = cli::Json::parse(run("check " + fixture("malformed_exps")).out);
    CHECK(parse["error"]["line"] == 4);
    CHECK(parse["error"]["column"] == 30);
}

TEST_CASE("reports are deterministic") {
    for (const std::string args : {"check " + fixture("conj_n2_d2_0"), "invert " + fixture("tri_n3_d2_1") + " --certify",
                                   "trees " + fixture("conj_n2_d2_0") + " --order 5 --factorization",
                                   "trace " + fixture("nil_conj_1") + " --cap 6"}) {
        INFO(args);
        auto first = run(args);
        auto second = run(args);
        CHECK(first.out == second.out);
        CHECK(first.out.find("timings") == std::string::npos);
    }
    CHECK(run("--timings check " + fixture("hand_x2sq")).out.find("elapsed_ms") != std::string::npos);
}

TEST_CASE("inverse files re-ingest and invert back to the input") {
    for (const std::string name : {"conj_n2_d3_1", "tri_n3_d2_2", "nil_conj_0", "elem_3"}) {
        INFO(name);
        const auto first = scratch(name + "_inverse.json");
        const auto second = scratch(name + "_back.json");
        CHECK(run("invert " + fixture(name) + " --certify --out " + first.string()).exit_code == 0);
        CHECK(run("invert " + first.string() + " --certify --out " + second.string()).exit_code == 0);
        CHECK(slurp(second) == slurp(fixture(name)));
    }
}

TEST_CASE("reduced maps are written and re-ingest") {
    const auto out = scratch("nil_hand_reduced.json");
    auto r = run("check " + fixture("nil_hand") + " --reduce-linear --out " + out.string());
    CHECK(r.exit_code == 0);
    PolyMap reduced = mapfile::read_file(out.string());
    CHECK_FALSE(reduced.has_linear_part());
    CHECK(keller_check(reduced).is_keller);
}

TEST_CASE("bundled corpus matches the generator") {
    const auto dir = scratch("regenerated");
    std::filesystem::remove_all(dir);
    const std::string command = std::string(KELLER_CORPUS_BIN) + " " + dir.string() + " >/dev/null";
    REQUIRE(std::system(command.c_str()) == 0);
    std::size_t files = 0;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        INFO(entry.path().filename().string());
        CHECK(slurp(entry.path()) == slurp(std::filesystem::path(KELLER_CORPUS_DIR) / entry.path().filename()));
        ++files;
    }
    std::size_t bundled = 0;
    for (const auto& entry : std::filesystem::directory_iterator(KELLER_CORPUS_DIR)) bundled += entry.is_regular_file();
    CHECK(files == bundled);
}
