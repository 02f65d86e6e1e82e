// keller: check, invert, enumerate trees and verify trace identities for
// polynomial maps y = x - V(x) given as JSON map files.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "keller/commands.hpp"
#include "keller/errors.hpp"

namespace {

using keller::cli::Json;

int env_int(const char* name, int fallback) {
    const char* value = std::getenv(name);
    if (!value || !*value) return fallback;
    try {
        std::size_t used = 0;
        int v = std::stoi(value, &used);
        if (used != std::string(value).size() || v < 1) throw std::invalid_argument(name);
        return v;
    } catch (const std::exception&) {
        throw keller::DomainError(std::string(name) + " must be a positive integer");
    }
}

bool env_flag(const char* name) {
    const char* value = std::getenv(name);
    return value && std::string(value) == "1";
}

void emit(const Json& report) { std::cout << report.dump(2) << '\n'; }

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact checks for polynomial maps y = x - V(x)"};
    app.require_subcommand(1);

    std::string file;
    bool timings = false;
    app.add_flag("--timings", timings, "Append wall-clock timings to the report");

    keller::cli::CheckOptions check_opts;
    std::string check_out;
    auto* check = app.add_subcommand("check", "Jacobian condition, norms and the linear part");
    check->add_option("file", file, "Map file")->required();
    auto* reduce_flag = check->add_flag("--reduce-linear", check_opts.reduce_linear, "Remove a nilpotent linear part");
    check->add_option("--out", check_out, "Write the reduced map here")->needs(reduce_flag);

    keller::cli::InvertOptions invert_opts;
    int cap = 0;
    std::string invert_out;
    auto* invert = app.add_subcommand("invert", "Truncated formal inverse");
    invert->add_option("file", file, "Map file")->required();
    auto* cap_opt = invert->add_option("--cap", cap, "Truncation degree")->check(CLI::Range(1, 1 << 30));
    invert->add_flag("--certify", invert_opts.certify, "Verify residuals, degree bound and coefficient growth");
    invert->add_option("--out", invert_out, "Write the inverse map (as its vertex y - F) here");

    keller::cli::TreesOptions trees_opts;
    int filter_level = 0;
    auto* trees = app.add_subcommand("trees", "Tree statistics, restricted sums and the factorization check");
    trees->add_option("file", file, "Map file")->required();
    trees->add_option("--order", trees_opts.order, "Largest number of leaves")->check(CLI::Range(1, 1 << 20));
    auto* level_opt = trees->add_option("--filter-level", filter_level, "Restricted sum at this level");
    trees->add_flag("--factorization", trees_opts.factorization, "Compare full and fully restricted sums");

    keller::cli::TraceOptions trace_opts;
    auto* trace = app.add_subcommand("trace", "Trace-log series and restricted exponential product");
    trace->add_option("file", file, "Map file")->required();
    trace->add_option("--cap", trace_opts.cap, "Truncation degree")->check(CLI::Range(1, 1 << 20));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : keller::cli::exit_parse;
    }

    std::string command;
    if (check->parsed()) command = "check";
    if (invert->parsed()) command = "invert";
    if (trees->parsed()) command = "trees";
    if (trace->parsed()) command = "trace";

    const auto start = std::chrono::steady_clock::now();
    Json report;
    int code = keller::cli::exit_ok;
    std::string digest;
    try {
        const std::string bytes = keller::cli::read_bytes(file);
        digest = "sha256:" + keller::cli::sha256_hex(bytes);
        keller::cli::Input input = keller::cli::load_input(bytes);
        keller::cli::Outcome outcome;
        if (command == "check") {
            if (!check_out.empty()) check_opts.out = check_out;
            outcome = keller::cli::run_check(input.map, check_opts);
        } else if (command == "invert") {
            if (*cap_opt) invert_opts.cap = cap;
            if (!invert_out.empty()) invert_opts.out = invert_out;
            invert_opts.guard = env_int("KELLER_GUARD_CAP", keller::kDefaultGuardCap);
            invert_opts.inject_residual_fault = env_flag("KELLER_INJECT_RESIDUAL_FAULT");
            outcome = keller::cli::run_invert(input.map, invert_opts);
        } else if (command == "trees") {
            if (*level_opt) trees_opts.filter_level = filter_level;
            outcome = keller::cli::run_trees(input.map, trees_opts);
        } else {
            outcome = keller::cli::run_trace(input.map, trace_opts);
        }
        report = std::move(outcome.report);
        code = outcome.exit_code;
    } catch (const std::exception& e) {
        code = keller::cli::exit_code_for(e);
        report["command"] = command;
        report["error"] = keller::cli::error_json(e);
        report["exit_code"] = code;
        std::cerr << "keller " << command << ": " << e.what() << '\n';
    }

    Json document;
    document["command"] = command;
    document["input_digest"] = digest.empty() ? Json(nullptr) : Json(digest);
    for (auto& [key, value] : report.items()) document[key] = value;
    if (timings) {
        const auto elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start);
        document["timings"] = {{"elapsed_ms", elapsed.count()}};
    }
    emit(document);
    return code;
}
