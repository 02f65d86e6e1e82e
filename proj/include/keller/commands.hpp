#pragma once

#include <exception>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "keller/identity_report.hpp"
#include "keller/inversion.hpp"
#include "keller/polymap.hpp"

namespace keller::cli {

using Json = nlohmann::ordered_json;

/// Process exit codes shared by every subcommand.
enum ExitCode : int {
    exit_ok = 0,            ///< ran; every checked identity holds
    exit_false = 1,         ///< ran; a checked identity is false
    exit_parse = 2,         ///< unreadable map file or bad command line
    exit_precondition = 3,  ///< input violates a precondition (e.g. linear part not nilpotent)
    exit_guard = 4,         ///< requested work exceeds a safety guard
    exit_internal = 5,      ///< an identity that holds by construction failed
    exit_misuse = 6,        ///< conditional check requested on input that fails its condition
};

struct Outcome {
    Json report;
    int exit_code = exit_ok;
};

struct Input {
    std::string digest; ///< "sha256:<hex>" of the file bytes
    PolyMap map;
};

std::string sha256_hex(std::string_view bytes);

/// Raw file contents; an unreadable file is a ParseError at line 0.
std::string read_bytes(const std::string& path);

/// Digest and parsed map of file contents; throws ParseError.
Input load_input(std::string_view bytes);

struct CheckOptions {
    bool reduce_linear = false;
    std::optional<std::string> out; ///< where to write the reduced map
};

struct InvertOptions {
    std::optional<int> cap;
    bool certify = false;
    std::optional<std::string> out; ///< where to write the inverse (as its vertex y - F)
    int guard = kDefaultGuardCap;
    bool inject_residual_fault = false; ///< test hook: corrupt F before certification
};

struct TreesOptions {
    int order = 4;
    std::optional<int> filter_level;
    bool factorization = false;
};

struct TraceOptions {
    int cap = 8;
};

Outcome run_check(const PolyMap& map, const CheckOptions& options);
Outcome run_invert(const PolyMap& map, const InvertOptions& options);
Outcome run_trees(const PolyMap& map, const TreesOptions& options);
Outcome run_trace(const PolyMap& map, const TraceOptions& options);

/// Exit code for an exception escaping a command.
int exit_code_for(const std::exception& error);

/// {"kind": ..., "message": ..., ["line", "column"]}
Json error_json(const std::exception& error);

Json identity_json(const IdentityReport& report, const std::string& var = "y");

} // namespace keller::cli
