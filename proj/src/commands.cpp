#include "keller/commands.hpp"

#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "keller/errors.hpp"
#include "keller/mapfile.hpp"
#include "keller/traces.hpp"
#include "keller/trees.hpp"

namespace keller::cli {

namespace {

Json strings(std::span<const Polynomial> polys, const std::string& var) {
    Json out = Json::array();
    for (const auto& p : polys) out.push_back(p.to_string(var));
    return out;
}

Json rational_matrix(const std::vector<std::vector<Rational>>& m) {
    Json out = Json::array();
    for (const auto& row : m) {
        Json r = Json::array();
        for (const auto& v : row) r.push_back(rational_to_string(v));
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<std::vector<Rational>> linear_part(const PolyMap& map) {
    const std::size_t n = map.n();
    std::vector<std::vector<Rational>> l(n, std::vector<Rational>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) l[i][j] = map.components()[i].coefficient(Monomial::variable(n, j + 1));
    }
    return l;
}

std::vector<Polynomial> variables(std::size_t n) {
    std::vector<Polynomial> out;
    for (std::size_t i = 1; i <= n; ++i) out.push_back(Polynomial::variable(n, i));
    return out;
}

Json header(const std::string& command, const PolyMap& map) {
    Json j;
    j["command"] = command;
    j["n"] = map.n();
    j["d"] = map.d();
    return j;
}

} // namespace

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
        throw Error("sha256 digest failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int k = 0; k < length; ++k) {
        out += hex[digest[k] >> 4];
        out += hex[digest[k] & 0xf];
    }
    return out;
}

std::string read_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path, 0, 0);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

Input load_input(std::string_view bytes) { return Input{"sha256:" + sha256_hex(bytes), mapfile::parse(bytes)}; }

Json identity_json(const IdentityReport& report, const std::string& var) {
    Json j;
    j["identity"] = report.identity;
    j["holds"] = report.holds;
    if (report.first_discrepancy) {
        const auto& d = *report.first_discrepancy;
        j["first_discrepancy"] = {{"component", d.component},
                                  {"monomial", to_string(d.monomial, var)},
                                  {"lhs", rational_to_string(d.lhs)},
                                  {"rhs", rational_to_string(d.rhs)}};
    } else {
        j["first_discrepancy"] = nullptr;
    }
    return j;
}

Outcome run_check(const PolyMap& map, const CheckOptions& options) {
    Outcome out{header("check", map), exit_ok};
    Json& r = out.report;

    const KellerReport keller = keller_check(map);
    Json kj;
    kj["is_keller"] = keller.is_keller;
    kj["det"] = keller.det_polynomial.to_string();
    if (keller.witness) {
        kj["witness"] = {{"monomial", to_string(keller.witness->monomial)},
                         {"coefficient", rational_to_string(keller.witness->coefficient)}};
    } else {
        kj["witness"] = nullptr;
    }
    r["keller"] = kj;

    const MapNorms norms = map_norms(map);
    r["norms"] = {{"sup_norm", rational_to_string(norms.sup_norm)}, {"radius", rational_to_string(norms.radius)}};

    Json lin;
    lin["present"] = map.has_linear_part();
    lin["matrix"] = rational_matrix(linear_part(map));
    std::optional<LinearReduction> reduction;
    bool nilpotent = true;
    if (map.has_linear_part()) {
        try {
            reduction = linear_reduction(map);
        } catch (const NotNilpotent& e) {
            nilpotent = false;
            lin["reason"] = e.what();
            if (options.reduce_linear) throw;
        }
    }
    lin["nilpotent"] = nilpotent;
    r["linear_part"] = lin;

    if (options.reduce_linear) {
        const PolyMap reduced = reduction ? reduction->reduced : map;
        Json red;
        red["reduced"] = strings(reduced.components(), "x");
        if (reduction) {
            red["resolvent"] = rational_matrix(reduction->resolvent);
            red["resolvent_bound"] = rational_to_string(reduction->resolvent_bound);
            red["resolvent_bound_holds"] = reduction->resolvent_bound_holds;
        }
        if (options.out) {
            mapfile::write_file(*options.out, reduced);
            red["written"] = *options.out;
        }
        r["reduction"] = red;
    }

    if (!keller.is_keller) out.exit_code = exit_false;
    r["exit_code"] = out.exit_code;
    return out;
}

Outcome run_invert(const PolyMap& map, const InvertOptions& options) {
    Outcome out{header("invert", map), exit_ok};
    Json& r = out.report;
    const std::size_t n = map.n();

    const int cap = choose_cap(n, map.d(), options.cap, options.guard);
    r["cap"] = cap;
    if (options.cap) {
        r["cap_source"] = "user";
    } else if (map.d() >= 2 && (n >= 30 || degree_bound(n, map.d()) > cap)) {
        r["cap_source"] = "guard";
    } else {
        r["cap_source"] = "degree_bound";
    }

    InverseSeries inverse = invert_with_reduction(map, cap);
    if (options.inject_residual_fault) inverse.components[0] += Polynomial::variable(n, 1);

    int highest = 0;
    for (const auto& c : inverse.components) highest = std::max(highest, c.degree());
    r["stabilized_at"] = inverse.stabilized_at;
    r["highest_order"] = highest;
    r["inverse"] = strings(inverse.components, "y");

    if (options.certify) {
        const bool keller = keller_check(map).is_keller;
        const PolynomialityCertificate cert = certify_polynomial(map, inverse);
        Json cj;
        cj["verified_cap"] = cert.verified_cap;
        cj["residual_norm_zero"] = cert.residual_norm_zero;
        cj["highest_nonzero_order"] = cert.highest_nonzero_order;
        cj["polynomial_so_far"] = cert.polynomial_so_far;
        cj["lower_confidence"] = cert.lower_confidence;
        r["certificate"] = cj;

        Json bj;
        bj["applicable"] = keller;
        if (map.d() >= 2 && n < 30) {
            const DegreeBoundReport bound = check_degree_bound(map, inverse, false);
            bj["bound"] = bound.bound.get_str();
            bj["observed_degree"] = bound.observed_degree;
            bj["within_bound"] = bound.within_bound;
            bj["falsifiable"] = bound.falsifiable;
            if (map.has_linear_part()) {
                const DegreeBoundReport relaxed = check_degree_bound(map, inverse, true);
                bj["relaxed_bound"] = relaxed.bound.get_str();
                bj["within_relaxed_bound"] = relaxed.within_bound;
            }
            const bool within = map.has_linear_part() ? check_degree_bound(map, inverse, true).within_bound
                                                      : bound.within_bound;
            if (keller && !within) out.exit_code = exit_false;
        } else {
            bj["bound"] = nullptr;
        }
        r["degree_bound"] = bj;

        IdentityReport growth = map.has_linear_part()
                                    ? [&] {
                                          const PolyMap reduced = linear_reduction(map).reduced;
                                          return growth_check(reduced, invert_truncated(reduced, cap));
                                      }()
                                    : growth_check(map, inverse);
        r["growth"] = {{"identity", growth.identity}, {"holds", growth.holds}, {"detail", growth.detail}};
        if (!growth.holds) out.exit_code = exit_false;
    }

    if (options.out) {
        std::vector<Polynomial> vertex;
        const auto y = variables(n);
        int degree = 1;
        for (std::size_t i = 0; i < n; ++i) {
            vertex.push_back(y[i] - inverse.components[i]);
            degree = std::max(degree, vertex.back().degree());
        }
        mapfile::write_file(*options.out, PolyMap(n, degree, std::move(vertex)));
        r["written"] = *options.out;
    }
    r["exit_code"] = out.exit_code;
    return out;
}

Outcome run_trees(const PolyMap& map, const TreesOptions& options) {
    Outcome out{header("trees", map), exit_ok};
    Json& r = out.report;
    const std::size_t n = map.n();
    if (options.filter_level && (*options.filter_level < 0 || static_cast<std::size_t>(*options.filter_level) > n)) {
        throw DomainError("--filter-level must lie in 0.." + std::to_string(n));
    }
    r["order"] = options.order;

    std::vector<int> levels;
    for (std::size_t k = 1; k <= n; ++k) levels.push_back(static_cast<int>(k));
    const TreeStatistics stats = tree_statistics(map, options.order, levels);
    r["count_by_order"] = stats.count_by_order;
    Json hist = Json::object();
    for (const auto& [length, count] : stats.length_histogram) hist[std::to_string(length)] = count;
    r["length_histogram"] = hist;
    Json surv = Json::object();
    for (std::size_t s = 0; s < levels.size(); ++s) surv[std::to_string(levels[s])] = stats.survivors_by_level[s];
    r["survivors_by_level"] = surv;

    if (options.filter_level) {
        r["filter_level"] = *options.filter_level;
        r["restricted_sum"] = strings(restricted_sum(map, options.order, *options.filter_level), "y");
    }

    if (options.factorization) {
        const FactorizationReport f = factorization_check(map, options.order);
        Json fj = identity_json(f.identity);
        fj["total_trees"] = f.total_trees;
        fj["surviving_trees"] = f.surviving_trees;
        fj["max_survivor_length"] = f.max_survivor_length;
        fj["length_bound"] = f.length_bound.get_str();
        fj["length_bound_holds"] = f.length_bound_holds;
        Json by_length = Json::object();
        for (const auto& [length, degree] : f.max_degree_by_length) by_length[std::to_string(length)] = degree;
        fj["max_degree_by_length"] = by_length;
        fj["degree_per_length_holds"] = f.degree_per_length_holds;
        r["factorization"] = fj;
        if (!f.identity.holds || !f.length_bound_holds || !f.degree_per_length_holds) out.exit_code = exit_false;
    }
    r["exit_code"] = out.exit_code;
    return out;
}

Outcome run_trace(const PolyMap& map, const TraceOptions& options) {
    Outcome out{header("trace", map), exit_ok};
    Json& r = out.report;
    const std::size_t n = map.n();
    const int cap = options.cap;
    if (cap < 1) throw DomainError("--cap must be at least 1");
    r["cap"] = cap;

    const bool keller = keller_check(map).is_keller;
    r["is_keller"] = keller;

    if (map.has_linear_part()) linear_reduction(map); // NotNilpotent: the series would not truncate
    const PolyMatrix j = jacobian(map);
    const std::optional<int> q_cap =
        map.has_linear_part() ? std::optional<int>((cap + 1) * static_cast<int>(n)) : std::nullopt;
    const TraceSeries series = trace_log_series(j, cap, q_cap);
    const bool vanishes = series.value.is_zero();
    r["trace_log_series"] = {{"value", series.value.to_string()}, {"vanishes", vanishes}};

    // Built-in differential test of the two partition paths.
    bool agree = true;
    for (int q = 1; q <= std::min(cap, 5) && agree; ++q) {
        auto words = min_index_partition(j, q, cap, PartitionMethod::cyclic_words);
        auto blocks = min_index_partition(j, q, cap, PartitionMethod::inclusion_exclusion);
        for (std::size_t k = 0; k < n; ++k) agree = agree && words[k].value == blocks[k].value;
    }
    r["partition_methods_agree"] = agree;

    const TraceProductReport product = restricted_exp_product_check(map, cap);
    Json pj;
    pj["reduced"] = product.reduced;
    pj["restricted"] = strings(product.restricted, "x");
    pj["partition"] = identity_json(product.partition, "x");
    pj["vanishing"] = identity_json(product.vanishing, "x");
    pj["vanishing_expected_fail"] = product.vanishing_expected_fail;
    pj["determinant_consistency"] = identity_json(product.determinant_consistency, "x");
    r["restricted_product"] = pj;

    if (!agree || !product.partition.holds || !product.determinant_consistency.holds || vanishes != keller) {
        out.exit_code = exit_internal;
    } else if (!product.vanishing.holds) {
        out.exit_code = exit_false;
    }
    r["exit_code"] = out.exit_code;
    return out;
}

int exit_code_for(const std::exception& error) {
    if (dynamic_cast<const ParseError*>(&error)) return exit_parse;
    if (dynamic_cast<const NotKeller*>(&error)) return exit_misuse;
    if (dynamic_cast<const PreconditionError*>(&error)) return exit_precondition;
    if (dynamic_cast<const DomainError*>(&error)) return exit_precondition;
    if (dynamic_cast<const GuardExceeded*>(&error)) return exit_guard;
    return exit_internal;
}

Json error_json(const std::exception& error) {
    Json j;
    std::string kind = "internal";
    switch (exit_code_for(error)) {
    case exit_parse: kind = "parse"; break;
    case exit_misuse: kind = "conditional_misuse"; break;
    case exit_precondition: kind = "precondition"; break;
    case exit_guard: kind = "guard"; break;
    default: break;
    }
    j["kind"] = kind;
    j["message"] = error.what();
    if (const auto* p = dynamic_cast<const ParseError*>(&error)) {
        j["line"] = p->line();
        j["column"] = p->column();
    }
    return j;
}

} // namespace keller::cli
