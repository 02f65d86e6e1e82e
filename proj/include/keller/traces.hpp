#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "keller/identity_report.hpp"
#include "keller/polymap.hpp"
#include "keller/polymatrix.hpp"

namespace keller {

/// Truncation of sum_{q>=1} (1/q) Tr M^q, i.e. -Tr ln(1 - M).
struct TraceSeries {
    int cap = 0;
    int q_max = 0; ///< largest power summed
    Polynomial value{0};
};

/// Without q_cap, M must have no constant entries and q runs to cap. With
/// q_cap, powers up to q_cap are summed whatever the constant part.
TraceSeries trace_log_series(const PolyMatrix& m, int cap, std::optional<int> q_cap = std::nullopt);

/// Part of Tr M^Q from cyclic index words whose smallest index is exactly r.
struct MinIndexClass {
    std::size_t r = 0;
    Polynomial value{0};
};

enum class PartitionMethod {
    automatic,           ///< cyclic words when n^Q <= kAutomaticWordLimit
    cyclic_words,        ///< explicit words, guarded by kCyclicWordGuard
    inclusion_exclusion, ///< Tr(M on indices >= r)^Q - Tr(M on indices >= r+1)^Q
};

inline constexpr double kAutomaticWordLimit = 4096;
inline constexpr double kCyclicWordGuard = 1e6;

/// Classes r = 1..n; they sum to Tr M^Q. cap >= 0 truncates every product.
std::vector<MinIndexClass> min_index_partition(const PolyMatrix& m, int q, int cap = -1,
                                               PartitionMethod method = PartitionMethod::automatic);

struct TraceProductReport {
    bool keller = false;
    int cap = 0;
    bool reduced = false;               ///< computed on linear_reduction(V).reduced
    Polynomial full{0};                 ///< trace_log_series(V', cap)
    std::vector<Polynomial> restricted; ///< [r-1] -> class-r series
    IdentityReport partition;           ///< sum_r restricted == full
    IdentityReport vanishing;           ///< full == 0 and prod_r exp(restricted) == 1
    bool vanishing_expected_fail = false; ///< input fails the Jacobian condition
    IdentityReport determinant_consistency; ///< exp(full) == 1 / det(I - V')
};

/// The per-r restricted trace-log series of V' and their product. A map with a
/// linear part is first reduced (NotNilpotent when that fails); for non-Keller
/// input the vanishing part is flagged as an expected failure.
TraceProductReport restricted_exp_product_check(const PolyMap& map, int cap);

/// The trace-log series of V' evaluated at the components of `at`
/// (for instance a truncated inverse), truncated at cap.
Polynomial trace_log_at(const PolyMap& map, std::span<const Polynomial> at, int cap);

} // namespace keller
