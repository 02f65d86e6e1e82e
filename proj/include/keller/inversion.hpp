#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "keller/identity_report.hpp"
#include "keller/polymap.hpp"

namespace keller {

/// Hard ceiling on truncation degrees; the degree bound is doubly exponential.
inline constexpr int kDefaultGuardCap = 512;

/// Truncated formal inverse F of y = x - V(x), in the y variables.
struct InverseSeries {
    std::size_t n = 0;
    int cap = 0;
    std::vector<Polynomial> components;
    int stabilized_at = 0; ///< iterations after which nothing changed
};

struct PolynomialityCertificate {
    int verified_cap = 0;          ///< both residuals vanish through this degree
    bool residual_norm_zero = false;
    int highest_nonzero_order = 0; ///< largest degree present in F
    bool polynomial_so_far = false; ///< F has no term at the cap itself
    bool lower_confidence = false;  ///< cap below the theoretical degree bound
};

struct DegreeBoundReport {
    Integer bound;
    int observed_degree = 0;
    bool within_bound = false;
    /// cap > bound, so a term above the bound would have been seen.
    bool falsifiable = false;
};

/// Fixed-point iteration F <- y + V(F) truncated at cap until nothing changes.
/// Requires V without linear part; at most cap + 1 iterations.
InverseSeries invert_truncated(const PolyMap& map, int cap);

/// Inverse through linear_reduction when V has a nilpotent linear part:
/// F(y) = F_W(R y). Otherwise identical to invert_truncated.
InverseSeries invert_with_reduction(const PolyMap& map, int cap);

/// Verifies F - V(F) - y == 0 and F(x - V(x)) - x == 0 through F.cap.
/// Throws InternalInconsistency on a nonzero residual.
PolynomialityCertificate certify_polynomial(const PolyMap& map, const InverseSeries& inverse);

/// d^(2^n - 2), exact. Rejects n >= 30.
Integer degree_bound(std::size_t n, int d);

/// n^2 d^(2^n - 1): the relaxed bound stated for a nonzero linear part.
Integer relaxed_degree_bound(std::size_t n, int d);

/// Compares the observed degree of F with degree_bound (or the relaxed bound
/// when use_relaxed_bound).
DegreeBoundReport check_degree_bound(const PolyMap& map, const InverseSeries& inverse,
                                     bool use_relaxed_bound = false);

/// Per component and order N <= cap: sum of |coefficients| of order-N terms
/// of F is at most ((2n)^d * sup_norm)^(N-1). Requires V without linear part.
IdentityReport growth_check(const PolyMap& map, const InverseSeries& inverse);

/// Cap to use when the caller gives none: min(degree_bound, guard); with a
/// user cap, that cap. Throws GuardExceeded when the chosen cap exceeds guard.
int choose_cap(std::size_t n, int d, std::optional<int> user_cap, int guard = kDefaultGuardCap);

} // namespace keller
