#include "keller/inversion.hpp"

#include <algorithm>

#include "keller/errors.hpp"

namespace keller {

namespace {

constexpr std::size_t kMaxBoundDimension = 30;

std::vector<Polynomial> identity_components(std::size_t n) {
    std::vector<Polynomial> out;
    for (std::size_t i = 1; i <= n; ++i) out.push_back(Polynomial::variable(n, i));
    return out;
}

Integer power(const Integer& base, const Integer& exponent) {
    if (!exponent.fits_ulong_p()) throw GuardExceeded("degree bound exponent too large");
    Integer out;
    mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exponent.get_ui());
    return out;
}

Integer two_to_the(std::size_t n) {
    Integer out;
    mpz_ui_pow_ui(out.get_mpz_t(), 2, n);
    return out;
}

void require_bound_domain(std::size_t n, int d) {
    if (n < 1) throw DomainError("degree bound: n must be at least 1");
    if (d < 2) throw DomainError("degree bound: d must be at least 2");
    if (n >= kMaxBoundDimension) {
        throw GuardExceeded("degree bound: n = " + std::to_string(n) +
                            " is past the practicality guard (n < 30); the bound has ~2^n digits");
    }
}

} // namespace

InverseSeries invert_truncated(const PolyMap& map, int cap) {
    if (cap < 1) throw DomainError("invert_truncated: cap must be at least 1");
    if (map.has_linear_part()) {
        throw PreconditionError("invert_truncated: map has a linear part; apply linear_reduction first");
    }
    const std::size_t n = map.n();
    const std::vector<Polynomial> y = identity_components(n);
    InverseSeries series{n, cap, y, 0};
    // Coefficients of order <= m + 1 are final after m iterations.
    for (int m = 0; m <= cap + 1; ++m) {
        std::vector<Polynomial> next = map.apply(series.components, cap);
        for (std::size_t i = 0; i < n; ++i) next[i] += y[i];
        if (next == series.components) {
            series.stabilized_at = m;
            return series;
        }
        series.components = std::move(next);
    }
    throw InternalInconsistency("invert_truncated: no stabilization after cap + 2 iterations");
}

InverseSeries invert_with_reduction(const PolyMap& map, int cap) {
    if (!map.has_linear_part()) return invert_truncated(map, cap);
    LinearReduction red = linear_reduction(map);
    InverseSeries inner = invert_truncated(red.reduced, cap);
    const std::size_t n = map.n();
    std::vector<Polynomial> ry;
    for (std::size_t i = 0; i < n; ++i) {
        Polynomial s(n);
        for (std::size_t j = 0; j < n; ++j) {
            if (sgn(red.resolvent[i][j]) != 0) s += Polynomial::variable(n, j + 1) * red.resolvent[i][j];
        }
        ry.push_back(std::move(s));
    }
    InverseSeries out{n, cap, {}, inner.stabilized_at};
    for (const auto& c : inner.components) out.components.push_back(compose(c, ry, cap));
    return out;
}

PolynomialityCertificate certify_polynomial(const PolyMap& map, const InverseSeries& inverse) {
    const std::size_t n = map.n();
    if (inverse.n != n || inverse.components.size() != n) {
        throw DimensionMismatch("certify_polynomial: inverse dimension differs from map");
    }
    const int cap = inverse.cap;
    const std::vector<Polynomial> y = identity_components(n);

    // Left: G(F(y)) = F - V(F) must equal y.
    std::vector<Polynomial> v_of_f = map.apply(inverse.components, cap);
    // Right: F(G(x)) must equal x.
    std::vector<Polynomial> g;
    for (std::size_t i = 0; i < n; ++i) g.push_back(y[i] - map.components()[i]);

    for (std::size_t i = 0; i < n; ++i) {
        Polynomial left = (inverse.components[i] - v_of_f[i] - y[i]).truncated(cap);
        if (!left.is_zero()) {
            throw InternalInconsistency("certify_polynomial: residual F - V(F) - y nonzero in component " +
                                        std::to_string(i + 1) + ": " + left.to_string("y"));
        }
        Polynomial right = (compose(inverse.components[i], g, cap) - y[i]).truncated(cap);
        if (!right.is_zero()) {
            throw InternalInconsistency("certify_polynomial: residual F(x - V(x)) - x nonzero in component " +
                                        std::to_string(i + 1) + ": " + right.to_string());
        }
    }

    PolynomialityCertificate cert;
    cert.verified_cap = cap;
    cert.residual_norm_zero = true;
    for (const auto& c : inverse.components) cert.highest_nonzero_order = std::max(cert.highest_nonzero_order, c.degree());
    cert.polynomial_so_far = cert.highest_nonzero_order < cap;
    if (map.d() >= 2 && n < kMaxBoundDimension) {
        cert.lower_confidence = Integer(cap) < degree_bound(n, map.d());
    } else {
        cert.lower_confidence = map.d() >= 2;
    }
    return cert;
}

Integer degree_bound(std::size_t n, int d) {
    require_bound_domain(n, d);
    return power(Integer(d), two_to_the(n) - 2);
}

Integer relaxed_degree_bound(std::size_t n, int d) {
    require_bound_domain(n, d);
    Integer nn = static_cast<unsigned long>(n);
    return nn * nn * power(Integer(d), two_to_the(n) - 1);
}

DegreeBoundReport check_degree_bound(const PolyMap& map, const InverseSeries& inverse, bool use_relaxed_bound) {
    DegreeBoundReport report;
    report.bound = use_relaxed_bound ? relaxed_degree_bound(map.n(), map.d()) : degree_bound(map.n(), map.d());
    for (const auto& c : inverse.components) report.observed_degree = std::max(report.observed_degree, c.degree());
    report.within_bound = Integer(report.observed_degree) <= report.bound;
    report.falsifiable = Integer(inverse.cap) > report.bound;
    return report;
}

IdentityReport growth_check(const PolyMap& map, const InverseSeries& inverse) {
    if (map.has_linear_part()) throw PreconditionError("growth_check: map has a linear part; reduce it first");
    const std::size_t n = map.n();
    MapNorms norms = map_norms(map);
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 2 * n, static_cast<unsigned long>(map.d()));
    const Rational ratio = Rational(scale) * norms.sup_norm;

    IdentityReport report{"coefficient growth ((2n)^d |V|)^(N-1)", true, std::nullopt, {}};
    for (std::size_t i = 0; i < inverse.components.size() && report.holds; ++i) {
        std::vector<Rational> mass(static_cast<std::size_t>(inverse.cap) + 1, 0);
        for (const auto& [m, c] : inverse.components[i].terms()) mass[m.degree()] += abs(c);
        Rational bound = 1; // ratio^(N-1), starting at N = 1
        for (int order = 1; order <= inverse.cap; ++order) {
            if (order > 1) bound *= ratio;
            if (mass[static_cast<std::size_t>(order)] > bound) {
                report.holds = false;
                report.detail = "component " + std::to_string(i + 1) + ", order " + std::to_string(order) +
                                ": coefficient mass " + rational_to_string(mass[static_cast<std::size_t>(order)]) +
                                " exceeds " + rational_to_string(bound);
                break;
            }
        }
    }
    return report;
}

int choose_cap(std::size_t n, int d, std::optional<int> user_cap, int guard) {
    int cap = 0;
    if (user_cap) {
        cap = *user_cap;
        if (cap < 1) throw DomainError("cap must be at least 1");
    } else if (d < 2) {
        cap = 1;
    } else if (n >= kMaxBoundDimension) {
        cap = guard;
    } else {
        Integer bound = degree_bound(n, d);
        cap = bound > guard ? guard : static_cast<int>(bound.get_si());
    }
    if (cap > guard) {
        throw GuardExceeded("cap " + std::to_string(cap) + " exceeds the safety guard " + std::to_string(guard));
    }
    return cap;
}

} // namespace keller
