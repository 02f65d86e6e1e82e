#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>

#include "keller/polynomial.hpp"

namespace keller {

/// A coefficient where two sides of an identity disagree.
struct Discrepancy {
    std::size_t component; ///< 1-based
    Monomial monomial;
    Rational lhs;
    Rational rhs;
};

/// Outcome of checking one identity on one instance.
struct IdentityReport {
    std::string identity;
    bool holds = true;
    std::optional<Discrepancy> first_discrepancy;
    std::string detail;
};

/// Compares two vectors of polynomials coefficientwise through total degree
/// cap (negative cap: no truncation). The first discrepancy is the one of
/// lowest degree, then lowest component, then grlex-smallest monomial.
IdentityReport compare_components(std::string identity, std::span<const Polynomial> lhs,
                                  std::span<const Polynomial> rhs, int cap = -1);

} // namespace keller
