#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "keller/polymatrix.hpp"
#include "keller/polynomial.hpp"

namespace keller {

/// The vertex V of the map y = x - V(x): n polynomial components in n
/// variables, each with zero constant term and total degree <= d.
class PolyMap {
public:
    PolyMap(std::size_t n, int d, std::vector<Polynomial> components);

    static PolyMap zero(std::size_t n, int d);

    std::size_t n() const noexcept { return components_.size(); }
    int d() const noexcept { return d_; }
    std::span<const Polynomial> components() const noexcept { return components_; }
    /// 1-based component access.
    const Polynomial& component(std::size_t i) const { return components_.at(i - 1); }

    /// True iff some component carries a degree-1 term (V'(0) != 0).
    bool has_linear_part() const noexcept;

    /// Largest total degree actually present (0 for V = 0).
    int observed_degree() const noexcept;

    /// V(subs) with every component truncated at cap.
    std::vector<Polynomial> apply(std::span<const Polynomial> subs, int cap) const;

    friend bool operator==(const PolyMap&, const PolyMap&) = default;

private:
    int d_;
    std::vector<Polynomial> components_;
};

/// One ordered arrangement j_1..j_Q of outgoing indices with its tensor entry.
struct VertexArrangement {
    std::vector<std::size_t> outgoing;
    Rational value;
};

/// Symmetric coefficient tensors V_{i; j_1..j_Q}.
///
/// A component coefficient c on x^a (degree Q) gives every arrangement of the
/// index multiset the entry c * prod(a_k!) / Q!, so summing over arrangements
/// recovers c. Entries are stored once per multiset (indices sorted, 1-based).
class SymmetricVertexView {
public:
    explicit SymmetricVertexView(const PolyMap& map);

    std::size_t n() const noexcept { return entries_.size(); }

    /// Entry for incoming index i (1-based) and outgoing indices in any order.
    Rational entry(std::size_t i, std::span<const std::size_t> outgoing) const;

    /// Sorted-multiset entries of component i.
    const std::map<std::vector<std::size_t>, Rational>& entries(std::size_t i) const { return entries_.at(i - 1); }

    /// Every ordered arrangement with nonzero entry for component i.
    std::vector<VertexArrangement> arrangements(std::size_t i) const;

    /// sup over all entries of |entry|.
    Rational sup_norm() const;

    /// Sum over all arrangements of entry * x_{j_1}...x_{j_Q}; equals component i.
    Polynomial reconstruct(std::size_t i) const;

private:
    std::vector<std::map<std::vector<std::size_t>, Rational>> entries_;
};

/// n x n matrix of partial derivatives dV_i/dx_j.
PolyMatrix jacobian(const PolyMap& map);

struct KellerTerm {
    Monomial monomial;
    Rational coefficient;
};

struct KellerReport {
    Polynomial det_polynomial; ///< det(I - V')
    bool is_keller = false;
    std::optional<KellerTerm> witness; ///< lowest non-constant term (or the constant, if it differs from 1)
};

/// Decides the Jacobian hypothesis via det(I - V'(x)) == 1.
KellerReport keller_check(const PolyMap& map);

struct MapNorms {
    Rational sup_norm;
    Rational radius; ///< 1 / ((2n)^d (1 + sup_norm))
};

MapNorms map_norms(const PolyMap& map);

struct LinearReduction {
    PolyMap reduced;                                ///< W = R (V - V^[1]), no linear part
    std::vector<std::vector<Rational>> linear_part; ///< L = V'(0)
    std::vector<std::vector<Rational>> resolvent;   ///< R = sum_{k<n} L^k = (I - L)^{-1}
    Rational resolvent_bound;                       ///< (n+1) * max|L_ij|^n
    bool resolvent_bound_holds = false;             ///< every |R_ij| <= resolvent_bound
};

/// Removes a nilpotent linear part. The inverse of V is F(y) = F_W(R y) where
/// F_W inverts the returned map W. Throws NotNilpotent when det(I - tL) != 1.
LinearReduction linear_reduction(const PolyMap& map);

/// L = V'(0) as a rational matrix.
std::vector<std::vector<Rational>> linear_part_matrix(const PolyMap& map);

} // namespace keller
