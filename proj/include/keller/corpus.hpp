#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "keller/polymap.hpp"

namespace keller::corpus {

using RatMatrix = std::vector<std::vector<Rational>>;

enum class Family {
    triangular,           ///< V_i depends only on x_{i+1..n}
    permuted_triangular,  ///< triangular after a relabeling of variables
    conjugated,           ///< A V(A^{-1} x) for a unimodular shear product A
    elementary,           ///< composition of elementary maps
    nilpotent_linear,     ///< Keller with nonzero nilpotent linear part
    non_keller,           ///< documented counterexamples to the hypothesis
    non_nilpotent_linear, ///< linear part that the reduction must reject
    hand,                 ///< hand-written worked examples
};

std::string to_string(Family f);

struct Fixture {
    std::string name;
    Family family;
    PolyMap map;
    bool keller;     ///< expected keller_check verdict
    bool triangular; ///< triangular up to a relabeling of variables
};

/// Deterministic draws that do not depend on the standard library's
/// distribution implementations, so fixtures are identical everywhere.
class Draw {
public:
    explicit Draw(std::uint32_t seed) : engine_(seed) {}
    /// Uniform integer in [lo, hi].
    long uniform(long lo, long hi) { return lo + static_cast<long>(engine_() % static_cast<std::uint32_t>(hi - lo + 1)); }
    /// Nonzero integer in [-mag, mag].
    long nonzero(long mag) {
        long v = uniform(1, mag);
        return uniform(0, 1) ? v : -v;
    }

private:
    std::mt19937 engine_;
};

/// Strictly triangular vertex: component i is a sparse polynomial in
/// x_{i+1..n} of degree 2..d (plus, when with_linear, degree-1 terms).
PolyMap random_triangular(Draw& draw, std::size_t n, int d, bool with_linear = false);

/// Relabels variables: old variable j becomes variable perm[j-1] (1-based targets).
PolyMap permute_variables(const PolyMap& map, std::span<const std::size_t> perm);

/// Vertex of x -> A G(A^{-1} x) where G(x) = x - V(x): W(x) = A V(A^{-1} x).
PolyMap conjugate(const PolyMap& map, const RatMatrix& a, const RatMatrix& a_inv);

/// Vertex of G1 o G2 with G_k(x) = x - V_k(x): V2 + V1(x - V2(x)).
PolyMap compose_maps(const PolyMap& outer, const PolyMap& inner, int d);

/// Elementary map x_i -> x_i + p(x) with p free of x_i, as a vertex (-p in slot i).
PolyMap elementary(std::size_t n, int d, std::size_t i, const Polynomial& p);

/// Product of random elementary shears I + c E_ab and its inverse.
std::pair<RatMatrix, RatMatrix> random_shear(Draw& draw, std::size_t n, int factors);

/// The bundled fixture set: hand examples, generated Keller maps for
/// n <= 4 and d <= 3, nilpotent-linear maps, and the counterexamples.
std::vector<Fixture> standard_corpus();

} // namespace keller::corpus
