#include "keller/corpus.hpp"

#include <algorithm>
#include <numeric>

#include "keller/errors.hpp"

namespace keller::corpus {

namespace {

Polynomial parse_simple(std::size_t n, std::initializer_list<std::pair<long, std::vector<std::uint32_t>>> terms) {
    Polynomial p(n);
    for (const auto& [c, e] : terms) p.add_term(Monomial(e), c);
    return p;
}

RatMatrix identity(std::size_t n) {
    RatMatrix m(n, std::vector<Rational>(n, 0));
    for (std::size_t k = 0; k < n; ++k) m[k][k] = 1;
    return m;
}

RatMatrix mul(const RatMatrix& a, const RatMatrix& b) {
    const std::size_t n = a.size();
    RatMatrix out(n, std::vector<Rational>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t j = 0; j < n; ++j) out[i][j] += a[i][k] * b[k][j];
        }
    }
    return out;
}

/// Random monomial of degree q in the variables listed in vars (1-based).
Monomial random_monomial(Draw& draw, std::size_t n, int q, const std::vector<std::size_t>& vars) {
    std::vector<std::uint32_t> e(n, 0);
    for (int s = 0; s < q; ++s) ++e[vars[static_cast<std::size_t>(draw.uniform(0, static_cast<long>(vars.size()) - 1))] - 1];
    return Monomial(std::move(e));
}

std::vector<std::size_t> random_permutation(Draw& draw, std::size_t n) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 1);
    for (std::size_t k = n; k > 1; --k) std::swap(perm[k - 1], perm[static_cast<std::size_t>(draw.uniform(0, static_cast<long>(k) - 1))]);
    return perm;
}

} // namespace

std::string to_string(Family f) {
    switch (f) {
    case Family::triangular: return "triangular";
    case Family::permuted_triangular: return "permuted_triangular";
    case Family::conjugated: return "conjugated";
    case Family::elementary: return "elementary";
    case Family::nilpotent_linear: return "nilpotent_linear";
    case Family::non_keller: return "non_keller";
    case Family::non_nilpotent_linear: return "non_nilpotent_linear";
    case Family::hand: return "hand";
    }
    return "unknown";
}

PolyMap random_triangular(Draw& draw, std::size_t n, int d, bool with_linear) {
    std::vector<Polynomial> comps(n, Polynomial(n));
    for (std::size_t i = 1; i < n; ++i) {
        std::vector<std::size_t> later;
        for (std::size_t j = i + 1; j <= n; ++j) later.push_back(j);
        long terms = draw.uniform(1, 2);
        for (long t = 0; t < terms; ++t) {
            int q = static_cast<int>(draw.uniform(2, d));
            comps[i - 1].add_term(random_monomial(draw, n, q, later), draw.nonzero(3));
        }
        if (with_linear && (i == 1 || draw.uniform(0, 1))) {
            comps[i - 1].add_term(random_monomial(draw, n, 1, later), draw.nonzero(2));
        }
    }
    return PolyMap(n, d, std::move(comps));
}

PolyMap permute_variables(const PolyMap& map, std::span<const std::size_t> perm) {
    const std::size_t n = map.n();
    if (perm.size() != n) throw DimensionMismatch("permute_variables: permutation length");
    std::vector<Polynomial> subs;
    for (std::size_t j = 0; j < n; ++j) subs.push_back(Polynomial::variable(n, perm[j]));
    std::vector<Polynomial> comps(n, Polynomial(n));
    for (std::size_t i = 0; i < n; ++i) comps[perm[i] - 1] = compose(map.components()[i], subs);
    return PolyMap(n, map.d(), std::move(comps));
}

PolyMap conjugate(const PolyMap& map, const RatMatrix& a, const RatMatrix& a_inv) {
    const std::size_t n = map.n();
    std::vector<Polynomial> subs;
    for (std::size_t j = 0; j < n; ++j) {
        Polynomial s(n);
        for (std::size_t k = 0; k < n; ++k) {
            if (sgn(a_inv[j][k]) != 0) s += Polynomial::variable(n, k + 1) * a_inv[j][k];
        }
        subs.push_back(std::move(s));
    }
    std::vector<Polynomial> inner;
    for (const auto& c : map.components()) inner.push_back(compose(c, subs));
    std::vector<Polynomial> comps;
    for (std::size_t i = 0; i < n; ++i) {
        Polynomial w(n);
        for (std::size_t j = 0; j < n; ++j) {
            if (sgn(a[i][j]) != 0) w += inner[j] * a[i][j];
        }
        comps.push_back(std::move(w));
    }
    return PolyMap(n, map.d(), std::move(comps));
}

PolyMap compose_maps(const PolyMap& outer, const PolyMap& inner, int d) {
    const std::size_t n = outer.n();
    std::vector<Polynomial> g_inner;
    for (std::size_t i = 1; i <= n; ++i) g_inner.push_back(Polynomial::variable(n, i) - inner.component(i));
    std::vector<Polynomial> comps;
    for (std::size_t i = 1; i <= n; ++i) comps.push_back(inner.component(i) + compose(outer.component(i), g_inner));
    return PolyMap(n, d, std::move(comps));
}

PolyMap elementary(std::size_t n, int d, std::size_t i, const Polynomial& p) {
    for (const auto& [m, c] : p.terms()) {
        if (m[i - 1] != 0) throw DomainError("elementary: p depends on x_i");
    }
    std::vector<Polynomial> comps(n, Polynomial(n));
    comps[i - 1] = -p;
    return PolyMap(n, d, std::move(comps));
}

std::pair<RatMatrix, RatMatrix> random_shear(Draw& draw, std::size_t n, int factors) {
    RatMatrix a = identity(n);
    RatMatrix a_inv = identity(n);
    for (int f = 0; f < factors; ++f) {
        std::size_t r = static_cast<std::size_t>(draw.uniform(0, static_cast<long>(n) - 1));
        std::size_t c = static_cast<std::size_t>(draw.uniform(0, static_cast<long>(n) - 2));
        if (c >= r) ++c;
        long s = draw.nonzero(1);
        RatMatrix e = identity(n);
        RatMatrix e_inv = identity(n);
        e[r][c] = s;
        e_inv[r][c] = -s;
        a = mul(e, a);
        a_inv = mul(a_inv, e_inv);
    }
    return {a, a_inv};
}

std::vector<Fixture> standard_corpus() {
    std::vector<Fixture> out;
    auto add = [&](std::string name, Family family, PolyMap map, bool keller, bool triangular) {
        out.push_back(Fixture{std::move(name), family, std::move(map), keller, triangular});
    };

    // Hand-written worked examples.
    add("hand_x2sq", Family::hand, PolyMap(2, 2, {parse_simple(2, {{1, {0, 2}}}), Polynomial(2)}), true, true);
    add("hand_x2x3_x3sq", Family::hand,
        PolyMap(3, 2, {parse_simple(3, {{1, {0, 1, 1}}}), parse_simple(3, {{1, {0, 0, 2}}}), Polynomial(3)}), true,
        true);
    add("hand_zero", Family::hand, PolyMap::zero(2, 2), true, true);
    add("hand_3x2sq", Family::hand, PolyMap(2, 2, {parse_simple(2, {{3, {0, 2}}}), Polynomial(2)}), true, true);

    // Strictly triangular maps.
    std::uint32_t seed = 1000;
    for (std::size_t n : {2, 3, 4}) {
        for (int d : {2, 3}) {
            for (int k = 0; k < 4; ++k) {
                Draw draw(seed++);
                add("tri_n" + std::to_string(n) + "_d" + std::to_string(d) + "_" + std::to_string(k),
                    Family::triangular, random_triangular(draw, n, d), true, true);
            }
        }
    }

    // Triangular after relabeling.
    seed = 2000;
    for (std::size_t n : {2, 3, 4}) {
        for (int d : {2, 3}) {
            for (int k = 0; k < (n == 4 ? 1 : 2); ++k) {
                Draw draw(seed++);
                PolyMap tri = random_triangular(draw, n, d);
                auto perm = random_permutation(draw, n);
                add("perm_n" + std::to_string(n) + "_d" + std::to_string(d) + "_" + std::to_string(k),
                    Family::permuted_triangular, permute_variables(tri, perm), true, true);
            }
        }
    }

    // Conjugated by unimodular shears: genuinely non-triangular.
    seed = 3000;
    for (std::size_t n : {2, 3}) {
        for (int d : {2, 3}) {
            for (int k = 0; k < 3; ++k) {
                Draw draw(seed++);
                PolyMap tri = random_triangular(draw, n, d);
                auto [a, a_inv] = random_shear(draw, n, static_cast<int>(n));
                add("conj_n" + std::to_string(n) + "_d" + std::to_string(d) + "_" + std::to_string(k),
                    Family::conjugated, conjugate(tri, a, a_inv), true, false);
            }
        }
    }
    {
        // The classic shear-conjugate of (x2^2, 0): non-triangular in every labeling.
        RatMatrix a = {{1, 0}, {1, 1}};
        RatMatrix a_inv = {{1, 0}, {-1, 1}};
        add("conj_shear_x2sq", Family::conjugated,
            conjugate(PolyMap(2, 2, {parse_simple(2, {{1, {0, 2}}}), Polynomial(2)}), a, a_inv), true, false);
    }

    // Compositions of elementary maps that stay within degree 3.
    seed = 4000;
    int made = 0;
    for (int attempt = 0; made < 16 && attempt < 800; ++attempt) {
        Draw draw(seed++);
        std::size_t n = static_cast<std::size_t>(draw.uniform(2, 4));
        int d = 3;
        PolyMap acc = PolyMap::zero(n, 9);
        long steps = draw.uniform(2, 3);
        for (long s = 0; s < steps; ++s) {
            std::size_t i = static_cast<std::size_t>(draw.uniform(1, static_cast<long>(n)));
            std::vector<std::size_t> others;
            for (std::size_t j = 1; j <= n; ++j) {
                if (j != i) others.push_back(j);
            }
            Polynomial p(n);
            p.add_term(random_monomial(draw, n, static_cast<int>(draw.uniform(2, 3)), others), draw.nonzero(2));
            acc = compose_maps(elementary(n, 9, i, p), acc, 9);
        }
        if (acc.observed_degree() > d || acc.observed_degree() < 2) continue;
        add("elem_" + std::to_string(made), Family::elementary, PolyMap(n, d, {acc.components().begin(), acc.components().end()}),
            true, false);
        ++made;
    }

    // Keller maps with a nonzero nilpotent linear part.
    add("nil_hand", Family::nilpotent_linear,
        PolyMap(2, 2, {parse_simple(2, {{1, {0, 1}}, {1, {0, 2}}}), Polynomial(2)}), true, true);
    seed = 5000;
    for (int k = 0; k < 8; ++k) {
        Draw draw(seed++);
        std::size_t n = 2 + static_cast<std::size_t>(k % 3);
        int d = 2 + k % 2;
        add("nil_tri_" + std::to_string(k), Family::nilpotent_linear, random_triangular(draw, n, d, true), true, true);
    }
    for (int k = 0; k < 4; ++k) {
        Draw draw(seed++);
        std::size_t n = 2 + static_cast<std::size_t>(k % 2);
        int d = 2 + k % 2;
        PolyMap tri = random_triangular(draw, n, d, true);
        auto [a, a_inv] = random_shear(draw, n, 2);
        add("nil_conj_" + std::to_string(k), Family::nilpotent_linear, conjugate(tri, a, a_inv), true, false);
    }

    // Documented counterexamples.
    add("nonkeller_x1sq", Family::non_keller, PolyMap(2, 2, {parse_simple(2, {{1, {2, 0}}}), Polynomial(2)}), false,
        false);
    add("nonkeller_catalan", Family::non_keller, PolyMap(1, 2, {parse_simple(1, {{1, {2}}})}), false, false);
    add("nonnil_x1", Family::non_nilpotent_linear, PolyMap(2, 2, {parse_simple(2, {{1, {1, 0}}}), Polynomial(2)}),
        false, false);

    return out;
}

} // namespace keller::corpus
