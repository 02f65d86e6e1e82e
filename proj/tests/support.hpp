#pragma once

// Test-only helpers: a tiny polynomial reader and seeded random generators.

#include <algorithm>
#include <cctype>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "keller/polymap.hpp"
#include "keller/polymatrix.hpp"
#include "keller/polynomial.hpp"

namespace keller::testing {

/// Reads sums of terms such as "x1^2 - 2*x1*x2 + 1/3*x3" (variable letter is
/// any of x, y, t). No parentheses.
inline Polynomial poly(std::size_t dim, const std::string& text) {
    Polynomial out(dim);
    std::size_t pos = 0;
    auto skip = [&] {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    };
    auto number = [&] {
        std::size_t start = pos;
        while (pos < text.size() && (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '/')) ++pos;
        return text.substr(start, pos - start);
    };
    skip();
    if (text.substr(pos) == "0") return out;
    while (pos < text.size()) {
        int sign = 1;
        skip();
        if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
            if (text[pos] == '-') sign = -1;
            ++pos;
        }
        Rational coeff = sign;
        std::vector<std::uint32_t> e(dim, 0);
        for (;;) {
            skip();
            if (pos >= text.size()) throw std::invalid_argument("poly: unexpected end in '" + text + "'");
            char c = text[pos];
            if (std::isdigit(static_cast<unsigned char>(c))) {
                coeff *= parse_rational(number());
            } else if (c == 'x' || c == 'y' || c == 't') {
                ++pos;
                std::size_t var = std::stoul(number());
                if (var < 1 || var > dim) throw std::invalid_argument("poly: variable out of range in '" + text + "'");
                std::uint32_t power = 1;
                if (pos < text.size() && text[pos] == '^') {
                    ++pos;
                    power = static_cast<std::uint32_t>(std::stoul(number()));
                }
                e[var - 1] += power;
            } else {
                throw std::invalid_argument(std::string("poly: unexpected '") + c + "' in '" + text + "'");
            }
            skip();
            if (pos < text.size() && text[pos] == '*') {
                ++pos;
                continue;
            }
            break;
        }
        out.add_term(Monomial(std::move(e)), coeff);
        skip();
    }
    return out;
}

inline std::vector<Polynomial> polys(std::size_t dim, const std::vector<std::string>& texts) {
    std::vector<Polynomial> out;
    for (const auto& t : texts) out.push_back(poly(dim, t));
    return out;
}

inline PolyMap map_of(std::size_t n, int d, const std::vector<std::string>& texts) {
    return PolyMap(n, d, polys(n, texts));
}

/// Random polynomial with small integer/rational coefficients.
inline Polynomial random_poly(std::mt19937& rng, std::size_t dim, int max_degree, int max_terms,
                              bool allow_constant = true) {
    std::uniform_int_distribution<int> nterms(0, max_terms);
    std::uniform_int_distribution<int> num(-5, 5);
    std::uniform_int_distribution<int> den(1, 3);
    std::uniform_int_distribution<int> deg(allow_constant ? 0 : 1, max_degree);
    std::uniform_int_distribution<std::size_t> var(0, dim - 1);
    Polynomial p(dim);
    int count = nterms(rng);
    for (int k = 0; k < count; ++k) {
        std::vector<std::uint32_t> e(dim, 0);
        int q = deg(rng);
        for (int s = 0; s < q; ++s) ++e[var(rng)];
        Rational c(num(rng), den(rng));
        c.canonicalize();
        p.add_term(Monomial(std::move(e)), c);
    }
    return p;
}

inline PolyMatrix random_matrix(std::mt19937& rng, std::size_t size, std::size_t dim, int max_degree, int max_terms) {
    PolyMatrix m(size, size, dim);
    for (std::size_t r = 0; r < size; ++r) {
        for (std::size_t c = 0; c < size; ++c) m.set(r, c, random_poly(rng, dim, max_degree, max_terms));
    }
    return m;
}

/// Determinant by the Leibniz permutation sum; independent of both library paths.
inline Polynomial leibniz_determinant(const PolyMatrix& m) {
    const std::size_t n = m.rows();
    std::vector<std::size_t> perm(n);
    for (std::size_t k = 0; k < n; ++k) perm[k] = k;
    Polynomial det(m.dim());
    do {
        int inversions = 0;
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = a + 1; b < n; ++b) inversions += perm[a] > perm[b];
        }
        Polynomial prod = Polynomial::constant(m.dim(), inversions % 2 ? -1 : 1);
        for (std::size_t r = 0; r < n && !prod.is_zero(); ++r) prod = prod * m(r, perm[r]);
        det += prod;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return det;
}

} // namespace keller::testing
