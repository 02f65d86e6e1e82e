#include "keller/polymap.hpp"

#include <algorithm>
#include <string>

#include "keller/errors.hpp"

namespace keller {

namespace {

using RatMatrix = std::vector<std::vector<Rational>>;

Integer factorial(unsigned long k) {
    Integer f;
    mpz_fac_ui(f.get_mpz_t(), k);
    return f;
}

RatMatrix rat_identity(std::size_t n) {
    RatMatrix m(n, std::vector<Rational>(n, 0));
    for (std::size_t k = 0; k < n; ++k) m[k][k] = 1;
    return m;
}

RatMatrix rat_mul(const RatMatrix& a, const RatMatrix& b) {
    const std::size_t n = a.size();
    RatMatrix out(n, std::vector<Rational>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            if (sgn(a[i][k]) == 0) continue;
            for (std::size_t j = 0; j < n; ++j) out[i][j] += a[i][k] * b[k][j];
        }
    }
    return out;
}

bool rat_is_zero(const RatMatrix& m) {
    for (const auto& row : m) {
        for (const auto& v : row) {
            if (sgn(v) != 0) return false;
        }
    }
    return true;
}

} // namespace

PolyMap::PolyMap(std::size_t n, int d, std::vector<Polynomial> components) : d_(d), components_(std::move(components)) {
    if (n == 0) throw DomainError("PolyMap: dimension must be positive");
    if (d < 1) throw DomainError("PolyMap: declared degree must be at least 1");
    if (components_.size() != n) {
        throw DimensionMismatch("PolyMap: expected " + std::to_string(n) + " components, got " +
                                std::to_string(components_.size()));
    }
    for (std::size_t i = 0; i < n; ++i) {
        const auto& c = components_[i];
        if (c.dim() != n) {
            throw DimensionMismatch("PolyMap: component " + std::to_string(i + 1) + " lives in dimension " +
                                    std::to_string(c.dim()) + ", expected " + std::to_string(n));
        }
        if (sgn(c.constant_term()) != 0) {
            throw DomainError("PolyMap: component " + std::to_string(i + 1) + " has a nonzero constant term");
        }
        if (c.degree() > d) {
            throw DomainError("PolyMap: component " + std::to_string(i + 1) + " has degree " +
                              std::to_string(c.degree()) + " above declared d=" + std::to_string(d));
        }
    }
}

PolyMap PolyMap::zero(std::size_t n, int d) { return PolyMap(n, d, std::vector<Polynomial>(n, Polynomial(n))); }

bool PolyMap::has_linear_part() const noexcept {
    for (const auto& c : components_) {
        if (c.low_degree() == 1) return true;
    }
    return false;
}

int PolyMap::observed_degree() const noexcept {
    int deg = 0;
    for (const auto& c : components_) deg = std::max(deg, c.degree());
    return deg;
}

std::vector<Polynomial> PolyMap::apply(std::span<const Polynomial> subs, int cap) const {
    std::vector<Polynomial> out;
    out.reserve(components_.size());
    for (const auto& c : components_) out.push_back(compose(c, subs, cap));
    return out;
}

SymmetricVertexView::SymmetricVertexView(const PolyMap& map) : entries_(map.n()) {
    for (std::size_t i = 0; i < map.n(); ++i) {
        for (const auto& [m, c] : map.components()[i].terms()) {
            std::vector<std::size_t> idx;
            Integer weight = 1;
            for (std::size_t k = 0; k < m.dim(); ++k) {
                idx.insert(idx.end(), m[k], k + 1);
                weight *= factorial(m[k]);
            }
            Rational ratio(weight, factorial(m.degree()));
            ratio.canonicalize();
            entries_[i].emplace(std::move(idx), c * ratio);
        }
    }
}

Rational SymmetricVertexView::entry(std::size_t i, std::span<const std::size_t> outgoing) const {
    std::vector<std::size_t> key(outgoing.begin(), outgoing.end());
    std::sort(key.begin(), key.end());
    const auto& table = entries_.at(i - 1);
    auto it = table.find(key);
    return it == table.end() ? Rational(0) : it->second;
}

std::vector<VertexArrangement> SymmetricVertexView::arrangements(std::size_t i) const {
    std::vector<VertexArrangement> out;
    for (const auto& [key, value] : entries_.at(i - 1)) {
        std::vector<std::size_t> perm = key;
        do {
            out.push_back({perm, value});
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    return out;
}

Rational SymmetricVertexView::sup_norm() const {
    Rational sup = 0;
    for (const auto& table : entries_) {
        for (const auto& [key, value] : table) sup = std::max(sup, Rational(abs(value)));
    }
    return sup;
}

Polynomial SymmetricVertexView::reconstruct(std::size_t i) const {
    const std::size_t n = entries_.size();
    Polynomial out(n);
    for (const auto& a : arrangements(i)) {
        std::vector<std::uint32_t> e(n, 0);
        for (auto j : a.outgoing) ++e[j - 1];
        out.add_term(Monomial(std::move(e)), a.value);
    }
    return out;
}

PolyMatrix jacobian(const PolyMap& map) {
    const std::size_t n = map.n();
    PolyMatrix jac(n, n, n);
    for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t j = 1; j <= n; ++j) jac.set(i - 1, j - 1, diff(map.component(i), j));
    }
    return jac;
}

KellerReport keller_check(const PolyMap& map) {
    const std::size_t n = map.n();
    PolyMatrix m = PolyMatrix::identity(n, n) - jacobian(map);
    KellerReport report{determinant(m), false, std::nullopt};
    Polynomial deviation = report.det_polynomial - Polynomial::constant(n, 1);
    report.is_keller = deviation.is_zero();
    if (!report.is_keller) {
        const auto& first = *deviation.terms().begin();
        report.witness = KellerTerm{first.first, report.det_polynomial.coefficient(first.first)};
    }
    return report;
}

MapNorms map_norms(const PolyMap& map) {
    SymmetricVertexView view(map);
    MapNorms norms;
    norms.sup_norm = view.sup_norm();
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 2 * map.n(), static_cast<unsigned long>(map.d()));
    norms.radius = Rational(1) / (Rational(scale) * (1 + norms.sup_norm));
    return norms;
}

std::vector<std::vector<Rational>> linear_part_matrix(const PolyMap& map) {
    const std::size_t n = map.n();
    RatMatrix l(n, std::vector<Rational>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            l[i][j] = map.components()[i].coefficient(Monomial::variable(n, j + 1));
        }
    }
    return l;
}

LinearReduction linear_reduction(const PolyMap& map) {
    const std::size_t n = map.n();
    RatMatrix l = linear_part_matrix(map);

    // det(I - tL) == 1 as a polynomial in t is equivalent to L nilpotent.
    PolyMatrix char_matrix(n, n, 1);
    Polynomial t = Polynomial::variable(1, 1);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            Polynomial entry = Polynomial(1) - t * l[i][j];
            if (i == j) entry += Polynomial::constant(1, 1);
            char_matrix.set(i, j, std::move(entry));
        }
    }
    Polynomial char_poly = determinant(char_matrix);
    Polynomial deviation = char_poly - Polynomial::constant(1, 1);
    if (!deviation.is_zero()) {
        const auto& [m, c] = *deviation.terms().begin();
        throw NotNilpotent("linear part V'(0) is not nilpotent: det(I - tL) = " + char_poly.to_string("t") +
                           ", coefficient of t^" + std::to_string(m.degree()) + " is " + rational_to_string(c));
    }

    RatMatrix power = rat_identity(n);
    RatMatrix resolvent(n, std::vector<Rational>(n, 0));
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) resolvent[i][j] += power[i][j];
        }
        power = rat_mul(power, l);
    }
    if (!rat_is_zero(power)) throw InternalInconsistency("linear_reduction: L^n != 0 despite det(I - tL) == 1");

    std::vector<Polynomial> nonlinear;
    for (const auto& c : map.components()) nonlinear.push_back(c - c.homogeneous_part(1));

    std::vector<Polynomial> reduced;
    for (std::size_t i = 0; i < n; ++i) {
        Polynomial w(n);
        for (std::size_t j = 0; j < n; ++j) {
            if (sgn(resolvent[i][j]) != 0) w += nonlinear[j] * resolvent[i][j];
        }
        reduced.push_back(std::move(w));
    }

    Rational sup_l = 0;
    for (const auto& row : l) {
        for (const auto& v : row) sup_l = std::max(sup_l, Rational(abs(v)));
    }
    Rational bound = static_cast<unsigned long>(n + 1);
    for (std::size_t k = 0; k < n; ++k) bound *= sup_l;
    bool holds = true;
    for (const auto& row : resolvent) {
        for (const auto& v : row) holds = holds && abs(v) <= bound;
    }

    return LinearReduction{PolyMap(n, map.d(), std::move(reduced)), std::move(l), std::move(resolvent), bound, holds};
}

} // namespace keller
