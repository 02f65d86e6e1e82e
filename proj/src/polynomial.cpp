#include "keller/polynomial.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "keller/errors.hpp"

namespace keller {

namespace {

constexpr int kNoCap = std::numeric_limits<int>::max();

void require_same_dim(const Polynomial& a, const Polynomial& b, const char* op) {
    if (a.dim() != b.dim()) {
        throw DimensionMismatch(std::string(op) + ": dimensions " + std::to_string(a.dim()) + " and " +
                                std::to_string(b.dim()) + " differ");
    }
}

void require_cap(int cap, const char* op) {
    if (cap < 0) throw DomainError(std::string(op) + ": negative truncation cap");
}

} // namespace

Monomial::Monomial(std::vector<std::uint32_t> exps) : exps_(std::move(exps)) {
    for (auto e : exps_) degree_ += e;
}

Monomial Monomial::variable(std::size_t dim, std::size_t index) {
    if (index < 1 || index > dim) {
        throw DomainError("variable index " + std::to_string(index) + " out of range 1.." + std::to_string(dim));
    }
    std::vector<std::uint32_t> e(dim, 0);
    e[index - 1] = 1;
    return Monomial(std::move(e));
}

Monomial Monomial::operator*(const Monomial& other) const {
    if (dim() != other.dim()) throw DimensionMismatch("monomial product: dimension mismatch");
    Monomial out(*this);
    for (std::size_t k = 0; k < exps_.size(); ++k) out.exps_[k] += other.exps_[k];
    out.degree_ += other.degree_;
    return out;
}

bool GrlexLess::operator()(const Monomial& a, const Monomial& b) const noexcept {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    auto ea = a.exps();
    auto eb = b.exps();
    return std::lexicographical_compare(ea.begin(), ea.end(), eb.begin(), eb.end());
}

Polynomial Polynomial::constant(std::size_t dim, const Rational& value) {
    Polynomial p(dim);
    p.add_term(Monomial(dim), value);
    return p;
}

Polynomial Polynomial::variable(std::size_t dim, std::size_t index) {
    return term(Monomial::variable(dim, index), 1);
}

Polynomial Polynomial::term(const Monomial& m, const Rational& coeff) {
    Polynomial p(m.dim());
    p.add_term(m, coeff);
    return p;
}

bool Polynomial::is_constant() const noexcept {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.degree() == 0);
}

int Polynomial::degree() const noexcept {
    return terms_.empty() ? -1 : static_cast<int>(terms_.rbegin()->first.degree());
}

int Polynomial::low_degree() const noexcept {
    return terms_.empty() ? -1 : static_cast<int>(terms_.begin()->first.degree());
}

Rational Polynomial::coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
}

Rational Polynomial::constant_term() const { return coefficient(Monomial(dim_)); }

Polynomial Polynomial::homogeneous_part(int q) const {
    Polynomial out(dim_);
    for (const auto& [m, c] : terms_) {
        if (static_cast<int>(m.degree()) == q) out.terms_.emplace_hint(out.terms_.end(), m, c);
    }
    return out;
}

Polynomial Polynomial::truncated(int cap) const {
    Polynomial out(dim_);
    for (const auto& [m, c] : terms_) {
        if (static_cast<int>(m.degree()) > cap) break;
        out.terms_.emplace_hint(out.terms_.end(), m, c);
    }
    return out;
}

void Polynomial::add_term(const Monomial& m, const Rational& coeff) {
    if (m.dim() != dim_) throw DimensionMismatch("add_term: monomial dimension mismatch");
    if (sgn(coeff) == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, coeff);
    if (!inserted) {
        it->second += coeff;
        if (sgn(it->second) == 0) terms_.erase(it);
    }
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
    require_same_dim(*this, other, "add");
    for (const auto& [m, c] : other.terms_) add_term(m, c);
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
    require_same_dim(*this, other, "sub");
    for (const auto& [m, c] : other.terms_) add_term(m, -c);
    return *this;
}

Polynomial& Polynomial::operator*=(const Rational& s) {
    if (sgn(s) == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, c] : terms_) c *= s;
    return *this;
}

Polynomial Polynomial::operator-() const {
    Polynomial out(*this);
    for (auto& [m, c] : out.terms_) c = -c;
    return out;
}

std::string to_string(const Monomial& m, const std::string& var) {
    std::string out;
    for (std::size_t k = 0; k < m.dim(); ++k) {
        if (m[k] == 0) continue;
        if (!out.empty()) out += '*';
        out += var + std::to_string(k + 1);
        if (m[k] > 1) out += '^' + std::to_string(m[k]);
    }
    return out.empty() ? "1" : out;
}

std::string Polynomial::to_string(const std::string& var) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [m, c] = *it;
        Rational mag = abs(c);
        if (first) {
            if (sgn(c) < 0) os << '-';
        } else {
            os << (sgn(c) < 0 ? " - " : " + ");
        }
        first = false;
        if (m.degree() == 0) {
            os << rational_to_string(mag);
        } else {
            if (mag != 1) os << rational_to_string(mag) << '*';
            os << keller::to_string(m, var);
        }
    }
    return os.str();
}

Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
Polynomial operator*(const Polynomial& a, const Polynomial& b) { return multiply_truncated(a, b, kNoCap); }
Polynomial operator*(Polynomial a, const Rational& s) { return a *= s; }
Polynomial operator*(const Rational& s, Polynomial a) { return a *= s; }

Polynomial arith(ArithKind kind, const Polynomial& a, const Polynomial& b) {
    require_same_dim(a, b, "arith");
    switch (kind) {
    case ArithKind::add: return a + b;
    case ArithKind::sub: return a - b;
    case ArithKind::mul: return a * b;
    }
    throw DomainError("arith: unknown operation");
}

Polynomial multiply_truncated(const Polynomial& a, const Polynomial& b, int cap) {
    require_same_dim(a, b, "mul");
    require_cap(cap, "mul");
    Polynomial out(a.dim());
    for (const auto& [ma, ca] : a.terms()) {
        if (static_cast<long>(ma.degree()) > cap) break;
        for (const auto& [mb, cb] : b.terms()) {
            if (static_cast<long>(ma.degree()) + mb.degree() > cap) break;
            out.add_term(ma * mb, ca * cb);
        }
    }
    return out;
}

Polynomial power_truncated(const Polynomial& p, unsigned e, int cap) {
    require_cap(cap, "pow");
    Polynomial result = Polynomial::constant(p.dim(), 1);
    Polynomial base = p.truncated(cap);
    while (e > 0) {
        if (e & 1u) result = multiply_truncated(result, base, cap);
        e >>= 1u;
        if (e > 0) base = multiply_truncated(base, base, cap);
    }
    return result;
}

Polynomial compose(const Polynomial& p, std::span<const Polynomial> subs, int cap) {
    require_cap(cap, "compose");
    if (subs.size() != p.dim()) {
        throw DimensionMismatch("compose: " + std::to_string(subs.size()) + " substitutions for a polynomial in " +
                                std::to_string(p.dim()) + " variables");
    }
    if (subs.empty()) return p;
    const std::size_t out_dim = subs.front().dim();
    for (const auto& s : subs) {
        if (s.dim() != out_dim) throw DimensionMismatch("compose: substitutions of differing dimension");
    }

    // Lowest degree of each substitution bounds the lowest degree of each product.
    std::vector<long> order(subs.size());
    for (std::size_t k = 0; k < subs.size(); ++k) order[k] = subs[k].low_degree();

    // powers[k][e] = subs_k^e truncated at cap, filled on demand.
    std::vector<std::vector<Polynomial>> powers(subs.size());
    auto power_of = [&](std::size_t k, std::uint32_t e) -> const Polynomial& {
        auto& cache = powers[k];
        if (cache.empty()) cache.push_back(Polynomial::constant(out_dim, 1));
        while (cache.size() <= e) cache.push_back(multiply_truncated(cache.back(), subs[k], cap));
        return cache[e];
    };

    Polynomial out(out_dim);
    for (const auto& [m, c] : p.terms()) {
        long lowest = 0;
        bool vanishes = false;
        for (std::size_t k = 0; k < m.dim(); ++k) {
            if (m[k] == 0) continue;
            if (order[k] < 0) {
                vanishes = true;
                break;
            }
            lowest += order[k] * m[k];
        }
        if (vanishes || lowest > cap) continue;

        Polynomial prod = Polynomial::constant(out_dim, c);
        for (std::size_t k = 0; k < m.dim() && !prod.is_zero(); ++k) {
            if (m[k] == 0) continue;
            prod = multiply_truncated(prod, power_of(k, m[k]), cap);
        }
        out += prod;
    }
    return out;
}

Polynomial compose(const Polynomial& p, std::span<const Polynomial> subs) { return compose(p, subs, kNoCap); }

Polynomial diff(const Polynomial& p, std::size_t index) {
    if (index < 1 || index > p.dim()) {
        throw DomainError("diff: variable index " + std::to_string(index) + " out of range 1.." +
                          std::to_string(p.dim()));
    }
    const std::size_t k = index - 1;
    Polynomial out(p.dim());
    for (const auto& [m, c] : p.terms()) {
        if (m[k] == 0) continue;
        std::vector<std::uint32_t> e(m.exps().begin(), m.exps().end());
        Rational coeff = c * static_cast<unsigned long>(e[k]);
        --e[k];
        out.add_term(Monomial(std::move(e)), coeff);
    }
    return out;
}

Rational evaluate(const Polynomial& p, std::span<const Rational> point) {
    if (point.size() != p.dim()) {
        throw DimensionMismatch("evaluate: point of length " + std::to_string(point.size()) + " for dimension " +
                                std::to_string(p.dim()));
    }
    Rational total = 0;
    for (const auto& [m, c] : p.terms()) {
        Rational value = c;
        for (std::size_t k = 0; k < m.dim(); ++k) {
            for (std::uint32_t e = 0; e < m[k]; ++e) value *= point[k];
        }
        total += value;
    }
    return total;
}

Polynomial divide_exact(const Polynomial& a, const Polynomial& b) {
    require_same_dim(a, b, "divide_exact");
    if (b.is_zero()) throw DomainError("divide_exact: division by zero polynomial");
    const auto& [lead_m, lead_c] = *b.terms().rbegin();
    Polynomial quotient(a.dim());
    Polynomial rem = a;
    while (!rem.is_zero()) {
        const auto& [rm, rc] = *rem.terms().rbegin();
        std::vector<std::uint32_t> e(rm.dim());
        for (std::size_t k = 0; k < rm.dim(); ++k) {
            if (rm[k] < lead_m[k]) throw InternalInconsistency("divide_exact: division is not exact");
            e[k] = rm[k] - lead_m[k];
        }
        Polynomial t = Polynomial::term(Monomial(std::move(e)), rc / lead_c);
        quotient += t;
        rem -= t * b;
    }
    return quotient;
}

Polynomial series_exp(const Polynomial& p, int cap) {
    require_cap(cap, "series_exp");
    if (sgn(p.constant_term()) != 0) throw DomainError("series_exp: argument has a constant term");
    Polynomial sum = Polynomial::constant(p.dim(), 1);
    Polynomial term = sum;
    Polynomial base = p.truncated(cap);
    for (int k = 1; k <= cap; ++k) {
        term = multiply_truncated(term, base, cap) * Rational(1, k);
        if (term.is_zero()) break;
        sum += term;
    }
    return sum;
}

Polynomial series_reciprocal(const Polynomial& p, int cap) {
    require_cap(cap, "series_reciprocal");
    Rational c0 = p.constant_term();
    if (sgn(c0) == 0) throw DomainError("series_reciprocal: constant term is zero");
    // 1/p = (1/c0) * sum_k u^k with u = 1 - p/c0.
    Polynomial u = Polynomial::constant(p.dim(), 1) - p * Rational(1 / c0);
    u = u.truncated(cap);
    Polynomial sum = Polynomial::constant(p.dim(), 1);
    Polynomial term = sum;
    for (int k = 1; k <= cap; ++k) {
        term = multiply_truncated(term, u, cap);
        if (term.is_zero()) break;
        sum += term;
    }
    return sum * Rational(1 / c0);
}

Rational parse_rational(const std::string& text) {
    if (text.empty()) throw DomainError("empty rational literal");
    std::size_t pos = 0;
    auto digits = [&](bool allow_sign) {
        std::size_t start = pos;
        if (allow_sign && pos < text.size() && (text[pos] == '-' || text[pos] == '+')) ++pos;
        std::size_t first_digit = pos;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
        if (pos == first_digit) throw DomainError("malformed rational literal '" + text + "'");
        return text.substr(start, pos - start);
    };
    std::string num = digits(true);
    std::string den = "1";
    if (pos < text.size() && text[pos] == '/') {
        ++pos;
        den = digits(false);
    }
    if (pos != text.size()) throw DomainError("malformed rational literal '" + text + "'");
    if (!num.empty() && num.front() == '+') num.erase(0, 1);
    Integer n(num, 10);
    Integer d(den, 10);
    if (d == 0) throw DomainError("zero denominator in rational literal '" + text + "'");
    Rational r(n, d);
    r.canonicalize();
    return r;
}

std::string rational_to_string(const Rational& r) { return r.get_str(); }

} // namespace keller
