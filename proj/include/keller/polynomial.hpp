#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace keller {

using Rational = mpq_class;
using Integer = mpz_class;

/// Exponent vector of a monomial in a fixed number of variables.
///
/// Storage is 0-based; every public entry point that names a variable
/// (Polynomial::variable, diff, ...) takes a 1-based index.
class Monomial {
public:
    explicit Monomial(std::size_t dim) : exps_(dim, 0) {}
    explicit Monomial(std::vector<std::uint32_t> exps);

    static Monomial variable(std::size_t dim, std::size_t index);

    std::size_t dim() const noexcept { return exps_.size(); }
    std::uint32_t degree() const noexcept { return degree_; }
    std::span<const std::uint32_t> exps() const noexcept { return exps_; }
    std::uint32_t operator[](std::size_t pos) const { return exps_[pos]; }

    Monomial operator*(const Monomial& other) const;

    friend bool operator==(const Monomial&, const Monomial&) = default;

private:
    std::vector<std::uint32_t> exps_;
    std::uint32_t degree_ = 0;
};

/// Graded lexicographic order: total degree first, then lexicographic with
/// x1 > x2 > ... > xn. Iteration of a Polynomial is ascending in this order.
struct GrlexLess {
    bool operator()(const Monomial& a, const Monomial& b) const noexcept;
};

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Canonical: no zero coefficient is ever stored, so structural equality
/// coincides with mathematical equality.
class Polynomial {
public:
    using TermMap = std::map<Monomial, Rational, GrlexLess>;

    explicit Polynomial(std::size_t dim) : dim_(dim) {}

    static Polynomial constant(std::size_t dim, const Rational& value);
    static Polynomial variable(std::size_t dim, std::size_t index);
    static Polynomial term(const Monomial& m, const Rational& coeff);

    std::size_t dim() const noexcept { return dim_; }
    const TermMap& terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }
    bool is_zero() const noexcept { return terms_.empty(); }
    bool is_constant() const noexcept;

    /// Highest total degree; -1 for the zero polynomial.
    int degree() const noexcept;
    /// Lowest total degree present; -1 for the zero polynomial.
    int low_degree() const noexcept;

    Rational coefficient(const Monomial& m) const;
    Rational constant_term() const;

    /// Terms of total degree exactly q.
    Polynomial homogeneous_part(int q) const;
    /// Terms of total degree <= cap.
    Polynomial truncated(int cap) const;

    /// Accumulates coeff * m, erasing the term if it cancels.
    void add_term(const Monomial& m, const Rational& coeff);

    Polynomial& operator+=(const Polynomial& other);
    Polynomial& operator-=(const Polynomial& other);
    Polynomial& operator*=(const Rational& s);

    Polynomial operator-() const;

    friend bool operator==(const Polynomial&, const Polynomial&) = default;

    /// Human-readable form, leading (grlex-largest) term first, e.g. "x1^2 - 2/3*x2".
    std::string to_string(const std::string& var = "x") const;

private:
    std::size_t dim_;
    TermMap terms_;
};

Polynomial operator+(Polynomial a, const Polynomial& b);
Polynomial operator-(Polynomial a, const Polynomial& b);
Polynomial operator*(const Polynomial& a, const Polynomial& b);
Polynomial operator*(Polynomial a, const Rational& s);
Polynomial operator*(const Rational& s, Polynomial a);

std::string to_string(const Monomial& m, const std::string& var = "x");

enum class ArithKind { add, sub, mul };

/// Exact ring operation on two polynomials of equal dimension.
Polynomial arith(ArithKind kind, const Polynomial& a, const Polynomial& b);

/// Product with every monomial of total degree > cap discarded.
Polynomial multiply_truncated(const Polynomial& a, const Polynomial& b, int cap);

/// p^e truncated at cap.
Polynomial power_truncated(const Polynomial& p, unsigned e, int cap);

/// p(subs_1, ..., subs_n) with every monomial of total degree > cap dropped.
/// The substitutions may live in a different dimension than p.
Polynomial compose(const Polynomial& p, std::span<const Polynomial> subs, int cap);

/// Untruncated composition.
Polynomial compose(const Polynomial& p, std::span<const Polynomial> subs);

/// Partial derivative with respect to x_index (1-based).
Polynomial diff(const Polynomial& p, std::size_t index);

Rational evaluate(const Polynomial& p, std::span<const Rational> point);

/// Quotient a / b; throws InternalInconsistency when b does not divide a exactly.
Polynomial divide_exact(const Polynomial& a, const Polynomial& b);

/// exp(p) truncated at cap; p must have zero constant term.
Polynomial series_exp(const Polynomial& p, int cap);

/// 1/p as a power series truncated at cap; p must have nonzero constant term.
Polynomial series_reciprocal(const Polynomial& p, int cap);

/// Parses a rational written as "p/q" or "p" and returns it in lowest terms.
Rational parse_rational(const std::string& text);

/// "p/q" in lowest terms, or "p" when the denominator is 1.
std::string rational_to_string(const Rational& r);

} // namespace keller
