#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "keller/polynomial.hpp"

namespace keller {

/// Dense matrix of polynomials sharing one ambient dimension.
class PolyMatrix {
public:
    PolyMatrix(std::size_t rows, std::size_t cols, std::size_t dim);

    static PolyMatrix identity(std::size_t size, std::size_t dim);
    static PolyMatrix from_rationals(const std::vector<std::vector<Rational>>& entries, std::size_t dim);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t dim() const noexcept { return dim_; }
    bool is_square() const noexcept { return rows_ == cols_; }

    /// 0-based access.
    const Polynomial& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
    void set(std::size_t r, std::size_t c, Polynomial p);

    bool is_zero() const noexcept;
    bool has_constant_entries() const noexcept;

    /// Constant parts of the entries, i.e. the matrix evaluated at the origin.
    PolyMatrix constant_part() const;

    PolyMatrix& operator+=(const PolyMatrix& other);
    PolyMatrix& operator-=(const PolyMatrix& other);

    friend bool operator==(const PolyMatrix&, const PolyMatrix&) = default;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::size_t dim_;
    std::vector<Polynomial> entries_;
};

PolyMatrix operator+(PolyMatrix a, const PolyMatrix& b);
PolyMatrix operator-(PolyMatrix a, const PolyMatrix& b);
PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b);

/// Product with entries truncated at total degree cap.
PolyMatrix multiply_truncated(const PolyMatrix& a, const PolyMatrix& b, int cap);

Polynomial trace(const PolyMatrix& m);

/// Applies compose(entry, subs, cap) to every entry.
PolyMatrix compose(const PolyMatrix& m, std::span<const Polynomial> subs, int cap);

/// Exact determinant. Cofactor expansion up to size 5, fraction-free
/// (Bareiss) elimination above.
Polynomial determinant(const PolyMatrix& m);

Polynomial determinant_cofactor(const PolyMatrix& m);
Polynomial determinant_bareiss(const PolyMatrix& m);

} // namespace keller
