#include "keller/polymatrix.hpp"

#include <limits>
#include <string>
#include <unordered_map>

#include "keller/errors.hpp"

namespace keller {

namespace {

constexpr int kNoCap = std::numeric_limits<int>::max();
constexpr std::size_t kCofactorMaxSize = 5;

void require_square(const PolyMatrix& m, const char* op) {
    if (!m.is_square()) {
        throw DimensionMismatch(std::string(op) + ": matrix is " + std::to_string(m.rows()) + "x" +
                                std::to_string(m.cols()) + ", not square");
    }
}

} // namespace

PolyMatrix::PolyMatrix(std::size_t rows, std::size_t cols, std::size_t dim)
    : rows_(rows), cols_(cols), dim_(dim), entries_(rows * cols, Polynomial(dim)) {
    if (rows == 0 || cols == 0) throw DomainError("PolyMatrix: rows and cols must be positive");
}

PolyMatrix PolyMatrix::identity(std::size_t size, std::size_t dim) {
    PolyMatrix m(size, size, dim);
    for (std::size_t k = 0; k < size; ++k) m.set(k, k, Polynomial::constant(dim, 1));
    return m;
}

PolyMatrix PolyMatrix::from_rationals(const std::vector<std::vector<Rational>>& entries, std::size_t dim) {
    if (entries.empty()) throw DomainError("PolyMatrix: empty entry grid");
    PolyMatrix m(entries.size(), entries.front().size(), dim);
    for (std::size_t r = 0; r < entries.size(); ++r) {
        if (entries[r].size() != m.cols()) throw DimensionMismatch("PolyMatrix: ragged entry grid");
        for (std::size_t c = 0; c < m.cols(); ++c) m.set(r, c, Polynomial::constant(dim, entries[r][c]));
    }
    return m;
}

void PolyMatrix::set(std::size_t r, std::size_t c, Polynomial p) {
    if (p.dim() != dim_) throw DimensionMismatch("PolyMatrix::set: entry dimension mismatch");
    entries_[r * cols_ + c] = std::move(p);
}

bool PolyMatrix::is_zero() const noexcept {
    for (const auto& e : entries_) {
        if (!e.is_zero()) return false;
    }
    return true;
}

bool PolyMatrix::has_constant_entries() const noexcept {
    for (const auto& e : entries_) {
        if (sgn(e.constant_term()) != 0) return true;
    }
    return false;
}

PolyMatrix PolyMatrix::constant_part() const {
    PolyMatrix out(rows_, cols_, dim_);
    for (std::size_t k = 0; k < entries_.size(); ++k) {
        out.entries_[k] = Polynomial::constant(dim_, entries_[k].constant_term());
    }
    return out;
}

PolyMatrix& PolyMatrix::operator+=(const PolyMatrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_) throw DimensionMismatch("matrix add: shape mismatch");
    for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += other.entries_[k];
    return *this;
}

PolyMatrix& PolyMatrix::operator-=(const PolyMatrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_) throw DimensionMismatch("matrix sub: shape mismatch");
    for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= other.entries_[k];
    return *this;
}

PolyMatrix operator+(PolyMatrix a, const PolyMatrix& b) { return a += b; }
PolyMatrix operator-(PolyMatrix a, const PolyMatrix& b) { return a -= b; }
PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b) { return multiply_truncated(a, b, kNoCap); }

PolyMatrix multiply_truncated(const PolyMatrix& a, const PolyMatrix& b, int cap) {
    if (a.cols() != b.rows()) throw DimensionMismatch("matrix mul: inner dimensions differ");
    if (a.dim() != b.dim()) throw DimensionMismatch("matrix mul: ambient dimensions differ");
    PolyMatrix out(a.rows(), b.cols(), a.dim());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < b.cols(); ++c) {
            Polynomial acc(a.dim());
            for (std::size_t k = 0; k < a.cols(); ++k) {
                if (a(r, k).is_zero() || b(k, c).is_zero()) continue;
                acc += keller::multiply_truncated(a(r, k), b(k, c), cap);
            }
            out.set(r, c, std::move(acc));
        }
    }
    return out;
}

Polynomial trace(const PolyMatrix& m) {
    require_square(m, "trace");
    Polynomial t(m.dim());
    for (std::size_t k = 0; k < m.rows(); ++k) t += m(k, k);
    return t;
}

PolyMatrix compose(const PolyMatrix& m, std::span<const Polynomial> subs, int cap) {
    if (subs.empty()) throw DimensionMismatch("compose: no substitutions");
    PolyMatrix out(m.rows(), m.cols(), subs.front().dim());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) out.set(r, c, keller::compose(m(r, c), subs, cap));
    }
    return out;
}

Polynomial determinant_cofactor(const PolyMatrix& m) {
    require_square(m, "determinant");
    const std::size_t n = m.rows();
    if (n > 20) throw GuardExceeded("determinant_cofactor: size above 20");
    // Laplace expansion along successive rows; minors keyed by the set of
    // columns still available.
    std::unordered_map<std::uint32_t, Polynomial> memo;
    auto minor = [&](auto&& self, std::size_t row, std::uint32_t cols) -> Polynomial {
        if (row == n) return Polynomial::constant(m.dim(), 1);
        if (auto it = memo.find(cols); it != memo.end()) return it->second;
        Polynomial acc(m.dim());
        int sign = 1;
        for (std::size_t c = 0; c < n; ++c) {
            if (!(cols & (1u << c))) continue;
            if (!m(row, c).is_zero()) {
                Polynomial sub = self(self, row + 1, cols & ~(1u << c));
                if (!sub.is_zero()) {
                    Polynomial t = m(row, c) * sub;
                    if (sign > 0) acc += t;
                    else acc -= t;
                }
            }
            sign = -sign;
        }
        memo.emplace(cols, acc);
        return acc;
    };
    return minor(minor, 0, (n == 32 ? ~0u : ((1u << n) - 1)));
}

Polynomial determinant_bareiss(const PolyMatrix& m) {
    require_square(m, "determinant");
    const std::size_t n = m.rows();
    std::vector<std::vector<Polynomial>> a(n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) a[r].push_back(m(r, c));
    }
    int sign = 1;
    Polynomial prev = Polynomial::constant(m.dim(), 1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k].is_zero()) {
            std::size_t pivot = k + 1;
            while (pivot < n && a[pivot][k].is_zero()) ++pivot;
            if (pivot == n) return Polynomial(m.dim());
            std::swap(a[k], a[pivot]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                Polynomial num = a[k][k] * a[i][j] - a[i][k] * a[k][j];
                a[i][j] = divide_exact(num, prev);
            }
        }
        prev = a[k][k];
    }
    Polynomial det = a[n - 1][n - 1];
    return sign > 0 ? det : -det;
}

Polynomial determinant(const PolyMatrix& m) {
    require_square(m, "determinant");
    return m.rows() <= kCofactorMaxSize ? determinant_cofactor(m) : determinant_bareiss(m);
}

} // namespace keller
