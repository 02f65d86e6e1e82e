#include "keller/traces.hpp"

#include <cmath>

#include "keller/errors.hpp"

namespace keller {

namespace {

Polynomial truncate_if(const Polynomial& p, int cap) { return cap >= 0 ? p.truncated(cap) : p; }

Polynomial product(const Polynomial& a, const Polynomial& b, int cap) {
    return cap >= 0 ? multiply_truncated(a, b, cap) : a * b;
}

PolyMatrix matrix_product(const PolyMatrix& a, const PolyMatrix& b, int cap) {
    return cap >= 0 ? multiply_truncated(a, b, cap) : a * b;
}

bool constant_part_nilpotent(const PolyMatrix& m) {
    const PolyMatrix c = m.constant_part();
    PolyMatrix power = c;
    for (std::size_t k = 1; k < m.rows(); ++k) power = power * c;
    return power.is_zero();
}

// Principal block on indices >= r (1-based); other entries zeroed.
PolyMatrix tail_block(const PolyMatrix& m, std::size_t r) {
    PolyMatrix out(m.rows(), m.cols(), m.dim());
    for (std::size_t i = r - 1; i < m.rows(); ++i) {
        for (std::size_t j = r - 1; j < m.cols(); ++j) out.set(i, j, m(i, j));
    }
    return out;
}

Polynomial trace_power(const PolyMatrix& m, int q, int cap) {
    PolyMatrix power = m;
    for (int k = 1; k < q; ++k) power = matrix_product(power, m, cap);
    return truncate_if(trace(power), cap);
}

std::vector<MinIndexClass> partition_by_words(const PolyMatrix& m, int q, int cap) {
    const std::size_t n = m.rows();
    std::vector<MinIndexClass> classes;
    for (std::size_t r = 1; r <= n; ++r) classes.push_back({r, Polynomial(m.dim())});

    std::size_t first = 0;
    auto walk = [&](auto&& self, std::size_t current, int depth, std::size_t smallest,
                    const Polynomial& prefix) -> void {
        if (depth == q) {
            Polynomial closed = product(prefix, m(current, first), cap);
            classes[smallest].value += closed;
            return;
        }
        for (std::size_t next = 0; next < n; ++next) {
            if (m(current, next).is_zero()) continue;
            Polynomial extended = product(prefix, m(current, next), cap);
            if (extended.is_zero()) continue;
            self(self, next, depth + 1, std::min(smallest, next), extended);
        }
    };
    for (first = 0; first < n; ++first) {
        walk(walk, first, 1, first, Polynomial::constant(m.dim(), 1));
    }
    return classes;
}

std::vector<MinIndexClass> partition_by_blocks(const PolyMatrix& m, int q, int cap) {
    const std::size_t n = m.rows();
    std::vector<Polynomial> tails(n + 1, Polynomial(m.dim()));
    for (std::size_t r = n; r >= 1; --r) tails[r - 1] = trace_power(tail_block(m, r), q, cap);
    std::vector<MinIndexClass> classes;
    for (std::size_t r = 1; r <= n; ++r) classes.push_back({r, tails[r - 1] - tails[r]});
    return classes;
}

} // namespace

TraceSeries trace_log_series(const PolyMatrix& m, int cap, std::optional<int> q_cap) {
    if (!m.is_square()) throw DimensionMismatch("trace_log_series: matrix must be square");
    if (cap < 0) throw DomainError("trace_log_series: cap must be nonnegative");
    if (!q_cap && m.has_constant_entries()) {
        throw PreconditionError("trace_log_series: matrix has constant entries; give an explicit power cap");
    }
    const int q_max = q_cap ? *q_cap : cap;
    if (q_max < 0) throw DomainError("trace_log_series: power cap must be nonnegative");
    TraceSeries series{cap, q_max, Polynomial(m.dim())};
    if (q_max == 0) return series;
    PolyMatrix power = m;
    for (int q = 1; q <= q_max; ++q) {
        if (q > 1) power = multiply_truncated(power, m, cap);
        if (power.is_zero()) break;
        Polynomial t = trace(power).truncated(cap);
        Rational inv(1, q);
        inv.canonicalize();
        t *= inv;
        series.value += t;
    }
    return series;
}

std::vector<MinIndexClass> min_index_partition(const PolyMatrix& m, int q, int cap, PartitionMethod method) {
    if (!m.is_square()) throw DimensionMismatch("min_index_partition: matrix must be square");
    if (q < 1) throw DomainError("min_index_partition: power must be at least 1");
    const double words = std::pow(static_cast<double>(m.rows()), q);
    if (method == PartitionMethod::automatic) {
        method = words <= kAutomaticWordLimit ? PartitionMethod::cyclic_words : PartitionMethod::inclusion_exclusion;
    }
    if (method == PartitionMethod::cyclic_words) {
        if (words > kCyclicWordGuard) {
            throw GuardExceeded("min_index_partition: n^Q = " + std::to_string(static_cast<long long>(words)) +
                                " cyclic words exceeds the guard of 10^6");
        }
        return partition_by_words(m, q, cap);
    }
    return partition_by_blocks(m, q, cap);
}

TraceProductReport restricted_exp_product_check(const PolyMap& input, int cap) {
    if (cap < 1) throw DomainError("restricted_exp_product_check: cap must be at least 1");
    // A block of a nilpotent linear part need not be nilpotent, so a single
    // class would carry a constant series that never truncates. The reduced
    // map has no linear part and the same Jacobian determinant.
    const bool reduce = input.has_linear_part();
    const PolyMap map = reduce ? linear_reduction(input).reduced : input;
    const std::size_t n = map.n();
    const PolyMatrix j = jacobian(map);
    const int q_max = cap;

    TraceProductReport report;
    report.cap = cap;
    report.reduced = reduce;
    report.keller = keller_check(map).is_keller;
    report.full = trace_log_series(j, cap).value;
    report.restricted.assign(n, Polynomial(n));
    // Class r of Tr J^q is Tr(B_r)^q - Tr(B_{r+1})^q with B_r the block on
    // indices >= r; keep the running powers of every block.
    std::vector<PolyMatrix> blocks;
    for (std::size_t r = 1; r <= n; ++r) blocks.push_back(tail_block(j, r));
    std::vector<PolyMatrix> powers = blocks;
    for (int q = 1; q <= q_max; ++q) {
        if (q > 1) {
            for (std::size_t r = 0; r < n; ++r) powers[r] = multiply_truncated(powers[r], blocks[r], cap);
        }
        Rational inv(1, q);
        inv.canonicalize();
        Polynomial next_tail(n);
        for (std::size_t r = n; r-- > 0;) {
            Polynomial tail = trace(powers[r]).truncated(cap);
            Polynomial part = tail - next_tail;
            part *= inv;
            report.restricted[r] += part;
            next_tail = std::move(tail);
        }
    }

    Polynomial summed(n);
    for (const auto& s : report.restricted) summed += s;
    const std::vector<Polynomial> full_vec{report.full};
    const std::vector<Polynomial> summed_vec{summed};
    report.partition = compare_components("sum of min-index series = trace-log series", summed_vec, full_vec, cap);

    Polynomial prod = Polynomial::constant(n, 1);
    for (const auto& s : report.restricted) prod = multiply_truncated(prod, series_exp(s, cap), cap);
    const std::vector<Polynomial> zero_vec{Polynomial(n)};
    const std::vector<Polynomial> one_vec{Polynomial::constant(n, 1)};
    report.vanishing = compare_components("trace-log series = 0", full_vec, zero_vec, cap);
    IdentityReport product_is_one =
        compare_components("product of restricted exponentials = 1", {&prod, 1}, one_vec, cap);
    if (report.vanishing.holds && !product_is_one.holds) report.vanishing = product_is_one;
    report.vanishing_expected_fail = !report.keller;

    const Polynomial det = determinant(PolyMatrix::identity(n, n) - j);
    const std::vector<Polynomial> exp_vec{series_exp(report.full, cap)};
    const std::vector<Polynomial> recip_vec{series_reciprocal(det, cap)};
    report.determinant_consistency = compare_components("exp(trace-log series) = 1/det(I - V')", exp_vec, recip_vec, cap);
    return report;
}

Polynomial trace_log_at(const PolyMap& map, std::span<const Polynomial> at, int cap) {
    if (at.size() != map.n()) throw DimensionMismatch("trace_log_at: wrong number of substitutions");
    const PolyMatrix j = compose(jacobian(map), at, cap);
    if (!constant_part_nilpotent(j)) throw NotNilpotent("trace_log_at: constant part is not nilpotent");
    const std::optional<int> q_cap =
        j.has_constant_entries() ? std::optional<int>((cap + 1) * static_cast<int>(map.n())) : std::nullopt;
    return trace_log_series(j, cap, q_cap).value;
}

} // namespace keller
