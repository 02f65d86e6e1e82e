#include "keller/identity_report.hpp"

#include "keller/errors.hpp"

namespace keller {

IdentityReport compare_components(std::string identity, std::span<const Polynomial> lhs,
                                  std::span<const Polynomial> rhs, int cap) {
    if (lhs.size() != rhs.size()) throw DimensionMismatch("compare_components: component counts differ");
    IdentityReport report{std::move(identity), true, std::nullopt, {}};
    for (std::size_t i = 0; i < lhs.size(); ++i) {
        Polynomial diff = lhs[i] - rhs[i];
        if (cap >= 0) diff = diff.truncated(cap);
        if (diff.is_zero()) continue;
        const Monomial& m = diff.terms().begin()->first;
        if (!report.first_discrepancy || m.degree() < report.first_discrepancy->monomial.degree()) {
            report.first_discrepancy = Discrepancy{i + 1, m, lhs[i].coefficient(m), rhs[i].coefficient(m)};
        }
        report.holds = false;
    }
    if (report.first_discrepancy) {
        const auto& d = *report.first_discrepancy;
        report.detail = "component " + std::to_string(d.component) + ", monomial " + to_string(d.monomial, "y") +
                        ": " + rational_to_string(d.lhs) + " vs " + rational_to_string(d.rhs);
    }
    return report;
}

} // namespace keller
