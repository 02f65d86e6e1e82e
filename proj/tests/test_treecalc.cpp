#include <doctest.h>

#include <set>

#include "keller/corpus.hpp"
#include "keller/errors.hpp"
#include "keller/inversion.hpp"
#include "keller/trees.hpp"
#include "support.hpp"

using namespace keller;
using keller::testing::map_of;
using keller::testing::poly;
using keller::testing::polys;

namespace {

Tree chain(const std::vector<std::size_t>& indices) {
    NodePtr node = make_leaf(indices.back());
    for (std::size_t k = indices.size() - 1; k-- > 0;) node = make_vertex(indices[k], {node});
    return Tree(node);
}

// Planar trees whose vertex arities are drawn from `arities`, counted by
// leaves through a composition DP that never builds a tree.
std::vector<Integer> planar_counts(const std::vector<int>& arities, int max_leaves) {
    std::vector<Integer> t(static_cast<std::size_t>(max_leaves) + 1, 0);
    t[1] = 1;
    for (int n = 2; n <= max_leaves; ++n) {
        for (int q : arities) {
            // ways[j][m]: sequences of j trees with m leaves in total
            std::vector<std::vector<Integer>> ways(static_cast<std::size_t>(q) + 1,
                                                   std::vector<Integer>(static_cast<std::size_t>(n) + 1, 0));
            ways[0][0] = 1;
            for (int j = 1; j <= q; ++j) {
                for (int m = 0; m <= n; ++m) {
                    for (int part = 1; part < n && part <= m; ++part) {
                        ways[j][m] += ways[j - 1][m - part] * t[part];
                    }
                }
            }
            t[n] += ways[q][n];
        }
    }
    return t;
}

std::vector<Polynomial> relabel(const std::vector<Polynomial>& comps, std::span<const std::size_t> perm) {
    const std::size_t n = comps.size();
    std::vector<Polynomial> subs;
    for (std::size_t j = 0; j < n; ++j) subs.push_back(Polynomial::variable(n, perm[j]));
    std::vector<Polynomial> out(n, Polynomial(n));
    for (std::size_t i = 0; i < n; ++i) out[perm[i] - 1] = compose(comps[i], subs);
    return out;
}

std::vector<corpus::Fixture> small_keller_fixtures(std::size_t max_n, int max_d) {
    std::vector<corpus::Fixture> out;
    for (auto& f : corpus::standard_corpus()) {
        if (f.keller && !f.map.has_linear_part() && f.map.n() <= max_n && f.map.d() <= max_d) out.push_back(f);
    }
    return out;
}

} // namespace

TEST_CASE("single tree for (x2^2, 0) at two leaves") {
    PolyMap v = map_of(2, 2, {"x2^2", "0"});
    auto trees = collect_trees(v, 2);
    REQUIRE(trees.size() == 1);
    CHECK(canonical_form(trees[0]) == "1[y2,y2]");
    CHECK(tree_value(trees[0], SymmetricVertexView(v)) == poly(2, "y2^2"));
    CHECK(collect_trees(v, 3).empty());
}

TEST_CASE("one leaf gives the n bare trees") {
    PolyMap v = map_of(3, 2, {"x2^2", "x3^2", "0"});
    auto trees = collect_trees(v, 1);
    REQUIRE(trees.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(trees[i].root_index() == i + 1);
        CHECK(tree_length(trees[i]) == 1);
        CHECK(tree_value(trees[i], SymmetricVertexView(v)) == Polynomial::variable(3, i + 1));
    }
}

TEST_CASE("one-dimensional counts follow planar tree counts") {
    // a x^2: binary planar trees, values a^(N-1) y^N.
    PolyMap binary = map_of(1, 2, {"5*x1^2"});
    auto expected = planar_counts({2}, 8);
    for (int leaves = 1; leaves <= 8; ++leaves) {
        CHECK(Integer(enumerate_trees(binary, leaves, [](const Tree&) {})) == expected[static_cast<std::size_t>(leaves)]);
    }
    auto sum = tree_sum(map_of(1, 2, {"3*x1^2"}), 3);
    CHECK(sum[0] == poly(1, "y1 + 3*y1^2 + 18*y1^3"));

    PolyMap mixed = map_of(1, 3, {"x1^2 + x1^3"});
    auto mixed_expected = planar_counts({2, 3}, 7);
    for (int leaves = 1; leaves <= 7; ++leaves) {
        CHECK(Integer(enumerate_trees(mixed, leaves, [](const Tree&) {})) ==
              mixed_expected[static_cast<std::size_t>(leaves)]);
    }
}

TEST_CASE("tree sum equals the truncated inverse") {
    std::vector<PolyMap> maps = {
        map_of(1, 2, {"2*x1^2"}),
        map_of(2, 3, {"x1*x2 - 1/2*x2^3", "x1^2 + 3*x2^2"}),
        map_of(3, 2, {"x2*x3 + x1^2", "x3^2 - x1*x2", "2*x1*x3"}),
    };
    for (const auto& f : small_keller_fixtures(3, 3)) maps.push_back(f.map);
    for (const auto& v : maps) {
        const int cap = v.n() == 3 ? 5 : 6;
        auto sum = tree_sum(v, cap);
        auto inv = invert_truncated(v, cap);
        CHECK(compare_components("trees", sum, inv.components, cap).holds);
    }
}

TEST_CASE("alignment filter examples") {
    Tree same = chain({2, 2});
    CHECK_FALSE(alignment_filter(same, 2).survives);
    CHECK(alignment_filter(same, 1).survives);
    auto w = alignment_filter(same, 2).witness;
    REQUIRE(w);
    CHECK(w->first.position == 0);
    CHECK(w->second.position == 1);
    CHECK(w->second.index == 2);

    Tree separated = chain({2, 1, 2});
    CHECK(alignment_filter(separated, 2).survives);
    CHECK(alignment_filter(separated, 1).survives);

    // A larger index between does not separate.
    Tree above = chain({1, 2, 1});
    CHECK_FALSE(alignment_filter(above, 1).survives);

    // Siblings are not comparable.
    Tree siblings(make_vertex(1, {make_leaf(2), make_leaf(2)}));
    CHECK(alignment_filter(siblings, 2).survives);

    CHECK(alignment_filter(same, 0).survives);
}

TEST_CASE("edge orders") {
    Tree t(make_vertex(1, {make_vertex(2, {make_leaf(1), make_leaf(2)}), make_leaf(3)}));
    EdgeOrder order(t);
    REQUIRE(order.size() == 5);
    CHECK(order.edge(0).parent == -1);
    CHECK(order.edge(1).index == 2);
    CHECK(order.edge(4).index == 3);
    CHECK(order.tree_less(0, 2));
    CHECK(order.tree_less(1, 3));
    CHECK_FALSE(order.tree_less(1, 4));
    CHECK_FALSE(order.tree_less(2, 3));
    CHECK_FALSE(order.tree_less(2, 2));
    CHECK(tree_length(t) == 3);
}

TEST_CASE("restricted sum in one dimension keeps only the bare tree") {
    PolyMap v = map_of(1, 2, {"x1^2"});
    auto sum = restricted_sum(v, 4, 1);
    // Oracle: filter each enumerated tree by checking for a vertex at all.
    Polynomial oracle(1);
    for (int leaves = 1; leaves <= 4; ++leaves) {
        enumerate_trees(v, leaves, [&](const Tree& t) {
            if (t.root().is_leaf()) oracle += tree_value(t, SymmetricVertexView(v));
        });
    }
    CHECK(sum[0] == oracle);
    CHECK(sum[0] == poly(1, "y1"));
}

TEST_CASE("properties over enumerated trees") {
    std::vector<PolyMap> maps = {map_of(2, 3, {"x1*x2 + x2^3", "x1^2 - x2^2"}),
                                 map_of(3, 2, {"x2*x3", "x3^2 + x1*x2", "x1^2"})};
    for (const auto& v : maps) {
        const int max_leaves = v.n() == 3 ? 5 : 6;
        for (int leaves = 1; leaves <= max_leaves; ++leaves) {
            std::set<std::string> seen;
            enumerate_trees(v, leaves, [&](const Tree& t) {
                CHECK(t.leaves() == leaves);
                CHECK(seen.insert(canonical_form(t)).second);

                EdgeOrder order(t);
                for (std::size_t a = 0; a < order.size(); ++a) {
                    for (std::size_t b = 0; b < order.size(); ++b) {
                        if (order.tree_less(a, b)) CHECK(order.around_less(a, b));
                    }
                }

                bool previous = true;
                for (int k = 1; k <= static_cast<int>(v.n()); ++k) {
                    bool now = alignment_filter(t, k).survives;
                    if (now) CHECK(previous);
                    previous = now;
                }
            });
        }
    }
}

TEST_CASE("factorization on Keller fixtures") {
    PolyMap hand = map_of(2, 2, {"x2^2", "0"});
    auto r = factorization_check(hand, 6);
    CHECK(r.identity.holds);
    CHECK(r.length_bound == 3);
    CHECK(r.length_bound_holds);
    CHECK(r.degree_per_length_holds);

    CHECK(factorization_check(PolyMap::zero(2, 2), 5).identity.holds);
    CHECK(factorization_check(map_of(3, 2, {"x2*x3", "x3^2", "0"}), 6).identity.holds);

    // Exact on triangular fixtures; elsewhere the report must be well-formed.
    for (const auto& f : small_keller_fixtures(3, 3)) {
        const int cap = f.map.n() == 3 ? 5 : 6;
        auto report = factorization_check(f.map, cap);
        INFO(f.name);
        if (f.triangular) CHECK(report.identity.holds);
        CHECK(report.identity.holds == !report.identity.first_discrepancy.has_value());
        if (!report.identity.holds) CHECK_FALSE(report.identity.detail.empty());
        CHECK(report.length_bound_holds);
        CHECK(report.degree_per_length_holds);
        CHECK(report.surviving_trees <= report.total_trees);
    }
}

TEST_CASE("factorization refuses maps that fail the Jacobian condition") {
    CHECK_THROWS_AS(factorization_check(map_of(2, 2, {"x1^2", "0"}), 4), NotKeller);
}

TEST_CASE("guards and preconditions") {
    CHECK_THROWS_AS(tree_sum(map_of(2, 2, {"x2^2", "0"}), 9), GuardExceeded);
    CHECK_THROWS_AS(tree_sum(PolyMap::zero(4, 2), 3), GuardExceeded);
    CHECK_THROWS_AS(tree_sum(map_of(2, 4, {"x2^4", "0"}), 3), GuardExceeded);
    CHECK_THROWS_AS(tree_sum(map_of(2, 2, {"x2 + x2^2", "0"}), 3), PreconditionError);
    EnumerationGuard wide{10, 3, 3};
    CHECK_NOTHROW(tree_sum(map_of(2, 2, {"x2^2", "0"}), 9, wide));
}

TEST_CASE("relabeling with a matching filter order is invariant") {
    std::vector<std::vector<std::size_t>> perms = {{2, 1}, {3, 1, 2}, {2, 3, 1}};
    std::vector<PolyMap> maps = {map_of(2, 3, {"x1*x2 + x2^3", "x1^2 - x2^2"}),
                                 map_of(3, 2, {"x2*x3", "x3^2 + x1*x2", "x1^2"}),
                                 map_of(3, 2, {"x2^2 + x3^2", "x3^2", "0"})};
    for (std::size_t m = 0; m < maps.size(); ++m) {
        const auto& v = maps[m];
        const auto& perm = perms[m];
        PolyMap w = corpus::permute_variables(v, perm);
        std::vector<std::size_t> rank(v.n());
        for (std::size_t j = 0; j < v.n(); ++j) rank[perm[j] - 1] = j + 1;
        for (int k = 1; k <= static_cast<int>(v.n()); ++k) {
            auto base = restricted_sum(v, 5, k);
            auto moved = restricted_sum(w, 5, k, {}, rank);
            CHECK(compare_components("relabel", relabel(base, perm), moved).holds);
        }
    }
    for (const auto& f : small_keller_fixtures(2, 3)) {
        std::vector<std::size_t> swap{2, 1};
        std::vector<std::size_t> swap_rank{2, 1};
        auto base = factorization_check(f.map, 5);
        auto moved = factorization_check(corpus::permute_variables(f.map, swap), 5, {}, swap_rank);
        INFO(f.name);
        CHECK(base.identity.holds == moved.identity.holds);
    }
    PolyMap keller = map_of(3, 2, {"x2^2 + x3^2", "x3^2", "0"});
    std::vector<std::size_t> perm{3, 1, 2};
    std::vector<std::size_t> rank{2, 3, 1};
    auto report = factorization_check(corpus::permute_variables(keller, perm), 5, {}, rank);
    CHECK(report.identity.holds);
}

TEST_CASE("tree statistics") {
    PolyMap v = map_of(2, 2, {"x2^2", "0"});
    std::vector<int> levels{1, 2};
    auto stats = tree_statistics(v, 4, levels);
    REQUIRE(stats.count_by_order.size() == 4);
    CHECK(stats.count_by_order[0] == 2);
    CHECK(stats.count_by_order[1] == 1);
    CHECK(stats.count_by_order[2] == 0);
    CHECK(stats.length_histogram.at(1) == 2);
    CHECK(stats.length_histogram.at(2) == 1);
    CHECK(stats.survivors_by_level[0] == 3);
    CHECK(stats.survivors_by_level[1] == 3);
}
