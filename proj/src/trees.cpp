#include "keller/trees.hpp"

#include <algorithm>

#include "keller/errors.hpp"

namespace keller {

namespace {

void require_guard(const PolyMap& map, int leaves, const EnumerationGuard& guard) {
    if (map.has_linear_part()) {
        throw PreconditionError("tree enumeration needs a map without linear part; apply linear_reduction first");
    }
    if (leaves > guard.max_leaves) {
        throw GuardExceeded("tree enumeration: " + std::to_string(leaves) + " leaves exceeds the guard of " +
                            std::to_string(guard.max_leaves));
    }
    if (map.n() > guard.max_dim) {
        throw GuardExceeded("tree enumeration: n = " + std::to_string(map.n()) + " exceeds the guard of " +
                            std::to_string(guard.max_dim));
    }
    if (map.d() > guard.max_degree) {
        throw GuardExceeded("tree enumeration: d = " + std::to_string(map.d()) + " exceeds the guard of " +
                            std::to_string(guard.max_degree));
    }
}

std::size_t rank_of(std::span<const std::size_t> rank, std::size_t index) {
    return rank.empty() ? index : rank[index - 1];
}

void canonical_into(const TreeNode& node, std::string& out) {
    if (node.is_leaf()) {
        out += 'y' + std::to_string(node.index);
        return;
    }
    out += std::to_string(node.index) + '[';
    for (std::size_t c = 0; c < node.children.size(); ++c) {
        if (c) out += ',';
        canonical_into(*node.children[c], out);
    }
    out += ']';
}

// Accumulates one tree's value into out[root - 1].
void accumulate_value(const Tree& tree, const SymmetricVertexView& view, std::vector<Polynomial>& out) {
    out[tree.root_index() - 1] += tree_value(tree, view);
}

} // namespace

NodePtr make_leaf(std::size_t index) {
    auto node = std::make_shared<TreeNode>();
    node->index = index;
    return node;
}

NodePtr make_vertex(std::size_t index, std::vector<NodePtr> children) {
    auto node = std::make_shared<TreeNode>();
    node->index = index;
    node->leaves = 0;
    node->vertices = 1;
    int deepest = 0;
    for (const auto& c : children) {
        node->leaves += c->leaves;
        node->vertices += c->vertices;
        deepest = std::max(deepest, c->height);
    }
    node->height = 1 + deepest;
    node->children = std::move(children);
    return node;
}

std::string canonical_form(const Tree& tree) {
    std::string out;
    canonical_into(tree.root(), out);
    return out;
}

TreeEnumerator::TreeEnumerator(const PolyMap& map) : map_(map), view_(map) {
    if (map.has_linear_part()) {
        throw PreconditionError("tree enumeration needs a map without linear part; apply linear_reduction first");
    }
    for (std::size_t i = 1; i <= map.n(); ++i) arrangements_.push_back(view_.arrangements(i));
}

void TreeEnumerator::for_each_child_list(std::size_t index, int leaves,
                                         const std::function<void(const std::vector<NodePtr>&)>& emit) {
    std::vector<NodePtr> children;
    for (const auto& arrangement : arrangements_[index - 1]) {
        const auto& out = arrangement.outgoing;
        const int q = static_cast<int>(out.size());
        if (q > leaves) continue;
        // Distribute `remaining` leaves over positions pos..q-1, each >= 1.
        auto place = [&](auto&& self, int pos, int remaining) -> void {
            if (pos == q) {
                if (remaining == 0) emit(children);
                return;
            }
            const int max_here = remaining - (q - pos - 1);
            for (int here = 1; here <= max_here; ++here) {
                for (const auto& sub : subtrees(out[static_cast<std::size_t>(pos)], here)) {
                    children.push_back(sub);
                    self(self, pos + 1, remaining - here);
                    children.pop_back();
                }
            }
        };
        place(place, 0, leaves);
    }
}

const std::vector<NodePtr>& TreeEnumerator::subtrees(std::size_t index, int leaves) {
    auto key = std::make_pair(index, leaves);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::vector<NodePtr> built;
    if (leaves == 1) {
        built.push_back(make_leaf(index));
    } else {
        for_each_child_list(index, leaves, [&](const std::vector<NodePtr>& children) {
            built.push_back(make_vertex(index, children));
        });
    }
    return memo_.emplace(key, std::move(built)).first->second;
}

std::size_t TreeEnumerator::for_each_rooted(std::size_t root, int leaves,
                                            const std::function<void(const Tree&)>& visit) {
    if (root < 1 || root > map_.n()) throw DomainError("root index out of range");
    if (leaves < 1) return 0;
    if (leaves == 1) {
        visit(Tree(make_leaf(root)));
        return 1;
    }
    std::size_t count = 0;
    for_each_child_list(root, leaves, [&](const std::vector<NodePtr>& children) {
        visit(Tree(make_vertex(root, children)));
        ++count;
    });
    return count;
}

std::size_t TreeEnumerator::for_each(int leaves, const std::function<void(const Tree&)>& visit) {
    std::size_t count = 0;
    for (std::size_t root = 1; root <= map_.n(); ++root) count += for_each_rooted(root, leaves, visit);
    return count;
}

std::size_t enumerate_trees(const PolyMap& map, int leaves, const std::function<void(const Tree&)>& visit,
                            const EnumerationGuard& guard) {
    if (leaves < 1) throw DomainError("enumerate_trees: need at least one leaf");
    require_guard(map, leaves, guard);
    TreeEnumerator enumerator(map);
    return enumerator.for_each(leaves, visit);
}

std::vector<Tree> collect_trees(const PolyMap& map, int leaves, const EnumerationGuard& guard) {
    std::vector<Tree> out;
    enumerate_trees(map, leaves, [&](const Tree& t) { out.push_back(t); }, guard);
    return out;
}

Polynomial tree_value(const Tree& tree, const SymmetricVertexView& view) {
    const std::size_t n = view.n();
    std::vector<std::uint32_t> exps(n, 0);
    Rational weight = 1;
    std::vector<std::size_t> outgoing;
    auto walk = [&](auto&& self, const TreeNode& node) -> void {
        if (node.is_leaf()) {
            if (node.index < 1 || node.index > n) throw DomainError("tree_value: leaf index out of range");
            ++exps[node.index - 1];
            return;
        }
        outgoing.clear();
        for (const auto& c : node.children) outgoing.push_back(c->index);
        weight *= view.entry(node.index, outgoing);
        for (const auto& c : node.children) self(self, *c);
    };
    walk(walk, tree.root());
    Polynomial out(n);
    out.add_term(Monomial(std::move(exps)), weight);
    return out;
}

EdgeOrder::EdgeOrder(const Tree& tree) {
    auto walk = [&](auto&& self, const TreeNode& node, std::ptrdiff_t parent, int depth) -> void {
        const auto here = static_cast<std::ptrdiff_t>(edges_.size());
        edges_.push_back({node.index, parent, depth});
        for (const auto& c : node.children) self(self, *c, here, depth + 1);
    };
    walk(walk, tree.root(), -1, 0);
}

bool EdgeOrder::tree_less(std::size_t a, std::size_t b) const {
    if (a >= edges_.size() || b >= edges_.size()) throw DomainError("EdgeOrder: edge position out of range");
    std::ptrdiff_t cur = edges_[b].parent;
    while (cur >= 0) {
        if (static_cast<std::size_t>(cur) == a) return true;
        cur = edges_[static_cast<std::size_t>(cur)].parent;
    }
    return false;
}

AlignmentVerdict alignment_filter(const Tree& tree, int k, std::span<const std::size_t> rank) {
    AlignmentVerdict verdict;
    verdict.k = k;
    if (k <= 0) return verdict;
    const auto level = static_cast<std::size_t>(k);

    struct PathEntry {
        std::size_t index;
        std::size_t position;
    };
    std::vector<PathEntry> path;
    std::size_t position = 0;
    auto walk = [&](auto&& self, const TreeNode& node) -> bool {
        const std::size_t here = position++;
        const std::size_t r = rank_of(rank, node.index);
        if (r <= level) {
            for (auto it = path.rbegin(); it != path.rend(); ++it) {
                const std::size_t ra = rank_of(rank, it->index);
                if (ra > r) continue;
                if (it->index == node.index) {
                    verdict.survives = false;
                    verdict.witness = std::make_pair(EdgeRef{it->position, it->index}, EdgeRef{here, node.index});
                    return false;
                }
                break; // a smaller-ranked edge separates any earlier same-index edge
            }
        }
        path.push_back({node.index, here});
        for (const auto& c : node.children) {
            if (!self(self, *c)) return false;
        }
        path.pop_back();
        return true;
    };
    walk(walk, tree.root());
    return verdict;
}

int tree_length(const Tree& tree) { return tree.root().height; }

std::vector<Polynomial> tree_sum(const PolyMap& map, int cap, const EnumerationGuard& guard) {
    return restricted_sum(map, cap, 0, guard);
}

std::vector<Polynomial> restricted_sum(const PolyMap& map, int cap, int k, const EnumerationGuard& guard,
                                       std::span<const std::size_t> rank) {
    if (cap < 1) throw DomainError("restricted_sum: cap must be at least 1");
    if (k < 0 || static_cast<std::size_t>(k) > map.n()) throw DomainError("restricted_sum: level out of range");
    require_guard(map, cap, guard);
    TreeEnumerator enumerator(map);
    std::vector<Polynomial> out(map.n(), Polynomial(map.n()));
    for (int leaves = 1; leaves <= cap; ++leaves) {
        enumerator.for_each(leaves, [&](const Tree& t) {
            if (k == 0 || alignment_filter(t, k, rank).survives) accumulate_value(t, enumerator.view(), out);
        });
    }
    return out;
}

FactorizationReport factorization_check(const PolyMap& map, int cap, const EnumerationGuard& guard,
                                        std::span<const std::size_t> rank) {
    if (cap < 1) throw DomainError("factorization_check: cap must be at least 1");
    require_guard(map, cap, guard);
    if (!keller_check(map).is_keller) {
        throw NotKeller("factorization_check: the identity is conditional on the Jacobian hypothesis");
    }
    const std::size_t n = map.n();
    const int level = static_cast<int>(n);
    TreeEnumerator enumerator(map);
    std::vector<Polynomial> full(n, Polynomial(n));
    std::vector<Polynomial> restricted(n, Polynomial(n));

    FactorizationReport report;
    mpz_ui_pow_ui(report.length_bound.get_mpz_t(), 2, n);
    report.length_bound -= 1;

    for (int leaves = 1; leaves <= cap; ++leaves) {
        report.total_trees += enumerator.for_each(leaves, [&](const Tree& t) {
            Polynomial value = tree_value(t, enumerator.view());
            full[t.root_index() - 1] += value;
            const int length = tree_length(t);
            auto& deepest = report.max_degree_by_length[length];
            deepest = std::max(deepest, t.leaves());
            Integer degree_cap;
            mpz_ui_pow_ui(degree_cap.get_mpz_t(), static_cast<unsigned long>(map.d()),
                          static_cast<unsigned long>(length - 1));
            if (Integer(t.leaves()) > degree_cap) report.degree_per_length_holds = false;
            if (alignment_filter(t, level, rank).survives) {
                restricted[t.root_index() - 1] += value;
                ++report.surviving_trees;
                report.max_survivor_length = std::max(report.max_survivor_length, length);
            }
        });
    }
    report.length_bound_holds = Integer(report.max_survivor_length) <= report.length_bound;
    report.identity = compare_components("F = F(|<=n)", full, restricted, cap);
    return report;
}

TreeStatistics tree_statistics(const PolyMap& map, int order, std::span<const int> levels,
                               const EnumerationGuard& guard) {
    if (order < 1) throw DomainError("tree_statistics: order must be at least 1");
    require_guard(map, order, guard);
    for (int k : levels) {
        if (k < 1 || static_cast<std::size_t>(k) > map.n()) throw DomainError("tree_statistics: level out of range");
    }
    TreeEnumerator enumerator(map);
    TreeStatistics stats;
    stats.survivors_by_level.assign(levels.size(), 0);
    for (int leaves = 1; leaves <= order; ++leaves) {
        stats.count_by_order.push_back(enumerator.for_each(leaves, [&](const Tree& t) {
            ++stats.length_histogram[tree_length(t)];
            for (std::size_t s = 0; s < levels.size(); ++s) {
                if (alignment_filter(t, levels[s]).survives) ++stats.survivors_by_level[s];
            }
        }));
    }
    return stats;
}

} // namespace keller
