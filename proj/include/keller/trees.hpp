#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "keller/identity_report.hpp"
#include "keller/polymap.hpp"

namespace keller {

/// A vertex or a leaf of a perturbative tree, together with the edge that
/// enters it. The edge carries `index`: for a vertex it is the incoming index
/// of the tensor entry, for a leaf it is the index of the y it stands for.
/// Children are in planar (left-to-right) order; subtrees are shared.
struct TreeNode {
    std::size_t index = 0;
    std::vector<std::shared_ptr<const TreeNode>> children;
    int leaves = 1;   ///< y's below this edge
    int vertices = 0; ///< vertices below this edge, including the one it enters
    int height = 1;   ///< edges on the longest downward chain starting at this edge

    bool is_leaf() const noexcept { return children.empty(); }
};

using NodePtr = std::shared_ptr<const TreeNode>;

/// Rooted planar tree; the root edge carries the root index i_root.
class Tree {
public:
    explicit Tree(NodePtr root) : root_(std::move(root)) {}

    std::size_t root_index() const noexcept { return root_->index; }
    const TreeNode& root() const noexcept { return *root_; }
    const NodePtr& root_ptr() const noexcept { return root_; }
    int leaves() const noexcept { return root_->leaves; }     ///< N
    int vertices() const noexcept { return root_->vertices; } ///< r

private:
    NodePtr root_;
};

/// Builds a node, filling the cached counts from the children.
NodePtr make_leaf(std::size_t index);
NodePtr make_vertex(std::size_t index, std::vector<NodePtr> children);

/// "i[...]" for vertices, "yi" for leaves, children comma-separated.
std::string canonical_form(const Tree& tree);

/// Limits for exhaustive enumeration.
struct EnumerationGuard {
    int max_leaves = 8;
    std::size_t max_dim = 3;
    int max_degree = 3;
};

/// Enumerates every planar tree whose vertices carry nonzero tensor entries.
/// Subtrees are memoized per (index, leaf count) and shared between trees.
class TreeEnumerator {
public:
    explicit TreeEnumerator(const PolyMap& map);

    const PolyMap& map() const noexcept { return map_; }
    const SymmetricVertexView& view() const noexcept { return view_; }

    /// Visits every tree with exactly `leaves` y's, root indices 1..n in order.
    /// Returns the number of trees visited.
    std::size_t for_each(int leaves, const std::function<void(const Tree&)>& visit);

    /// Visits trees with the given root index only.
    std::size_t for_each_rooted(std::size_t root, int leaves, const std::function<void(const Tree&)>& visit);

private:
    const std::vector<NodePtr>& subtrees(std::size_t index, int leaves);

    // Calls emit(children) for every child list of a vertex with incoming
    // index `index` and `leaves` leaves in total.
    void for_each_child_list(std::size_t index, int leaves,
                             const std::function<void(const std::vector<NodePtr>&)>& emit);

    const PolyMap& map_;
    SymmetricVertexView view_;
    std::vector<std::vector<VertexArrangement>> arrangements_;
    std::map<std::pair<std::size_t, int>, std::vector<NodePtr>> memo_;
};

/// Streams every tree with exactly `leaves` y's. Throws PreconditionError for
/// maps with a linear part and GuardExceeded beyond the guard.
std::size_t enumerate_trees(const PolyMap& map, int leaves, const std::function<void(const Tree&)>& visit,
                            const EnumerationGuard& guard = {});

std::vector<Tree> collect_trees(const PolyMap& map, int leaves, const EnumerationGuard& guard = {});

/// Product of the tensor entries of the vertices times prod y_{leaf index}.
Polynomial tree_value(const Tree& tree, const SymmetricVertexView& view);

/// Edges in around-the-tree order (preorder; siblings left to right).
struct EdgeInfo {
    std::size_t index;    ///< index carried by the edge
    std::ptrdiff_t parent; ///< position of the parent edge, -1 for the root edge
    int depth;            ///< 0 for the root edge
};

class EdgeOrder {
public:
    explicit EdgeOrder(const Tree& tree);

    std::size_t size() const noexcept { return edges_.size(); }
    const EdgeInfo& edge(std::size_t pos) const { return edges_.at(pos); }

    /// a <_tree b: a enters a vertex from which b descends.
    bool tree_less(std::size_t a, std::size_t b) const;
    /// a <_around b: total order, preorder position.
    bool around_less(std::size_t a, std::size_t b) const noexcept { return a < b; }

private:
    std::vector<EdgeInfo> edges_;
};

struct EdgeRef {
    std::size_t position; ///< around-order position (0 = root edge)
    std::size_t index;
};

struct AlignmentVerdict {
    int k = 0;
    bool survives = true;
    std::optional<std::pair<EdgeRef, EdgeRef>> witness; ///< (ancestor, descendant)
};

/// Survives iff no two edges of the same index q (q <= k) are tree-comparable
/// with no edge of index < q strictly between them. `rank`, when given,
/// replaces each index's position in the filter order (rank[index - 1]).
AlignmentVerdict alignment_filter(const Tree& tree, int k, std::span<const std::size_t> rank = {});

/// Maximal number of edges on a tree-order chain.
int tree_length(const Tree& tree);

/// Sum of tree values over all trees with 1..cap leaves (component = root index).
std::vector<Polynomial> tree_sum(const PolyMap& map, int cap, const EnumerationGuard& guard = {});

/// As tree_sum, restricted to trees surviving alignment_filter at level k
/// (k = 0: no restriction).
std::vector<Polynomial> restricted_sum(const PolyMap& map, int cap, int k, const EnumerationGuard& guard = {},
                                       std::span<const std::size_t> rank = {});

struct FactorizationReport {
    IdentityReport identity;            ///< tree_sum == restricted_sum at level n
    std::size_t total_trees = 0;
    std::size_t surviving_trees = 0;
    int max_survivor_length = 0;
    Integer length_bound;               ///< 2^n - 1
    bool length_bound_holds = true;
    std::map<int, int> max_degree_by_length; ///< over all trees: length L -> largest N
    bool degree_per_length_holds = true;     ///< every N <= d^(L-1)
};

/// Requires a Keller map (NotKeller otherwise).
FactorizationReport factorization_check(const PolyMap& map, int cap, const EnumerationGuard& guard = {},
                                        std::span<const std::size_t> rank = {});

struct TreeStatistics {
    std::vector<std::size_t> count_by_order;            ///< [N-1] -> trees with N leaves
    std::map<int, std::size_t> length_histogram;        ///< over all trees up to the order
    std::vector<std::size_t> survivors_by_level;        ///< [k-1] -> trees surviving level k
};

/// Counts for orders 1..order; survivor counts for every k in levels.
TreeStatistics tree_statistics(const PolyMap& map, int order, std::span<const int> levels,
                               const EnumerationGuard& guard = {});

} // namespace keller
