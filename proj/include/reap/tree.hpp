#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace reap {

/// Thrown when an operation is asked for k-branching subtrees of a tree
/// whose branching factor is smaller than k.
struct EmptyDomain : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Complete i-ary tree of uniform depth h.  Leaves are indexed
/// lexicographically by their digit path, root-level digit most significant.
struct TreeShape {
    int branching = 2;  // digits per internal node
    int depth = 0;      // levels below the root

    TreeShape() = default;
    TreeShape(int branching_, int depth_);

    long long leaf_count() const;
    long long node_count_at(int level) const;  // branching^level

    bool operator==(const TreeShape&) const = default;
};

using LeafPath = std::vector<int>;

/// Positional encoding of a leaf path: sum digits[t] * branching^(depth-1-t).
long long leaf_index(const TreeShape& shape, const LeafPath& path);

/// Inverse of leaf_index.
LeafPath leaf_path(const TreeShape& shape, long long index);

/// k-branching subtree of a complete tree, encoded node-locally: every
/// retained internal node carries a k-subset of child digits (a bitmask).
/// Retained nodes at level l are stored in lexicographic order of their
/// partial path through the chosen digits, so level l holds k^l masks.
struct SubtreeCert {
    TreeShape shape;
    int k = 2;
    std::vector<std::vector<std::uint32_t>> level_choices;

    /// Child of subtree-node `node` (level l) reached through the r-th
    /// smallest chosen digit has index node*k + r at level l+1.
    void validate() const;  // throws std::invalid_argument on malformed certs
};

/// Host-tree leaf indices covered by the certificate, in increasing order.
/// Throws if the certificate is malformed.
std::vector<long long> subtree_leaves(const SubtreeCert& cert);

/// Number of k-branching subtrees of T(depth, branching):
/// f(0) = 1, f(d) = C(i,k) * f(d-1)^k.
long long count_subtrees(const TreeShape& shape, int k);

/// Streams every k-branching subtree exactly once, in a deterministic
/// odometer order over per-node combination ranks.  Single consumer.
class SubtreeEnumerator {
public:
    SubtreeEnumerator(TreeShape shape, int k);  // throws EmptyDomain if k > branching

    std::optional<SubtreeCert> next();

private:
    TreeShape shape_;
    int k_;
    long long combos_per_node_;       // C(branching, k)
    std::vector<int> level_of_slot_;  // flattened (level, node) slots
    std::vector<long long> odometer_;
    bool exhausted_ = false;

    SubtreeCert materialize() const;
};

/// Convenience wrapper; fn may return false to stop early.
template <typename Fn>
void for_each_subtree(const TreeShape& shape, int k, Fn&& fn) {
    SubtreeEnumerator en(shape, k);
    while (auto cert = en.next()) {
        if (!fn(*cert)) return;
    }
}

/// Finite i-branching tree with leaves at arbitrary depths: every internal
/// node has exactly `branching` children.  Used by the reduction oracle only.
struct GeneralTree {
    std::vector<GeneralTree> children;  // empty = leaf, else size == branching

    bool is_leaf() const { return children.empty(); }
    int leaf_count() const;
    int max_depth() const;

    /// Leaves in depth-first order as digit paths.
    std::vector<std::vector<int>> leaf_paths() const;
};

/// All isomorphism-distinct `branching`-ary trees with at most max_leaves
/// leaves (children unordered).  Intended for max_leaves <= 10.
std::vector<GeneralTree> enumerate_general_trees(int branching, int max_leaves);

// combination helpers shared by subtree and rectangle enumeration ---------

/// C(n, r) as long long; 0 when r < 0 or r > n.
long long binomial(int n, int r);

/// rank-th r-subset of {0..n-1} in lexicographic order, as a bitmask.
std::uint32_t combination_unrank(int n, int r, long long rank);

/// Digits of a bitmask in increasing order.
std::vector<int> mask_digits(std::uint32_t mask);

}  // namespace reap
