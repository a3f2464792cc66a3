#include "reap/tree.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <map>

namespace reap {

TreeShape::TreeShape(int branching_, int depth_) : branching(branching_), depth(depth_) {
    if (branching < 2) throw std::invalid_argument("tree branching must be >= 2");
    if (depth < 0) throw std::invalid_argument("tree depth must be >= 0");
    if (leaf_count() > (1LL << 40))
        throw std::invalid_argument("tree too large");
}

long long TreeShape::leaf_count() const {
    return node_count_at(depth);
}

long long TreeShape::node_count_at(int level) const {
    long long n = 1;
    for (int i = 0; i < level; ++i) n *= branching;
    return n;
}

long long leaf_index(const TreeShape& shape, const LeafPath& path) {
    if (static_cast<int>(path.size()) != shape.depth)
        throw std::invalid_argument("leaf path length does not match tree depth");
    long long idx = 0;
    for (int d : path) {
        if (d < 0 || d >= shape.branching)
            throw std::invalid_argument("leaf path digit out of range");
        idx = idx * shape.branching + d;
    }
    return idx;
}

LeafPath leaf_path(const TreeShape& shape, long long index) {
    if (index < 0 || index >= shape.leaf_count())
        throw std::invalid_argument("leaf index out of range");
    LeafPath path(shape.depth);
    for (int t = shape.depth - 1; t >= 0; --t) {
        path[t] = static_cast<int>(index % shape.branching);
        index /= shape.branching;
    }
    return path;
}

void SubtreeCert::validate() const {
    if (k < 1 || k > shape.branching)
        throw std::invalid_argument("certificate k out of range");
    if (static_cast<int>(level_choices.size()) != shape.depth)
        throw std::invalid_argument("certificate level count does not match depth");
    long long nodes = 1;
    for (int l = 0; l < shape.depth; ++l) {
        if (static_cast<long long>(level_choices[l].size()) != nodes)
            throw std::invalid_argument("certificate is missing a choice at a retained node");
        for (std::uint32_t mask : level_choices[l]) {
            if (std::popcount(mask) != k)
                throw std::invalid_argument("retained node must choose exactly k children");
            if (mask >> shape.branching)
                throw std::invalid_argument("chosen child digit out of range");
        }
        nodes *= k;
    }
}

std::vector<long long> subtree_leaves(const SubtreeCert& cert) {
    cert.validate();
    // walk level by level, tracking each retained node's host-leaf base index
    std::vector<long long> bases{0};
    long long span = cert.shape.leaf_count();
    for (int l = 0; l < cert.shape.depth; ++l) {
        span /= cert.shape.branching;
        std::vector<long long> next;
        next.reserve(bases.size() * cert.k);
        for (std::size_t n = 0; n < bases.size(); ++n) {
            for (int d : mask_digits(cert.level_choices[l][n]))
                next.push_back(bases[n] + span * d);
        }
        bases = std::move(next);
    }
    return bases;
}

long long count_subtrees(const TreeShape& shape, int k) {
    if (k < 2 || k > shape.branching) throw EmptyDomain("no k-branching subtree exists");
    long long f = 1;
    for (int d = 0; d < shape.depth; ++d) {
        long long next = binomial(shape.branching, k);
        for (int t = 0; t < k; ++t) next *= f;
        f = next;
    }
    return f;
}

SubtreeEnumerator::SubtreeEnumerator(TreeShape shape, int k) : shape_(shape), k_(k) {
    if (k < 2 || k > shape.branching) throw EmptyDomain("no k-branching subtree exists");
    combos_per_node_ = binomial(shape.branching, k);
    long long nodes = 1;
    for (int l = 0; l < shape.depth; ++l) {
        for (long long n = 0; n < nodes; ++n) level_of_slot_.push_back(l);
        nodes *= k;
    }
    odometer_.assign(level_of_slot_.size(), 0);
}

SubtreeCert SubtreeEnumerator::materialize() const {
    SubtreeCert cert;
    cert.shape = shape_;
    cert.k = k_;
    cert.level_choices.resize(shape_.depth);
    std::size_t slot = 0;
    long long nodes = 1;
    for (int l = 0; l < shape_.depth; ++l) {
        cert.level_choices[l].reserve(nodes);
        for (long long n = 0; n < nodes; ++n, ++slot)
            cert.level_choices[l].push_back(
                combination_unrank(shape_.branching, k_, odometer_[slot]));
        nodes *= k_;
    }
    return cert;
}

std::optional<SubtreeCert> SubtreeEnumerator::next() {
    if (exhausted_) return std::nullopt;
    SubtreeCert cert = materialize();
    // advance odometer, least significant slot last
    int pos = static_cast<int>(odometer_.size()) - 1;
    while (pos >= 0) {
        if (++odometer_[pos] < combos_per_node_) break;
        odometer_[pos] = 0;
        --pos;
    }
    if (pos < 0) exhausted_ = true;
    return cert;
}

int GeneralTree::leaf_count() const {
    if (is_leaf()) return 1;
    int n = 0;
    for (const auto& c : children) n += c.leaf_count();
    return n;
}

int GeneralTree::max_depth() const {
    if (is_leaf()) return 0;
    int d = 0;
    for (const auto& c : children) d = std::max(d, c.max_depth());
    return d + 1;
}

std::vector<std::vector<int>> GeneralTree::leaf_paths() const {
    std::vector<std::vector<int>> out;
    std::vector<int> prefix;
    std::function<void(const GeneralTree&)> walk = [&](const GeneralTree& t) {
        if (t.is_leaf()) {
            out.push_back(prefix);
            return;
        }
        for (std::size_t d = 0; d < t.children.size(); ++d) {
            prefix.push_back(static_cast<int>(d));
            walk(t.children[d]);
            prefix.pop_back();
        }
    };
    walk(*this);
    return out;
}

namespace {

// canonical string encoding used to dedupe isomorphic trees
std::string encode(const GeneralTree& t) {
    if (t.is_leaf()) return "L";
    std::vector<std::string> parts;
    for (const auto& c : t.children) parts.push_back(encode(c));
    std::sort(parts.begin(), parts.end());
    std::string s = "(";
    for (const auto& p : parts) s += p;
    s += ")";
    return s;
}

}  // namespace

std::vector<GeneralTree> enumerate_general_trees(int branching, int max_leaves) {
    if (branching < 2) throw std::invalid_argument("branching must be >= 2");
    if (max_leaves < 1 || max_leaves > 12)
        throw std::invalid_argument("general-tree enumeration capped at 12 leaves");

    // trees_with[n] = iso-distinct trees with exactly n leaves
    std::vector<std::vector<GeneralTree>> trees_with(max_leaves + 1);
    if (max_leaves >= 1) trees_with[1] = {GeneralTree{}};
    for (int n = 2; n <= max_leaves; ++n) {
        std::map<std::string, GeneralTree> found;
        // nondecreasing compositions of n into `branching` positive parts
        std::vector<int> comp;
        std::function<void(int, int)> parts = [&](int rem, int minv) {
            int slots = branching - static_cast<int>(comp.size());
            if (slots == 1) {
                if (rem < minv) return;
                comp.push_back(rem);
                // assemble children multisets: for runs of equal leaf counts,
                // choose subtree indices nondecreasing to avoid iso repeats
                std::vector<GeneralTree> kids(branching);
                std::function<void(int)> fill = [&](int pos) {
                    if (pos == branching) {
                        GeneralTree t;
                        t.children = kids;
                        found.emplace(encode(t), t);
                        return;
                    }
                    const auto& pool = trees_with[comp[pos]];
                    for (std::size_t c = 0; c < pool.size(); ++c) {
                        kids[pos] = pool[c];
                        fill(pos + 1);
                    }
                };
                fill(0);
                comp.pop_back();
                return;
            }
            for (int first = minv; first * slots <= rem; ++first) {
                comp.push_back(first);
                parts(rem - first, first);
                comp.pop_back();
            }
        };
        parts(n, 1);
        for (auto& [key, t] : found) trees_with[n].push_back(t);
    }

    std::vector<GeneralTree> all;
    for (int n = 1; n <= max_leaves; ++n)
        for (auto& t : trees_with[n]) all.push_back(t);
    return all;
}

long long binomial(int n, int r) {
    if (r < 0 || r > n) return 0;
    r = std::min(r, n - r);
    long long b = 1;
    for (int t = 1; t <= r; ++t) b = b * (n - r + t) / t;
    return b;
}

std::uint32_t combination_unrank(int n, int r, long long rank) {
    std::uint32_t mask = 0;
    int next = 0;
    for (int slot = r; slot > 0; --slot) {
        for (int v = next; v < n; ++v) {
            long long with_v = binomial(n - v - 1, slot - 1);
            if (rank < with_v) {
                mask |= (1u << v);
                next = v + 1;
                break;
            }
            rank -= with_v;
        }
    }
    return mask;
}

std::vector<int> mask_digits(std::uint32_t mask) {
    std::vector<int> out;
    for (int v = 0; mask; ++v, mask >>= 1)
        if (mask & 1) out.push_back(v);
    return out;
}

}  // namespace reap
