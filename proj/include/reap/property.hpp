#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "reap/tree.hpp"

namespace reap {

/// Total colouring of the leaves of a complete tree by colours {0..colors-1}.
struct Coloring {
    TreeShape shape;
    int colors = 1;  // the query's j
    std::vector<int> leaf_colors;

    void validate() const;
    bool operator==(const Coloring&) const = default;
};

Coloring constant_coloring(const TreeShape& shape, int colors, int value = 0);

/// The quadruple deciding the tree-colouring property: i-ary hosts, j colours,
/// k-branching subtrees, at most m colours allowed on a subtree.
struct PropertyQuery {
    int i = 2, j = 1, k = 2, m = 1;

    void validate() const;
    bool operator==(const PropertyQuery&) const = default;
    std::string str() const;  // "P(i,j,k,m)"
};

// ---- colour-set families ---------------------------------------------------

/// Antichain of subset-minimal colour sets (bitmasks) of size <= cap that
/// k-branching subtrees rooted at a node can realize.  Empty means every
/// such subtree needs more than cap colours.
using ColorSetFamily = std::vector<std::uint32_t>;

/// Reduce to subset-minimal sets, sorted by (popcount, value).
void prune_family(ColorSetFamily& fam);

/// Cross-union two families, keeping sets of size <= cap, then prune.
ColorSetFamily merge_families(const ColorSetFamily& a, const ColorSetFamily& b, int cap);

/// Minimal achievable distinct-colour count over k-branching subtrees, or
/// nullopt when every subtree uses more than cap colours.
/// Throws EmptyDomain when k > branching.
std::optional<int> min_colors(const Coloring& coloring, int k, int cap);

/// True iff every k-branching subtree carries at least m+1 colours,
/// i.e. the colouring witnesses failure of the property at its depth.
bool defeats(const Coloring& coloring, int k, int m);

/// A k-branching subtree whose leaves use at most cap colours, when one
/// exists.  Deterministic: smallest realizable colour set, leftmost digits.
std::optional<SubtreeCert> witness_subtree(const Coloring& coloring, int k, int cap);

/// Depth-extension by ancestor colour: leaf (d0..dh) of the deeper tree gets
/// the colour of (d0..d(h-1)).  Preserves the defeating property.
Coloring lift(const Coloring& coloring);

// ---- counterexample search -------------------------------------------------

struct SearchStats {
    long long nodes = 0;  // leaf-colour assignments tried
};

struct SearchOutcome {
    enum class Kind { Found, NoneFound, BudgetExhausted } kind;
    std::optional<Coloring> witness;
    SearchStats stats;
};

struct SearchLimits {
    long long node_budget = 50'000'000;
    int parallelism = 1;
};

/// Exhaustive DFS over leaf colourings of T(depth, i) in leaf order, with
/// canonical-colour symmetry breaking (colour c may first appear only after
/// c-1) and dead-branch pruning on every completed k-branching subtree.
/// NoneFound is exhaustive modulo colour renaming.  With parallelism 1 the
/// result is deterministic; parallel witnesses are re-verified via defeats.
SearchOutcome search_counterexample(const PropertyQuery& query, int depth,
                                    const SearchLimits& limits = {});

/// Streaming variant: sink receives each defeating colouring found (in
/// canonical DFS order) and returns true to continue enumerating.
/// Always single-threaded.
SearchOutcome enumerate_counterexamples(const PropertyQuery& query, int depth,
                                        const SearchLimits& limits,
                                        const std::function<bool(const Coloring&)>& sink);

// ---- verdicts and the decision pipeline ------------------------------------

struct Verdict {
    enum class Kind { Fails, Holds, Unknown } kind = Kind::Unknown;
    enum class HoldsReason { TrivialColors, PigeonholeArithmetic, Axiom, SmallTreeExhaustion };

    // Fails
    int depth = 0;
    std::optional<Coloring> witness;
    bool vacuous = false;  // k > i: no k-branching subtree reaches the leaves

    // Holds
    HoldsReason reason = HoldsReason::TrivialColors;
    std::string citation;

    // Unknown
    int max_depth_searched = 0;

    long long nodes_explored = 0;
    std::vector<std::string> trace;  // pipeline steps taken, for audit

    static Verdict fails(int depth, Coloring witness);
    static Verdict fails_vacuous(int depth);
    static Verdict holds(HoldsReason reason, std::string citation = {});
    static Verdict unknown(int max_depth, long long nodes);
};

/// Hooks the decision pipeline uses to consult a knowledge base.  Both may
/// be null.  find_witness returns a stored colouring that defeats (k, m)
/// for the query; known_holds returns a citation when the property is known
/// to hold by an axiom-backed fact.
struct KnownFactSource {
    std::function<std::optional<Coloring>(const PropertyQuery&)> find_witness;
    std::function<std::optional<std::string>(const PropertyQuery&)> known_holds;
};

struct DecideOptions {
    int max_depth = 1;
    SearchLimits limits;
    const KnownFactSource* facts = nullptr;
};

/// Decision pipeline: trivial colours, vacuous k > i, the depth-1 arithmetic
/// criterion for m = 1 (fails iff i <= j(k-1)), knowledge-base lookup, then
/// iterative-deepening search.  Failure verdicts are final at any depth.
Verdict decide(const PropertyQuery& query, const DecideOptions& opts = {});

/// Monochromatic k-branching subtree by the pigeonhole induction; requires
/// i >= j(k-1) + 1.  Ties: smallest colour, then leftmost digits.
struct MonochromaticSubtree {
    SubtreeCert cert;
    int color = 0;
};
MonochromaticSubtree find_monochromatic_subtree(const Coloring& coloring, int k);

/// Brute force over all i-branching trees with at most max_leaves leaves and
/// all colourings; validates the complete-tree reduction at toy scale.
Verdict decide_general(const PropertyQuery& query, int max_leaves);

}  // namespace reap
