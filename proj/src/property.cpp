#include "reap/property.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

namespace reap {

void Coloring::validate() const {
    if (colors < 1) throw std::invalid_argument("colouring needs at least one colour");
    if (colors > 31) throw std::invalid_argument("colour count above bitmask width (31)");
    if (static_cast<long long>(leaf_colors.size()) != shape.leaf_count())
        throw std::invalid_argument("leaf colour sequence length does not match tree");
    for (int c : leaf_colors)
        if (c < 0 || c >= colors) throw std::invalid_argument("leaf colour out of range");
}

Coloring constant_coloring(const TreeShape& shape, int colors, int value) {
    Coloring col;
    col.shape = shape;
    col.colors = colors;
    col.leaf_colors.assign(shape.leaf_count(), value);
    col.validate();
    return col;
}

void PropertyQuery::validate() const {
    if (i < 2 || j < 1 || k < 2 || m < 1)
        throw std::invalid_argument("property query needs i >= 2, j >= 1, k >= 2, m >= 1");
    if (j > 31) throw std::invalid_argument("colour count above bitmask width (31)");
}

std::string PropertyQuery::str() const {
    std::ostringstream os;
    os << "P(" << i << "," << j << "," << k << "," << m << ")";
    return os.str();
}

// ---- colour-set families ---------------------------------------------------

void prune_family(ColorSetFamily& fam) {
    std::sort(fam.begin(), fam.end(), [](std::uint32_t a, std::uint32_t b) {
        int pa = std::popcount(a), pb = std::popcount(b);
        return pa != pb ? pa < pb : a < b;
    });
    fam.erase(std::unique(fam.begin(), fam.end()), fam.end());
    ColorSetFamily kept;
    for (std::uint32_t s : fam) {
        bool dominated = false;
        for (std::uint32_t t : kept) {
            if ((s & t) == t) {  // t subseteq s; t has fewer or equal bits
                dominated = true;
                break;
            }
        }
        if (!dominated) kept.push_back(s);
    }
    fam = std::move(kept);
}

ColorSetFamily merge_families(const ColorSetFamily& a, const ColorSetFamily& b, int cap) {
    ColorSetFamily out;
    out.reserve(a.size() * b.size());
    for (std::uint32_t s : a)
        for (std::uint32_t t : b) {
            std::uint32_t u = s | t;
            if (std::popcount(u) <= cap) out.push_back(u);
        }
    prune_family(out);
    return out;
}

namespace {

// family of minimal <=cap colour sets realizable by k-branching subtrees
// rooted at each node; families[level][node], level 0 = root
std::vector<std::vector<ColorSetFamily>> all_families(const Coloring& col, int k, int cap) {
    const int i = col.shape.branching, h = col.shape.depth;
    std::vector<std::vector<ColorSetFamily>> fam(h + 1);
    fam[h].resize(col.shape.leaf_count());
    for (long long t = 0; t < col.shape.leaf_count(); ++t)
        fam[h][t] = {1u << col.leaf_colors[t]};
    for (int l = h - 1; l >= 0; --l) {
        long long nodes = col.shape.node_count_at(l);
        fam[l].resize(nodes);
        long long subset_count = binomial(i, k);
        for (long long n = 0; n < nodes; ++n) {
            ColorSetFamily acc;
            for (long long r = 0; r < subset_count; ++r) {
                std::uint32_t S = combination_unrank(i, k, r);
                ColorSetFamily cur = {0u};
                for (int d : mask_digits(S)) {
                    cur = merge_families(cur, fam[l + 1][n * i + d], cap);
                    if (cur.empty()) break;
                }
                acc.insert(acc.end(), cur.begin(), cur.end());
            }
            prune_family(acc);
            fam[l][n] = std::move(acc);
        }
    }
    return fam;
}

void check_k(const Coloring& col, int k) {
    if (k > col.shape.branching) throw EmptyDomain("no k-branching subtree exists");
    if (k < 2) throw std::invalid_argument("subtree branching k must be >= 2");
}

}  // namespace

std::optional<int> min_colors(const Coloring& coloring, int k, int cap) {
    coloring.validate();
    check_k(coloring, k);
    if (cap < 1) throw std::invalid_argument("cap must be >= 1");
    auto fam = all_families(coloring, k, std::min(cap, coloring.colors));
    const ColorSetFamily& root = fam[0][0];
    if (root.empty()) return std::nullopt;
    return std::popcount(root.front());
}

bool defeats(const Coloring& coloring, int k, int m) {
    return !min_colors(coloring, k, m).has_value();
}

std::optional<SubtreeCert> witness_subtree(const Coloring& coloring, int k, int cap) {
    coloring.validate();
    check_k(coloring, k);
    auto fam = all_families(coloring, k, std::min(cap, coloring.colors));
    if (fam[0][0].empty()) return std::nullopt;

    SubtreeCert cert;
    cert.shape = coloring.shape;
    cert.k = k;
    cert.level_choices.resize(coloring.shape.depth);

    // level-order fill: (host node, target colour set) per retained node
    std::vector<std::pair<long long, std::uint32_t>> row{{0, fam[0][0].front()}};
    const int i = coloring.shape.branching;
    for (int l = 0; l < coloring.shape.depth; ++l) {
        std::vector<std::pair<long long, std::uint32_t>> next;
        for (auto [node, target] : row) {
            std::uint32_t chosen = 0;
            int taken = 0;
            for (int d = 0; d < i && taken < k; ++d) {
                const ColorSetFamily& cf = fam[l + 1][node * i + d];
                auto fits = std::find_if(cf.begin(), cf.end(), [&](std::uint32_t s) {
                    return (s & ~target) == 0;
                });
                if (fits == cf.end()) continue;
                chosen |= (1u << d);
                ++taken;
                next.emplace_back(node * i + d, *fits);
            }
            if (taken < k) throw std::logic_error("family invariant violated in witness extraction");
            cert.level_choices[l].push_back(chosen);
        }
        row = std::move(next);
    }
    return cert;
}

Coloring lift(const Coloring& coloring) {
    coloring.validate();
    Coloring out;
    out.shape = TreeShape(coloring.shape.branching, coloring.shape.depth + 1);
    out.colors = coloring.colors;
    out.leaf_colors.resize(out.shape.leaf_count());
    for (long long t = 0; t < out.shape.leaf_count(); ++t)
        out.leaf_colors[t] = coloring.leaf_colors[t / coloring.shape.branching];
    return out;
}

// ---- counterexample search -------------------------------------------------

namespace {

// Shared DFS state for one worker.  Leaves are assigned in index order; the
// family F[l][n] of a node is valid whenever its whole leaf block has been
// assigned under the current prefix.
struct Searcher {
    int i, j, k, m, h;
    long long leaves;
    std::vector<long long> block;  // block[l] = leaves under a level-l node
    std::vector<int> colors;
    std::vector<std::vector<ColorSetFamily>> fam;
    const std::function<bool(const Coloring&)>* sink = nullptr;

    std::atomic<long long>* shared_nodes = nullptr;
    const std::atomic<bool>* stop_flag = nullptr;
    long long node_budget = 0;
    long long local_nodes = 0;
    bool out_of_budget = false;
    bool found_any = false;
    std::optional<Coloring> first_witness;

    Searcher(const PropertyQuery& q, int depth) {
        i = q.i;
        j = q.j;
        k = q.k;
        m = q.m;
        h = depth;
        TreeShape shape(i, depth);
        leaves = shape.leaf_count();
        block.resize(h + 1);
        block[h] = 1;
        for (int l = h - 1; l >= 0; --l) block[l] = block[l + 1] * i;
        colors.assign(leaves, -1);
        fam.resize(h + 1);
        for (int l = 0; l <= h; ++l) fam[l].resize(shape.node_count_at(l));
    }

    bool charge_node() {
        ++local_nodes;
        if ((local_nodes & 1023) == 0 && stop_flag && stop_flag->load(std::memory_order_relaxed))
            return false;
        long long used = local_nodes + (shared_nodes ? shared_nodes->load(std::memory_order_relaxed) : 0);
        if (used > node_budget) {
            out_of_budget = true;
            return false;
        }
        return true;
    }

    // true iff some fully-assigned k-branching subtree whose last leaf is p
    // carries at most m colours (the branch is then dead)
    bool completed_bad_subtree(long long p) {
        ColorSetFamily g = {1u << colors[p]};
        for (int l = h - 1; l >= 0; --l) {
            int d = static_cast<int>((p / block[l + 1]) % i);
            if (d < k - 1) return false;  // too few completed siblings at this level
            long long child_base = (p / block[l]) * i;
            ColorSetFamily up;
            // chosen digits: d plus k-1 of the completed siblings {0..d-1}
            for (long long r = 0; r < binomial(d, k - 1); ++r) {
                std::uint32_t sibs = combination_unrank(d, k - 1, r);
                ColorSetFamily cur = g;
                for (int s : mask_digits(sibs)) {
                    cur = merge_families(cur, fam[l + 1][child_base + s], m);
                    if (cur.empty()) break;
                }
                up.insert(up.end(), cur.begin(), cur.end());
            }
            prune_family(up);
            if (up.empty()) return false;
            g = std::move(up);
        }
        return true;
    }

    // recompute families of every node whose block ends at p
    void complete_blocks(long long p) {
        fam[h][p] = {1u << colors[p]};
        for (int l = h - 1; l >= 0; --l) {
            long long v = p / block[l];
            if ((v + 1) * block[l] - 1 != p) break;
            ColorSetFamily acc;
            for (long long r = 0; r < binomial(i, k); ++r) {
                std::uint32_t S = combination_unrank(i, k, r);
                ColorSetFamily cur = {0u};
                for (int d : mask_digits(S)) {
                    cur = merge_families(cur, fam[l + 1][v * i + d], m);
                    if (cur.empty()) break;
                }
                acc.insert(acc.end(), cur.begin(), cur.end());
            }
            prune_family(acc);
            fam[l][v] = std::move(acc);
        }
    }

    Coloring snapshot() const {
        Coloring col;
        col.shape = TreeShape(i, h);
        col.colors = j;
        col.leaf_colors = colors;
        return col;
    }

    // returns false to unwind (stop requested or budget hit)
    bool dfs(long long p, int max_used) {
        if (p == leaves) {
            found_any = true;
            if (!first_witness) first_witness = snapshot();
            return (*sink)(snapshot());
        }
        int limit = std::min(j - 1, max_used + 1);
        for (int c = 0; c <= limit; ++c) {
            if (!charge_node()) return false;
            colors[p] = c;
            if (completed_bad_subtree(p)) continue;
            complete_blocks(p);
            if (!dfs(p + 1, std::max(max_used, c))) return false;
        }
        return true;
    }

    // replay a fixed prefix, then search the rest; prefix is assumed viable
    bool run(const std::vector<int>& prefix) {
        int max_used = -1;
        for (std::size_t p = 0; p < prefix.size(); ++p) {
            colors[p] = prefix[p];
            complete_blocks(p);
            max_used = std::max(max_used, prefix[p]);
        }
        return dfs(static_cast<long long>(prefix.size()), max_used);
    }
};

// canonical colour prefixes of the first `len` leaves that survive the
// completed-subtree prune, paired with nothing else (workers replay them)
std::vector<std::vector<int>> viable_prefixes(const PropertyQuery& q, int depth, int len) {
    Searcher s(q, depth);
    s.node_budget = std::numeric_limits<long long>::max();
    std::vector<std::vector<int>> out;
    std::function<void(long long, int)> walk = [&](long long p, int max_used) {
        if (p == len) {
            out.emplace_back(s.colors.begin(), s.colors.begin() + len);
            return;
        }
        int limit = std::min(q.j - 1, max_used + 1);
        for (int c = 0; c <= limit; ++c) {
            s.colors[p] = c;
            if (s.completed_bad_subtree(p)) continue;
            s.complete_blocks(p);
            walk(p + 1, std::max(max_used, c));
        }
    };
    walk(0, -1);
    return out;
}

}  // namespace

SearchOutcome enumerate_counterexamples(const PropertyQuery& query, int depth,
                                        const SearchLimits& limits,
                                        const std::function<bool(const Coloring&)>& sink) {
    query.validate();
    if (query.k > query.i) throw EmptyDomain("no k-branching subtree exists");
    if (depth < 1) throw std::invalid_argument("search depth must be >= 1");

    Searcher s(query, depth);
    s.node_budget = limits.node_budget;
    s.sink = &sink;
    s.run({});

    SearchOutcome out;
    out.stats.nodes = s.local_nodes;
    if (s.found_any) {
        out.kind = SearchOutcome::Kind::Found;
        out.witness = s.first_witness;
    } else if (s.out_of_budget) {
        out.kind = SearchOutcome::Kind::BudgetExhausted;
    } else {
        out.kind = SearchOutcome::Kind::NoneFound;
    }
    return out;
}

SearchOutcome search_counterexample(const PropertyQuery& query, int depth,
                                    const SearchLimits& limits) {
    if (limits.parallelism <= 1) {
        return enumerate_counterexamples(query, depth, limits,
                                         [](const Coloring&) { return false; });
    }

    query.validate();
    if (query.k > query.i) throw EmptyDomain("no k-branching subtree exists");

    // shard the DFS over disjoint canonical prefixes
    long long leaves = TreeShape(query.i, depth).leaf_count();
    int len = 1;
    std::vector<std::vector<int>> shards;
    while (true) {
        shards = viable_prefixes(query, depth, len);
        if (len >= leaves || static_cast<long long>(shards.size()) >= 4LL * limits.parallelism ||
            shards.empty())
            break;
        ++len;
    }
    if (static_cast<long long>(len) >= leaves) {
        // tiny instance; prefixes are already full assignments
        for (const auto& full : shards) {
            Coloring col;
            col.shape = TreeShape(query.i, depth);
            col.colors = query.j;
            col.leaf_colors = full;
            if (defeats(col, query.k, query.m)) {
                SearchOutcome out;
                out.kind = SearchOutcome::Kind::Found;
                out.witness = col;
                return out;
            }
        }
        SearchOutcome out;
        out.kind = SearchOutcome::Kind::NoneFound;
        return out;
    }

    std::atomic<long long> shared_nodes{0};
    std::atomic<bool> stop{false};
    std::atomic<std::size_t> next_shard{0};
    std::atomic<bool> budget_hit{false};
    std::mutex result_mu;
    std::optional<Coloring> witness;

    auto worker = [&]() {
        while (!stop.load()) {
            std::size_t idx = next_shard.fetch_add(1);
            if (idx >= shards.size()) return;
            Searcher s(query, depth);
            s.node_budget = limits.node_budget;
            s.shared_nodes = &shared_nodes;
            s.stop_flag = &stop;
            std::function<bool(const Coloring&)> stop_sink = [](const Coloring&) { return false; };
            s.sink = &stop_sink;
            s.run(shards[idx]);
            shared_nodes.fetch_add(s.local_nodes);
            if (s.found_any) {
                std::lock_guard<std::mutex> lock(result_mu);
                if (!witness) witness = s.first_witness;
                stop.store(true);
            } else if (s.out_of_budget) {
                budget_hit.store(true);
                stop.store(true);
            }
        }
    };

    std::vector<std::thread> pool;
    for (int t = 0; t < limits.parallelism; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    SearchOutcome out;
    out.stats.nodes = shared_nodes.load();
    if (witness) {
        if (!defeats(*witness, query.k, query.m))
            throw std::logic_error("parallel search produced a non-defeating witness");
        out.kind = SearchOutcome::Kind::Found;
        out.witness = witness;
    } else if (budget_hit.load()) {
        out.kind = SearchOutcome::Kind::BudgetExhausted;
    } else {
        out.kind = SearchOutcome::Kind::NoneFound;
    }
    return out;
}

// ---- verdicts and the decision pipeline ------------------------------------

Verdict Verdict::fails(int depth, Coloring witness) {
    Verdict v;
    v.kind = Kind::Fails;
    v.depth = depth;
    v.witness = std::move(witness);
    return v;
}

Verdict Verdict::fails_vacuous(int depth) {
    Verdict v;
    v.kind = Kind::Fails;
    v.depth = depth;
    v.vacuous = true;
    return v;
}

Verdict Verdict::holds(HoldsReason reason, std::string citation) {
    Verdict v;
    v.kind = Kind::Holds;
    v.reason = reason;
    v.citation = std::move(citation);
    return v;
}

Verdict Verdict::unknown(int max_depth, long long nodes) {
    Verdict v;
    v.kind = Kind::Unknown;
    v.max_depth_searched = max_depth;
    v.nodes_explored = nodes;
    return v;
}

Verdict decide(const PropertyQuery& query, const DecideOptions& opts) {
    query.validate();
    std::vector<std::string> trace;

    if (query.j <= query.m && query.k <= query.i) {
        auto v = Verdict::holds(Verdict::HoldsReason::TrivialColors,
                                "any subtree uses at most j <= m colours");
        trace.push_back("holds trivially: j <= m and a k-branching subtree exists");
        v.trace = std::move(trace);
        return v;
    }

    if (query.k > query.i) {
        // no k-branching subtree has its maximal elements among the leaves
        auto v = Verdict::fails_vacuous(1);
        v.witness = constant_coloring(TreeShape(query.i, 1), query.j);
        trace.push_back("fails vacuously: k > i leaves the subtree quantifier empty");
        v.trace = std::move(trace);
        return v;
    }

    if (query.m == 1) {
        if (query.i <= query.j * (query.k - 1)) {
            Coloring w;
            w.shape = TreeShape(query.i, 1);
            w.colors = query.j;
            w.leaf_colors.resize(query.i);
            for (int t = 0; t < query.i; ++t) w.leaf_colors[t] = t / (query.k - 1);
            auto v = Verdict::fails(1, std::move(w));
            trace.push_back("fails by arithmetic: i <= j(k-1), each colour used < k times");
            v.trace = std::move(trace);
            return v;
        }
        auto v = Verdict::holds(Verdict::HoldsReason::PigeonholeArithmetic,
                                "i >= j(k-1)+1 forces a monochromatic subtree at every depth");
        trace.push_back("holds by pigeonhole arithmetic: i >= j(k-1)+1");
        v.trace = std::move(trace);
        return v;
    }

    if (opts.facts) {
        if (opts.facts->find_witness) {
            if (auto stored = opts.facts->find_witness(query)) {
                if (stored->shape.branching == query.i && stored->colors == query.j &&
                    defeats(*stored, query.k, query.m)) {
                    auto v = Verdict::fails(stored->shape.depth, *stored);
                    trace.push_back("fails by stored certificate (re-verified)");
                    v.trace = std::move(trace);
                    return v;
                }
                trace.push_back("stored certificate rejected on re-verification");
            }
        }
        if (opts.facts->known_holds) {
            if (auto cite = opts.facts->known_holds(query)) {
                auto v = Verdict::holds(Verdict::HoldsReason::Axiom, *cite);
                trace.push_back("holds by knowledge-base axiom");
                v.trace = std::move(trace);
                return v;
            }
        }
    }

    long long nodes = 0;
    for (int d = 1; d <= opts.max_depth; ++d) {
        SearchLimits lim = opts.limits;
        lim.node_budget = opts.limits.node_budget - nodes;
        if (lim.node_budget <= 0) break;
        SearchOutcome so = search_counterexample(query, d, lim);
        nodes += so.stats.nodes;
        if (so.kind == SearchOutcome::Kind::Found) {
            auto v = Verdict::fails(d, *so.witness);
            v.nodes_explored = nodes;
            trace.push_back("fails by exhaustive search at depth " + std::to_string(d));
            v.trace = std::move(trace);
            return v;
        }
        if (so.kind == SearchOutcome::Kind::BudgetExhausted) {
            auto v = Verdict::unknown(d, nodes);
            trace.push_back("node budget exhausted at depth " + std::to_string(d));
            v.trace = std::move(trace);
            return v;
        }
        trace.push_back("no counterexample at depth " + std::to_string(d));
    }
    auto v = Verdict::unknown(opts.max_depth, nodes);
    trace.push_back("searched all depths up to the configured maximum");
    v.trace = std::move(trace);
    return v;
}

MonochromaticSubtree find_monochromatic_subtree(const Coloring& coloring, int k) {
    coloring.validate();
    check_k(coloring, k);
    if (coloring.shape.branching < coloring.colors * (k - 1) + 1)
        throw std::invalid_argument(
            "unsupported: requires branching >= colours*(k-1)+1 for the pigeonhole step");

    const int i = coloring.shape.branching;
    using Levels = std::vector<std::vector<std::uint32_t>>;

    // returns (colour, per-level choice rows of the subtree under `node`)
    std::function<std::pair<int, Levels>(int, long long)> solve =
        [&](int level, long long node) -> std::pair<int, Levels> {
        if (level == coloring.shape.depth)
            return {coloring.leaf_colors[node], {}};
        std::vector<std::pair<int, Levels>> sub(i);
        std::vector<int> count(coloring.colors, 0);
        for (int d = 0; d < i; ++d) {
            sub[d] = solve(level + 1, node * i + d);
            ++count[sub[d].first];
        }
        int chosen_color = -1;
        for (int c = 0; c < coloring.colors; ++c)
            if (count[c] >= k) {
                chosen_color = c;
                break;
            }
        if (chosen_color < 0) throw std::logic_error("pigeonhole bound violated");
        std::uint32_t mask = 0;
        std::vector<int> picks;
        for (int d = 0; d < i && static_cast<int>(picks.size()) < k; ++d)
            if (sub[d].first == chosen_color) {
                picks.push_back(d);
                mask |= (1u << d);
            }
        Levels rows(coloring.shape.depth - level);
        rows[0].push_back(mask);
        for (int d : picks) {
            const Levels& child = sub[d].second;
            for (std::size_t l = 0; l < child.size(); ++l)
                rows[l + 1].insert(rows[l + 1].end(), child[l].begin(), child[l].end());
        }
        return {chosen_color, rows};
    };

    auto [color, rows] = solve(0, 0);
    MonochromaticSubtree out;
    out.color = color;
    out.cert.shape = coloring.shape;
    out.cert.k = k;
    out.cert.level_choices = std::move(rows);
    out.cert.validate();
    return out;
}

namespace {

// minimal <=cap colour sets of k-branching subtrees of a general tree
ColorSetFamily general_family(const GeneralTree& t, const std::vector<int>& leaf_colors,
                              int k, int cap, int& leaf_cursor) {
    if (t.is_leaf()) return {1u << leaf_colors[leaf_cursor++]};
    std::vector<ColorSetFamily> kids;
    kids.reserve(t.children.size());
    for (const auto& c : t.children)
        kids.push_back(general_family(c, leaf_colors, k, cap, leaf_cursor));
    int n = static_cast<int>(kids.size());
    ColorSetFamily acc;
    for (long long r = 0; r < binomial(n, k); ++r) {
        std::uint32_t S = combination_unrank(n, k, r);
        ColorSetFamily cur = {0u};
        for (int d : mask_digits(S)) {
            cur = merge_families(cur, kids[d], cap);
            if (cur.empty()) break;
        }
        acc.insert(acc.end(), cur.begin(), cur.end());
    }
    prune_family(acc);
    return acc;
}

// pad a general-tree colouring to the complete tree of its max depth,
// colouring each new leaf by its nearest coloured ancestor
Coloring pad_to_complete(const GeneralTree& t, const std::vector<int>& leaf_colors, int i,
                         int j) {
    int depth = t.max_depth();
    Coloring out;
    out.shape = TreeShape(i, std::max(depth, 1));
    out.colors = j;
    out.leaf_colors.resize(out.shape.leaf_count());
    for (long long idx = 0; idx < out.shape.leaf_count(); ++idx) {
        LeafPath path = leaf_path(out.shape, idx);
        // walk digits until a leaf of the general tree is reached
        std::function<int(const GeneralTree&, int, int)> locate =
            [&](const GeneralTree& node, int pos, int base) -> int {
            if (node.is_leaf()) return base;
            int d = pos < depth ? path[pos] : 0;
            int skip = 0;
            for (int c = 0; c < d; ++c) skip += node.children[c].leaf_count();
            return locate(node.children[d], pos + 1, base + skip);
        };
        out.leaf_colors[idx] = leaf_colors[locate(t, 0, 0)];
    }
    return out;
}

}  // namespace

Verdict decide_general(const PropertyQuery& query, int max_leaves) {
    query.validate();
    if (query.i > 3 || max_leaves > 10)
        throw std::invalid_argument("general-tree oracle is restricted to i <= 3, <= 10 leaves");

    std::vector<std::string> trace;
    if (query.j <= query.m && query.k <= query.i) {
        auto v = Verdict::holds(Verdict::HoldsReason::TrivialColors,
                                "any subtree uses at most j <= m colours");
        v.trace = {"holds trivially: j <= m"};
        return v;
    }
    if (query.k > query.i) {
        auto v = Verdict::fails_vacuous(1);
        v.witness = constant_coloring(TreeShape(query.i, 1), query.j);
        v.trace = {"fails vacuously: k > i"};
        return v;
    }

    long long checked = 0;
    for (const GeneralTree& t : enumerate_general_trees(query.i, max_leaves)) {
        int L = t.leaf_count();
        long long total = 1;
        for (int p = 0; p < L; ++p) {
            total *= query.j;
            if (total > 2'000'000) throw std::invalid_argument("general-tree oracle budget exceeded");
        }
        std::vector<int> leaf_colors(L, 0);
        for (long long code = 0; code < total; ++code) {
            long long c = code;
            for (int p = 0; p < L; ++p) {
                leaf_colors[p] = static_cast<int>(c % query.j);
                c /= query.j;
            }
            ++checked;
            int cursor = 0;
            if (t.is_leaf()) continue;  // single node: its only subtree is itself, 1 colour
            ColorSetFamily root = general_family(t, leaf_colors, query.k, query.m, cursor);
            if (root.empty()) {
                Coloring padded = pad_to_complete(t, leaf_colors, query.i, query.j);
                Verdict v;
                if (defeats(padded, query.k, query.m)) {
                    v = Verdict::fails(padded.shape.depth, padded);
                    v.trace = {"fails on a general tree; padded witness re-verified"};
                } else {
                    v.kind = Verdict::Kind::Fails;
                    v.depth = t.max_depth();
                    v.trace = {"fails on a general tree; padding did NOT re-verify"};
                }
                v.nodes_explored = checked;
                return v;
            }
        }
    }
    auto v = Verdict::holds(Verdict::HoldsReason::SmallTreeExhaustion,
                            "no counterexample among trees with <= " +
                                std::to_string(max_leaves) + " leaves");
    v.nodes_explored = checked;
    v.trace = {"exhausted all trees and colourings at toy scale"};
    return v;
}

}  // namespace reap
