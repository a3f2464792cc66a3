#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "reap/polarized.hpp"
#include "reap/property.hpp"

namespace reap {

/// Index pair: n-partitions required to meet every family member in >= m
/// pieces.  Table cells keep n >= m >= 2; general queries allow any n,m >= 2.
struct Pair {
    int n = 2, m = 2;

    auto operator<=>(const Pair&) const = default;
    std::string str() const;  // "(n,m)"
};

enum class Relation { LE, NLE };

enum class Provenance { Lemma, Arithmetic, SearchCert, Axiom, Derived };

/// One order statement: LE means r_lhs <= r_rhs in every Boolean algebra,
/// NLE means some algebra separates them.
struct Fact {
    Relation rel = Relation::LE;
    Pair lhs, rhs;
    Provenance prov = Provenance::Lemma;
    std::string rule;      // schema that produced it, e.g. "coarsen"
    std::string citation;  // human-readable justification
    std::string certificate;  // content id of the backing witness, if any

    Fact() = default;
    Fact(Relation r, Pair l, Pair h, Provenance p, std::string ru, std::string ci,
         std::string ce = {})
        : rel(r), lhs(l), rhs(h), prov(p), rule(std::move(ru)), citation(std::move(ci)),
          certificate(std::move(ce)) {}
};

struct TableCell {
    int i = 0, j = 0;
    std::optional<int> proved;  // r(i,j) = r(proved, 2)
    int conjectured = 0;        // ceil(i / (j-1)), attached when not proved
    bool depends_on_laflamme = false;
    bool published_open = false;  // kept open in the source table
    std::string note;             // e.g. a derivation that exists anyway
};

struct InconsistentOrder : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct QueryAnswer {
    enum class Kind { LE, NLE, Open } kind;
    std::vector<std::string> trace;
};

struct SearchRecord {
    PropertyQuery query;
    int max_depth = 0;
    long long budget = 0;
    long long nodes = 0;
    std::string outcome;  // "found" | "none_found" | "unknown"
    std::string certificate;
};

struct OpenProblemReport {
    std::string name;
    std::string instance;     // bridging property instance, empty if none
    std::string orientation;  // which direction of the order it would settle
    std::string status;
    long long nodes = 0;
};

/// Fact store and derivation engine for the order on reaping-number index
/// pairs.  Facts are append-only; certificates are content-addressed.
class KnowledgeBase {
public:
    struct Options {
        int max_n = 12;            // universe: pairs with 2 <= m <= n <= max_n
        bool laflamme_axiom = true;
        bool stated_equalities = true;  // the r(3,2) = r(9,5) = r(12,5) axiom
        DecideOptions decide;      // used when a query must run the engine
    };

    KnowledgeBase() : KnowledgeBase(Options{}) {}
    explicit KnowledgeBase(Options opts);

    /// Rule schemata instantiated over the pair universe, the toggleable
    /// axioms, and the depth-1 arithmetic criterion for every (a,b) vs (c,2).
    void seed_facts();

    const std::vector<Fact>& facts() const { return facts_; }
    const Options& options() const { return opts_; }

    std::string add_certificate(const Coloring& col);
    std::string add_certificate(const PolMatrix& mat);
    std::optional<Coloring> coloring_certificate(const std::string& id) const;

    /// Verified entry point for witness-backed facts: the colouring must
    /// defeat the bridging instance or the fact is rejected (returns false).
    bool add_search_fact(const Pair& lhs, const Pair& rhs, const Coloring& witness,
                         const std::string& citation);

    /// Theorem-bridge: turn a verdict on P(lhs.n, rhs.n, lhs.m, rhs.m-1)
    /// into an order fact.  Unknown verdicts and vacuous failures are no-ops.
    /// Throws std::invalid_argument when the query does not match the pairs.
    bool bridge(const Pair& lhs, const Pair& rhs, const PropertyQuery& query,
                const Verdict& verdict);

    /// Transitive closure of LE with contrapositive NLE propagation.
    /// Throws InconsistentOrder when LE and NLE meet on the same pair.
    void close();

    bool known_le(const Pair& a, const Pair& b) const;
    bool known_nle(const Pair& a, const Pair& b) const;
    std::vector<std::string> explain_le(const Pair& a, const Pair& b) const;
    std::vector<std::string> explain_nle(const Pair& a, const Pair& b) const;

    /// Closed-KB lookup; when silent, runs the decision pipeline on the
    /// bridging instance with the configured budgets and bridges the result.
    QueryAnswer query(const Pair& lhs, const Pair& rhs);

    std::vector<TableCell> table(int max_n);

    /// Mutually-LE classes over table pairs (2 <= m <= n <= max_n),
    /// sorted by their smallest member.
    std::vector<std::vector<Pair>> equivalence_classes(int max_n);

    /// DOT digraph: one node per class, edges toward the smaller class, so
    /// the class of (2,2) is the sink.
    std::string hasse_dot(int max_n);

    std::vector<OpenProblemReport> open_problems();

    /// KB lookups offered to the decision pipeline.
    KnownFactSource fact_source();

    // persistence -------------------------------------------------------
    nlohmann::json to_json() const;

    struct LoadStats {
        int facts = 0, certificates = 0, rejected = 0;
        std::vector<std::string> warnings;
    };
    /// Merge facts/certificates/searches from a KB document; every
    /// witness-backed fact is re-verified and dropped with a warning if the
    /// stored certificate does not defeat its bridging instance.
    LoadStats merge_json(const nlohmann::json& doc);

    const std::vector<SearchRecord>& searches() const { return searches_; }

private:
    Options opts_;
    std::vector<Fact> facts_;
    // dedupe (rel, lhs, rhs, provenance, rule): the same edge may carry
    // several provenances, e.g. an axiom plus a re-checkable certificate
    std::set<std::tuple<int, Pair, Pair, int, std::string>> fact_keys_;
    std::map<std::string, nlohmann::json> certificates_;
    std::vector<SearchRecord> searches_;

    // closure state
    bool closed_ = false;
    std::vector<Pair> universe_;
    std::map<Pair, int> index_;
    std::vector<std::vector<signed char>> le_;       // reachability
    std::vector<std::vector<int>> le_via_;           // -2 base, -1 none, else k
    std::vector<std::vector<int>> le_base_fact_;     // fact index for base edges
    std::vector<std::vector<signed char>> nle_;
    std::vector<std::vector<std::array<Pair, 2>>> nle_from_;  // witness (a,c)
    std::vector<std::vector<int>> nle_base_fact_;

    void add_fact(Fact f);
    void require_closed() const;
    void ensure_pair(const Pair& p);
    int pair_index(const Pair& p) const;
    Verdict decide_bridging(const Pair& lhs, const Pair& rhs, int max_depth_cap,
                            long long budget_cap = 0);
    void record_search(const PropertyQuery& q, int max_depth, long long budget,
                       const SearchOutcome* so, const Verdict* v, const std::string& cert);
};

/// Bridging instance for an order query: LE(lhs, rhs) holds exactly when
/// P(lhs.n, rhs.n, lhs.m, rhs.m - 1) fails.
PropertyQuery bridging_instance(const Pair& lhs, const Pair& rhs);

int conjectured_value(int i, int j);  // ceil(i / (j-1))

}  // namespace reap
