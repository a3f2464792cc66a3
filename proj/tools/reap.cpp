#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "reap/io.hpp"
#include "reap/kb.hpp"
#include "reap/polarized.hpp"
#include "reap/property.hpp"

using nlohmann::json;

namespace {

constexpr int kExitFound = 0;    // defeated / relation holds / witness found
constexpr int kExitNone = 1;     // holds / not defeated / none found
constexpr int kExitInput = 2;    // malformed input
constexpr int kExitUnknown = 3;  // undecided / budget exhausted

struct Config {
    std::string kb_path = "kb.json";
    std::string fixtures;
    long long node_budget = 5'000'000;
    int max_depth = 1;
    int parallelism = 1;
    unsigned long long seed = 0;  // reserved for randomized tooling
    bool laflamme = true;
    bool stated_equalities = true;
    std::string format = "text";
};

// the CLI holds the knowledge-base writer lock for the whole command
class KbLock {
public:
    explicit KbLock(const std::string& kb_path) {
        fd_ = ::open((kb_path + ".lock").c_str(), O_CREAT | O_RDWR, 0644);
        if (fd_ >= 0) ::flock(fd_, LOCK_EX);
    }
    ~KbLock() {
        if (fd_ >= 0) {
            ::flock(fd_, LOCK_UN);
            ::close(fd_);
        }
    }

private:
    int fd_ = -1;
};

reap::KnowledgeBase open_kb(const Config& cfg) {
    reap::KnowledgeBase::Options opts;
    opts.laflamme_axiom = cfg.laflamme;
    opts.stated_equalities = cfg.stated_equalities;
    opts.decide.max_depth = cfg.max_depth;
    opts.decide.limits.node_budget = cfg.node_budget;
    opts.decide.limits.parallelism = cfg.parallelism;
    reap::KnowledgeBase kb(opts);
    kb.seed_facts();
    if (std::filesystem::exists(cfg.kb_path)) {
        auto stats = kb.merge_json(reap::load_json_file(cfg.kb_path));
        for (const auto& w : stats.warnings) std::cerr << "kb: " << w << "\n";
    }
    if (!cfg.fixtures.empty()) {
        auto stats = kb.merge_json(reap::load_json_file(cfg.fixtures));
        for (const auto& w : stats.warnings) std::cerr << "fixtures: " << w << "\n";
    }
    return kb;
}

void save_kb(const Config& cfg, const reap::KnowledgeBase& kb) {
    reap::save_json_file(cfg.kb_path, kb.to_json());
}

void print_subtree(const reap::SubtreeCert& cert, const reap::Coloring& col) {
    auto leaves = reap::subtree_leaves(cert);
    std::cout << "  witness subtree (chosen child digits per level):\n";
    for (std::size_t l = 0; l < cert.level_choices.size(); ++l) {
        std::cout << "    level " << l << ":";
        for (std::uint32_t mask : cert.level_choices[l]) {
            std::cout << " {";
            bool first = true;
            for (int d : reap::mask_digits(mask)) {
                if (!first) std::cout << ",";
                std::cout << d;
                first = false;
            }
            std::cout << "}";
        }
        std::cout << "\n";
    }
    std::cout << "    leaves:";
    for (long long t : leaves) std::cout << " " << t << "(c" << col.leaf_colors[t] << ")";
    std::cout << "\n";
}

int cmd_verify(const std::string& file, int k, int m, const Config& cfg) {
    reap::Coloring col;
    try {
        col = reap::coloring_from_json(reap::load_json_file(file));
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    try {
        auto min = reap::min_colors(col, k, col.colors);
        bool defeated = !min || *min > m;
        if (cfg.format == "json") {
            json out{{"defeated", defeated},
                     {"min_colors", min ? json(*min) : json(nullptr)},
                     {"k", k},
                     {"m", m}};
            std::cout << out.dump(2) << "\n";
        } else {
            std::cout << "min colours over " << k << "-branching subtrees: "
                      << (min ? std::to_string(*min) : "> " + std::to_string(col.colors))
                      << "\n";
            std::cout << (defeated ? "defeated: every subtree shows more than " +
                                         std::to_string(m) + " colours\n"
                                   : "not defeated\n");
            if (!defeated) {
                auto w = reap::witness_subtree(col, k, m);
                if (w) print_subtree(*w, col);
            }
        }
        return defeated ? kExitFound : kExitNone;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
}

int cmd_decide(int i, int j, int k, int m, const Config& cfg) {
    reap::PropertyQuery q{i, j, k, m};
    try {
        q.validate();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    KbLock lock(cfg.kb_path);
    auto kb = open_kb(cfg);
    reap::DecideOptions opts = kb.options().decide;
    auto src = kb.fact_source();
    opts.facts = &src;
    reap::Verdict v = reap::decide(q, opts);
    if (j >= 2) {
        reap::Pair lhs{i, k}, rhs{j, m + 1};
        kb.bridge(lhs, rhs, q, v);
    }
    save_kb(cfg, kb);
    std::cout << reap::verdict_to_json(q, v).dump(2) << "\n";
    switch (v.kind) {
        case reap::Verdict::Kind::Fails: return kExitFound;
        case reap::Verdict::Kind::Holds: return kExitNone;
        case reap::Verdict::Kind::Unknown: return kExitUnknown;
    }
    return kExitUnknown;
}

int cmd_order_query(int n1, int m1, int n2, int m2, const Config& cfg) {
    KbLock lock(cfg.kb_path);
    auto kb = open_kb(cfg);
    reap::QueryAnswer ans;
    try {
        ans = kb.query({n1, m1}, {n2, m2});
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    save_kb(cfg, kb);
    const char* name = ans.kind == reap::QueryAnswer::Kind::LE    ? "LE"
                       : ans.kind == reap::QueryAnswer::Kind::NLE ? "NLE"
                                                                  : "Open";
    if (cfg.format == "json") {
        std::cout << json{{"lhs", {{"n", n1}, {"m", m1}}},
                          {"rhs", {{"n", n2}, {"m", m2}}},
                          {"relation", name},
                          {"trace", ans.trace}}
                         .dump(2)
                  << "\n";
    } else {
        std::cout << "r(" << n1 << "," << m1 << ") vs r(" << n2 << "," << m2 << "): " << name
                  << "\n";
        for (const auto& line : ans.trace) std::cout << "  " << line << "\n";
    }
    switch (ans.kind) {
        case reap::QueryAnswer::Kind::LE: return kExitFound;
        case reap::QueryAnswer::Kind::NLE: return kExitNone;
        case reap::QueryAnswer::Kind::Open: return kExitUnknown;
    }
    return kExitUnknown;
}

int cmd_order_table(int max_n, const Config& cfg) {
    KbLock lock(cfg.kb_path);
    auto kb = open_kb(cfg);
    std::vector<reap::TableCell> cells;
    try {
        cells = kb.table(max_n);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    if (cfg.format == "json") {
        json out = json::array();
        for (const auto& c : cells) {
            json jc{{"i", c.i},
                    {"j", c.j},
                    {"status", c.proved ? "proved" : "open"},
                    {"conjectured", c.conjectured},
                    {"depends_on_laflamme", c.depends_on_laflamme}};
            if (c.proved) jc["value"] = *c.proved;
            if (c.published_open) jc["published_open"] = true;
            if (!c.note.empty()) jc["note"] = c.note;
            out.push_back(std::move(jc));
        }
        std::cout << json{{"max_n", max_n}, {"cells", out}}.dump(2) << "\n";
    } else if (cfg.format == "csv") {
        std::cout << "i,j,status,value,conjectured,depends_on_laflamme\n";
        for (const auto& c : cells) {
            std::cout << c.i << "," << c.j << "," << (c.proved ? "proved" : "open") << ",";
            if (c.proved) std::cout << *c.proved;
            std::cout << "," << c.conjectured << "," << (c.depends_on_laflamme ? 1 : 0) << "\n";
        }
    } else {
        std::cout << "r(i,j) = r(n): rows i = 2.." << max_n << ", columns j = 2..i\n   ";
        for (int j = 2; j <= max_n; ++j) std::cout << " " << j;
        std::cout << "\n";
        std::size_t at = 0;
        for (int i = 2; i <= max_n; ++i) {
            std::cout << (i < 10 ? " " : "") << i << ":";
            for (int j = 2; j <= i; ++j, ++at)
                std::cout << " "
                          << (cells[at].proved ? std::to_string(*cells[at].proved) : "?");
            std::cout << "\n";
        }
        for (const auto& c : cells) {
            if (!c.proved)
                std::cout << "open cell (" << c.i << "," << c.j << "), conjectured "
                          << c.conjectured << "\n";
            else if (c.depends_on_laflamme)
                std::cout << "cell (" << c.i << "," << c.j << ") depends on the Laflamme axiom\n";
            if (!c.note.empty())
                std::cout << "cell (" << c.i << "," << c.j << ") note: " << c.note << "\n";
        }
    }
    return 0;
}

int cmd_order_hasse(int max_n, const Config& cfg) {
    KbLock lock(cfg.kb_path);
    auto kb = open_kb(cfg);
    try {
        std::cout << kb.hasse_dot(max_n);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return 0;
}

int cmd_polarized_check(std::optional<int> modular, const std::string& file, int i, int j, int q,
                        const Config& cfg) {
    try {
        reap::PolMatrix h;
        if (modular)
            h = reap::modular_witness(*modular);
        else
            h = reap::pol_matrix_from_json(reap::load_json_file(file));
        bool ok = reap::check_witness(h, {i, j, q});
        if (cfg.format == "json")
            std::cout << json{{"witness", ok}, {"i", i}, {"j", j}, {"q", q}}.dump(2) << "\n";
        else
            std::cout << (ok ? "witness: every " : "not a witness: some ") << i << "x" << j
                      << " rectangle " << (ok ? "takes more than " : "takes at most ") << q
                      << " values\n";
        return ok ? kExitFound : kExitNone;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
}

int cmd_polarized_search(int n, int m, int k, int i, int j, int q, const Config& cfg) {
    try {
        auto out = reap::search_witness(n, m, k, {i, j, q}, cfg.node_budget);
        if (out.kind == reap::PolSearchOutcome::Kind::Found) {
            std::cout << reap::pol_matrix_to_json(*out.witness).dump(2) << "\n";
            return kExitFound;
        }
        if (out.kind == reap::PolSearchOutcome::Kind::BudgetExhausted) {
            std::cerr << "budget exhausted after " << out.nodes << " assignments\n";
            return kExitUnknown;
        }
        std::cerr << "none found (exhaustive modulo colour renaming, " << out.nodes
                  << " assignments)\n";
        return kExitNone;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
}

int cmd_open_problems(const Config& cfg) {
    KbLock lock(cfg.kb_path);
    auto kb = open_kb(cfg);
    auto reports = kb.open_problems();
    save_kb(cfg, kb);
    if (cfg.format == "json") {
        json out = json::array();
        for (const auto& r : reports)
            out.push_back(json{{"name", r.name},
                               {"instance", r.instance},
                               {"orientation", r.orientation},
                               {"status", r.status},
                               {"nodes", r.nodes}});
        std::cout << out.dump(2) << "\n";
    } else {
        for (const auto& r : reports) {
            std::cout << r.name << "\n";
            if (!r.instance.empty())
                std::cout << "  instance " << r.instance << " (" << r.orientation << ")\n";
            std::cout << "  status: " << r.status;
            if (r.nodes) std::cout << " [" << r.nodes << " nodes]";
            std::cout << "\n";
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"decision engine and certificate manager for k-branching subtree colourings "
                 "and the induced order on reaping invariants"};
    app.require_subcommand(1);
    app.fallthrough();  // global options may follow the subcommand

    Config cfg;
    app.add_option("--kb", cfg.kb_path, "knowledge-base file (created on demand)");
    app.add_option("--fixtures", cfg.fixtures, "fixture knowledge base to merge (verified)");
    app.add_option("--budget", cfg.node_budget, "search budget in search-tree nodes");
    app.add_option("--max-depth", cfg.max_depth, "deepest tree level searched");
    app.add_option("--parallel", cfg.parallelism, "DFS worker count");
    app.add_option("--seed", cfg.seed, "seed for randomized tooling (reserved)");
    app.add_flag("--laflamme,!--no-laflamme", cfg.laflamme, "toggle the Laflamme axiom");
    app.add_flag("--stated-equalities,!--no-stated-equalities", cfg.stated_equalities,
                 "toggle the stated r(3,2) = r(9,5) = r(12,5) axiom");
    app.add_option("--format", cfg.format, "text | csv | json | dot")
        ->check(CLI::IsMember({"text", "csv", "json", "dot"}));

    // verify
    std::string coloring_file;
    int vk = 2, vm = 1;
    auto* verify = app.add_subcommand("verify", "check a colouring file against (k, m)");
    verify->add_option("file", coloring_file)->required();
    verify->add_option("--k", vk, "subtree branching")->required();
    verify->add_option("--m", vm, "colour cap")->required();

    // decide
    int di = 2, dj = 1, dk = 2, dm = 1;
    auto* decide = app.add_subcommand("decide", "decide the property for (i, j, k, m)");
    decide->add_option("i", di)->required();
    decide->add_option("j", dj)->required();
    decide->add_option("k", dk)->required();
    decide->add_option("m", dm)->required();

    // order
    auto* order = app.add_subcommand("order", "query and render the induced order");
    order->require_subcommand(1);
    int qn1 = 2, qm1 = 2, qn2 = 2, qm2 = 2;
    auto* oquery = order->add_subcommand("query", "relation between two pairs");
    oquery->add_option("n1", qn1)->required();
    oquery->add_option("m1", qm1)->required();
    oquery->add_option("n2", qn2)->required();
    oquery->add_option("m2", qm2)->required();
    int table_n = 9;
    auto* otable = order->add_subcommand("table", "equality table against r(n,2)");
    otable->add_option("max_n", table_n)->required();
    int hasse_n = 9;
    auto* ohasse = order->add_subcommand("hasse", "DOT digraph of equivalence classes");
    ohasse->add_option("max_n", hasse_n)->required();

    // polarized
    auto* pol = app.add_subcommand("polarized", "negative polarized partition relations");
    pol->require_subcommand(1);
    auto* pcheck = pol->add_subcommand("check", "verify a matrix or the modular witness");
    std::optional<int> modular;
    std::string matrix_file;
    int pi = 1, pj = 1, pq = 0;
    pcheck->add_option("--modular", modular, "use the (x+y) mod n matrix");
    pcheck->add_option("--file", matrix_file, "matrix file");
    pcheck->add_option("--i", pi, "row-subset size")->required();
    pcheck->add_option("--j", pj, "column-subset size")->required();
    pcheck->add_option("--q", pq, "value threshold")->required();
    auto* psearch = pol->add_subcommand("search", "search for a witness matrix");
    int sn = 2, sm = 2, sk = 2;
    int si = 1, sj = 1, sq = 0;
    psearch->add_option("--n", sn, "rows")->required();
    psearch->add_option("--m", sm, "columns")->required();
    psearch->add_option("--k", sk, "colours")->required();
    psearch->add_option("--i", si, "row-subset size")->required();
    psearch->add_option("--j", sj, "column-subset size")->required();
    psearch->add_option("--q", sq, "value threshold")->required();

    auto* open_problems = app.add_subcommand("open-problems", "status of the open targets");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*verify) return cmd_verify(coloring_file, vk, vm, cfg);
        if (*decide) return cmd_decide(di, dj, dk, dm, cfg);
        if (*oquery) return cmd_order_query(qn1, qm1, qn2, qm2, cfg);
        if (*otable) return cmd_order_table(table_n, cfg);
        if (*ohasse) return cmd_order_hasse(hasse_n, cfg);
        if (*pcheck) {
            if (!modular && matrix_file.empty()) {
                std::cerr << "error: need --modular or --file\n";
                return kExitInput;
            }
            return cmd_polarized_check(modular, matrix_file, pi, pj, pq, cfg);
        }
        if (*psearch) return cmd_polarized_search(sn, sm, sk, si, sj, sq, cfg);
        if (*open_problems) return cmd_open_problems(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
