#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "reap/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    std::string cmd = std::string(REAP_CLI) + " " + args + " 2>/dev/null";
    std::array<char, 4096> buf{};
    RunResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (std::size_t got = fread(buf.data(), 1, buf.size(), pipe)) r.out.append(buf.data(), got);
    int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("reap_cli_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
    std::string kb() const { return (path / "kb.json").string(); }
};

std::string fixtures(const std::string& name) {
    return std::string(FIXTURES_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("verify: defeating and non-defeating colourings map to exit codes") {
    auto defeated = run_cli("verify " + fixtures("p35_witness_t33.json") + " --k 2 --m 2");
    CHECK(defeated.exit_code == 0);

    auto not_defeated = run_cli("verify " + fixtures("mod5_sum_t33.json") + " --k 2 --m 2");
    CHECK(not_defeated.exit_code == 1);
    CHECK(not_defeated.out.find("witness subtree") != std::string::npos);

    auto json_mode =
        run_cli("verify " + fixtures("mod5_sum_t33.json") + " --k 2 --m 2 --format json");
    CHECK(json_mode.exit_code == 1);
    json parsed = json::parse(json_mode.out);
    CHECK(parsed.at("defeated") == false);
    CHECK(parsed.at("min_colors") == 2);
}

TEST_CASE("verify: malformed input exits 2") {
    TempDir tmp;
    std::ofstream bad(tmp.path / "short.json");
    bad << R"({"i":3,"h":3,"j":5,"leaves":[0,1,2]})";  // truncated leaf list
    bad.close();
    CHECK(run_cli("verify " + (tmp.path / "short.json").string() + " --k 2 --m 2").exit_code == 2);
    CHECK(run_cli("verify /nonexistent.json --k 2 --m 2").exit_code == 2);
}

TEST_CASE("decide: exit codes track the verdict and certificates land in the kb") {
    TempDir tmp;
    std::string base = "--kb " + tmp.kb() + " ";

    auto fails = run_cli(base + "decide 6 3 3 1");
    CHECK(fails.exit_code == 0);
    json v = json::parse(fails.out);
    CHECK(v.at("verdict") == "fails");
    CHECK(v.at("depth") == 1);

    auto holds = run_cli(base + "decide 3 2 2 1");
    CHECK(holds.exit_code == 1);
    CHECK(json::parse(holds.out).at("reason") == "pigeonhole_arithmetic");

    auto unknown = run_cli(base + "decide 3 9 2 3");
    CHECK(unknown.exit_code == 3);
    CHECK(json::parse(unknown.out).at("verdict") == "unknown");

    CHECK(run_cli(base + "decide 1 2 2 1").exit_code == 2);

    // round trip: the stored certificate verifies via the verify command
    json kb = reap::load_json_file(tmp.kb());
    REQUIRE(kb.at("certificates").size() >= 1);
    fs::path cert_file = tmp.path / "cert.json";
    bool wrote = false;
    for (auto& [id, payload] : kb.at("certificates").items()) {
        if (!payload.contains("leaves")) continue;
        std::ofstream out(cert_file);
        out << payload.dump();
        wrote = true;
        break;
    }
    REQUIRE(wrote);
    CHECK(run_cli("verify " + cert_file.string() + " --k 3 --m 1").exit_code == 0);
}

TEST_CASE("order query: relation, proof trace, and exit vocabulary") {
    TempDir tmp;
    std::string base = "--kb " + tmp.kb() + " --fixtures " + fixtures("certificates.json") + " ";

    auto le = run_cli(base + "order query 3 2 5 3");
    CHECK(le.exit_code == 0);
    CHECK(le.out.find("LE") != std::string::npos);

    auto nle = run_cli(base + "order query 3 2 2 2");
    CHECK(nle.exit_code == 1);

    // either the stated-equality axiom or the 7-colour certificate chain
    // settles (3,2) vs (9,4); with both gone the shallow pass leaves it open
    auto le94 = run_cli(base + "order query 3 2 9 4 --format json");
    CHECK(le94.exit_code == 0);
    CHECK(json::parse(le94.out).at("relation") == "LE");

    auto open = run_cli("--kb " + (tmp.path / "bare.json").string() +
                        " --no-stated-equalities order query 3 2 9 4 --format json");
    CHECK(open.exit_code == 3);
    CHECK(json::parse(open.out).at("relation") == "Open");
}

TEST_CASE("order table: all formats and the open cell") {
    TempDir tmp;
    std::string base = "--kb " + tmp.kb() + " --fixtures " + fixtures("certificates.json") + " ";

    auto text = run_cli(base + "order table 9");
    CHECK(text.exit_code == 0);
    CHECK(text.out.find("?") != std::string::npos);
    CHECK(text.out.find("open cell (9,4), conjectured 3") != std::string::npos);

    auto as_json = run_cli(base + "order table 9 --format json");
    json t = json::parse(as_json.out);
    CHECK(t.at("cells").size() == 36);
    int open_cells = 0;
    for (const auto& c : t.at("cells")) {
        CHECK(c.contains("i"));
        CHECK(c.contains("j"));
        CHECK(c.contains("status"));
        CHECK(c.contains("conjectured"));
        if (c.at("status") == "open") {
            ++open_cells;
            CHECK(c.at("published_open") == true);
            CHECK(c.at("note").get<std::string>().find("derivable") != std::string::npos);
        }
    }
    CHECK(open_cells == 1);

    auto csv = run_cli(base + "order table 3 --format csv");
    CHECK(csv.out == "i,j,status,value,conjectured,depends_on_laflamme\n"
                     "2,2,proved,2,2,0\n"
                     "3,2,proved,3,3,0\n"
                     "3,3,proved,2,2,0\n");
}

TEST_CASE("order table: cells backed only by the axiom react to the toggle") {
    TempDir tmp;
    std::string base = "--kb " + tmp.kb() + " --fixtures " + fixtures("certificates.json") + " ";
    auto with = run_cli(base + "order table 9 --format json");
    json with_doc = json::parse(with.out);
    bool cell73_proved = false, cell73_depends = false;
    for (const auto& c : with_doc.at("cells"))
        if (c.at("i") == 7 && c.at("j") == 3) {
            cell73_proved = c.at("status") == "proved";
            cell73_depends = c.at("depends_on_laflamme").get<bool>();
        }
    CHECK(cell73_proved);
    CHECK(cell73_depends);

    auto without = run_cli(base + "--no-laflamme order table 9 --format json");
    json without_doc = json::parse(without.out);
    for (const auto& c : without_doc.at("cells"))
        if (c.at("i") == 7 && c.at("j") == 3) CHECK(c.at("status") == "open");
}

TEST_CASE("order hasse emits a DOT digraph with the bottom class as sink") {
    TempDir tmp;
    auto dot = run_cli("--kb " + tmp.kb() + " --fixtures " + fixtures("certificates.json") +
                       " order hasse 9");
    CHECK(dot.exit_code == 0);
    CHECK(dot.out.find("digraph") != std::string::npos);
    CHECK(dot.out.find("(2,2)") != std::string::npos);
    CHECK(dot.out.find("->") != std::string::npos);
}

TEST_CASE("polarized check and search") {
    CHECK(run_cli("polarized check --modular 5 --i 2 --j 2 --q 2").exit_code == 0);
    CHECK(run_cli("polarized check --modular 4 --i 2 --j 2 --q 2").exit_code == 1);
    CHECK(run_cli("polarized check --modular 5 --i 9 --j 2 --q 2").exit_code == 2);

    auto found = run_cli("polarized search --n 3 --m 3 --k 3 --i 2 --j 2 --q 2");
    CHECK(found.exit_code == 0);
    json matrix = json::parse(found.out);
    CHECK(matrix.at("n") == 3);
    CHECK(matrix.at("entries").size() == 9);

    CHECK(run_cli("polarized search --n 3 --m 3 --k 2 --i 2 --j 2 --q 2").exit_code == 1);
}

TEST_CASE("open-problems lists the targets and persists its searches") {
    TempDir tmp;
    std::string base = "--kb " + tmp.kb() + " --fixtures " + fixtures("certificates.json") +
                       " --budget 20000 ";
    auto rep = run_cli(base + "open-problems --format json");
    CHECK(rep.exit_code == 0);
    json targets = json::parse(rep.out);
    REQUIRE(targets.size() == 5);
    CHECK(targets[0].at("instance") == "P(3,9,2,3)");
    CHECK(targets[0].at("status").get<std::string>().find("already derivable") !=
          std::string::npos);
    CHECK(targets[1].at("status").get<std::string>().find("already derivable") !=
          std::string::npos);
    CHECK(targets[2].at("instance") == "P(3,11,2,5)");
    CHECK(targets[2].at("status").get<std::string>().find("unknown") != std::string::npos);

    json kb = reap::load_json_file(tmp.kb());
    CHECK(kb.at("searches").size() >= 2);

    // a second run reuses the recorded frontiers
    auto again = run_cli(base + "open-problems --format json");
    CHECK(json::parse(again.out)[2].at("status").get<std::string>().find("reused") !=
          std::string::npos);

    // without the stated-equality axiom the scan actually searches (9,4)
    auto strict = run_cli("--kb " + (tmp.path / "strict.json").string() +
                          " --budget 20000 --no-stated-equalities open-problems --format json");
    CHECK(json::parse(strict.out)[0].at("status").get<std::string>().find("unknown") !=
          std::string::npos);
}

TEST_CASE("decide is deterministic for a fixed configuration") {
    TempDir tmp;
    auto a = run_cli("--kb " + (tmp.path / "a.json").string() + " decide 6 3 3 1");
    auto b = run_cli("--kb " + (tmp.path / "b.json").string() + " decide 6 3 3 1");
    CHECK(a.out == b.out);
    CHECK(a.exit_code == b.exit_code);
}
