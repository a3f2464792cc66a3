#include <doctest.h>

#include <algorithm>
#include <functional>
#include <set>

#include "reap/tree.hpp"

using namespace reap;

TEST_CASE("leaf indexing is positional with the root digit most significant") {
    TreeShape t33(3, 3);
    CHECK(leaf_index(t33, {0, 0, 0}) == 0);
    CHECK(leaf_index(t33, {2, 2, 2}) == 26);
    CHECK(leaf_index(TreeShape(3, 2), {1, 0}) == 3);

    CHECK_THROWS_AS(leaf_index(t33, {0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(leaf_index(t33, {0, 0, 3}), std::invalid_argument);
}

TEST_CASE("leaf_path inverts leaf_index on every small shape") {
    for (int i = 2; i <= 4; ++i)
        for (int h = 0; h <= 4; ++h) {
            TreeShape shape(i, h);
            for (long long t = 0; t < shape.leaf_count(); ++t)
                CHECK(leaf_index(shape, leaf_path(shape, t)) == t);
        }
}

TEST_CASE("subtree stream counts match the branching recurrence") {
    CHECK(count_subtrees(TreeShape(3, 1), 2) == 3);
    CHECK(count_subtrees(TreeShape(3, 2), 2) == 27);
    CHECK(count_subtrees(TreeShape(3, 3), 2) == 2187);

    for (int i = 2; i <= 4; ++i)
        for (int k = 2; k <= i; ++k)
            for (int h = 0; h <= 3; ++h) {
                TreeShape shape(i, h);
                long long streamed = 0;
                for_each_subtree(shape, k, [&](const SubtreeCert&) {
                    ++streamed;
                    return true;
                });
                CHECK(streamed == count_subtrees(shape, k));
            }
}

TEST_CASE("every streamed certificate is valid, distinct, and k^depth-leaved") {
    TreeShape shape(3, 2);
    std::set<std::vector<std::vector<std::uint32_t>>> seen;
    for_each_subtree(shape, 2, [&](const SubtreeCert& cert) {
        auto leaves = subtree_leaves(cert);
        CHECK(leaves.size() == 4);
        CHECK(std::is_sorted(leaves.begin(), leaves.end()));
        seen.insert(cert.level_choices);
        return true;
    });
    CHECK(seen.size() == 27);
}

TEST_CASE("subtree leaves agree with hand-computed selections") {
    SubtreeCert cert;
    cert.shape = TreeShape(3, 1);
    cert.k = 2;
    cert.level_choices = {{0b101}};  // children {0,2}
    CHECK(subtree_leaves(cert) == std::vector<long long>{0, 2});

    cert.shape = TreeShape(2, 2);
    cert.level_choices = {{0b11}, {0b11, 0b11}};
    CHECK(subtree_leaves(cert) == std::vector<long long>{0, 1, 2, 3});

    cert.shape = TreeShape(3, 2);
    cert.level_choices = {{0b011}, {0b011, 0b110}};  // root {0,1}; node0 {0,1}; node1 {1,2}
    CHECK(subtree_leaves(cert) == std::vector<long long>{0, 1, 4, 5});
}

TEST_CASE("malformed certificates are rejected") {
    SubtreeCert cert;
    cert.shape = TreeShape(3, 2);
    cert.k = 2;
    cert.level_choices = {{0b011}};  // whole level missing
    CHECK_THROWS_AS(subtree_leaves(cert), std::invalid_argument);

    cert.level_choices = {{0b011}, {0b011, 0b111}};  // second node picks 3 children
    CHECK_THROWS_AS(subtree_leaves(cert), std::invalid_argument);

    cert.level_choices = {{0b1001}, {0b011, 0b011}};  // digit 3 out of range
    CHECK_THROWS_AS(subtree_leaves(cert), std::invalid_argument);
}

TEST_CASE("k above the branching factor leaves no subtree") {
    CHECK_THROWS_AS(SubtreeEnumerator(TreeShape(3, 2), 4), EmptyDomain);
    CHECK_THROWS_AS(count_subtrees(TreeShape(2, 1), 3), EmptyDomain);
}

TEST_CASE("depth-0 tree has exactly one subtree: itself") {
    SubtreeEnumerator en(TreeShape(3, 0), 2);
    auto first = en.next();
    REQUIRE(first);
    CHECK(subtree_leaves(*first) == std::vector<long long>{0});
    CHECK_FALSE(en.next());
}

TEST_CASE("general tree enumeration at toy scale") {
    CHECK(enumerate_general_trees(2, 2).size() == 2);   // single leaf; one split
    CHECK(enumerate_general_trees(3, 2).size() == 1);   // a ternary split needs 3 leaves
    auto binary4 = enumerate_general_trees(2, 4);
    CHECK(binary4.size() == 5);

    // the unbalanced 3-leaf tree: leaves at depths 1 and 2
    bool found_unbalanced = false;
    for (const auto& t : binary4) {
        if (t.leaf_count() != 3) continue;
        auto paths = t.leaf_paths();
        std::set<std::size_t> depths;
        for (const auto& p : paths) depths.insert(p.size());
        if (depths == std::set<std::size_t>{1, 2}) found_unbalanced = true;
    }
    CHECK(found_unbalanced);

    CHECK_THROWS_AS(enumerate_general_trees(2, 13), std::invalid_argument);
}

TEST_CASE("general trees are full: every internal node has `branching` children") {
    for (const auto& t : enumerate_general_trees(3, 7)) {
        std::function<void(const GeneralTree&)> walk = [&](const GeneralTree& n) {
            if (!n.is_leaf()) {
                CHECK(n.children.size() == 3);
                for (const auto& c : n.children) walk(c);
            }
        };
        walk(t);
    }
    CHECK(enumerate_general_trees(3, 7).size() == 5);  // 1,3,5,7 leaves: 1+1+1+2
}
