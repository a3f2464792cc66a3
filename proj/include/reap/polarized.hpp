#pragma once

#include <optional>
#include <vector>

#include "reap/tree.hpp"  // combination helpers

namespace reap {

/// Colouring of an n x m grid by colours {0..colors-1}, row-major storage.
struct PolMatrix {
    int rows = 1, cols = 1, colors = 1;
    std::vector<int> entries;

    void validate() const;
    int at(int r, int c) const { return entries[static_cast<std::size_t>(r) * cols + c]; }
    int& at(int r, int c) { return entries[static_cast<std::size_t>(r) * cols + c]; }
};

/// Rectangle test: every i-subset of rows x j-subset of cols must take
/// more than q values.
struct PolQuery {
    int row_subset = 1;   // i
    int col_subset = 1;   // j
    int threshold = 0;    // q
};

/// Brute force over all C(rows,i) * C(cols,j) rectangles, in ranked
/// combination order.  Throws std::invalid_argument on bounds violations.
bool check_witness(const PolMatrix& h, const PolQuery& query);

/// The n x n matrix with entries (x + y) mod n, colours k = n.
PolMatrix modular_witness(int n);

struct PolSearchOutcome {
    enum class Kind { Found, NoneFound, BudgetExhausted } kind;
    std::optional<PolMatrix> witness;
    long long nodes = 0;  // cell assignments tried
};

/// Backtracking over entries in row-major order with canonical-colour
/// symmetry breaking, pruning on any completed rectangle at or below the
/// threshold.  NoneFound is exhaustive modulo colour renaming.
PolSearchOutcome search_witness(int rows, int cols, int colors, const PolQuery& query,
                                long long node_budget = 20'000'000);

}  // namespace reap
