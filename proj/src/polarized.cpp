#include "reap/polarized.hpp"

#include <bit>
#include <cstdint>
#include <functional>
#include <stdexcept>

namespace reap {

void PolMatrix::validate() const {
    if (rows < 1 || cols < 1 || colors < 1)
        throw std::invalid_argument("matrix dimensions and colour count must be positive");
    if (colors > 31) throw std::invalid_argument("colour count above bitmask width (31)");
    if (entries.size() != static_cast<std::size_t>(rows) * cols)
        throw std::invalid_argument("entry count does not match matrix dimensions");
    for (int e : entries)
        if (e < 0 || e >= colors) throw std::invalid_argument("matrix entry out of range");
}

namespace {

void check_query(const PolMatrix& h, const PolQuery& q) {
    if (q.row_subset < 1 || q.row_subset > h.rows || q.col_subset < 1 || q.col_subset > h.cols)
        throw std::invalid_argument("rectangle dimensions exceed matrix bounds");
    if (q.threshold < 0) throw std::invalid_argument("value threshold must be >= 0");
}

}  // namespace

bool check_witness(const PolMatrix& h, const PolQuery& query) {
    h.validate();
    check_query(h, query);
    const int i = query.row_subset, j = query.col_subset;
    for (long long ra = 0; ra < binomial(h.rows, i); ++ra) {
        std::uint32_t a = combination_unrank(h.rows, i, ra);
        auto rows = mask_digits(a);
        for (long long rb = 0; rb < binomial(h.cols, j); ++rb) {
            std::uint32_t b = combination_unrank(h.cols, j, rb);
            std::uint32_t seen = 0;
            for (int x : rows)
                for (int y : mask_digits(b)) seen |= (1u << h.at(x, y));
            if (std::popcount(seen) <= query.threshold) return false;
        }
    }
    return true;
}

PolMatrix modular_witness(int n) {
    if (n < 2) throw std::invalid_argument("modular witness needs n >= 2");
    PolMatrix h;
    h.rows = h.cols = h.colors = n;
    h.entries.resize(static_cast<std::size_t>(n) * n);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) h.at(x, y) = (x + y) % n;
    return h;
}

PolSearchOutcome search_witness(int rows, int cols, int colors, const PolQuery& query,
                                long long node_budget) {
    if (rows < 1 || cols < 1 || colors < 1)
        throw std::invalid_argument("matrix dimensions and colour count must be positive");
    if (colors > 31) throw std::invalid_argument("colour count above bitmask width (31)");
    if (query.row_subset < 1 || query.row_subset > rows || query.col_subset < 1 ||
        query.col_subset > cols)
        throw std::invalid_argument("rectangle dimensions exceed matrix bounds");

    PolMatrix h;
    h.rows = rows;
    h.cols = cols;
    h.colors = colors;
    h.entries.assign(static_cast<std::size_t>(rows) * cols, 0);

    const int i = query.row_subset, j = query.col_subset, q = query.threshold;
    const long long cells = static_cast<long long>(rows) * cols;
    long long nodes = 0;
    bool out_of_budget = false;

    // every rectangle whose bottom-right completed cell is (r,c) must
    // already exceed the threshold
    auto violated = [&](int r, int c) {
        if (r + 1 < i || c + 1 < j) return false;
        for (long long ra = 0; ra < binomial(r, i - 1); ++ra) {
            std::uint32_t a = combination_unrank(r, i - 1, ra) | (1u << r);
            auto rws = mask_digits(a);
            for (long long rb = 0; rb < binomial(c, j - 1); ++rb) {
                std::uint32_t b = combination_unrank(c, j - 1, rb) | (1u << c);
                std::uint32_t seen = 0;
                for (int x : rws)
                    for (int y : mask_digits(b)) seen |= (1u << h.at(x, y));
                if (std::popcount(seen) <= q) return true;
            }
        }
        return false;
    };

    std::function<bool(long long, int)> dfs = [&](long long cell, int max_used) -> bool {
        if (cell == cells) return true;
        int r = static_cast<int>(cell / cols), c = static_cast<int>(cell % cols);
        int limit = std::min(colors - 1, max_used + 1);
        for (int v = 0; v <= limit; ++v) {
            if (++nodes > node_budget) {
                out_of_budget = true;
                return false;
            }
            h.at(r, c) = v;
            if (violated(r, c)) continue;
            if (dfs(cell + 1, std::max(max_used, v))) return true;
            if (out_of_budget) return false;
        }
        return false;
    };

    PolSearchOutcome out;
    if (dfs(0, -1)) {
        out.kind = PolSearchOutcome::Kind::Found;
        out.witness = h;
    } else if (out_of_budget) {
        out.kind = PolSearchOutcome::Kind::BudgetExhausted;
    } else {
        out.kind = PolSearchOutcome::Kind::NoneFound;
    }
    out.nodes = nodes;
    return out;
}

}  // namespace reap
