#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "pdshift/rational.hpp"

namespace pdshift {

using SparseRow = std::vector<std::pair<uint32_t, Rational>>;

// Kernel basis of a square rational matrix, by fraction-preserving
// Gauss-Jordan elimination.  Pivots are chosen among the nonzero entries
// with a Markowitz count to limit fill-in; with exact arithmetic any
// nonzero pivot is as good as any other.
inline std::vector<std::vector<Rational>> kernel_basis(uint32_t n, const std::vector<SparseRow>& rows_in) {
    using Row = std::map<uint32_t, Rational>;
    std::vector<Row> rows(rows_in.size());
    for (size_t r = 0; r < rows_in.size(); ++r)
        for (const auto& [c, v] : rows_in[r])
            if (v != 0) {
                auto [it, fresh] = rows[r].emplace(c, v);
                if (!fresh)
                    it->second += v;
            }

    std::vector<uint32_t> col_count(n, 0);
    std::vector<bool> active(rows.size(), true);
    for (size_t r = 0; r < rows.size(); ++r)
        for (const auto& [c, v] : rows[r])
            ++col_count[c];

    std::vector<int64_t> pivot_row_of_col(n, -1);
    std::vector<std::pair<uint32_t, Row>> done;  // (pivot column, reduced row)

    for (;;) {
        // Markowitz choice: minimize (nnz(row)-1) * (count(col)-1).
        size_t best_r = rows.size();
        uint32_t best_c = 0;
        uint64_t best_score = UINT64_MAX;
        for (size_t r = 0; r < rows.size(); ++r) {
            if (!active[r] || rows[r].empty())
                continue;
            const uint64_t rn = rows[r].size() - 1;
            for (const auto& [c, v] : rows[r]) {
                const uint64_t score = rn * (col_count[c] - 1);
                if (score < best_score || (score == best_score && r < best_r)) {
                    best_score = score;
                    best_r = r;
                    best_c = c;
                }
            }
        }
        if (best_r == rows.size())
            break;

        Row piv = std::move(rows[best_r]);
        rows[best_r].clear();
        active[best_r] = false;
        for (const auto& [c, v] : piv)
            --col_count[c];

        // Normalize so the pivot entry is 1.
        const Rational inv = piv[best_c];
        for (auto& [c, v] : piv)
            v /= inv;

        auto eliminate = [&](Row& row, bool counted) {
            auto hit = row.find(best_c);
            if (hit == row.end())
                return;
            const Rational factor = hit->second;
            for (const auto& [c, v] : piv) {
                auto it = row.find(c);
                if (it == row.end()) {
                    Rational nv = -factor * v;
                    if (nv != 0) {
                        row.emplace(c, std::move(nv));
                        if (counted)
                            ++col_count[c];
                    }
                } else {
                    it->second -= factor * v;
                    if (it->second == 0) {
                        row.erase(it);
                        if (counted)
                            --col_count[c];
                    }
                }
            }
        };

        for (size_t r = 0; r < rows.size(); ++r)
            if (active[r])
                eliminate(rows[r], true);
        for (auto& [pc, row] : done)
            eliminate(row, false);

        pivot_row_of_col[best_c] = int64_t(done.size());
        done.emplace_back(best_c, std::move(piv));
    }

    // After full reduction each done row reads x_pc + sum over free columns
    // of coeff * x_f = 0.
    std::vector<std::vector<Rational>> basis;
    for (uint32_t f = 0; f < n; ++f) {
        if (pivot_row_of_col[f] >= 0)
            continue;
        std::vector<Rational> x(n, Rational(0));
        x[f] = 1;
        for (const auto& [pc, row] : done) {
            auto it = row.find(f);
            if (it != row.end())
                x[pc] = -it->second;
        }
        basis.push_back(std::move(x));
    }
    return basis;
}

}  // namespace pdshift
