#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <vector>

#include "pdshift/error.hpp"
#include "pdshift/sequence.hpp"
#include "pdshift/word.hpp"

// The language of the sequence: window extraction, the closed-form
// complexity function, enumeration of the allowed m-words by first
// occurrence, and the complete description of duplicate windows among
// the first 3*2^k positions.

namespace pdshift {

// m = 2^k + q with 0 <= q < 2^k.
struct ScaleDecomposition {
    uint64_t m;
    unsigned k;
    uint64_t q;
};

inline ScaleDecomposition decompose(uint64_t m) {
    if (m == 0)
        throw std::invalid_argument("word length must be positive");
    const unsigned k = unsigned(std::bit_width(m)) - 1;
    return {m, k, m - (uint64_t(1) << k)};
}

// Number of allowed m-words:
//   2                  for m = 1,
//   3*2^(k-1) + 2q     for q <= 2^(k-1),
//   4*2^(k-1) + q      for q >  2^(k-1).
inline uint64_t complexity(uint64_t m) {
    const auto [mm, k, q] = decompose(m);
    if (k == 0)
        return 2;
    const uint64_t half = uint64_t(1) << (k - 1);
    if (q <= half)
        return 3 * half + 2 * q;
    return 4 * half + q;
}

// The window w_i w_{i+1} ... w_{i+m-1}, 1-based.
inline Word window(uint64_t i, uint64_t m) {
    if (i == 0 || m == 0)
        throw std::invalid_argument("window requires i >= 1 and m >= 1");
    omega().ensure(i + m - 1);
    return omega().window_word(i, m);
}

struct LanguageEntry {
    Word word;
    uint64_t first_index;
};

// All allowed m-words ordered by first occurrence in the sequence.
struct LanguageTable {
    uint64_t m = 0;
    std::vector<LanguageEntry> entries;
};

namespace detail {

// Scans windows i = 1..scan_end and returns the first-occurrence indices of
// the distinct ones, ascending.  Deduplication hashes every window and
// confirms candidate matches with an exact bit comparison.
inline std::vector<uint64_t> first_occurrences(uint64_t m, uint64_t scan_end) {
    auto& om = omega();
    om.ensure(scan_end + m - 1);

    struct Cand {
        uint64_t h;
        uint64_t idx;
    };
    std::vector<Cand> cands;
    cands.reserve(scan_end);
    for (uint64_t i = 1; i <= scan_end; ++i)
        cands.push_back({om.window_hash(i, m), i});
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
        return a.h != b.h ? a.h < b.h : a.idx < b.idx;
    });

    std::vector<uint64_t> firsts;
    std::vector<uint64_t> reps;  // representatives of the current hash run
    for (size_t t = 0; t < cands.size(); ++t) {
        if (t == 0 || cands[t].h != cands[t - 1].h)
            reps.clear();
        bool seen = false;
        for (uint64_t r : reps) {
            if (om.windows_equal(r, cands[t].idx, m)) {
                seen = true;
                break;
            }
        }
        if (!seen) {
            reps.push_back(cands[t].idx);
            firsts.push_back(cands[t].idx);
        }
    }
    std::sort(firsts.begin(), firsts.end());
    return firsts;
}

}  // namespace detail

// Scans i = 1..3*2^k, deduplicates, and records first occurrences.  The
// entry count is checked against the complexity formula.
inline LanguageTable enumerate(uint64_t m) {
    const auto [mm, k, q] = decompose(m);
    const uint64_t scan_end = 3 * (uint64_t(1) << k);
    auto firsts = detail::first_occurrences(m, scan_end);
    if (firsts.size() != complexity(m))
        throw consistency_error("enumerate: window scan found " + std::to_string(firsts.size()) +
                                " distinct " + std::to_string(m) + "-words, complexity says " +
                                std::to_string(complexity(m)));
    LanguageTable table;
    table.m = m;
    table.entries.reserve(firsts.size());
    for (uint64_t i : firsts)
        table.entries.push_back({omega().window_word(i, m), i});
    return table;
}

// Brute-force count of distinct m-windows among i = 1..scan_end
// (default 3*2^(k+1)); independent of the complexity formula.
inline uint64_t distinct_window_count(uint64_t m, uint64_t scan_end = 0) {
    const auto [mm, k, q] = decompose(m);
    if (scan_end == 0)
        scan_end = 3 * (uint64_t(1) << (k + 1));
    return detail::first_occurrences(m, scan_end).size();
}

// Least i with u = w_i^(m), or nothing if u is not allowed.
inline std::optional<uint64_t> locate(const Word& u) {
    if (u.empty())
        throw std::invalid_argument("locate requires a nonempty word");
    const auto [m, k, q] = decompose(u.size());
    const uint64_t scan_end = 3 * (uint64_t(1) << k);
    auto& om = omega();
    om.ensure(scan_end + m - 1);
    for (uint64_t i = 1; i <= scan_end; ++i)
        if (om.window_equals(i, u))
            return i;
    return std::nullopt;
}

enum class DuplicateKind { long_period, short_period };

// Indices i < j <= 3*2^k with w_i^(m) = w_j^(m); long-period pairs have
// j = i + 2^(k+1), short-period pairs j = i + 2^(k-1).
struct DuplicatePair {
    uint64_t i;
    uint64_t j;
    DuplicateKind kind;
};

// The complete list of duplicated windows for m = 2^k + q with k >= 1 and
// 1 <= q < 2^k:
//   (i, i + 2^(k+1))  for 1 <= i <= 2^k - q, and additionally
//   (i, i + 2^(k-1))  for 2^k + 1 <= i <= 3*2^(k-1) - q   when q < 2^(k-1).
inline std::vector<DuplicatePair> duplicate_pairs(uint64_t m) {
    const auto [mm, k, q] = decompose(m);
    if (k < 1 || q < 1)
        throw std::invalid_argument("duplicate_pairs requires m = 2^k + q with k >= 1, 1 <= q < 2^k");
    const uint64_t p2k = uint64_t(1) << k;
    std::vector<DuplicatePair> pairs;
    for (uint64_t i = 1; i + q <= p2k; ++i)
        pairs.push_back({i, i + 2 * p2k, DuplicateKind::long_period});
    if (2 * q < p2k) {
        const uint64_t half = p2k / 2;
        for (uint64_t i = p2k + 1; i + q <= 3 * half; ++i)
            pairs.push_back({i, i + half, DuplicateKind::short_period});
    }
    return pairs;
}

// phi(i, j): least offset h in [1, 2^(k+1)] where the windows at i and j
// disagree.  The scan range always contains a mismatch; running off its end
// would mean the generator is broken.
inline uint64_t first_mismatch(uint64_t i, uint64_t j, unsigned k) {
    if (k < 1)
        throw std::invalid_argument("first_mismatch requires k >= 1");
    const uint64_t limit = uint64_t(1) << (k + 1);
    if (i == 0 || i >= j || j > 3 * (uint64_t(1) << k))
        throw std::invalid_argument("first_mismatch requires 1 <= i < j <= 3*2^k");
    auto& om = omega();
    om.ensure(j + limit - 1);
    const uint64_t h = om.window_mismatch(i, j, limit);
    if (h == 0)
        throw consistency_error("first_mismatch: windows at " + std::to_string(i) + " and " +
                                std::to_string(j) + " agree past 2^(k+1)");
    return h;
}

}  // namespace pdshift
