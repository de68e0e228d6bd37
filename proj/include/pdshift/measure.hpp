#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pdshift/error.hpp"
#include "pdshift/language.hpp"
#include "pdshift/linalg.hpp"
#include "pdshift/rational.hpp"

// Cylinder measures of the unique invariant measure.  Three routes are
// provided: the closed form indexed by first occurrence, the normalized
// Perron eigenvector of the composition matrix of the induced block
// substitution, and empirical window frequencies.

namespace pdshift {

// Measure of the cylinder of the m-word whose least occurrence index is i.
// The word is heavy (2 / (3*2^k)) when i <= 2^k - q, or when 2q < 2^k and
// 2^k < i <= 2^k + 2^(k-1) - q; otherwise it is light (1 / (3*2^k)).
// The second condition is evaluated in the doubled integer form
// 2i <= 3*2^k - 2q, which also settles k = 0.
inline Rational measure_by_index(uint64_t i, uint64_t m) {
    const auto [mm, k, q] = decompose(m);
    const uint64_t p2k = uint64_t(1) << k;
    if (i == 0 || i > 3 * p2k)
        throw std::invalid_argument("measure_by_index requires 1 <= i <= 3*2^k");
    bool heavy = i + q <= p2k;
    if (!heavy && 2 * q < p2k && i > p2k && 2 * i <= 3 * p2k - 2 * q)
        heavy = true;
    return make_rational(BigInt(heavy ? 2 : 1), 3 * pow2_int(k));
}

// Measure of the cylinder [u], or nothing if u is not allowed.
inline std::optional<Rational> measure(const Word& u) {
    const auto idx = locate(u);
    if (!idx)
        return std::nullopt;
    return measure_by_index(*idx, u.size());
}

// r(m): how many m-words carry the heavy value 2 / (3*2^k).
inline uint64_t class_count(uint64_t m) {
    const auto [mm, k, q] = decompose(m);
    if (k == 0)
        return 1;
    const uint64_t p2k = uint64_t(1) << k;
    if (2 * q < p2k)
        return 3 * (p2k / 2) - 2 * q;
    return p2k - q;
}

struct MeasureRow {
    Word word;
    uint64_t first_index;
    Rational value;
};

struct MeasureTable {
    uint64_t m = 0;
    std::vector<MeasureRow> rows;

    Rational total() const {
        Rational s(0);
        for (const auto& r : rows)
            s += r.value;
        return s;
    }
};

// One row per allowed m-word, ordered by first occurrence.  Checks that the
// values add up to exactly 1 and that the heavy-row count matches r(m).
inline MeasureTable measure_table(uint64_t m) {
    LanguageTable lang = enumerate(m);
    const auto [mm, k, q] = decompose(m);
    const Rational heavy_value = make_rational(BigInt(2), 3 * pow2_int(k));

    MeasureTable table;
    table.m = m;
    table.rows.reserve(lang.entries.size());
    uint64_t heavy = 0;
    for (auto& e : lang.entries) {
        Rational v = measure_by_index(e.first_index, m);
        if (v == heavy_value)
            ++heavy;
        table.rows.push_back({std::move(e.word), e.first_index, std::move(v)});
    }
    if (table.total() != 1)
        throw consistency_error("measure_table(" + std::to_string(m) + "): values do not sum to 1");
    if (heavy != class_count(m))
        throw consistency_error("measure_table(" + std::to_string(m) + "): heavy-row count differs from r(m)");
    return table;
}

// The induced substitution on m-words: the image of u is the pair of
// m-windows of zeta(u) at offsets 1 and 2.
inline std::pair<Word, Word> block_substitution(const Word& u) {
    if (u.empty())
        throw std::invalid_argument("block_substitution requires a nonempty word");
    const uint64_t m = u.size();
    const Word im = substitution_image(u);
    return {im.subword(0, m), im.subword(1, m)};
}

// Composition matrix over the alphabet of allowed m-words (in first
// occurrence order): entry (u, v) counts occurrences of v in the two-letter
// image of u.  Every row sums to 2 and entries lie in {0, 1, 2}.
struct CompositionMatrix {
    uint64_t m = 0;
    LanguageTable alphabet;
    std::vector<std::vector<uint8_t>> entries;
};

inline CompositionMatrix composition_matrix(uint64_t m) {
    CompositionMatrix cm;
    cm.m = m;
    cm.alphabet = enumerate(m);
    const size_t p = cm.alphabet.entries.size();

    std::unordered_map<Word, uint32_t, Word::Hasher> index;
    index.reserve(2 * p);
    for (size_t r = 0; r < p; ++r)
        index.emplace(cm.alphabet.entries[r].word, uint32_t(r));

    cm.entries.assign(p, std::vector<uint8_t>(p, 0));
    for (size_t r = 0; r < p; ++r) {
        const auto [a, b] = block_substitution(cm.alphabet.entries[r].word);
        for (const Word* w : {&a, &b}) {
            auto it = index.find(*w);
            if (it == index.end())
                throw consistency_error("composition_matrix(" + std::to_string(m) +
                                        "): image word " + w->str() + " is not in the language");
            ++cm.entries[r][it->second];
        }
    }
    return cm;
}

// Independent route to the cylinder measures: the measure vector is the
// normalized solution of d = (1/2) M^T d, solved exactly.  The solve fails
// when the solution space is not one-dimensional or the vector is not
// strictly positive.
inline MeasureTable perron_measure_oracle(uint64_t m) {
    CompositionMatrix cm = composition_matrix(m);
    const uint32_t p = uint32_t(cm.alphabet.entries.size());

    // Row v of the system: sum_u M_uv d_u - 2 d_v = 0.
    std::vector<SparseRow> rows(p);
    for (uint32_t u = 0; u < p; ++u)
        for (uint32_t v = 0; v < p; ++v)
            if (cm.entries[u][v] != 0)
                rows[v].emplace_back(u, Rational(int(cm.entries[u][v])));
    for (uint32_t v = 0; v < p; ++v)
        rows[v].emplace_back(v, Rational(-2));

    auto basis = kernel_basis(p, rows);
    if (basis.size() != 1)
        throw consistency_error("perron_measure_oracle(" + std::to_string(m) +
                                "): eigenspace dimension is " + std::to_string(basis.size()));
    std::vector<Rational>& d = basis.front();

    Rational sum(0);
    for (const auto& x : d)
        sum += x;
    if (sum == 0)
        throw consistency_error("perron_measure_oracle: eigenvector sums to zero");
    for (auto& x : d) {
        x /= sum;
        if (x <= 0)
            throw consistency_error("perron_measure_oracle: eigenvector is not strictly positive");
    }

    // The eigen equation must hold exactly for the normalized vector.
    for (uint32_t v = 0; v < p; ++v) {
        Rational acc(0);
        for (uint32_t u = 0; u < p; ++u)
            if (cm.entries[u][v] != 0)
                acc += Rational(int(cm.entries[u][v])) * d[u];
        if (acc != 2 * d[v])
            throw consistency_error("perron_measure_oracle: eigen equation violated");
    }

    MeasureTable table;
    table.m = m;
    table.rows.reserve(p);
    for (uint32_t r = 0; r < p; ++r)
        table.rows.push_back({cm.alphabet.entries[r].word, cm.alphabet.entries[r].first_index, d[r]});
    return table;
}

// Exact frequency of u among the windows w_1 ... w_n.
inline Rational empirical_frequency(const Word& u, uint64_t n) {
    if (n == 0)
        throw std::invalid_argument("empirical_frequency requires n >= 1");
    const uint64_t m = u.size();
    if (m == 0)
        return Rational(1);
    auto& om = omega();
    om.ensure(n + m - 1);
    uint64_t count = 0;
    if (m <= 64) {
        const uint64_t target = u.low_bits();
        for (uint64_t i = 1; i <= n; ++i)
            if (om.window_bits(i, unsigned(m)) == target)
                ++count;
    } else {
        for (uint64_t i = 1; i <= n; ++i)
            if (om.window_equals(i, u))
                ++count;
    }
    return make_rational(count, n);
}

}  // namespace pdshift
