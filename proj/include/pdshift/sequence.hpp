#pragma once

#include <array>
#include <atomic>
#include <bit>
#include <cstdint>
#include <cstdlib>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdshift/bitops.hpp"
#include "pdshift/word.hpp"

// The period-doubling sequence w = 0100 0101 0100 0100 ... and its three
// constructions:
//
//   * valuation     w_i = v2(i) mod 2, v2 the 2-adic valuation;
//   * substitution  the fixed point of 0 -> 01, 1 -> 00 starting from 0;
//   * toeplitz      round-based hole filling with the patterns (0*), (1*).
//
// All positions are 1-based, matching the usual indexing of the sequence.

namespace pdshift {

enum class GeneratorMethod { valuation, substitution, toeplitz };

// w_i = v2(i) mod 2.  Rejects i = 0, where the valuation is undefined.
inline Symbol letter(uint64_t i) {
    if (i == 0)
        throw std::invalid_argument("letter index must be positive");
    return Symbol(unsigned(std::countr_zero(i)) & 1u);
}

inline Word substitution_image(const Word& w) {
    Word out;
    out.reserve(2 * w.size());
    for (uint64_t t = 0; t < w.size(); ++t) {
        out.push_back(Symbol::zero());
        out.push_back(w[t].flipped());
    }
    return out;
}

// The block s^(2^k), i.e. the k-th substitution iterate of a single letter.
inline Word block(Symbol s, unsigned k) {
    Word w;
    w.push_back(s);
    for (unsigned r = 0; r < k; ++r)
        w = substitution_image(w);
    return w;
}

namespace detail {

inline Word prefix_valuation(uint64_t n) {
    Word w;
    w.reserve(n);
    for (uint64_t i = 1; i <= n; ++i)
        w.push_back(letter(i));
    return w;
}

inline Word prefix_substitution(uint64_t n) {
    Word w;
    w.push_back(Symbol::zero());
    while (w.size() < n)
        w = substitution_image(w);
    return w.subword(0, n);
}

// Round t walks the still-unfilled cells and writes t mod 2 into every other
// one, starting with the first; the skipped cells stay holes for round t+1.
inline Word prefix_toeplitz(uint64_t n) {
    std::vector<uint8_t> cell(n, 0);
    std::vector<uint64_t> holes(n);
    for (uint64_t i = 0; i < n; ++i)
        holes[i] = i;
    unsigned round = 0;
    while (!holes.empty()) {
        const uint8_t fill = round & 1u;
        std::vector<uint64_t> next;
        next.reserve(holes.size() / 2);
        for (size_t t = 0; t < holes.size(); ++t) {
            if (t % 2 == 0)
                cell[holes[t]] = fill;
            else
                next.push_back(holes[t]);
        }
        holes = std::move(next);
        ++round;
    }
    Word w;
    w.reserve(n);
    for (uint64_t i = 0; i < n; ++i)
        w.push_back(Symbol(cell[i]));
    return w;
}

// Expands one input byte b0..b7 into 16 output bits of the substitution
// image: pair 2j is always 0, pair 2j+1 is the negation of bit j.
inline const std::array<uint16_t, 256>& zeta_byte_lut() {
    static const std::array<uint16_t, 256> lut = [] {
        std::array<uint16_t, 256> t{};
        for (unsigned b = 0; b < 256; ++b) {
            uint16_t v = 0;
            for (unsigned j = 0; j < 8; ++j)
                if (((b >> j) & 1u) == 0u)
                    v |= uint16_t(1) << (2 * j + 1);
            t[b] = v;
        }
        return t;
    }();
    return lut;
}

}  // namespace detail

inline Word prefix(uint64_t n, GeneratorMethod method = GeneratorMethod::substitution) {
    switch (method) {
    case GeneratorMethod::valuation:
        return detail::prefix_valuation(n);
    case GeneratorMethod::substitution:
        return detail::prefix_substitution(n);
    case GeneratorMethod::toeplitz:
        return detail::prefix_toeplitz(n);
    }
    throw std::invalid_argument("unknown generator method");
}

inline uint64_t default_prefix_cap() { return uint64_t(1) << 26; }

// Cap on how long a prefix the process may materialize, in letters.
// PDSHIFT_MAX_PREFIX overrides the default of 2^26.
inline uint64_t prefix_cap_from_env() {
    if (const char* env = std::getenv("PDSHIFT_MAX_PREFIX")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && v > 0)
            return uint64_t(v);
    }
    return default_prefix_cap();
}

// A shared, extend-only prefix of the sequence, grown by applying the
// substitution to the part already generated.  Readers synchronize on the
// published length only: the storage is allocated once, growth happens on
// word-aligned boundaries behind a mutex, and the new length is released
// after the bits are written.  Accessors taking positions require the caller
// to have ensured coverage first.
class PrefixCache {
public:
    explicit PrefixCache(uint64_t cap_letters) : cap_(cap_letters) {
        store_bits_ = ((cap_ + 127) / 128) * 128;
        if (store_bits_ < 256)
            store_bits_ = 256;
        words_.assign(store_bits_ / 64, 0);
        bootstrap();
    }

    uint64_t capacity() const { return cap_; }
    uint64_t size() const { return published_.load(std::memory_order_acquire); }

    // Grows the published prefix to cover at least n letters.
    void ensure(uint64_t n) {
        if (n <= size())
            return;
        if (n > cap_)
            throw std::length_error(
                "prefix cap exceeded: need " + std::to_string(n) + " letters, cap is " +
                std::to_string(cap_) + " (set PDSHIFT_MAX_PREFIX to raise it)");
        std::lock_guard<std::mutex> lock(grow_mutex_);
        uint64_t len = published_.load(std::memory_order_relaxed);
        while (len < n) {
            uint64_t target = len * 2;
            if (target > store_bits_)
                target = store_bits_;
            extend(len, target);
            len = target;
            published_.store(len, std::memory_order_release);
        }
    }

    // 1-based letter, i <= size() required.
    bool bit(uint64_t i) const { return bits::get(words_.data(), i - 1) != 0; }

    // The m-letter window starting at 1-based position i, for m <= 64.
    uint64_t window_bits(uint64_t i, unsigned m) const {
        return bits::extract64(words_.data(), i - 1, m);
    }

    void extract(uint64_t i, uint64_t m, uint64_t* dst) const {
        bits::copy(words_.data(), i - 1, m, dst);
    }

    Word window_word(uint64_t i, uint64_t m) const {
        return Word::from_packed(words_.data(), i - 1, m);
    }

    bool windows_equal(uint64_t i, uint64_t j, uint64_t m) const {
        if (i == j || m == 0)
            return true;
        return bits::equal(words_.data(), i - 1, words_.data(), j - 1, m);
    }

    // First offset h in [1, limit] with w_{i+h-1} != w_{j+h-1}, or 0 if the
    // windows agree on the whole range.
    uint64_t window_mismatch(uint64_t i, uint64_t j, uint64_t limit) const {
        const uint64_t off = bits::mismatch(words_.data(), i - 1, words_.data(), j - 1, limit);
        return off == limit ? 0 : off + 1;
    }

    uint64_t window_hash(uint64_t i, uint64_t m) const {
        return bits::hash_range(words_.data(), i - 1, m);
    }

    bool window_equals(uint64_t i, const Word& u) const {
        if (u.empty())
            return true;
        return bits::equal(words_.data(), i - 1, u.packed().data(), 0, u.size());
    }

private:
    // First 128 letters via the plain letter-by-letter substitution.
    void bootstrap() {
        std::vector<uint8_t> v{0};
        while (v.size() < 128) {
            std::vector<uint8_t> nv;
            nv.reserve(2 * v.size());
            for (uint8_t b : v) {
                nv.push_back(0);
                nv.push_back(uint8_t(1 - b));
            }
            v = std::move(nv);
        }
        for (uint64_t t = 0; t < 128; ++t)
            bits::set(words_.data(), t, v[t]);
        published_.store(128, std::memory_order_release);
    }

    // Writes letters (len, target] as the substitution image of letters
    // (len/2, target/2].  len and target are multiples of 128, so the write
    // range never shares a storage word with published data.
    void extend(uint64_t len, uint64_t target) {
        const auto& lut = detail::zeta_byte_lut();
        for (uint64_t iw = len / 128; iw < target / 128; ++iw) {
            const uint64_t in = words_[iw];
            uint64_t lo = 0, hi = 0;
            lo |= uint64_t(lut[(in >> 0) & 0xff]) << 0;
            lo |= uint64_t(lut[(in >> 8) & 0xff]) << 16;
            lo |= uint64_t(lut[(in >> 16) & 0xff]) << 32;
            lo |= uint64_t(lut[(in >> 24) & 0xff]) << 48;
            hi |= uint64_t(lut[(in >> 32) & 0xff]) << 0;
            hi |= uint64_t(lut[(in >> 40) & 0xff]) << 16;
            hi |= uint64_t(lut[(in >> 48) & 0xff]) << 32;
            hi |= uint64_t(lut[(in >> 56) & 0xff]) << 48;
            words_[2 * iw] = lo;
            words_[2 * iw + 1] = hi;
        }
    }

    uint64_t cap_;
    uint64_t store_bits_;
    std::vector<uint64_t> words_;
    std::atomic<uint64_t> published_{0};
    std::mutex grow_mutex_;
};

// Process-wide cache shared by the window-based operations.
inline PrefixCache& omega() {
    static PrefixCache cache(prefix_cap_from_env());
    return cache;
}

}  // namespace pdshift
