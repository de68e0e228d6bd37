#pragma once

#include <bit>
#include <cstdint>

// Low-level helpers for LSB-first packed bit ranges.  Bit t of a range lives
// at word[t / 64], bit position t % 64.  Callers guarantee that any word
// touched by a range actually exists in the backing array.

namespace pdshift::bits {

inline uint64_t get(const uint64_t* w, uint64_t pos) {
    return (w[pos >> 6] >> (pos & 63)) & 1u;
}

inline void set(uint64_t* w, uint64_t pos, uint64_t b) {
    const uint64_t mask = uint64_t(1) << (pos & 63);
    if (b)
        w[pos >> 6] |= mask;
    else
        w[pos >> 6] &= ~mask;
}

// Extracts len bits (1 <= len <= 64) starting at bit pos.
inline uint64_t extract64(const uint64_t* w, uint64_t pos, unsigned len) {
    const uint64_t wi = pos >> 6;
    const unsigned off = unsigned(pos & 63);
    uint64_t v = w[wi] >> off;
    if (off + len > 64)
        v |= w[wi + 1] << (64 - off);
    if (len < 64)
        v &= (uint64_t(1) << len) - 1;
    return v;
}

// Copies len bits starting at src bit spos into dst starting at dst bit 0.
// dst must hold at least ceil(len / 64) words; unused high bits are zeroed.
inline void copy(const uint64_t* src, uint64_t spos, uint64_t len, uint64_t* dst) {
    uint64_t done = 0;
    while (done < len) {
        const unsigned chunk = unsigned(len - done < 64 ? len - done : 64);
        dst[done >> 6] = extract64(src, spos + done, chunk);
        done += chunk;
    }
}

// Offset (0-based) of the first differing bit between two ranges of length
// len, or len if the ranges are equal.
inline uint64_t mismatch(const uint64_t* a, uint64_t apos,
                         const uint64_t* b, uint64_t bpos, uint64_t len) {
    uint64_t done = 0;
    while (done < len) {
        const unsigned chunk = unsigned(len - done < 64 ? len - done : 64);
        const uint64_t av = extract64(a, apos + done, chunk);
        const uint64_t bv = extract64(b, bpos + done, chunk);
        if (av != bv)
            return done + std::countr_zero(av ^ bv);
        done += chunk;
    }
    return len;
}

inline bool equal(const uint64_t* a, uint64_t apos,
                  const uint64_t* b, uint64_t bpos, uint64_t len) {
    return mismatch(a, apos, b, bpos, len) == len;
}

// Mixes a bit range into a 64-bit hash, one storage word at a time.  Matches
// are always confirmed by exact comparison, so hash quality only affects the
// number of confirmations, never correctness.
inline uint64_t hash_range(const uint64_t* w, uint64_t pos, uint64_t len) {
    uint64_t h = 0x9e3779b97f4a7c15ull ^ (len * 0xff51afd7ed558ccdull);
    uint64_t done = 0;
    while (done < len) {
        const unsigned chunk = unsigned(len - done < 64 ? len - done : 64);
        uint64_t v = extract64(w, pos + done, chunk);
        v *= 0xff51afd7ed558ccdull;
        v ^= v >> 33;
        v *= 0xc4ceb9fe1a85ec53ull;
        h ^= v;
        h *= 0x2545f4914f6cdd1dull;
        h ^= h >> 29;
        done += chunk;
    }
    return h;
}

}  // namespace pdshift::bits
