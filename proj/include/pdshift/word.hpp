#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pdshift/bitops.hpp"

namespace pdshift {

// A letter of the binary alphabet {0, 1}.
class Symbol {
public:
    constexpr Symbol() = default;
    constexpr explicit Symbol(unsigned v) : v_(static_cast<uint8_t>(v)) {
        if (v > 1)
            throw std::invalid_argument("Symbol value must be 0 or 1");
    }

    static constexpr Symbol zero() { return Symbol(0u); }
    static constexpr Symbol one() { return Symbol(1u); }

    constexpr unsigned value() const { return v_; }
    constexpr Symbol flipped() const { return Symbol(1u - v_); }
    char to_char() const { return v_ ? '1' : '0'; }

    friend constexpr bool operator==(Symbol, Symbol) = default;

private:
    uint8_t v_ = 0;
};

// A finite binary word, bit-packed LSB-first with an explicit length.
// Unused high bits of the last storage word are kept zero, so equality and
// hashing can work on the raw storage.
class Word {
public:
    Word() = default;

    // Builds a word from a string of '0'/'1' characters.
    explicit Word(std::string_view s) {
        reserve(s.size());
        for (char c : s) {
            if (c != '0' && c != '1')
                throw std::invalid_argument("word string must consist of 0s and 1s");
            push_back(Symbol(c == '1' ? 1u : 0u));
        }
    }

    // Builds a word from len bits starting at bit spos of a packed array.
    static Word from_packed(const uint64_t* src, uint64_t spos, uint64_t len) {
        Word out;
        out.len_ = len;
        out.words_.assign((len + 63) / 64, 0);
        if (len > 0)
            bits::copy(src, spos, len, out.words_.data());
        return out;
    }

    uint64_t size() const { return len_; }
    bool empty() const { return len_ == 0; }

    void reserve(uint64_t n) { words_.reserve((n + 63) / 64); }

    void push_back(Symbol s) {
        if ((len_ & 63) == 0)
            words_.push_back(0);
        if (s.value())
            words_.back() |= uint64_t(1) << (len_ & 63);
        ++len_;
    }

    // 0-based letter access.
    Symbol operator[](uint64_t pos) const {
        return Symbol(unsigned(bits::get(words_.data(), pos)));
    }

    void append(const Word& other) {
        for (uint64_t t = 0; t < other.len_; ++t)
            push_back(other[t]);
    }

    Word subword(uint64_t pos, uint64_t len) const {
        if (pos + len > len_)
            throw std::out_of_range("subword out of range");
        Word out;
        out.len_ = len;
        out.words_.assign((len + 63) / 64, 0);
        if (len > 0)
            bits::copy(words_.data(), pos, len, out.words_.data());
        return out;
    }

    std::string str() const {
        std::string s;
        s.reserve(len_);
        for (uint64_t t = 0; t < len_; ++t)
            s.push_back((*this)[t].to_char());
        return s;
    }

    std::span<const uint64_t> packed() const { return words_; }

    // The whole word as one machine word; only valid for size() <= 64.
    uint64_t low_bits() const { return words_.empty() ? 0 : words_[0]; }

    uint64_t hash() const {
        if (len_ == 0)
            return 0x9e3779b97f4a7c15ull;
        return bits::hash_range(words_.data(), 0, len_);
    }

    friend bool operator==(const Word& a, const Word& b) {
        return a.len_ == b.len_ && a.words_ == b.words_;
    }

    struct Hasher {
        size_t operator()(const Word& w) const { return size_t(w.hash()); }
    };

private:
    std::vector<uint64_t> words_;
    uint64_t len_ = 0;
};

inline Word operator+(const Word& a, const Word& b) {
    Word out = a;
    out.reserve(a.size() + b.size());
    out.append(b);
    return out;
}

}  // namespace pdshift
