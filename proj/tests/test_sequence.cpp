#include <catch2/catch.hpp>

#include <atomic>
#include <stdexcept>
#include <thread>
#include <vector>

#include "pdshift/sequence.hpp"

using namespace pdshift;

TEST_CASE("letters follow the 2-adic valuation rule") {
    CHECK(letter(1) == Symbol::zero());
    CHECK(letter(2) == Symbol::one());
    CHECK(letter(3) == Symbol::zero());
    CHECK(letter(8) == Symbol::one());  // v2(8) = 3, odd
    CHECK_THROWS_AS(letter(0), std::invalid_argument);
}

TEST_CASE("the printed prefix is 0100 0101 0100 0100") {
    CHECK(prefix(16, GeneratorMethod::valuation).str() == "0100010101000100");
    CHECK(prefix(16, GeneratorMethod::toeplitz).str() == "0100010101000100");
    CHECK(prefix(8, GeneratorMethod::valuation).str() == "01000101");
    CHECK(prefix(8, GeneratorMethod::toeplitz).str() == "01000101");
    CHECK(prefix(0, GeneratorMethod::substitution).empty());
    CHECK(prefix(0, GeneratorMethod::toeplitz).empty());
}

TEST_CASE("the three constructions agree") {
    for (uint64_t n = 0; n <= 130; ++n) {
        const Word v = prefix(n, GeneratorMethod::valuation);
        CHECK(v == prefix(n, GeneratorMethod::substitution));
        CHECK(v == prefix(n, GeneratorMethod::toeplitz));
    }
    for (uint64_t n : {uint64_t(1024), uint64_t(65535), uint64_t(1) << 16}) {
        const Word v = prefix(n, GeneratorMethod::valuation);
        REQUIRE(v == prefix(n, GeneratorMethod::substitution));
        REQUIRE(v == prefix(n, GeneratorMethod::toeplitz));
    }
}

TEST_CASE("substitution morphism") {
    CHECK(substitution_image(Word("0")).str() == "01");
    CHECK(substitution_image(Word("1")).str() == "00");
    CHECK(substitution_image(Word()).empty());
    CHECK(substitution_image(Word("0100")) == prefix(8));
}

TEST_CASE("the sequence is a fixed point of the substitution") {
    for (uint64_t n = 0; n <= 2048; ++n)
        REQUIRE(substitution_image(prefix(n)) == prefix(2 * n));
    const uint64_t big = uint64_t(1) << 16;
    REQUIRE(substitution_image(prefix(big)) == prefix(2 * big));
}

TEST_CASE("blocks are substitution iterates of a letter") {
    CHECK(block(Symbol::zero(), 0).str() == "0");
    CHECK(block(Symbol::one(), 1).str() == "00");
    CHECK(block(Symbol::zero(), 2).str() == "0100");
    CHECK(block(Symbol::zero(), 2) == prefix(4));
}

TEST_CASE("block recursion: s^(2m) splits into blocks of half the length") {
    for (unsigned k = 0; k <= 12; ++k) {
        const Word b0 = block(Symbol::zero(), k);
        const Word b1 = block(Symbol::one(), k);
        REQUIRE(block(Symbol::zero(), k + 1) == b0 + b1);
        REQUIRE(block(Symbol::one(), k + 1) == b0 + b0);
    }
}

TEST_CASE("the two blocks differ exactly at the last letter") {
    for (unsigned k = 0; k <= 12; ++k) {
        const Word b0 = block(Symbol::zero(), k);
        const Word b1 = block(Symbol::one(), k);
        const uint64_t m = uint64_t(1) << k;
        REQUIRE(b0.size() == m);
        REQUIRE(b1.size() == m);
        REQUIRE(b0.subword(0, m - 1) == b1.subword(0, m - 1));
        if (k % 2 == 0) {
            CHECK(b0[m - 1] == Symbol::zero());
            CHECK(b1[m - 1] == Symbol::one());
        } else {
            CHECK(b0[m - 1] == Symbol::one());
            CHECK(b1[m - 1] == Symbol::zero());
        }
    }
}

TEST_CASE("the sequence decomposes into blocks steered by itself") {
    for (unsigned k = 0; k <= 8; ++k) {
        const uint64_t m = uint64_t(1) << k;
        const Word b0 = block(Symbol::zero(), k);
        const Word b1 = block(Symbol::one(), k);
        const Word pre = prefix(64 * m);
        for (uint64_t i = 1; i <= 64; ++i) {
            const Word chunk = pre.subword((i - 1) * m, m);
            REQUIRE(chunk == (letter(i) == Symbol::zero() ? b0 : b1));
        }
    }
}

TEST_CASE("odd positions carry the letter 0") {
    for (uint64_t i = 1; i <= (uint64_t(1) << 15); ++i)
        REQUIRE(letter(2 * i - 1) == Symbol::zero());
}

TEST_CASE("prefix cache grows under concurrent readers") {
    PrefixCache cache(uint64_t(1) << 21);
    std::atomic<bool> failed{false};
    auto reader = [&](unsigned seed) {
        uint64_t state = seed * 0x9e3779b9u + 1;
        for (unsigned round = 8; round <= 20; ++round) {
            const uint64_t n = uint64_t(1) << round;
            cache.ensure(n);
            for (int t = 0; t < 64; ++t) {
                state = state * 6364136223846793005ull + 1442695040888963407ull;
                const uint64_t i = (state >> 16) % n + 1;
                if (cache.bit(i) != (letter(i) == Symbol::one()))
                    failed = true;
            }
        }
    };
    std::vector<std::thread> threads;
    for (unsigned s = 1; s <= 4; ++s)
        threads.emplace_back(reader, s);
    for (auto& t : threads)
        t.join();
    CHECK_FALSE(failed.load());
}

TEST_CASE("prefix cache enforces its cap") {
    PrefixCache cache(uint64_t(1) << 12);
    CHECK_NOTHROW(cache.ensure(uint64_t(1) << 12));
    CHECK_THROWS_AS(cache.ensure((uint64_t(1) << 12) + 1), std::length_error);
    CHECK(cache.capacity() == uint64_t(1) << 12);
}

TEST_CASE("symbols validate their value") {
    CHECK_THROWS_AS(Symbol(2u), std::invalid_argument);
    CHECK(Symbol(1u).flipped() == Symbol::zero());
}
