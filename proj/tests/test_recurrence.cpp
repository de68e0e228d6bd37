#include <catch2/catch.hpp>

#include <vector>

#include "pdshift/recurrence.hpp"
#include "support/embedded_empirical.hpp"
#include "support/exact.hpp"
#include "support/window_oracle.hpp"

using namespace pdshift;

TEST_CASE("dyadic resolution index") {
    CHECK(m_epsilon(Epsilon(Rational(1))) == 0);
    CHECK(m_epsilon(Epsilon(Rational(7))) == 0);
    CHECK(m_epsilon(Epsilon(make_rational(1, 2))) == 1);
    CHECK(m_epsilon(Epsilon(make_rational(3, 10))) == 2);
    CHECK(m_epsilon(Epsilon(make_rational(1, 4))) == 2);
    CHECK(m_epsilon(Epsilon(make_rational(99, 100))) == 1);
    CHECK_THROWS_AS(Epsilon(Rational(0)), std::invalid_argument);
    CHECK_THROWS_AS(Epsilon(Rational(-1)), std::invalid_argument);
    for (long m = 0; m <= 2048; m += 37)
        REQUIRE(m_epsilon(Epsilon::dyadic(m)) == uint64_t(m));
}

TEST_CASE("scale match is window equality") {
    CHECK(scale_match(1, 5, 3));
    CHECK_FALSE(scale_match(1, 2, 1));
    CHECK(scale_match(7, 7, 12));
    CHECK(scale_match(1, 2, 0));
    CHECK_THROWS_AS(scale_match(0, 1, 1), std::invalid_argument);
}

TEST_CASE("metric consistency against the brute-force oracle") {
    const auto& o = oracle::shared();
    uint64_t state = 0x243f6a8885a308d3ull;
    for (int t = 0; t < 4000; ++t) {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        const uint64_t i = (state >> 13) % (3 * 1024) + 1;
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        const uint64_t j = (state >> 13) % (3 * 1024) + 1;
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        const uint64_t m = (state >> 13) % 64 + 1;
        REQUIRE(scale_match(i, j, m) == o.windows_equal(i, j, m));
    }
}

TEST_CASE("correlation integral closed form") {
    CHECK(correlation_integral(0) == 1);
    CHECK(correlation_integral(1) == make_rational(5, 9));
    CHECK(correlation_integral(2) == make_rational(1, 3));
    for (uint64_t m = 1; m <= 256; ++m)
        REQUIRE(correlation_integral(m) == correlation_integral_from_measure(m));
}

TEST_CASE("correlation integral bounds and tightness") {
    auto b2 = cint_bounds(2);
    CHECK(b2.cls == CintClass::lower_tight);
    CHECK(correlation_integral(2) == b2.lower);
    auto b5 = cint_bounds(5);
    CHECK(b5.cls == CintClass::upper_tight);
    CHECK(correlation_integral(5) == b5.upper);
    CHECK(b5.upper == make_rational(5, 36));
    auto b6 = cint_bounds(6);
    CHECK(b6.cls == CintClass::lower_tight);
    CHECK(correlation_integral(6) == make_rational(1, 9));

    for (uint64_t m = 2; m <= 4096; ++m) {
        const auto b = cint_bounds(m);
        const Rational c = correlation_integral(m);
        REQUIRE(b.lower <= c);
        REQUIRE(c <= b.upper);
        REQUIRE((c == b.lower) == (b.cls == CintClass::lower_tight));
        REQUIRE((c == b.upper) == (b.cls == CintClass::upper_tight));
    }
    CHECK_THROWS_AS(cint_bounds(1), std::invalid_argument);
}

TEST_CASE("correlation sums by multiplicity counting") {
    CHECK(correlation_sum(1, 0) == 1);
    CHECK(correlation_sum(77, 0) == 1);
    CHECK(correlation_sum(4, 1) == make_rational(10, 16));
    CHECK(oracle::within(correlation_sum(uint64_t(1) << 16, 2), make_rational(1, 3),
                         make_rational(1, 1000)));
    CHECK_THROWS_AS(correlation_sum(0, 1), std::invalid_argument);
}

TEST_CASE("correlation sums for windows wider than a machine word") {
    const uint64_t n = 100, m = 100;
    // pairwise reference count
    uint64_t matches = 0;
    for (uint64_t i = 1; i <= n; ++i)
        for (uint64_t j = 1; j <= n; ++j)
            if (scale_match(i, j, m))
                ++matches;
    REQUIRE(correlation_sum(n, m) == make_rational(matches, n * n));

    const uint64_t n2 = 300, m2 = 130;
    matches = 0;
    for (uint64_t i = 1; i <= n2; ++i)
        for (uint64_t j = 1; j <= n2; ++j)
            if (scale_match(i, j, m2))
                ++matches;
    REQUIRE(correlation_sum(n2, m2) == make_rational(matches, n2 * n2));
}

TEST_CASE("bowen-metric correlation sums") {
    for (uint64_t n : {uint64_t(4), uint64_t(64)})
        for (long m = 0; m <= 6; ++m)
            REQUIRE(bowen_correlation_sum(1, n, Epsilon::dyadic(m)) ==
                    correlation_sum(n, uint64_t(m)));
    CHECK(bowen_correlation_sum(2, 4, Epsilon::dyadic(1)) == make_rational(6, 16));
    CHECK(bowen_correlation_sum(3, 16, Epsilon(Rational(4))) == 1);   // eps >= 2^(ell-1)
    CHECK(bowen_correlation_sum(2, 4, Epsilon::dyadic(0)) == 1);      // Bowen distance <= 1 always
    CHECK(bowen_correlation_sum(5, 9, Epsilon(make_rational(3, 2))) == 1);
}

TEST_CASE("recurrence rate closed form") {
    CHECK(recurrence_rate(1, Epsilon::dyadic(1)) == make_rational(5, 9));
    CHECK(recurrence_rate(2, Epsilon::dyadic(1)) == make_rational(4, 9));
    CHECK(recurrence_rate(7, Epsilon(Rational(1))) == 1);
    CHECK(recurrence_rate(1, Epsilon(Rational(3))) == 1);
    CHECK_THROWS_AS(recurrence_rate(0, Epsilon::dyadic(1)), std::invalid_argument);
}

TEST_CASE("recurrence rate equals the correlation-integral combination") {
    for (uint64_t ell = 1; ell <= 16; ++ell) {
        for (uint64_t m = 1; m <= 1024; ++m) {
            const Rational expect = Rational(static_cast<unsigned long>(ell)) * correlation_integral(m + ell - 1) -
                                    Rational(static_cast<unsigned long>(ell - 1)) * correlation_integral(m + ell);
            REQUIRE(recurrence_rate(ell, Epsilon::dyadic(long(m))) == expect);
        }
    }
}

TEST_CASE("empirical recurrence rate") {
    for (long m = 0; m <= 5; ++m)
        REQUIRE(recurrence_rate_empirical(1, 64, Epsilon::dyadic(m)) ==
                correlation_sum(64, uint64_t(m)));
    CHECK(recurrence_rate_empirical(2, 4, Epsilon::dyadic(0)) == 1);
    CHECK(oracle::within(recurrence_rate_empirical(2, uint64_t(1) << 16, Epsilon::dyadic(1)),
                         make_rational(4, 9), make_rational(1, 1000)));
}

TEST_CASE("determinism values and characterization") {
    CHECK(determinism(2, Epsilon::dyadic(1)) == make_rational(4, 5));
    CHECK(determinism(2, Epsilon::dyadic(12)) == 1);
    CHECK(determinism(5, Epsilon(Rational(2))) == 1);
    CHECK_THROWS_AS(determinism(1, Epsilon::dyadic(1)), std::invalid_argument);

    CHECK(determinism_is_one(2, Epsilon::dyadic(12)));
    CHECK_FALSE(determinism_is_one(2, Epsilon::dyadic(1)));
    CHECK(determinism_is_one(3, Epsilon(Rational(1))));

    for (uint64_t ell = 2; ell <= 16; ++ell) {
        for (uint64_t m = 1; m <= 1024; ++m) {
            const Epsilon eps = Epsilon::dyadic(long(m));
            const Rational det = determinism(ell, eps);
            REQUIRE(det > 0);
            REQUIRE(det <= 1);
            REQUIRE((det == 1) == determinism_is_one(ell, eps));
        }
    }
}

TEST_CASE("determinism tends to 1 as the threshold shrinks") {
    Rational prev_min(-1);
    for (unsigned k = 2; k <= 12; ++k) {
        Rational block_min(2);
        for (uint64_t m = uint64_t(1) << k; m < (uint64_t(1) << (k + 1)); ++m) {
            const Rational det = determinism(2, Epsilon::dyadic(long(m)));
            if (det < block_min)
                block_min = det;
        }
        REQUIRE(block_min >= 1 - make_rational(4, uint64_t(1) << k));
        REQUIRE(block_min >= prev_min);
        prev_min = block_min;
    }
}

TEST_CASE("determinism tends to 0 as the line length grows") {
    Rational prev(2);
    for (uint64_t ell = 2; ell <= 1024; ell *= 2) {
        const Rational det = determinism(ell, Epsilon::dyadic(1));
        REQUIRE(det < prev);
        prev = det;
    }
    REQUIRE(determinism(1024, Epsilon::dyadic(1)) < make_rational(1, 100));
}

TEST_CASE("embedded quantities are a scale shift") {
    for (uint64_t ell = 1; ell <= 4; ++ell)
        for (long m = 0; m <= 6; ++m)
            REQUIRE(embedded_rr(1, ell, Epsilon::dyadic(m)) ==
                    recurrence_rate(ell, Epsilon::dyadic(m)));
    CHECK(embedded_rr(2, 1, Epsilon::dyadic(0)) == recurrence_rate(1, Epsilon::dyadic(1)));
    CHECK(embedded_rr(2, 1, Epsilon::dyadic(0)) == make_rational(5, 9));
    CHECK(embedded_rr(3, 2, Epsilon::dyadic(1)) == recurrence_rate(2, Epsilon::dyadic(3)));
    CHECK(embedded_det(1, 2, Epsilon::dyadic(1)) == make_rational(4, 5));
    CHECK(embedded_det(2, 2, Epsilon::dyadic(0)) == determinism(2, Epsilon::dyadic(1)));
    CHECK_THROWS_AS(embedded_det(2, 1, Epsilon::dyadic(1)), std::invalid_argument);
}

TEST_CASE("embedded closed forms agree with the embedded-sequence computation") {
    const uint64_t n = uint64_t(1) << 13;
    const Rational tol = make_rational(1, 100);
    for (unsigned d = 1; d <= 3; ++d) {
        oracle::EmbeddedEmpirical emp(d, n + 16);
        for (uint64_t ell = 1; ell <= 3; ++ell) {
            for (uint64_t m = 1; m <= 4; ++m) {
                REQUIRE(oracle::within(embedded_rr(d, ell, Epsilon::dyadic(long(m))),
                                       emp.recurrence_rate(ell, n, m), tol));
                if (ell >= 2)
                    REQUIRE(oracle::within(embedded_det(d, ell, Epsilon::dyadic(long(m))),
                                           emp.determinism(ell, n, m), tol));
            }
        }
    }
}
