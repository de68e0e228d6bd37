#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "pdshift/error.hpp"
#include "pdshift/language.hpp"
#include "pdshift/measure.hpp"
#include "pdshift/rational.hpp"
#include "pdshift/sequence.hpp"

// Metric structure of the subshift: dyadic resolution of a distance
// threshold, correlation integral and correlation sums, Bowen-rescaled
// sums, recurrence rate, determinism, and the embedded variants.

namespace pdshift {

// A distance threshold.  Exact rational, strictly positive.
struct Epsilon {
    Rational value;

    explicit Epsilon(Rational v) : value(std::move(v)) {
        if (value <= 0)
            throw std::invalid_argument("epsilon must be positive");
    }

    // The threshold 2^-m.
    static Epsilon dyadic(long m) { return Epsilon(pow2(-m)); }
};

// The resolution index: 0 for eps >= 1, otherwise the unique m >= 1 with
// 2^-m <= eps < 2^-(m-1).  Exact integer comparisons throughout.
inline uint64_t m_epsilon(const Epsilon& eps) {
    const BigInt& a = eps.value.get_num();
    const BigInt& b = eps.value.get_den();
    if (a >= b)
        return 0;
    const uint64_t la = mpz_sizeinbase(a.get_mpz_t(), 2);
    const uint64_t lb = mpz_sizeinbase(b.get_mpz_t(), 2);
    const uint64_t m0 = lb - la;  // smallest candidate: a * 2^m0 has b's bit length
    BigInt shifted;
    mpz_mul_2exp(shifted.get_mpz_t(), a.get_mpz_t(), static_cast<mp_bitcnt_t>(m0));
    return shifted >= b ? m0 : m0 + 1;
}

// Whether the orbit points at 1-based positions i and j are within 2^-m of
// each other, i.e. whether the m-windows at i and j coincide.
inline bool scale_match(uint64_t i, uint64_t j, uint64_t m) {
    if (i == 0 || j == 0)
        throw std::invalid_argument("scale_match requires positive positions");
    if (m == 0 || i == j)
        return true;
    auto& om = omega();
    om.ensure(std::max(i, j) + m - 1);
    return om.windows_equal(i, j, m);
}

// Closed form of the correlation integral at resolution m_eps:
//   1                                   m_eps = 0,
//   5/9                                 m_eps = 1,
//   (3*2^(k+1) - 4q) / (3*2^k)^2        m_eps = 2^k + q, 2q <  2^k,
//   (5*2^k   - 2q) / (3*2^k)^2          m_eps = 2^k + q, 2q >= 2^k.
inline Rational correlation_integral(uint64_t m_eps) {
    if (m_eps == 0)
        return Rational(1);
    if (m_eps == 1)
        return make_rational(5, 9);
    const auto [m, k, q] = decompose(m_eps);
    const BigInt p2k = pow2_int(k);
    const BigInt qq(static_cast<unsigned long>(q));
    BigInt num;
    if (2 * qq < p2k)
        num = 6 * p2k - 4 * qq;
    else
        num = 5 * p2k - 2 * qq;
    return make_rational(num, 9 * p2k * p2k);
}

// The same quantity computed as the sum of squared cylinder measures over
// the actual measure table.
inline Rational correlation_integral_from_measure(uint64_t m_eps) {
    if (m_eps == 0)
        throw std::invalid_argument("correlation_integral_from_measure requires m_eps >= 1");
    const MeasureTable table = measure_table(m_eps);
    Rational s(0);
    for (const auto& row : table.rows)
        s += row.value * row.value;
    return s;
}

namespace detail {

// Sum of squared multiplicities of the m-windows among positions 1..n,
// computed by counting, never by pairwise comparison.
inline BigInt window_pair_count(uint64_t n, uint64_t m) {
    auto& om = omega();
    om.ensure(n + m - 1);
    BigInt pairs(0);
    auto add_runs = [&pairs](auto first, auto last, auto same) {
        auto run = first;
        while (run != last) {
            auto next = run + 1;
            while (next != last && same(*run, *next))
                ++next;
            const uint64_t c = uint64_t(next - run);
            pairs += BigInt(static_cast<unsigned long>(c)) * static_cast<unsigned long>(c);
            run = next;
        }
    };
    if (m <= 64) {
        std::vector<uint64_t> keys(n);
        for (uint64_t i = 1; i <= n; ++i)
            keys[i - 1] = om.window_bits(i, unsigned(m));
        std::sort(keys.begin(), keys.end());
        add_runs(keys.begin(), keys.end(), [](uint64_t a, uint64_t b) { return a == b; });
    } else {
        std::vector<uint64_t> idx(n);
        for (uint64_t i = 0; i < n; ++i)
            idx[i] = i + 1;
        std::sort(idx.begin(), idx.end(), [&](uint64_t a, uint64_t b) {
            const uint64_t h = om.window_mismatch(a, b, m);
            if (h == 0)
                return a < b;
            return !om.bit(a + h - 1);  // the window with bit 0 first is smaller
        });
        add_runs(idx.begin(), idx.end(),
                 [&](uint64_t a, uint64_t b) { return om.windows_equal(a, b, m); });
    }
    return pairs;
}

}  // namespace detail

// Empirical correlation sum C(n, eps) at resolution m_eps: the fraction of
// ordered window pairs (i, j), 1 <= i, j <= n, sharing their first m_eps
// letters.
inline Rational correlation_sum(uint64_t n, uint64_t m_eps) {
    if (n == 0)
        throw std::invalid_argument("correlation_sum requires n >= 1");
    if (m_eps == 0)
        return Rational(1);
    const BigInt pairs = detail::window_pair_count(n, m_eps);
    const BigInt total = BigInt(static_cast<unsigned long>(n)) * static_cast<unsigned long>(n);
    return make_rational(pairs, total);
}

// Correlation sum in the Bowen metric over ell consecutive shifts.  The
// Bowen distance never exceeds 1, so any eps >= 1 captures all pairs; below
// 1 it is a pure rescaling of the base metric by 2^(ell-1).
inline Rational bowen_correlation_sum(uint64_t ell, uint64_t n, const Epsilon& eps) {
    if (ell == 0)
        throw std::invalid_argument("bowen_correlation_sum requires ell >= 1");
    if (eps.value >= 1)
        return Rational(1);
    return correlation_sum(n, m_epsilon(eps) + ell - 1);
}

// Limit recurrence rate.  For m_eps >= 1 and (m_eps, ell) != (1, 1), with
// m_eps + ell - 1 = 2^k + q:
//   (3*2^(k+1) - 4q + 4ell - 4) / (3*2^k)^2   for 2q <  2^k,
//   (5*2^k    - 2q + 2ell - 2) / (3*2^k)^2    for 2q >= 2^k.
inline Rational recurrence_rate(uint64_t ell, const Epsilon& eps) {
    if (ell == 0)
        throw std::invalid_argument("recurrence_rate requires ell >= 1");
    const uint64_t m = m_epsilon(eps);
    if (m == 0)
        return Rational(1);
    if (m == 1 && ell == 1)
        return make_rational(5, 9);
    const auto [mm, k, q] = decompose(m + ell - 1);
    const BigInt p2k = pow2_int(k);
    const BigInt qq(static_cast<unsigned long>(q));
    const BigInt extra = 2 * (BigInt(static_cast<unsigned long>(ell)) - 1);
    BigInt num;
    if (2 * qq < p2k)
        num = 6 * p2k - 4 * qq + 2 * extra;
    else
        num = 5 * p2k - 2 * qq + extra;
    return make_rational(num, 9 * p2k * p2k);
}

// Finite-trajectory recurrence rate via the correlation-sum combination
// RR_ell = ell * C_ell - (ell - 1) * C_(ell+1).
inline Rational recurrence_rate_empirical(uint64_t ell, uint64_t n, const Epsilon& eps) {
    if (ell == 0)
        throw std::invalid_argument("recurrence_rate_empirical requires ell >= 1");
    const Rational c_ell = bowen_correlation_sum(ell, n, eps);
    const Rational c_next = bowen_correlation_sum(ell + 1, n, eps);
    const Rational l(static_cast<unsigned long>(ell));
    return l * c_ell - (l - 1) * c_next;
}

// DET_ell = RR_ell / RR_1; always in (0, 1].
inline Rational determinism(uint64_t ell, const Epsilon& eps) {
    if (ell < 2)
        throw std::invalid_argument("determinism requires ell >= 2");
    return recurrence_rate(ell, eps) / recurrence_rate(1, eps);
}

// DET_ell = 1 exactly when (a) eps >= 1, or the whole stretch
// [m_eps, m_eps + ell - 1] stays inside one half of a dyadic block:
// (b) 2^k <= m_eps and m_eps + ell - 1 < 3*2^(k-1), or
// (c) 3*2^(k-1) <= m_eps and m_eps + ell - 1 < 2^(k+1), for some k >= 1.
inline bool determinism_is_one(uint64_t ell, const Epsilon& eps) {
    if (ell < 2)
        throw std::invalid_argument("determinism_is_one requires ell >= 2");
    const uint64_t m = m_epsilon(eps);
    if (m == 0)
        return true;
    if (m == 1)
        return false;  // no k >= 1 admits 2^k <= 1
    const auto [mm, k, q] = decompose(m);
    const uint64_t p2k = uint64_t(1) << k;
    const uint64_t reach = m + ell - 1;
    if (2 * q < p2k)
        return reach < 3 * (p2k / 2);
    return reach < 2 * p2k;
}

enum class CintClass { lower_tight, upper_tight, interior };

struct CintBounds {
    Rational lower;
    Rational upper;
    CintClass cls;
};

// 2/(3 m_eps) <= c <= 25/(36 m_eps) for m_eps >= 2.  The lower bound is
// attained exactly at m_eps in {2^k, 3*2^(k-1)}, the upper bound exactly at
// m_eps = 5*2^(k-2).
inline CintBounds cint_bounds(uint64_t m_eps) {
    if (m_eps < 2)
        throw std::invalid_argument("cint_bounds requires m_eps >= 2");
    const auto [m, k, q] = decompose(m_eps);
    const uint64_t p2k = uint64_t(1) << k;
    CintClass cls = CintClass::interior;
    if (q == 0 || 2 * q == p2k)
        cls = CintClass::lower_tight;
    else if (4 * q == p2k)
        cls = CintClass::upper_tight;
    const BigInt me(static_cast<unsigned long>(m_eps));
    return {make_rational(BigInt(2), 3 * me), make_rational(BigInt(25), 36 * me), cls};
}

// Embedding into d-blocks shifts the effective resolution by d - 1.
inline Rational embedded_rr(uint64_t d, uint64_t ell, const Epsilon& eps) {
    if (d == 0)
        throw std::invalid_argument("embedded_rr requires d >= 1");
    return recurrence_rate(ell, Epsilon(eps.value * pow2(-long(d - 1))));
}

inline Rational embedded_det(uint64_t d, uint64_t ell, const Epsilon& eps) {
    if (ell < 2)
        throw std::invalid_argument("embedded_det requires ell >= 2");
    return embedded_rr(d, ell, eps) / embedded_rr(d, 1, eps);
}

}  // namespace pdshift
