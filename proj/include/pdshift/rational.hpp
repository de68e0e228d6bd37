#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace pdshift {

// All measures, correlation integrals and RQA values are exact rationals.
// GMP's canonical mpq keeps them reduced with a positive denominator, which
// is exactly the contract the rest of the library relies on.
using BigInt = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(const BigInt& num, const BigInt& den) {
    if (den == 0)
        throw std::invalid_argument("rational with zero denominator");
    Rational q(num);
    q /= Rational(den);
    return q;
}

inline Rational make_rational(uint64_t num, uint64_t den) {
    return make_rational(BigInt(static_cast<unsigned long>(num)),
                         BigInt(static_cast<unsigned long>(den)));
}

inline BigInt pow2_int(uint64_t e) {
    return BigInt(1) << static_cast<unsigned long>(e);
}

// 2^e for any integer e, as an exact rational.
inline Rational pow2(long e) {
    if (e >= 0)
        return Rational(pow2_int(uint64_t(e)));
    return make_rational(BigInt(1), pow2_int(uint64_t(-e)));
}

inline std::string num_str(const Rational& q) { return q.get_num().get_str(); }
inline std::string den_str(const Rational& q) { return q.get_den().get_str(); }

namespace detail {

inline BigInt parse_int(std::string_view s) {
    if (s.empty())
        throw std::invalid_argument("empty integer literal");
    try {
        return BigInt(std::string(s), 10);
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("bad integer literal: " + std::string(s));
    }
}

}  // namespace detail

// Accepts "a/b", a decimal string like "0.125", a plain integer, or a dyadic
// power "2^-7" / "2^3".  Every form is converted exactly.
inline Rational parse_rational(std::string_view text) {
    if (text.empty())
        throw std::invalid_argument("empty rational literal");

    if (text.size() > 2 && text[0] == '2' && text[1] == '^') {
        const std::string exp(text.substr(2));
        size_t used = 0;
        long e = std::stol(exp, &used);
        if (used != exp.size())
            throw std::invalid_argument("bad exponent in: " + std::string(text));
        return pow2(e);
    }

    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        const BigInt num = detail::parse_int(text.substr(0, slash));
        const BigInt den = detail::parse_int(text.substr(slash + 1));
        return make_rational(num, den);
    }

    if (auto dot = text.find('.'); dot != std::string_view::npos) {
        bool negative = false;
        std::string_view body = text;
        if (!body.empty() && (body[0] == '-' || body[0] == '+')) {
            negative = body[0] == '-';
            body.remove_prefix(1);
            dot -= 1;
        }
        const std::string_view ip = body.substr(0, dot);
        const std::string_view fp = body.substr(dot + 1);
        const BigInt int_part = ip.empty() ? BigInt(0) : detail::parse_int(ip);
        const BigInt frac_part = fp.empty() ? BigInt(0) : detail::parse_int(fp);
        if (int_part < 0 || frac_part < 0)
            throw std::invalid_argument("bad decimal literal: " + std::string(text));
        BigInt den = 1;
        for (size_t i = 0; i < fp.size(); ++i)
            den *= 10;
        BigInt num = int_part * den + frac_part;
        if (negative)
            num = -num;
        return make_rational(num, den);
    }

    return Rational(detail::parse_int(text));
}

}  // namespace pdshift
