#ifndef NJC_RATIONAL_HPP
#define NJC_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <string>

#include "njc/common.hpp"

namespace njc {

// Exact arithmetic layer. cpp_rational keeps values canonical (reduced,
// positive denominator), which is exactly the invariant the artifact needs.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& q) { return q.template convert_to<double>(); }

/// Exact conversion: every finite double is a dyadic rational.
inline Rational rational_from_double(double x) {
    if (!std::isfinite(x)) throw ContractViolation("rational_from_double: non-finite input");
    if (x == 0.0) return Rational(0);
    int exp = 0;
    const double mant = std::frexp(x, &exp);           // |mant| in [0.5, 1)
    const auto m = static_cast<long long>(std::ldexp(mant, 53));  // 53-bit integer
    exp -= 53;
    Rational r(m);
    if (exp >= 0) {
        r *= Rational(BigInt(1) << exp);
    } else {
        r /= Rational(BigInt(1) << -exp);
    }
    return r;
}

/// Parses "p/q", an integer, or a plain decimal such as "-1.25" (all exact).
inline Rational parse_rational(const std::string& text) {
    const auto bad = [&] { return ContractViolation("parse_rational: cannot parse '" + text + "'"); };
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) throw bad();

    const auto slash = s.find('/');
    if (slash != std::string::npos) {
        const std::string num = s.substr(0, slash), den = s.substr(slash + 1);
        if (num.empty() || den.empty()) throw bad();
        try {
            BigInt n(num), d(den);
            if (d == 0) throw bad();
            return Rational(n, d);
        } catch (const ContractViolation&) {
            throw;
        } catch (const std::exception&) {
            throw bad();
        }
    }

    bool neg = false;
    std::size_t i = 0;
    if (s[i] == '+' || s[i] == '-') neg = (s[i++] == '-');
    std::string digits;
    std::size_t frac_len = 0;
    bool seen_dot = false, seen_digit = false;
    for (; i < s.size(); ++i) {
        if (s[i] == '.') {
            if (seen_dot) throw bad();
            seen_dot = true;
        } else if (std::isdigit(static_cast<unsigned char>(s[i]))) {
            digits.push_back(s[i]);
            seen_digit = true;
            if (seen_dot) ++frac_len;
        } else {
            throw bad();
        }
    }
    if (!seen_digit) throw bad();
    BigInt n(digits);
    if (neg) n = -n;
    BigInt d = 1;
    for (std::size_t k = 0; k < frac_len; ++k) d *= 10;
    return Rational(n, d);
}

/// Serializes as "p/q" ("p" when the denominator is 1).
inline std::string to_fraction_string(const Rational& q) {
    const BigInt n = numerator(q), d = denominator(q);
    if (d == 1) return n.str();
    return n.str() + "/" + d.str();
}

}  // namespace njc

#endif  // NJC_RATIONAL_HPP
