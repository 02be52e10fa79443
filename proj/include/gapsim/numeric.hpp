#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <string>
#include <vector>

#include "gapsim/errors.hpp"

namespace gapsim {

using BigInt = boost::multiprecision::cpp_int;

inline BigInt pow_big(unsigned base, std::uint64_t exponent) {
    if (exponent > std::numeric_limits<unsigned>::max())
        throw ResourceError("exponent too large: " + std::to_string(exponent));
    return boost::multiprecision::pow(BigInt(base), static_cast<unsigned>(exponent));
}

inline BigInt pow5(std::uint64_t e) { return pow_big(5, e); }
inline BigInt pow2(std::uint64_t e) { return pow_big(2, e); }

inline std::string to_decimal(const BigInt& v) { return v.str(); }

/// Polynomial with nonnegative integer coefficients, lowest degree first.
/// Used for running times t(m), error exponents q(m) and budgets p(n).
class Polynomial {
public:
    Polynomial() = default;
    Polynomial(std::initializer_list<std::uint64_t> coeffs) : coeffs_(coeffs) {}
    explicit Polynomial(std::vector<std::uint64_t> coeffs) : coeffs_(std::move(coeffs)) {}

    static Polynomial constant(std::uint64_t c) { return Polynomial{c}; }

    /// Horner evaluation; throws ResourceError on 64-bit overflow.
    std::uint64_t operator()(std::uint64_t x) const {
        constexpr auto max = std::numeric_limits<std::uint64_t>::max();
        std::uint64_t acc = 0;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
            if (x != 0 && acc > max / x)
                throw ResourceError("polynomial evaluation overflow");
            acc *= x;
            if (acc > max - *it)
                throw ResourceError("polynomial evaluation overflow");
            acc += *it;
        }
        return acc;
    }

    const std::vector<std::uint64_t>& coefficients() const { return coeffs_; }

    bool operator==(const Polynomial& other) const { return trimmed() == other.trimmed(); }

private:
    std::vector<std::uint64_t> trimmed() const {
        auto c = coeffs_;
        while (!c.empty() && c.back() == 0) c.pop_back();
        return c;
    }

    std::vector<std::uint64_t> coeffs_;
};

/// Exact nonnegative rational. Never reduced; comparisons cross-multiply.
struct Fraction {
    BigInt num{0};
    BigInt den{1};

    Fraction() = default;
    Fraction(BigInt n, BigInt d) : num(std::move(n)), den(std::move(d)) {
        if (den <= 0) throw DomainError("fraction denominator must be positive");
    }

    friend bool operator==(const Fraction& a, const Fraction& b) {
        return a.num * b.den == b.num * a.den;
    }
    friend std::strong_ordering operator<=>(const Fraction& a, const Fraction& b) {
        const BigInt lhs = a.num * b.den;
        const BigInt rhs = b.num * a.den;
        if (lhs < rhs) return std::strong_ordering::less;
        if (lhs > rhs) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string str() const { return num.str() + "/" + den.str(); }
};

/// |a/d - b/d| as a fraction over the shared denominator d.
inline Fraction abs_difference(const BigInt& a, const BigInt& b, const BigInt& d) {
    return Fraction(a > b ? BigInt(a - b) : BigInt(b - a), d);
}

/// Parses "NUM/DEN" (or a bare integer) into a Fraction.
inline Fraction parse_fraction(const std::string& text) {
    const auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return Fraction(BigInt(text), 1);
        return Fraction(BigInt(text.substr(0, slash)), BigInt(text.substr(slash + 1)));
    } catch (const std::runtime_error&) {
        throw ParseError("malformed fraction: " + text);
    }
}

} // namespace gapsim
