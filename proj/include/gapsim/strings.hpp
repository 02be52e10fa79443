#pragma once

// Binary strings as natural numbers and the pairing of strings.
//
// A string x corresponds to the positive natural whose binary expansion is
// "1" followed by x, so "" -> 1, "0" -> 2, "1" -> 3, "00" -> 4 and so on.
// The index of a string is that natural minus one, which enumerates
// {0,1}* in length-then-lexicographic order starting from the empty string.
// Pairs of strings go through the Cantor pairing of their indices.

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gapsim/errors.hpp"
#include "gapsim/numeric.hpp"

namespace gapsim {

inline void require_binary(std::string_view s) {
    for (char c : s)
        if (c != '0' && c != '1')
            throw DecodeError("not a binary string: \"" + std::string(s) + "\"");
}

inline BigInt string_to_natural(std::string_view s) {
    require_binary(s);
    BigInt n = 1;
    for (char c : s) {
        n <<= 1;
        if (c == '1') n += 1;
    }
    return n;
}

inline std::string natural_to_string(const BigInt& n) {
    if (n < 1) throw DecodeError("strings correspond to positive naturals only");
    std::string bits;
    BigInt v = n;
    while (v > 1) {
        bits.push_back(static_cast<bool>(v & 1) ? '1' : '0');
        v >>= 1;
    }
    return {bits.rbegin(), bits.rend()};
}

inline BigInt string_index(std::string_view s) { return string_to_natural(s) - 1; }
inline std::string index_string(const BigInt& k) { return natural_to_string(k + 1); }

/// Index of s inside the fixed-length block of strings of length |s|.
inline std::uint64_t rank_within_length(std::string_view s) {
    require_binary(s);
    std::uint64_t r = 0;
    for (char c : s) r = (r << 1) | static_cast<std::uint64_t>(c == '1');
    return r;
}

inline std::string string_of_rank(std::uint64_t rank, std::size_t length) {
    std::string s(length, '0');
    for (std::size_t i = 0; i < length; ++i)
        if ((rank >> (length - 1 - i)) & 1U) s[i] = '1';
    return s;
}

inline std::vector<std::string> strings_of_length(std::size_t length) {
    if (length >= 32) throw ResourceError("refusing to enumerate strings of length " + std::to_string(length));
    std::vector<std::string> out;
    out.reserve(std::size_t{1} << length);
    for (std::uint64_t r = 0; r < (std::uint64_t{1} << length); ++r) out.push_back(string_of_rank(r, length));
    return out;
}

/// Every string of length <= max_length, in index order.
inline std::vector<std::string> strings_up_to(std::size_t max_length) {
    std::vector<std::string> out;
    for (std::size_t len = 0; len <= max_length; ++len) {
        auto block = strings_of_length(len);
        out.insert(out.end(), block.begin(), block.end());
    }
    return out;
}

inline std::string unary(std::size_t m) { return std::string(m, '1'); }

/// <x,y>: Cantor pairing on string indices, mapped back to a string.
inline std::string pair_strings(std::string_view x, std::string_view y) {
    const BigInt a = string_index(x);
    const BigInt b = string_index(y);
    const BigInt s = a + b;
    return index_string(s * (s + 1) / 2 + b);
}

/// Inverse of pair_strings. Every binary string is a valid code; anything
/// else raises DecodeError.
inline std::pair<std::string, std::string> unpair_string(std::string_view code) {
    const BigInt z = string_index(code);
    BigInt w = (boost::multiprecision::sqrt(BigInt(8 * z + 1)) - 1) / 2;
    const BigInt tri = w * (w + 1) / 2;
    const BigInt b = z - tri;
    const BigInt a = w - b;
    return {index_string(a), index_string(b)};
}

} // namespace gapsim
