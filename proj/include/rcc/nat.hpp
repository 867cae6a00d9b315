#pragma once

// Unbounded naturals. Cantor encodings of even short lists overflow 64 bits
// quickly (a three-element list of small numbers already needs ~80 bits), so
// every value-carrying layer of the pipeline works over a bignum type.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rcc {

using Nat = boost::multiprecision::cpp_int;

// Truncated subtraction ("monus"): the only subtraction any layer has.
inline Nat monus(const Nat& a, const Nat& b) {
    return a > b ? Nat(a - b) : Nat(0);
}

// Largest t with t*(t+1)/2 <= n, via integer sqrt. Exact for all n.
inline Nat triangle_root(const Nat& n) {
    Nat t = (boost::multiprecision::sqrt(Nat(8 * n + 1)) - 1) / 2;
    // sqrt is exact on cpp_int, but guard the boundary anyway.
    while ((t + 1) * (t + 2) / 2 <= n) ++t;
    while (t * (t + 1) / 2 > n) --t;
    return t;
}

// Number of bits in n (0 for 0).
inline unsigned bit_length(const Nat& n) {
    return n == 0 ? 0u : boost::multiprecision::msb(n) + 1u;
}

inline bool nat_bit(const Nat& n, unsigned i) {
    return boost::multiprecision::bit_test(n, i);
}

inline Nat parse_nat(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty number");
    for (char c : s)
        if (c < '0' || c > '9') throw std::invalid_argument("bad digit in number: " + s);
    return Nat(s);
}

// Fits-in-uint64 check for places that hand values to fixed-width code.
inline bool fits_u64(const Nat& n) {
    return n >= 0 && n <= Nat(UINT64_MAX);
}

inline std::uint64_t to_u64(const Nat& n) {
    if (!fits_u64(n)) throw std::overflow_error("value does not fit in 64 bits");
    return n.convert_to<std::uint64_t>();
}

} // namespace rcc
