#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace polyuniv {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;

struct OverflowError : std::overflow_error {
    using std::overflow_error::overflow_error;
};

// Raised when a computed result fails an internal consistency check.
struct InvariantError : std::logic_error {
    using std::logic_error::logic_error;
};

inline i128 add_ck(i128 a, i128 b) {
    i128 r;
    if (__builtin_add_overflow(a, b, &r)) throw OverflowError("128-bit add overflow");
    return r;
}

inline i128 sub_ck(i128 a, i128 b) {
    i128 r;
    if (__builtin_sub_overflow(a, b, &r)) throw OverflowError("128-bit sub overflow");
    return r;
}

inline i128 mul_ck(i128 a, i128 b) {
    i128 r;
    if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("128-bit mul overflow");
    return r;
}

inline i64 narrow64(i128 v) {
    if (v > INT64_MAX || v < INT64_MIN) throw OverflowError("value does not fit in 64 bits");
    return static_cast<i64>(v);
}

inline std::string to_string(i128 v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
    std::string s;
    while (u) {
        s.push_back(char('0' + int(u % 10)));
        u /= 10;
    }
    if (neg) s.push_back('-');
    return std::string(s.rbegin(), s.rend());
}

// floor(sqrt(n)) for n >= 0
inline i128 isqrt(i128 n) {
    if (n < 0) throw std::domain_error("isqrt of negative");
    if (n < 2) return n;
    unsigned __int128 x = static_cast<unsigned __int128>(n);
    unsigned __int128 r = static_cast<unsigned __int128>(__builtin_sqrtl(static_cast<long double>(n)));
    while (r * r > x) --r;
    while ((r + 1) * (r + 1) <= x) ++r;
    return static_cast<i128>(r);
}

}  // namespace polyuniv
