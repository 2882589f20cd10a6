#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace clsq {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;

// Exact fixed version of floor(sqrt(n)) for n >= 0.
inline i64 isqrt(i64 n) {
    if (n < 0) throw std::invalid_argument("isqrt: negative argument");
    if (n < 2) return n;
    i64 r = static_cast<i64>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

inline bool is_square(i64 n) {
    if (n < 0) return false;
    i64 r = isqrt(n);
    return r * r == n;
}

inline i64 gcd3(i64 a, i64 b, i64 c) {
    return std::gcd(std::gcd(a, b), c);
}

// Extended gcd: returns g = gcd(a,b) >= 0 and x,y with a*x + b*y = g.
inline i64 xgcd(i64 a, i64 b, i64& x, i64& y) {
    i64 old_r = a, r = b;
    i64 old_x = 1, cur_x = 0;
    i64 old_y = 0, cur_y = 1;
    while (r != 0) {
        i64 q = old_r / r;
        i64 t = old_r - q * r; old_r = r; r = t;
        t = old_x - q * cur_x; old_x = cur_x; cur_x = t;
        t = old_y - q * cur_y; old_y = cur_y; cur_y = t;
    }
    if (old_r < 0) { old_r = -old_r; old_x = -old_x; old_y = -old_y; }
    x = old_x; y = old_y;
    return old_r;
}

// Floor division / nonnegative remainder for possibly negative operands.
inline i64 floor_div(i64 a, i64 b) {
    i64 q = a / b, r = a % b;
    if ((r != 0) && ((r < 0) != (b < 0))) --q;
    return q;
}

inline i64 ceil_div(i64 a, i64 b) { return -floor_div(-a, b); }

inline i64 mod_nonneg(i64 a, i64 m) {
    i64 r = a % m;
    return r < 0 ? r + m : r;
}

inline i64 ipow(i64 base, int exp) {
    i64 r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

inline bool is_power_of_three(i64 n) {
    if (n < 1) return false;
    while (n % 3 == 0) n /= 3;
    return n == 1;
}

inline std::string i128_to_string(i128 v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-v) : static_cast<unsigned __int128>(v);
    std::string s;
    while (u > 0) { s.push_back(static_cast<char>('0' + static_cast<int>(u % 10))); u /= 10; }
    if (neg) s.push_back('-');
    return {s.rbegin(), s.rend()};
}

}  // namespace clsq
