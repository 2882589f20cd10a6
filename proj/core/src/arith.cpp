#include "clsq/arith.hpp"

#include <algorithm>

namespace clsq {

int kronecker_symbol(i64 d, i64 n) {
    if (n <= 0) throw std::invalid_argument("kronecker_symbol: n must be positive");
    if (n == 1) return 1;
    // Split off the 2-part of n.
    int result = 1;
    while (n % 2 == 0) {
        n /= 2;
        if (d % 2 == 0) return 0;
        i64 r = mod_nonneg(d, 8);
        if (r == 3 || r == 5) result = -result;
    }
    if (n == 1) return result;
    // Jacobi symbol (d|n) for odd n > 1 by reciprocity.
    i64 a = mod_nonneg(d, n);
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            i64 r = n % 8;
            if (r == 3 || r == 5) result = -result;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) result = -result;
        a %= n;
    }
    return n == 1 ? result : 0;
}

namespace {

bool squarefree_trial(i64 n) {
    if (n < 0) n = -n;
    if (n == 0) return false;
    for (i64 p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            n /= p;
            if (n % p == 0) return false;
        }
    }
    return true;
}

}  // namespace

bool is_fundamental(i64 d) {
    if (d == 0 || d == 1) return false;
    if (is_square(d)) return false;
    i64 r = mod_nonneg(d, 4);
    if (r == 1) return squarefree_trial(d);
    if (r != 0) return false;
    i64 m = d / 4;
    i64 rm = mod_nonneg(m, 4);
    if (rm != 2 && rm != 3) return false;
    return squarefree_trial(m);
}

SplitType splitting_type(i64 d, i64 p) {
    if (p < 2) throw std::invalid_argument("splitting_type: p must be prime");
    if (mod_nonneg(d, p) == 0) return SplitType::ramified;
    return kronecker_symbol(d, p) == 1 ? SplitType::split : SplitType::inert;
}

SquarefreeSieve::SquarefreeSieve(i64 limit, i64 max_memory_mb) : limit_(limit) {
    if (limit < 1) throw std::invalid_argument("SquarefreeSieve: limit must be >= 1");
    if (max_memory_mb > 0) {
        i64 need_mb = limit / 8 / (1024 * 1024) + 1;
        if (need_mb > max_memory_mb)
            throw std::runtime_error("SquarefreeSieve: limit " + std::to_string(limit) +
                                     " exceeds memory cap of " + std::to_string(max_memory_mb) + " MB");
    }
    flags_.assign(static_cast<size_t>(limit) + 1, true);
    flags_[0] = false;
    for (i64 p = 2; p * p <= limit; ++p) {
        i64 p2 = p * p;
        if (!flags_[static_cast<size_t>(p2)]) continue;  // p itself not squarefree => p composite, done before
        for (i64 m = p2; m <= limit; m += p2) flags_[static_cast<size_t>(m)] = false;
    }
}

bool SquarefreeSieve::is_fundamental(i64 d) const {
    i64 a = d < 0 ? -d : d;
    if (a == 0 || a > limit_) throw std::out_of_range("SquarefreeSieve::is_fundamental: |d| out of range");
    if (d == 1) return false;
    i64 r = mod_nonneg(d, 4);
    if (r == 1) return flags_[static_cast<size_t>(a)] && !is_square(d);
    if (r != 0) return false;
    i64 m = d / 4;
    i64 rm = mod_nonneg(m, 4);
    if (rm != 2 && rm != 3) return false;
    return flags_[static_cast<size_t>(m < 0 ? -m : m)];
}

std::vector<i64> enumerate_fundamental(i64 X, Signature sig) {
    if (X < 3) return {};
    SquarefreeSieve sieve(X);
    std::vector<i64> out;
    for_each_fundamental(sieve, X, sig, [&](i64 d) { out.push_back(d); });
    return out;
}

void for_each_fundamental(const SquarefreeSieve& sieve, i64 X, Signature sig,
                          const std::function<void(i64)>& fn) {
    if (X - 1 > sieve.limit()) throw std::out_of_range("for_each_fundamental: X exceeds sieve limit");
    i64 s = sig == Signature::real ? 1 : -1;
    for (i64 a = 2; a < X; ++a) {
        i64 d = s * a;
        if (sieve.is_fundamental(d)) fn(d);
    }
}

i64 count_fundamental_in_progression(i64 X, i64 d0, i64 frak_d, bool positive) {
    if (frak_d < 1 || frak_d % 2 == 0 || !squarefree_trial(frak_d))
        throw std::invalid_argument("count_fundamental_in_progression: frak_d must be odd squarefree");
    i64 modulus = 16 * frak_d * frak_d;
    i64 r0 = mod_nonneg(d0, modulus);
    // The class must be attainable: valid shape mod 16 and v_p <= 1 for p | frak_d.
    i64 r16 = r0 % 16;
    bool shape_ok = (r16 % 4 == 1) || r16 == 8 || r16 == 12;
    for (i64 p = 3; p * p <= frak_d && shape_ok; p += 2) {
        if (frak_d % p == 0 && r0 % (p * p) == 0) shape_ok = false;
    }
    if (frak_d > 1) {
        // frak_d's largest prime factor also needs the v_p <= 1 check.
        i64 rest = frak_d;
        for (i64 p = 3; p * p <= rest; p += 2)
            while (rest % p == 0) rest /= p;
        if (rest > 1 && r0 % (rest * rest) == 0) shape_ok = false;
    }
    if (!shape_ok)
        throw std::invalid_argument("count_fundamental_in_progression: residue class contains no fundamental discriminant");

    SquarefreeSieve sieve(X);
    i64 count = 0;
    if (positive) {
        i64 d = r0 == 0 ? modulus : r0;
        for (; d < X; d += modulus)
            if (sieve.is_fundamental(d)) ++count;
    } else {
        i64 d = r0 - modulus;  // largest negative representative
        for (; d > -X; d -= modulus)
            if (sieve.is_fundamental(d)) ++count;
    }
    return count;
}

}  // namespace clsq
