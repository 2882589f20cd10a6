#pragma once

#include <functional>
#include <vector>

#include "clsq/ints.hpp"

namespace clsq {

enum class Signature { real, imaginary };

inline const char* to_string(Signature s) {
    return s == Signature::real ? "real" : "imaginary";
}

enum class SplitType { split, inert, ramified };

inline const char* to_string(SplitType t) {
    switch (t) {
        case SplitType::split: return "split";
        case SplitType::inert: return "inert";
        default: return "ramified";
    }
}

// Kronecker symbol (d|n) for n >= 1. Completely multiplicative in n,
// (d|2) = 0, 1, -1 for d even, d = +-1 mod 8, d = +-3 mod 8.
int kronecker_symbol(i64 d, i64 n);

// d is the discriminant of a quadratic field: d = 1 mod 4 squarefree,
// or d = 4m with m squarefree, m = 2 or 3 mod 4.  Trial division.
bool is_fundamental(i64 d);

// A fundamental discriminant; validates on construction.
struct FundamentalDisc {
    i64 d;
    explicit FundamentalDisc(i64 disc) : d(disc) {
        if (!is_fundamental(d))
            throw std::invalid_argument("not a fundamental discriminant: " + std::to_string(d));
    }
    Signature signature() const { return d > 0 ? Signature::real : Signature::imaginary; }
};

// split iff (d|p) = 1, ramified iff p | d, inert otherwise.
SplitType splitting_type(i64 d, i64 p);
inline SplitType splitting_type(const FundamentalDisc& d, i64 p) {
    return splitting_type(d.d, p);
}

// Squarefree flags for 1..limit via the multiples-of-p^2 sieve, ~limit bits.
// An optional memory cap (in MB, 0 = none) rejects oversized allocations.
class SquarefreeSieve {
  public:
    explicit SquarefreeSieve(i64 limit, i64 max_memory_mb = 0);
    i64 limit() const { return limit_; }
    bool is_squarefree(i64 n) const { return flags_[static_cast<size_t>(n)]; }
    // Fundamental-discriminant test for any |d| <= limit (sign carried by d).
    bool is_fundamental(i64 d) const;

  private:
    i64 limit_;
    std::vector<bool> flags_;
};

// All fundamental d with 0 < |d| < X of the given signature, by increasing |d|.
std::vector<i64> enumerate_fundamental(i64 X, Signature sig);

// Streaming form used by the census sweeps; visits |d| in increasing order.
void for_each_fundamental(const SquarefreeSieve& sieve, i64 X, Signature sig,
                          const std::function<void(i64)>& fn);

// Exact count of fundamental d = d0 (mod 16*frak_d^2) with 0 < d < X (positive)
// or 0 < -d < X (negative).  frak_d must be odd and squarefree, and the residue
// class must be attainable by fundamental discriminants.
i64 count_fundamental_in_progression(i64 X, i64 d0, i64 frak_d, bool positive);

}  // namespace clsq
