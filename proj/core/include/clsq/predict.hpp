#pragma once

#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include "clsq/arith.hpp"
#include "clsq/ints.hpp"
#include "clsq/localtype.hpp"

namespace clsq {

// Exact rational on i64 with i128 intermediates; always reduced, den > 0.
struct Rat {
    i64 num = 0;
    i64 den = 1;

    Rat() = default;
    Rat(i64 n) : num(n), den(1) {}  // NOLINT(google-explicit-constructor)
    Rat(i64 n, i64 d);

    Rat operator+(const Rat& o) const;
    Rat operator-(const Rat& o) const;
    Rat operator*(const Rat& o) const;
    Rat operator/(const Rat& o) const;
    bool operator==(const Rat& o) const { return num == o.num && den == o.den; }

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string to_string() const {
        return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
    }
};

Rat rat_pow(const Rat& base, int exp);  // exp may be negative

// The prime set S with an optional split pattern S_1 (subset of S).
struct SConfig {
    std::vector<i64> primes;
    std::optional<std::vector<i64>> split_pattern;

    int s_size() const { return static_cast<int>(primes.size()); }
    int s1_size() const {
        return split_pattern ? static_cast<int>(split_pattern->size()) : 0;
    }
    void validate() const;
};

// One local etale-algebra row of the counting weights: 1/|Aut| * 1/Disc_p.
struct LocalMassRow {
    LocalCubicType type;
    int aut_order;   // 1, 2, 3 or 6
    i64 disc_p;      // p-part of the discriminant, a power of p
};

// Weight rows for the maximal, not totally ramified cubic orders over Z_p.
std::vector<LocalMassRow> local_mass_rows(i64 p);

// Sum of 1/(|Aut| * Disc_p) over the rows with types in `types`, WITHOUT the
// p/(p+1) prefactor.  Rejects ram_111_tot.
Rat local_mass(i64 p, std::initializer_list<LocalCubicType> types);
Rat local_mass(i64 p, const std::vector<LocalCubicType>& types);

// Average |Cl(K)_S[3]| over all fields of the signature:
//   1 + 3^-|S| * prod (2 + 1/(p+1))        (imaginary)
//   1 + 3^-(|S|+1) * prod (2 + 1/(p+1))    (real)
Rat predicted_avg_cl(const SConfig& S, Signature sig);

// Average |Cl(K)_S[3]| over fields with split pattern S_1: 1 + c/3^|S_1|
// with c = 1 (imaginary), 1/3 (real).  Depends only on |S_1| and signature.
Rat predicted_avg_cl_conditioned(const SConfig& S, Signature sig);

// Average |Sel_3^S(K)|:
//   3^|S| + 3^(|S|+1) * prod (1 + p/(p+1))    (real)
//   3^|S| + 3^|S|     * prod (1 + p/(p+1))    (imaginary)
Rat predicted_avg_selmer(const SConfig& S, Signature sig);

// Conditioned on the split pattern: 3^(r_inf + |S_1| + |S|) + 3^|S|.
Rat predicted_avg_selmer_conditioned(const SConfig& S, Signature sig);

// Average |O_{K,S}^x / cubes|: 3^(|S| + r_inf) * prod (1 + p/(p+1)).
Rat predicted_avg_sunits(const SConfig& S, Signature sig);

// Average of 3^|S_1|: prod over S of (1 + p/(p+1)).
Rat predicted_avg_3_pow_s1(const SConfig& S);

// rho(S_1): probability that exactly the primes in S_1 split:
//   prod_{S_1} p/(2(p+1)) * prod_{S minus S_1} (p+2)/(2(p+1)).
Rat predicted_density_quad(const SConfig& S, Signature sig);

// Rational part of the cubic-field density: c_inf * 3^-|S| * prod (2+1/(p+1))
// with c_inf = 1/12 (totally real) or 1/4 (complex); zeta(2) is applied only
// when rendering decimals.
Rat predicted_cubic_density(const SConfig& S, Signature sig);

// Exact cross-identities between the prediction formulas: subset sums of
// rho(S_1) against the conditioned averages reproduce the unconditioned
// ones, and the pattern densities sum to 1.  |S| <= 8.
bool consistency_identities(const SConfig& S);

}  // namespace clsq
