#pragma once

#include <vector>

#include "clsq/arith.hpp"
#include "clsq/ints.hpp"

namespace clsq {

using IntMat = std::vector<std::vector<i64>>;

// Smith normal form diagonal of a relation matrix presenting a finite abelian
// group on `cols` generators.  Returns the invariants > 1 in divisibility
// order; throws if the presented group is infinite.
std::vector<i64> smith_invariants(const IntMat& relations, int cols);

// Full decomposition: diag entries d_1 | d_2 | ... (all >= 1) plus the column
// transform V with U*R*V diagonal, so an exponent vector x on the original
// generators maps to x*V in the diagonal coordinates.
struct SmithDecomposition {
    std::vector<i64> diag;
    IntMat col_transform;
};
SmithDecomposition smith_with_transform(const IntMat& relations, int cols);

// A finite abelian group given by cyclic invariants together with the images
// of distinguished elements as exponent vectors.
struct QuotientInput {
    std::vector<i64> invariants;          // n_1 | n_2 | ..., each > 1
    std::vector<std::vector<i64>> generators;  // rows, each of length invariants.size()
};

// |(G / <generators>)[3]| where G = prod Z/n_i: stack the generator rows on
// diag(n), take Smith invariants m_i, multiply gcd(m_i, 3).
i64 quotient_three_torsion(const QuotientInput& q);

struct SUnitSizeInput {
    Signature signature;
    int s_size;   // |S|
    int s1_size;  // |S_1|, the split primes
};

// 3^(r_inf + |S| + |S_1|), r_inf = 1 for real fields, 0 for imaginary.
i64 sunit_size(const SUnitSizeInput& x);

// Size of the relaxed 3-Selmer group: sunit_size * cl_s_3.
// cl_s_3 must be a power of 3.
i64 selmer_size(const SUnitSizeInput& x, i64 cl_s_3);

}  // namespace clsq
