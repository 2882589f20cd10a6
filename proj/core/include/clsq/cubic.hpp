#pragma once

#include <span>
#include <unordered_map>
#include <vector>

#include "clsq/arith.hpp"
#include "clsq/ints.hpp"
#include "clsq/localtype.hpp"

namespace clsq {

// Integral binary cubic form a*x^3 + b*x^2*y + c*x*y^2 + d*y^3.
struct CubicForm {
    i64 a = 0, b = 0, c = 0, d = 0;
    bool operator==(const CubicForm& o) const {
        return a == o.a && b == o.b && c == o.c && d == o.d;
    }
    bool operator<(const CubicForm& o) const {
        if (a != o.a) return a < o.a;
        if (b != o.b) return b < o.b;
        if (c != o.c) return c < o.c;
        return d < o.d;
    }
};

// 18abcd + b^2c^2 - 4ac^3 - 4b^3d - 27a^2d^2, exact.
i64 disc_cubic(const CubicForm& f);

i64 content(const CubicForm& f);

// True iff f has no rational projective root (and a != 0), i.e. no linear
// factor over Q.  Exact divisor-based test.
bool is_irreducible(const CubicForm& f);

// GL_2(Z) coefficient actions.
CubicForm cubic_swap_xy(const CubicForm& f);
CubicForm cubic_flip_x(const CubicForm& f);
CubicForm cubic_flip_y(const CubicForm& f);
CubicForm cubic_shift_x(const CubicForm& f, i64 k);  // f(x + k*y, y)

// Reduction following Belabas' "A fast algorithm to compute cubic fields":
// Hessian reduction for positive discriminant, reduction of the positive
// definite quadratic factor for negative discriminant.  Requires f
// irreducible.
CubicForm reduce_cubic(const CubicForm& f);

// Canonical orbit representative: lexicographically least element of the
// closure of reduce_cubic under small unimodular perturbations (absorbs the
// boundary ties of the reduced domain).
CubicForm canonical_cubic(const CubicForm& f);

// True iff the cubic ring of f is maximal at p; Dedekind criterion on the
// associated monic cubic after a unimodular change making the leading
// coefficient prime to p.
bool is_maximal_at(const CubicForm& f, i64 p);

// Factorization type of p in the maximal order attached to f (f must be
// maximal at p): projective roots of f mod p counted with multiplicity.
LocalCubicType local_type(const CubicForm& f, i64 p);

struct CubicFieldRecord {
    CubicForm canonical_form;
    i64 disc = 0;
    Signature signature() const { return disc > 0 ? Signature::real : Signature::imaginary; }
    // the association p -> local type, evaluated on demand
    LocalCubicType local_type_at(i64 p) const;
};

// One record per isomorphism class of cubic field with fundamental
// discriminant, |disc| < X, of the given signature (real = totally real,
// imaginary = complex).  Sorted by (|disc|, form).
std::vector<CubicFieldRecord> enumerate_cubic_fields(i64 X, Signature sig);

// Both signatures, indexed by discriminant, shared read-only by the census.
class CubicTable {
  public:
    explicit CubicTable(i64 X);
    i64 limit() const { return limit_; }
    // Records with disc == d whose local type avoids inert_3 at every p in S.
    i64 count_matching(i64 d, std::span<const i64> S) const;
    const std::vector<CubicFieldRecord>& records() const { return records_; }

  private:
    i64 limit_;
    std::vector<CubicFieldRecord> records_;
    std::unordered_map<i64, std::pair<int, int>> by_disc_;  // disc -> [begin, end)
};

// Convenience single-discriminant wrapper (builds a table up to |d|+1).
i64 count_matching_cubics(i64 d, std::span<const i64> S);

}  // namespace clsq
