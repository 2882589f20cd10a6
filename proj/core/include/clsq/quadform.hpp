#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "clsq/arith.hpp"
#include "clsq/ints.hpp"

namespace clsq {

// Primitive integral binary quadratic form a*x^2 + b*x*y + c*y^2.
struct QuadForm {
    i64 a = 0, b = 0, c = 0;

    i64 disc() const {
        return static_cast<i64>(static_cast<i128>(b) * b - 4 * static_cast<i128>(a) * c);
    }
    bool operator==(const QuadForm& o) const { return a == o.a && b == o.b && c == o.c; }
    bool operator<(const QuadForm& o) const {
        if (a != o.a) return a < o.a;
        if (b != o.b) return b < o.b;
        return c < o.c;
    }
};

QuadForm principal_form(i64 d);
inline QuadForm inverse(const QuadForm& f) { return {f.a, -f.b, f.c}; }

// Reduced tests.  Definite (d < 0): |b| <= a <= c with b >= 0 when |b| = a or
// a = c.  Indefinite (d > 0, non-square): 0 < b <= floor(sqrt(d)) and
// |sqrt(d) - 2|a|| < b, evaluated in exact integer arithmetic.
bool is_reduced_definite(const QuadForm& f);
bool is_reduced_indefinite(const QuadForm& f, i64 sqrt_d);

// One continued-fraction neighbor step on an indefinite form (maps reduced
// forms to reduced forms and walks the reduction cycle).
QuadForm rho_step(const QuadForm& f, i64 d, i64 sqrt_d);

// Reduce to *some* reduced representative of the proper class.
QuadForm reduce_to_reduced(const QuadForm& f);

// Canonical class representative: for d < 0 the unique reduced form, for
// d > 0 the lexicographically least (a, b, c) in the reduction cycle.
QuadForm reduce(const QuadForm& f);

// Full rho-cycle through a reduced indefinite form, starting at f.
std::vector<QuadForm> reduction_cycle(const QuadForm& f);

// Gauss composition; returns the canonical representative of the product
// class.  Throws on mismatched discriminants or non-primitive inputs.
QuadForm compose(const QuadForm& f, const QuadForm& g);

// Composition that stops at some reduced representative (cheaper; the census
// resolves cycle membership through its own element table).
QuadForm compose_to_reduced(const QuadForm& f, const QuadForm& g);

// A form (p, b, (b^2-d)/(4p)) with b minimal >= 0 representing a prime above
// p, or nullopt when p is inert (the class of (p) is trivial).
std::optional<QuadForm> prime_form(i64 d, i64 p);

// All reduced forms of discriminant d (single-discriminant enumeration; the
// census uses a bulk sweep instead, see census.hpp).
std::vector<QuadForm> enumerate_reduced_definite(i64 d);
std::vector<QuadForm> enumerate_reduced_indefinite(i64 d);
std::vector<QuadForm> enumerate_reduced(i64 d);

// Form class group (the narrow class group when d > 0) as cyclic invariants
// n_1 | n_2 | ... plus the exponent vectors of the classes [p] for the
// requested primes p; inert primes are absent from `marked`.
struct ClassGroupPresentation {
    i64 disc = 0;
    std::vector<i64> invariants;
    std::map<i64, std::vector<i64>> marked;

    i64 class_number() const {
        i64 h = 1;
        for (i64 n : invariants) h *= n;
        return h;
    }
};

ClassGroupPresentation class_group(i64 d, std::span<const i64> primes = {});

// Same, but over a caller-supplied list of all reduced forms of disc d.
ClassGroupPresentation class_group_from_forms(i64 d, std::vector<QuadForm> forms,
                                              std::span<const i64> primes);

}  // namespace clsq
