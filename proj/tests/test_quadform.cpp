#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "clsq/abgrp.hpp"
#include "clsq/quadform.hpp"

using namespace clsq;

namespace {

// Independent class-number oracle for d < 0: loop over b, factor the norm by
// trial division, count reduced (a, b, c) triples.
i64 oracle_class_number_definite(i64 d) {
    i64 n = -d;
    i64 count = 0;
    for (i64 b = n % 2; 3 * b * b <= n; b += 2) {
        i64 m = (b * b + n) / 4;
        for (i64 a = std::max<i64>(b, 1); a * a <= m; ++a) {
            if (m % a != 0) continue;
            i64 c = m / a;
            if (gcd3(a, b, c) != 1) continue;
            // (a, b, c) and (a, -b, c) are distinct classes unless b = 0,
            // b = a, or a = c
            count += (b == 0 || b == a || a == c) ? 1 : 2;
        }
    }
    return count;
}

QuadForm random_class(std::mt19937& rng, const std::vector<QuadForm>& reduced) {
    return reduced[rng() % reduced.size()];
}

std::vector<i64> fundamental_sample(i64 bound, Signature sig, size_t want, std::mt19937& rng) {
    auto all = enumerate_fundamental(bound, sig);
    std::vector<i64> out;
    for (size_t i = 0; i < want; ++i) out.push_back(all[rng() % all.size()]);
    return out;
}

}  // namespace

TEST_CASE("definite reduction examples") {
    // the three reduced forms of disc -23 are (1,1,6), (2,1,3), (2,-1,3)
    auto forms = enumerate_reduced_definite(-23);
    CHECK(forms == std::vector<QuadForm>{{1, 1, 6}, {2, -1, 3}, {2, 1, 3}});
    CHECK(reduce({3, 1, 2}) == QuadForm{2, -1, 3});
    CHECK(reduce({1, 0, 1}) == QuadForm{1, 0, 1});
    CHECK(reduce({1, 1, 6}) == QuadForm{1, 1, 6});
}

TEST_CASE("indefinite reduction cycles of disc 229") {
    auto forms = enumerate_reduced_indefinite(229);
    std::set<QuadForm> seen;
    int cycles = 0;
    for (const QuadForm& f : forms) {
        if (seen.count(f)) continue;
        ++cycles;
        for (const QuadForm& g : reduction_cycle(f)) seen.insert(g);
    }
    CHECK(seen.size() == forms.size());
    CHECK(cycles == 3);
    // reduce() lands on the same canonical form for every member of a cycle
    for (const QuadForm& f : forms) {
        QuadForm canon = reduce(f);
        for (const QuadForm& g : reduction_cycle(f)) CHECK(reduce(g) == canon);
    }
}

TEST_CASE("compose examples at disc -23") {
    QuadForm e{1, 1, 6}, g{2, 1, 3}, gi{2, -1, 3};
    CHECK(compose(e, g) == g);
    CHECK(compose(g, gi) == e);
    CHECK(compose(g, g) == gi);
}

TEST_CASE("compose rejects mismatched discriminants and imprimitive forms") {
    CHECK_THROWS_AS(compose({1, 1, 6}, {1, 0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(reduce({2, 2, 6}), std::invalid_argument);
}

TEST_CASE("class_group examples") {
    CHECK(class_group(-23).invariants == std::vector<i64>{3});
    CHECK(class_group(-4).invariants.empty());
    CHECK(class_group(229).invariants == std::vector<i64>{3});
    CHECK(class_group(-47).invariants == std::vector<i64>{5});
    CHECK(class_group(-3299).invariants == std::vector<i64>({3, 9}));
    CHECK(class_group(5).invariants.empty());
    CHECK(class_group(12).invariants == std::vector<i64>{2});  // narrow class group
}

TEST_CASE("prime_form examples") {
    CHECK(*prime_form(-23, 2) == QuadForm{2, 1, 3});
    CHECK_FALSE(prime_form(5, 2).has_value());
    CHECK(*prime_form(-4, 2) == QuadForm{2, 2, 1});
}

TEST_CASE("prime form norm relation: p pbar = (p)") {
    for (i64 d : enumerate_fundamental(2000, Signature::imaginary))
        for (i64 p : {2, 3, 5, 7}) {
            auto pf = prime_form(d, p);
            if (!pf) continue;
            QuadForm conj{pf->a, -pf->b, pf->c};
            CHECK(compose(*pf, conj) == reduce(principal_form(d)));
        }
}

TEST_CASE("group laws on random classes") {
    std::mt19937 rng(424243);
    for (Signature sig : {Signature::imaginary, Signature::real}) {
        for (i64 d : fundamental_sample(10000, sig, 50, rng)) {
            auto reduced = enumerate_reduced(d);
            QuadForm e = reduce(principal_form(d));
            for (int t = 0; t < 5; ++t) {
                QuadForm x = random_class(rng, reduced);
                QuadForm y = random_class(rng, reduced);
                QuadForm z = random_class(rng, reduced);
                CHECK(compose(compose(x, y), z) == compose(x, compose(y, z)));
                CHECK(compose(x, y) == compose(y, x));
                CHECK(compose(x, e) == reduce(x));
                CHECK(compose(x, inverse(x)) == e);
            }
        }
    }
}

TEST_CASE("imaginary class numbers match the divisor-loop oracle") {
    // includes the classic values h(-4) = 1, h(-163) = 1, h(-23) = 3
    std::map<i64, i64> knowns{{-4, 1}, {-163, 1}, {-23, 3}, {-47, 5}, {-71, 7}, {-479, 25}};
    for (auto [d, h] : knowns) CHECK(oracle_class_number_definite(d) == h);
    for (i64 d : enumerate_fundamental(10000, Signature::imaginary)) {
        CHECK(class_group(d).class_number() == oracle_class_number_definite(d));
    }
}

TEST_CASE("marked prime quotients match a subgroup-closure oracle") {
    std::mt19937 rng(99);
    std::vector<i64> primes{2, 3, 5};
    for (Signature sig : {Signature::imaginary, Signature::real}) {
        for (i64 d : fundamental_sample(3000, sig, 40, rng)) {
            auto pres = class_group(d, primes);
            // oracle: explicit closure of the prime classes under composition
            std::set<QuadForm> span;
            std::vector<QuadForm> frontier;
            QuadForm e = reduce(principal_form(d));
            span.insert(e);
            frontier.push_back(e);
            std::vector<QuadForm> gens;
            for (i64 p : primes)
                if (auto pf = prime_form(d, p)) gens.push_back(reduce(*pf));
            while (!frontier.empty()) {
                QuadForm cur = frontier.back();
                frontier.pop_back();
                for (const QuadForm& g : gens) {
                    QuadForm nxt = compose(cur, g);
                    if (span.insert(nxt).second) frontier.push_back(nxt);
                }
            }
            // |(G/H)[3]| = #{x : x^3 in H} / |H|, x over canonical class reps
            i64 in_h = 0;
            for (const QuadForm& x : enumerate_reduced(d)) {
                if (d > 0 && !(reduce(x) == x)) continue;
                QuadForm cube = compose(compose(x, x), x);
                if (span.count(cube)) ++in_h;
            }
            i64 oracle = in_h / static_cast<i64>(span.size());
            std::vector<std::vector<i64>> rows;
            for (i64 p : primes) {
                auto it = pres.marked.find(p);
                if (it != pres.marked.end()) rows.push_back(it->second);
            }
            CHECK(quotient_three_torsion({pres.invariants, rows}) == oracle);
        }
    }
}

TEST_CASE("marked entries: inert primes absent, others reduced mod invariants") {
    auto pres = class_group(-23, std::vector<i64>{2, 3, 5, 23});
    CHECK(pres.marked.count(2) == 1);   // split
    CHECK(pres.marked.count(3) == 1);   // -23 = 1 mod 3: split
    CHECK(pres.marked.count(5) == 0);   // inert
    CHECK(pres.marked.count(23) == 1);  // ramified
    for (auto& [p, vec] : pres.marked) {
        REQUIRE(vec.size() == pres.invariants.size());
        for (size_t i = 0; i < vec.size(); ++i) {
            CHECK(vec[i] >= 0);
            CHECK(vec[i] < pres.invariants[i]);
        }
    }
    // [p2] generates Z/3 for d = -23, so the quotient collapses
    CHECK(quotient_three_torsion({pres.invariants, {pres.marked[2]}}) == 1);
    // the ramified prime class above 23 is 2-torsion, hence trivial in Z/3
    CHECK(quotient_three_torsion({pres.invariants, {pres.marked[23]}}) == 3);
}

TEST_CASE("class_group is deterministic") {
    auto a = class_group(-3299, std::vector<i64>{2, 3});
    auto b = class_group(-3299, std::vector<i64>{2, 3});
    CHECK(a.invariants == b.invariants);
    CHECK(a.marked == b.marked);
}
