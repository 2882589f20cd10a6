#include "clsq/quadform.hpp"

#include <algorithm>
#include <cassert>
#include <cstdlib>

#include "clsq/abgrp.hpp"

namespace clsq {

namespace {

void check_form(const QuadForm& f) {
    if (gcd3(f.a, f.b, f.c) != 1) throw std::invalid_argument("form is not primitive");
    i64 d = f.disc();
    if (d == 0 || is_square(d)) throw std::invalid_argument("form has square discriminant");
}

// Normalize b into (-a, a] keeping the class (definite forms, a > 0).
QuadForm normalize_definite(QuadForm f, i64 d) {
    i64 b = f.a - mod_nonneg(f.a - f.b, 2 * f.a);
    i128 c = (static_cast<i128>(b) * b - d) / (4 * static_cast<i128>(f.a));
    return {f.a, b, static_cast<i64>(c)};
}

}  // namespace

QuadForm principal_form(i64 d) {
    i64 r = mod_nonneg(d, 4);
    if (r == 0) return {1, 0, -d / 4};
    if (r == 1) return {1, 1, (1 - d) / 4};
    throw std::invalid_argument("discriminant must be 0 or 1 mod 4");
}

bool is_reduced_definite(const QuadForm& f) {
    i64 aa = std::abs(f.b);
    if (!(aa <= f.a && f.a <= f.c)) return false;
    if ((aa == f.a || f.a == f.c) && f.b < 0) return false;
    return true;
}

bool is_reduced_indefinite(const QuadForm& f, i64 s) {
    // 0 < b <= floor(sqrt d) encodes b < sqrt(d); the outer pair encodes
    // |sqrt(d) - 2|a|| < b (d non-square, so equalities cannot occur).
    if (f.b <= 0 || f.b > s) return false;
    i64 twoa = 2 * std::abs(f.a);
    if (s >= f.b + twoa) return false;  // need sqrt(d) < b + 2|a|
    if (twoa - f.b > s) return false;   // need 2|a| - b < sqrt(d)
    return true;
}

QuadForm rho_step(const QuadForm& f, i64 d, i64 s) {
    i64 ac = std::abs(f.c);
    i64 t = 2 * ac;
    i64 top = ac > s ? ac : s;
    i64 b2 = top - mod_nonneg(top + f.b, t);
    i128 c2 = (static_cast<i128>(b2) * b2 - d) / (4 * static_cast<i128>(f.c));
    return {f.c, b2, static_cast<i64>(c2)};
}

QuadForm reduce_to_reduced(const QuadForm& f) {
    check_form(f);
    i64 d = f.disc();
    if (d < 0) {
        QuadForm g = f;
        if (g.a < 0) throw std::invalid_argument("definite form must have a > 0");
        g = normalize_definite(g, d);
        while (g.a > g.c) {
            g = QuadForm{g.c, -g.b, g.a};
            g = normalize_definite(g, d);
        }
        if ((g.a == g.c || -g.b == g.a) && g.b < 0) g.b = -g.b;
        return g;
    }
    i64 s = isqrt(d);
    QuadForm g = f;
    int guard = 0;
    while (!is_reduced_indefinite(g, s)) {
        g = rho_step(g, d, s);
        if (++guard > 100000) throw std::runtime_error("indefinite reduction did not terminate");
    }
    return g;
}

std::vector<QuadForm> reduction_cycle(const QuadForm& f) {
    i64 d = f.disc();
    i64 s = isqrt(d);
    if (!is_reduced_indefinite(f, s)) throw std::invalid_argument("reduction_cycle: form not reduced");
    std::vector<QuadForm> cycle{f};
    for (QuadForm g = rho_step(f, d, s); !(g == f); g = rho_step(g, d, s))
        cycle.push_back(g);
    return cycle;
}

QuadForm reduce(const QuadForm& f) {
    QuadForm g = reduce_to_reduced(f);
    if (g.disc() < 0) return g;
    QuadForm best = g;
    for (const QuadForm& h : reduction_cycle(g))
        if (h < best) best = h;
    return best;
}

namespace {

// Composition through the product of the corresponding ideal lattices
// Z*a + Z*(-b+sqrt(d))/2 (both forms brought to a > 0 first).  The product
// lattice is spanned by four vectors in coordinates (x, y) <-> (x+y*sqrt(d))/2;
// its HNF is ((alpha,0),(beta,e)) with e = gcd(a1,a2,(b1+b2)/2) the content
// and alpha = 2*a1*a2/e, giving the composed form (a1*a2/e^2, -beta/e, *).
QuadForm compose_raw(const QuadForm& f1, const QuadForm& f2, i64 d) {
    i64 a1 = f1.a, b1 = f1.b;
    i64 a2 = f2.a, b2 = f2.b;
    i64 s = (b1 + b2) / 2;

    i64 u, v;
    i64 g12 = xgcd(a1, a2, u, v);
    i64 w1, w2;
    i64 e = xgcd(g12, s, w1, w2);

    i64 alpha = 2 * (a1 / e) * a2;
    // x-parts of the generators combined to y-coordinate e.  The fourth
    // generator is ((b1*b2+d)/2, -s), so it enters with weight -w2.
    i128 x12 = -(static_cast<i128>(u) * a1 * b2 + static_cast<i128>(v) * a2 * b1);
    i128 x4 = (static_cast<i128>(b1) * b2 + d) / 2;
    i128 beta128 = (static_cast<i128>(w1) * x12 - static_cast<i128>(w2) * x4) % alpha;
    i64 beta = mod_nonneg(static_cast<i64>(beta128), alpha);
    assert(beta % e == 0);

    i64 a3 = (a1 / e) * (a2 / e);
    i64 b3 = mod_nonneg(-(beta / e), 2 * a3);
    i128 num = static_cast<i128>(b3) * b3 - d;
    assert(num % (4 * static_cast<i128>(a3)) == 0);
    i64 c3 = static_cast<i64>(num / (4 * static_cast<i128>(a3)));
    return {a3, b3, c3};
}

QuadForm positive_a_rep(QuadForm f, i64 d) {
    if (f.a > 0) return f;
    // Reduced indefinite forms alternate the sign of a along the cycle.
    return rho_step(f, d, isqrt(d));
}

}  // namespace

QuadForm compose_to_reduced(const QuadForm& f, const QuadForm& g) {
    check_form(f);
    check_form(g);
    i64 d = f.disc();
    if (d != g.disc()) throw std::invalid_argument("compose: discriminant mismatch");
    QuadForm f1 = reduce_to_reduced(f), f2 = reduce_to_reduced(g);
    if (d > 0) {
        f1 = positive_a_rep(f1, d);
        f2 = positive_a_rep(f2, d);
    }
    return reduce_to_reduced(compose_raw(f1, f2, d));
}

QuadForm compose(const QuadForm& f, const QuadForm& g) {
    QuadForm h = compose_to_reduced(f, g);
    return h.disc() < 0 ? h : reduce(h);
}

std::optional<QuadForm> prime_form(i64 d, i64 p) {
    if (splitting_type(d, p) == SplitType::inert) return std::nullopt;
    for (i64 b = 0; b < 2 * p; ++b) {
        i128 num = static_cast<i128>(b) * b - d;
        if (num % (4 * p) == 0) return QuadForm{p, b, static_cast<i64>(num / (4 * p))};
    }
    throw std::logic_error("prime_form: no square root of d mod 4p for non-inert p");
}

std::vector<QuadForm> enumerate_reduced_definite(i64 d) {
    if (d >= 0 || mod_nonneg(d, 4) > 1) throw std::invalid_argument("bad definite discriminant");
    std::vector<QuadForm> out;
    i64 n = -d;
    for (i64 a = 1; 3 * a * a <= n; ++a) {
        for (i64 b = -a + 1; b <= a; ++b) {
            i64 num = b * b + n;
            if (num % (4 * a) != 0) continue;
            i64 c = num / (4 * a);
            if (c < a) continue;
            if (a == c && b < 0) continue;
            if (gcd3(a, b, c) != 1) continue;
            out.push_back({a, b, c});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<QuadForm> enumerate_reduced_indefinite(i64 d) {
    if (d <= 0 || is_square(d) || mod_nonneg(d, 4) > 1)
        throw std::invalid_argument("bad indefinite discriminant");
    std::vector<QuadForm> out;
    i64 s = isqrt(d);
    for (i64 b = (d % 2 == 0) ? 2 : 1; b <= s; b += 2) {
        i64 n = (d - b * b) / 4;
        if (n == 0) continue;
        for (i64 x = 1; x * x <= n; ++x) {
            if (n % x != 0) continue;
            i64 y = n / x;
            // both ordered divisor pairs (x,y) and (y,x)
            for (int swap = 0; swap < (x == y ? 1 : 2); ++swap) {
                i64 ap = swap ? y : x, cp = swap ? x : y;
                if (std::abs(ap - cp) >= b) continue;
                if (gcd3(ap, b, cp) != 1) continue;
                out.push_back({ap, b, -cp});
                out.push_back({-ap, b, cp});
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<QuadForm> enumerate_reduced(i64 d) {
    return d < 0 ? enumerate_reduced_definite(d) : enumerate_reduced_indefinite(d);
}

namespace {

// Element table: canonical class representatives plus a resolver from any
// reduced form to its class index.
struct ElementTable {
    std::vector<QuadForm> reduced;   // all reduced forms, sorted
    std::vector<int> elem_of;        // reduced[i] belongs to class elem_of[i]
    std::vector<QuadForm> reps;      // canonical representative per class, sorted

    int resolve(const QuadForm& f) const {
        auto it = std::lower_bound(reduced.begin(), reduced.end(), f);
        assert(it != reduced.end() && *it == f);
        return elem_of[static_cast<size_t>(it - reduced.begin())];
    }
};

ElementTable build_element_table(i64 d, std::vector<QuadForm> forms) {
    ElementTable t;
    std::sort(forms.begin(), forms.end());
    t.reduced = std::move(forms);
    t.elem_of.assign(t.reduced.size(), -1);
    if (d < 0) {
        // every reduced definite form is its own class
        t.reps = t.reduced;
        for (size_t i = 0; i < t.reduced.size(); ++i) t.elem_of[i] = static_cast<int>(i);
        return t;
    }
    i64 s = isqrt(d);
    auto index_of = [&](const QuadForm& f) {
        auto it = std::lower_bound(t.reduced.begin(), t.reduced.end(), f);
        assert(it != t.reduced.end() && *it == f);
        return static_cast<size_t>(it - t.reduced.begin());
    };
    std::vector<QuadForm> reps;
    for (size_t i = 0; i < t.reduced.size(); ++i) {
        if (t.elem_of[i] >= 0) continue;
        int cls = static_cast<int>(reps.size());
        QuadForm start = t.reduced[i];
        QuadForm best = start;
        QuadForm g = start;
        do {
            size_t j = index_of(g);
            assert(t.elem_of[j] < 0);
            t.elem_of[j] = cls;
            if (g < best) best = g;
            g = rho_step(g, d, s);
        } while (!(g == start));
        reps.push_back(best);
    }
    // Renumber classes so reps are sorted (deterministic generator choices).
    std::vector<int> order(reps.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int x, int y) { return reps[static_cast<size_t>(x)] < reps[static_cast<size_t>(y)]; });
    std::vector<int> rank(reps.size());
    for (size_t i = 0; i < order.size(); ++i) rank[static_cast<size_t>(order[i])] = static_cast<int>(i);
    for (auto& e : t.elem_of) e = rank[static_cast<size_t>(e)];
    t.reps.resize(reps.size());
    for (size_t i = 0; i < reps.size(); ++i) t.reps[static_cast<size_t>(rank[i])] = reps[i];
    return t;
}

}  // namespace

ClassGroupPresentation class_group_from_forms(i64 d, std::vector<QuadForm> forms,
                                              std::span<const i64> primes) {
    ElementTable table = build_element_table(d, std::move(forms));
    size_t h = table.reps.size();
    if (h == 0) throw std::invalid_argument("class_group: no reduced forms (invalid discriminant?)");

    auto mul = [&](int x, int y) {
        return table.resolve(compose_to_reduced(table.reps[static_cast<size_t>(x)],
                                                table.reps[static_cast<size_t>(y)]));
    };

    int id = table.resolve(reduce_to_reduced(principal_form(d)));

    // Greedy coset growth: pick the least element outside the span, find its
    // relative order, expand, and record the triangular relation.
    std::vector<char> in_span(h, 0);
    std::vector<std::vector<i64>> dlog(h);
    std::vector<int> members;
    in_span[static_cast<size_t>(id)] = 1;
    dlog[static_cast<size_t>(id)] = {};
    members.push_back(id);
    IntMat rels;
    int ngens = 0;

    for (size_t scan = 0; scan < h; ++scan) {
        if (in_span[scan]) continue;
        int g = static_cast<int>(scan);
        // relative order m: least m >= 1 with g^m in the current span
        int m = 1;
        int pw = g;
        while (!in_span[static_cast<size_t>(pw)]) {
            pw = mul(pw, g);
            ++m;
        }
        std::vector<i64> rel = dlog[static_cast<size_t>(pw)];
        rel.resize(static_cast<size_t>(ngens), 0);
        for (auto& xcomp : rel) xcomp = -xcomp;
        rel.push_back(m);
        rels.push_back(std::move(rel));

        std::vector<int> base = members;
        int gj = id;
        for (int j = 1; j < m; ++j) {
            gj = mul(gj, g);
            for (int e : base) {
                int ne = mul(gj, e);
                assert(!in_span[static_cast<size_t>(ne)]);
                in_span[static_cast<size_t>(ne)] = 1;
                auto vec = dlog[static_cast<size_t>(e)];
                vec.resize(static_cast<size_t>(ngens), 0);
                vec.push_back(j);
                dlog[static_cast<size_t>(ne)] = std::move(vec);
                members.push_back(ne);
            }
        }
        ++ngens;
    }
    assert(members.size() == h);

    // pad relation rows to ngens columns
    for (auto& r : rels) r.resize(static_cast<size_t>(ngens), 0);

    ClassGroupPresentation pres;
    pres.disc = d;
    SmithDecomposition snf = smith_with_transform(rels, ngens);
    std::vector<int> keep;
    for (int i = 0; i < ngens; ++i) {
        assert(snf.diag[static_cast<size_t>(i)] != 0);
        if (snf.diag[static_cast<size_t>(i)] > 1) {
            keep.push_back(i);
            pres.invariants.push_back(snf.diag[static_cast<size_t>(i)]);
        }
    }

    auto to_invariant_coords = [&](const std::vector<i64>& raw) {
        std::vector<i64> x = raw;
        x.resize(static_cast<size_t>(ngens), 0);
        std::vector<i64> out;
        out.reserve(keep.size());
        for (size_t ki = 0; ki < keep.size(); ++ki) {
            int col = keep[ki];
            i64 acc = 0;
            for (int r = 0; r < ngens; ++r)
                acc += x[static_cast<size_t>(r)] * snf.col_transform[static_cast<size_t>(r)][static_cast<size_t>(col)];
            out.push_back(mod_nonneg(acc, pres.invariants[ki]));
        }
        return out;
    };

    for (i64 p : primes) {
        auto pf = prime_form(d, p);
        if (!pf) continue;
        int e = table.resolve(reduce_to_reduced(*pf));
        pres.marked[p] = to_invariant_coords(dlog[static_cast<size_t>(e)]);
    }
    return pres;
}

ClassGroupPresentation class_group(i64 d, std::span<const i64> primes) {
    return class_group_from_forms(d, enumerate_reduced(d), primes);
}

}  // namespace clsq
