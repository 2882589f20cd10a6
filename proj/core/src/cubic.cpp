#include "clsq/cubic.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdlib>
#include <set>

namespace clsq {

i64 disc_cubic(const CubicForm& f) {
    i128 a = f.a, b = f.b, c = f.c, d = f.d;
    i128 disc = 18 * a * b * c * d + b * b * c * c - 4 * a * c * c * c - 4 * b * b * b * d -
                27 * a * a * d * d;
    if (disc > static_cast<i128>(INT64_MAX) || disc < -static_cast<i128>(INT64_MAX))
        throw std::overflow_error("disc_cubic: discriminant exceeds 64 bits");
    return static_cast<i64>(disc);
}

i64 content(const CubicForm& f) {
    return std::gcd(std::gcd(std::abs(f.a), std::abs(f.b)), std::gcd(std::abs(f.c), std::abs(f.d)));
}

namespace {

i128 eval(const CubicForm& f, i128 x, i128 y) {
    return f.a * x * x * x + f.b * x * x * y + f.c * x * y * y + f.d * y * y * y;
}

std::vector<i64> divisors_of(i64 n) {
    n = std::abs(n);
    std::vector<i64> out;
    for (i64 t = 1; t * t <= n; ++t) {
        if (n % t != 0) continue;
        out.push_back(t);
        if (t != n / t) out.push_back(n / t);
    }
    return out;
}

// Projective root count of f modulo p (no multiplicity): used as a cheap
// pre-filter, since a form with a rational root has a root mod every prime.
bool has_root_mod(const CubicForm& f, i64 p) {
    i64 a = mod_nonneg(f.a, p);
    if (a == 0) return true;  // root at infinity
    for (i64 t = 0; t < p; ++t) {
        i64 v = ((a * t + mod_nonneg(f.b, p)) % p * t + mod_nonneg(f.c, p)) % p;
        v = (v * t + mod_nonneg(f.d, p)) % p;
        if (v == 0) return true;
    }
    return false;
}

}  // namespace

bool is_irreducible(const CubicForm& f) {
    if (f.a == 0 || f.d == 0) return false;  // root at (1:0) resp. (0:1)
    if (!has_root_mod(f, 5) || !has_root_mod(f, 7)) return true;
    // rational projective root (m : l), gcd(m,l) = 1, l | a, m | d
    for (i64 l : divisors_of(f.a))
        for (i64 m : divisors_of(f.d)) {
            if (std::gcd(l, m) != 1) continue;
            if (eval(f, m, l) == 0 || eval(f, -m, l) == 0) return false;
        }
    return true;
}

CubicForm cubic_swap_xy(const CubicForm& f) { return {f.d, f.c, f.b, f.a}; }
CubicForm cubic_flip_x(const CubicForm& f) { return {-f.a, f.b, -f.c, f.d}; }
CubicForm cubic_flip_y(const CubicForm& f) { return {f.a, -f.b, f.c, -f.d}; }

CubicForm cubic_shift_x(const CubicForm& f, i64 k) {
    return {f.a, 3 * f.a * k + f.b, 3 * f.a * k * k + 2 * f.b * k + f.c,
            f.a * k * k * k + f.b * k * k + f.c * k + f.d};
}

CubicForm reduce_cubic(const CubicForm& f) {
    CubicForm g = f;
    i64 disc = disc_cubic(g);
    if (disc == 0) throw std::invalid_argument("reduce_cubic: zero discriminant");
    int guard = 0;
    // Boundary ties of the reduced domain can cycle between the finitely many
    // reduced forms of an orbit; stop on a revisit (canonical_cubic resolves
    // the representative).
    std::set<CubicForm> visited;
    if (disc > 0) {
        for (;;) {
            if (!visited.insert(g).second) break;
            if (++guard > 10000) throw std::runtime_error("reduce_cubic: no convergence");
            i64 P = g.b * g.b - 3 * g.a * g.c;
            i64 Q = g.b * g.c - 9 * g.a * g.d;
            i64 R = g.c * g.c - 3 * g.b * g.d;
            if (g.a < 0) {
                g = cubic_flip_x(g);
            } else if (g.b < 0 || (g.b == 0 && g.d < 0)) {
                g = cubic_flip_y(g);
            } else if (P > R || (P == R && (g.a > std::abs(g.d) ||
                                            (g.a == std::abs(g.d) && g.b >= std::abs(g.c))))) {
                g = cubic_swap_xy(g);
            } else if (Q > P) {
                g = cubic_shift_x(g, -1);
            } else if (-Q > P) {
                g = cubic_shift_x(g, 1);
            } else if (P == Q && 2 * g.b >= 3 * g.a) {
                // boundary Q = P: prefer the translate with smaller b
                g = cubic_shift_x(g, -1);
            } else {
                break;
            }
        }
    } else {
        for (;;) {
            if (!visited.insert(g).second) break;
            if (++guard > 10000) throw std::runtime_error("reduce_cubic: no convergence");
            i64 T = g.d * g.d - g.a * g.a + g.a * g.c - g.b * g.d;
            if (T <= 0) {
                g = cubic_swap_xy(g);
            } else if (g.a < 0) {
                g = cubic_flip_x(g);
            } else if (g.b < 0 || (g.b == 0 && g.d < 0)) {
                g = cubic_flip_y(g);
            } else if (g.a * g.d - g.b * g.c >= (g.a + g.b) * (g.a + g.b) + g.a * g.c) {
                g = cubic_shift_x(g, 1);
            } else if (g.a * g.d - g.b * g.c <= -(g.a - g.b) * (g.a - g.b) - g.a * g.c) {
                g = cubic_shift_x(g, -1);
            } else {
                break;
            }
        }
    }
    return g;
}

CubicForm canonical_cubic(const CubicForm& f) {
    CubicForm r0 = reduce_cubic(f);
    std::set<CubicForm> seen{r0};
    std::vector<CubicForm> frontier{r0};
    while (!frontier.empty() && seen.size() < 32) {
        CubicForm g = frontier.back();
        frontier.pop_back();
        const CubicForm nb[] = {cubic_swap_xy(g),      cubic_flip_x(g),
                                cubic_flip_y(g),       cubic_shift_x(g, 1),
                                cubic_shift_x(g, -1)};
        for (const CubicForm& t : nb) {
            CubicForm r = reduce_cubic(t);
            if (seen.insert(r).second) frontier.push_back(r);
        }
    }
    return *seen.begin();
}

namespace {

// Multiplicity of t as a root of w[0] x^deg + ... + w[deg] over F_p by
// repeated synthetic division (a zero leading coefficient is fine).
int root_multiplicity(i64 w0, i64 w1, i64 w2, i64 w3, i64 t, i64 p) {
    i64 w[4] = {mod_nonneg(w0, p), mod_nonneg(w1, p), mod_nonneg(w2, p), mod_nonneg(w3, p)};
    int mult = 0;
    for (int deg = 3; deg >= 1; --deg) {
        i64 q[4] = {0, 0, 0, 0};
        i64 acc = 0;
        for (int i = 0; i <= deg; ++i) {
            acc = (acc * t + w[i]) % p;
            if (i < deg) q[i] = acc;
        }
        if (acc != 0) break;
        ++mult;
        for (int i = 0; i < deg; ++i) w[i] = q[i];
        w[deg] = 0;
    }
    return mult;
}

}  // namespace

LocalCubicType local_type(const CubicForm& f, i64 p) {
    // multiplicity at infinity = number of leading coefficients divisible by p
    int inf_mult = 0;
    if (mod_nonneg(f.a, p) == 0) {
        ++inf_mult;
        if (mod_nonneg(f.b, p) == 0) {
            ++inf_mult;
            if (mod_nonneg(f.c, p) == 0) {
                ++inf_mult;
                if (mod_nonneg(f.d, p) == 0)
                    throw std::invalid_argument("local_type: form not primitive");
            }
        }
    }
    std::vector<int> mults;
    if (inf_mult > 0) mults.push_back(inf_mult);
    for (i64 t = 0; t < p; ++t) {
        int m = root_multiplicity(f.a, f.b, f.c, f.d, t, p);
        if (m > 0) mults.push_back(m);
    }
    std::sort(mults.begin(), mults.end());
    int total = 0;
    for (int m : mults) total += m;
    if (total > 3) throw std::logic_error("local_type: root multiplicities exceed degree");

    if (mults.empty()) return LocalCubicType::inert_3;
    if (mults == std::vector<int>{1}) return LocalCubicType::partial_12;
    if (mults == std::vector<int>{1, 1, 1}) return LocalCubicType::split_111;
    if (mults == std::vector<int>{1, 2}) return LocalCubicType::ram_21;
    if (mults == std::vector<int>{3}) return LocalCubicType::ram_111_tot;
    throw std::logic_error("local_type: impossible root pattern");
}

namespace {

// Dedekind criterion on the monic cubic x^3 + Bx^2 + (AC)x + A^2*D attached
// to a GL_2(Z)-translate of f with leading coefficient A prime to p.
bool dedekind_maximal(const CubicForm& f, i64 p) {
    // find a projective point where f does not vanish mod p
    i64 al = 0, ga = 0;
    bool found = false;
    if (mod_nonneg(f.a, p) != 0) {
        al = 1;
        ga = 0;
        found = true;
    } else {
        for (i64 t = 0; t < p && !found; ++t) {
            if (mod_nonneg(static_cast<i64>(eval(f, t, 1) % p), p) != 0) {
                al = t;
                ga = 1;
                found = true;
            }
        }
    }
    if (!found) return true;  // f mod p = xy(x+y) up to scaling: three simple roots, p odd impossible
    // complete (al, ga) to a determinant-1 matrix [[al, be], [ga, de]]
    i64 be, de;
    if (ga == 0) {
        be = 0;
        de = 1;
    } else {
        de = 1;
        be = al - 1;
    }
    assert(al * de - be * ga == 1);
    i128 A = eval(f, al, ga);
    i128 B = 3 * static_cast<i128>(f.a) * al * al * be +
             static_cast<i128>(f.b) * (static_cast<i128>(al) * al * de + 2 * static_cast<i128>(al) * be * ga) +
             static_cast<i128>(f.c) * (2 * static_cast<i128>(al) * ga * de + static_cast<i128>(be) * ga * ga) +
             3 * static_cast<i128>(f.d) * ga * ga * de;
    i128 C = 3 * static_cast<i128>(f.a) * al * be * be +
             static_cast<i128>(f.b) * (static_cast<i128>(be) * be * ga + 2 * static_cast<i128>(al) * be * de) +
             static_cast<i128>(f.c) * (static_cast<i128>(al) * de * de + 2 * static_cast<i128>(be) * ga * de) +
             3 * static_cast<i128>(f.d) * ga * de * de;
    i128 D = eval(f, be, de);
    assert(A % p != 0);

    // monic h = x^3 + h2 x^2 + h1 x + h0, coefficients reduced mod p^2 (all
    // tests below only need h mod p^2)
    i64 p2 = p * p;
    auto red = [&](i128 v) { return mod_nonneg(static_cast<i64>(v % p2), p2); };
    i64 h2 = red(B), h1 = red(A * C), h0 = red(A * A * D);

    // Dedekind criterion for a cubic: a repeated factor of h mod p is linear,
    // say (x - t), appearing in both the radical lift g* and the cofactor
    // lift h*, so T = (g* h* - h)/p has T(t) = -h(t)/p, and p-maximality at t
    // amounts to h(t) != 0 mod p^2.  (The value h(t)/p mod p does not depend
    // on the lift of t because h'(t) = 0 mod p at a repeated root.)
    for (i64 t = 0; t < p; ++t) {
        i128 ht = ((static_cast<i128>(t) + h2) * t + h1) * t + h0;
        if (ht % p != 0) continue;                                    // not a root
        i64 dh = mod_nonneg((3 * t * t + 2 * h2 % p * t + h1) % p, p);
        if (dh != 0) continue;                                        // simple root
        if (ht % p2 == 0) return false;
    }
    return true;
}

}  // namespace

bool is_maximal_at(const CubicForm& f, i64 p) {
    if (p < 2) throw std::invalid_argument("is_maximal_at: p must be prime");
    i64 disc = disc_cubic(f);
    if (disc == 0) throw std::invalid_argument("is_maximal_at: zero discriminant");
    i64 v = 0;
    for (i64 t = std::abs(disc); t % p == 0; t /= p) ++v;
    if (v < 2) return true;
    return dedekind_maximal(f, p);
}

namespace {

struct SweepFilters {
    const SquarefreeSieve& sieve;
    i64 X;
    Signature sig;
    std::set<CubicForm>& out;

    void consider(const CubicForm& f) {
        i128 disc = 18 * static_cast<i128>(f.a) * f.b * f.c * f.d +
                    static_cast<i128>(f.b) * f.b * f.c * f.c -
                    4 * static_cast<i128>(f.a) * f.c * f.c * f.c -
                    4 * static_cast<i128>(f.b) * f.b * f.b * f.d -
                    27 * static_cast<i128>(f.a) * f.a * f.d * f.d;
        if (disc == 0) return;
        if (sig == Signature::real ? disc < 0 : disc > 0) return;
        i128 ad = disc < 0 ? -disc : disc;
        if (ad >= X) return;
        i64 d64 = static_cast<i64>(disc);
        if (!sieve.is_fundamental(d64)) return;
        if (content(f) != 1) return;
        if (!is_irreducible(f)) return;
        out.insert(canonical_cubic(f));
    }
};

}  // namespace

std::vector<CubicFieldRecord> enumerate_cubic_fields(i64 X, Signature sig) {
    if (X < 23) return {};
    SquarefreeSieve sieve(X);
    std::set<CubicForm> found;
    SweepFilters filt{sieve, X, sig, found};

    double x4 = std::pow(static_cast<double>(X), 0.25);
    i64 sq = isqrt(X);

    if (sig == Signature::real) {
        // Reduced forms have a positive definite reduced Hessian (P, Q, R):
        // 1 <= P <= sqrt(X), |Q| <= P <= R <= (3X + P^2) / (4P), and the
        // syzygy 4P^3 = G(1,0)^2 + 27*disc*a^2 bounds a and b.
        i64 amax = static_cast<i64>(2.0 * x4 / std::sqrt(27.0)) + 1;
        for (i64 a = 1; a <= amax; ++a) {
            i64 bmax = static_cast<i64>(1.5 * static_cast<double>(a) + x4) + 1;
            for (i64 b = 0; b <= bmax; ++b) {
                i64 clo = ceil_div(b * b - sq, 3 * a);
                i64 chi = floor_div(b * b - 1, 3 * a);
                for (i64 c = clo; c <= chi; ++c) {
                    i64 P = b * b - 3 * a * c;
                    i64 rmax = (3 * X + P * P) / (4 * P);
                    i64 dlo = ceil_div(b * c - P, 9 * a);
                    i64 dhi = floor_div(b * c + P, 9 * a);
                    if (b > 0) {
                        dlo = std::max(dlo, ceil_div(c * c - rmax, 3 * b));
                        dhi = std::min(dhi, floor_div(c * c - P, 3 * b));
                    } else if (c * c < P || c * c > rmax) {
                        continue;
                    }
                    for (i64 dd = dlo; dd <= dhi; ++dd)
                        filt.consider({a, b, c, dd});
                }
            }
        }
    } else {
        // Reduced forms factor as a*(x - theta*y) * q(x, y) with q monic
        // positive definite reduced (|B| <= 1 <= C); |disc| = a^4 q(theta,1)^2
        // (4C - B^2) yields the bounds below.
        double x4c = x4 / std::pow(3.0, 0.25);
        i64 amax = static_cast<i64>(2.0 * x4 / std::pow(27.0, 0.25)) + 1;
        for (i64 a = 1; a <= amax; ++a) {
            i64 bmax = static_cast<i64>(1.5 * static_cast<double>(a) + x4c) + 1;
            double cboundf = std::sqrt(static_cast<double>(X) / 3.0) / static_cast<double>(a) +
                             0.75 * static_cast<double>(a) + x4c;
            i64 cmax = static_cast<i64>(cboundf) + 1;
            for (i64 b = 0; b <= bmax; ++b) {
                for (i64 c = -cmax; c <= cmax; ++c) {
                    // window for u = a*d - b*c from the reduced inequalities
                    i64 ulo = -(a - b) * (a - b) - a * c + 1;
                    i64 uhi = (a + b) * (a + b) + a * c - 1;
                    if (ulo > uhi) continue;
                    i64 dlo = ceil_div(ulo + b * c, a);
                    i64 dhi = floor_div(uhi + b * c, a);
                    for (i64 dd = dlo; dd <= dhi; ++dd)
                        filt.consider({a, b, c, dd});
                }
            }
        }
    }

    std::vector<CubicFieldRecord> records;
    records.reserve(found.size());
    for (const CubicForm& f : found) records.push_back({f, disc_cubic(f)});
    std::sort(records.begin(), records.end(), [](const CubicFieldRecord& x, const CubicFieldRecord& y) {
        i64 ax = std::abs(x.disc), ay = std::abs(y.disc);
        if (ax != ay) return ax < ay;
        return x.canonical_form < y.canonical_form;
    });
    return records;
}

LocalCubicType CubicFieldRecord::local_type_at(i64 p) const {
    return local_type(canonical_form, p);
}

CubicTable::CubicTable(i64 X) : limit_(X) {
    auto real_recs = enumerate_cubic_fields(X, Signature::real);
    auto cplx_recs = enumerate_cubic_fields(X, Signature::imaginary);
    records_ = std::move(real_recs);
    records_.insert(records_.end(), cplx_recs.begin(), cplx_recs.end());
    std::sort(records_.begin(), records_.end(), [](const CubicFieldRecord& x, const CubicFieldRecord& y) {
        if (x.disc != y.disc) return x.disc < y.disc;
        return x.canonical_form < y.canonical_form;
    });
    for (int i = 0; i < static_cast<int>(records_.size()); ++i) {
        auto [it, fresh] = by_disc_.try_emplace(records_[static_cast<size_t>(i)].disc, i, i + 1);
        if (!fresh) it->second.second = i + 1;
    }
}

i64 CubicTable::count_matching(i64 d, std::span<const i64> S) const {
    if (std::abs(d) >= limit_)
        throw std::out_of_range("CubicTable::count_matching: |d| outside enumerated range");
    auto it = by_disc_.find(d);
    if (it == by_disc_.end()) return 0;
    i64 count = 0;
    for (int i = it->second.first; i < it->second.second; ++i) {
        const CubicForm& f = records_[static_cast<size_t>(i)].canonical_form;
        bool ok = true;
        for (i64 p : S)
            if (local_type(f, p) == LocalCubicType::inert_3) {
                ok = false;
                break;
            }
        if (ok) ++count;
    }
    return count;
}

i64 count_matching_cubics(i64 d, std::span<const i64> S) {
    CubicTable table(std::abs(d) + 1);
    return table.count_matching(d, S);
}

}  // namespace clsq
