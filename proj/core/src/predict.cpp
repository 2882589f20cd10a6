#include "clsq/predict.hpp"

#include <algorithm>
#include <set>

namespace clsq {

namespace {

i64 checked_i64(i128 v, const char* what) {
    if (v > static_cast<i128>(INT64_MAX) || v < -static_cast<i128>(INT64_MAX))
        throw std::overflow_error(std::string(what) + ": rational overflow");
    return static_cast<i64>(v);
}

Rat make_reduced(i128 n, i128 d) {
    if (d == 0) throw std::invalid_argument("Rat: zero denominator");
    if (d < 0) { n = -n; d = -d; }
    i128 a = n < 0 ? -n : n;
    i128 b = d;
    while (b != 0) { i128 t = a % b; a = b; b = t; }
    if (a == 0) a = 1;
    Rat r;
    r.num = checked_i64(n / a, "Rat");
    r.den = checked_i64(d / a, "Rat");
    return r;
}

bool is_prime_i64(i64 n) {
    if (n < 2) return false;
    for (i64 t = 2; t * t <= n; ++t)
        if (n % t == 0) return false;
    return true;
}

}  // namespace

Rat::Rat(i64 n, i64 d) { *this = make_reduced(n, d); }

Rat Rat::operator+(const Rat& o) const {
    return make_reduced(static_cast<i128>(num) * o.den + static_cast<i128>(o.num) * den,
                        static_cast<i128>(den) * o.den);
}
Rat Rat::operator-(const Rat& o) const {
    return make_reduced(static_cast<i128>(num) * o.den - static_cast<i128>(o.num) * den,
                        static_cast<i128>(den) * o.den);
}
Rat Rat::operator*(const Rat& o) const {
    return make_reduced(static_cast<i128>(num) * o.num, static_cast<i128>(den) * o.den);
}
Rat Rat::operator/(const Rat& o) const {
    if (o.num == 0) throw std::invalid_argument("Rat: division by zero");
    return make_reduced(static_cast<i128>(num) * o.den, static_cast<i128>(den) * o.num);
}

Rat rat_pow(const Rat& base, int exp) {
    Rat r{1};
    Rat b = exp < 0 ? Rat{1} / base : base;
    int e = exp < 0 ? -exp : exp;
    for (int i = 0; i < e; ++i) r = r * b;
    return r;
}

void SConfig::validate() const {
    std::set<i64> seen;
    for (i64 p : primes) {
        if (!is_prime_i64(p)) throw std::invalid_argument(std::to_string(p) + " is not prime");
        if (!seen.insert(p).second)
            throw std::invalid_argument("duplicate prime " + std::to_string(p));
    }
    if (split_pattern) {
        std::set<i64> sub;
        for (i64 p : *split_pattern) {
            if (!seen.count(p))
                throw std::invalid_argument("split pattern prime " + std::to_string(p) + " not in S");
            if (!sub.insert(p).second)
                throw std::invalid_argument("duplicate split prime " + std::to_string(p));
        }
    }
}

std::vector<LocalMassRow> local_mass_rows(i64 p) {
    // Unramified: Z_p^3 (Aut = S_3), Z_p x unramified quadratic (Aut = Z/2),
    // unramified cubic (Aut = Z/3), all with unit discriminant.  Ramified but
    // not totally: Z_p x (ramified quadratic); two such fields of disc p for
    // odd p, six for p = 2 with discs 4,4,8,8,8,8.
    std::vector<LocalMassRow> rows = {
        {LocalCubicType::split_111, 6, 1},
        {LocalCubicType::partial_12, 2, 1},
        {LocalCubicType::inert_3, 3, 1},
    };
    if (p == 2) {
        rows.push_back({LocalCubicType::ram_21, 2, 4});
        rows.push_back({LocalCubicType::ram_21, 2, 4});
        for (int i = 0; i < 4; ++i) rows.push_back({LocalCubicType::ram_21, 2, 8});
    } else {
        rows.push_back({LocalCubicType::ram_21, 2, p});
        rows.push_back({LocalCubicType::ram_21, 2, p});
    }
    return rows;
}

Rat local_mass(i64 p, const std::vector<LocalCubicType>& types) {
    for (LocalCubicType t : types)
        if (t == LocalCubicType::ram_111_tot)
            throw std::invalid_argument("local_mass: totally ramified types are out of scope");
    Rat sum{0};
    for (const LocalMassRow& row : local_mass_rows(p)) {
        if (std::find(types.begin(), types.end(), row.type) == types.end()) continue;
        sum = sum + Rat{1, row.aut_order * row.disc_p};
    }
    return sum;
}

Rat local_mass(i64 p, std::initializer_list<LocalCubicType> types) {
    return local_mass(p, std::vector<LocalCubicType>(types));
}

Rat predicted_avg_cl(const SConfig& S, Signature sig) {
    S.validate();
    Rat prod{1};
    for (i64 p : S.primes) prod = prod * (Rat{2} + Rat{1, p + 1});
    int shift = S.s_size() + (sig == Signature::real ? 1 : 0);
    return Rat{1} + rat_pow(Rat{1, 3}, shift) * prod;
}

Rat predicted_avg_cl_conditioned(const SConfig& S, Signature sig) {
    S.validate();
    if (!S.split_pattern)
        throw std::invalid_argument("predicted_avg_cl_conditioned: split pattern required");
    Rat c = sig == Signature::real ? Rat{1, 3} : Rat{1};
    return Rat{1} + c * rat_pow(Rat{1, 3}, S.s1_size());
}

Rat predicted_avg_selmer(const SConfig& S, Signature sig) {
    S.validate();
    Rat prod{1};
    for (i64 p : S.primes) prod = prod * (Rat{1} + Rat{p, p + 1});
    Rat base = rat_pow(Rat{3}, S.s_size());
    Rat lead = sig == Signature::real ? rat_pow(Rat{3}, S.s_size() + 1) : base;
    return base + lead * prod;
}

Rat predicted_avg_selmer_conditioned(const SConfig& S, Signature sig) {
    S.validate();
    if (!S.split_pattern)
        throw std::invalid_argument("predicted_avg_selmer_conditioned: split pattern required");
    int r_inf = sig == Signature::real ? 1 : 0;
    return rat_pow(Rat{3}, r_inf + S.s1_size() + S.s_size()) + rat_pow(Rat{3}, S.s_size());
}

Rat predicted_avg_sunits(const SConfig& S, Signature sig) {
    S.validate();
    Rat prod{1};
    for (i64 p : S.primes) prod = prod * (Rat{1} + Rat{p, p + 1});
    int r_inf = sig == Signature::real ? 1 : 0;
    return rat_pow(Rat{3}, S.s_size() + r_inf) * prod;
}

Rat predicted_avg_3_pow_s1(const SConfig& S) {
    S.validate();
    Rat prod{1};
    for (i64 p : S.primes) prod = prod * (Rat{1} + Rat{p, p + 1});
    return prod;
}

Rat predicted_density_quad(const SConfig& S, Signature) {
    S.validate();
    if (!S.split_pattern)
        throw std::invalid_argument("predicted_density_quad: split pattern required");
    Rat rho{1};
    for (i64 p : S.primes) {
        bool split = std::find(S.split_pattern->begin(), S.split_pattern->end(), p) !=
                     S.split_pattern->end();
        rho = rho * (split ? Rat{p, 2 * (p + 1)} : Rat{p + 2, 2 * (p + 1)});
    }
    return rho;
}

Rat predicted_cubic_density(const SConfig& S, Signature sig) {
    S.validate();
    Rat prod{1};
    for (i64 p : S.primes) prod = prod * (Rat{2} + Rat{1, p + 1});
    Rat c = sig == Signature::real ? Rat{1, 12} : Rat{1, 4};
    return c * rat_pow(Rat{1, 3}, S.s_size()) * prod;
}

bool consistency_identities(const SConfig& S) {
    S.validate();
    int n = S.s_size();
    if (n > 8) throw std::invalid_argument("consistency_identities: |S| <= 8 required");

    for (Signature sig : {Signature::imaginary, Signature::real}) {
        Rat sum_rho{0}, sum_cl{0}, sum_selmer{0}, sum_3s1{0};
        for (int mask = 0; mask < (1 << n); ++mask) {
            SConfig sub = S;
            sub.split_pattern = std::vector<i64>{};
            for (int i = 0; i < n; ++i)
                if (mask & (1 << i)) sub.split_pattern->push_back(S.primes[static_cast<size_t>(i)]);
            Rat rho = predicted_density_quad(sub, sig);
            sum_rho = sum_rho + rho;
            sum_cl = sum_cl + rho * predicted_avg_cl_conditioned(sub, sig);
            sum_selmer = sum_selmer + rho * predicted_avg_selmer_conditioned(sub, sig);
            sum_3s1 = sum_3s1 + rho * rat_pow(Rat{3}, sub.s1_size());
        }
        if (!(sum_rho == Rat{1})) return false;
        if (!(sum_cl == predicted_avg_cl(S, sig))) return false;
        if (!(sum_selmer == predicted_avg_selmer(S, sig))) return false;
        if (!(sum_3s1 == predicted_avg_3_pow_s1(S))) return false;
        int r_inf = sig == Signature::real ? 1 : 0;
        if (!(rat_pow(Rat{3}, r_inf + S.s_size()) * predicted_avg_3_pow_s1(S) ==
              predicted_avg_sunits(S, sig)))
            return false;
    }
    return true;
}

}  // namespace clsq
