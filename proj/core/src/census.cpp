#include "clsq/census.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <cstdio>
#include <memory>
#include <ostream>
#include <thread>
#include <tuple>

#include <json.hpp>

namespace clsq {

int encode_profile(const std::vector<SplitType>& types) {
    int key = 0;
    for (size_t i = types.size(); i-- > 0;) key = key * 3 + static_cast<int>(types[i]);
    return key;
}

std::vector<SplitType> decode_profile(int key, int s_size) {
    std::vector<SplitType> types;
    for (int i = 0; i < s_size; ++i) {
        types.push_back(static_cast<SplitType>(key % 3));
        key /= 3;
    }
    return types;
}

void CensusAccumulator::merge(const CensusAccumulator& o) {
    field_count += o.field_count;
    sum_cl3 += o.sum_cl3;
    sum_selmer += o.sum_selmer;
    sum_sunits += o.sum_sunits;
    sum_3pow_s1 += o.sum_3pow_s1;
    max_disc_seen = std::max(max_disc_seen, o.max_disc_seen);
    excluded_minus3 += o.excluded_minus3;
    for (const auto& [key, sub] : o.profiles) {
        ProfileAcc& dst = profiles[key];
        dst.count += sub.count;
        dst.sum_cl3 += sub.sum_cl3;
        dst.sum_selmer += sub.sum_selmer;
        dst.sum_sunits += sub.sum_sunits;
    }
}

namespace {

// ---- bulk enumeration of reduced forms, bucketed by |d| ----

using FormBuckets = std::vector<std::vector<QuadForm>>;

// definite reduced forms with lo <= |d| < hi and -|d| fundamental
void sweep_definite_block(const SquarefreeSieve& sieve, i64 lo, i64 hi, FormBuckets& buckets) {
    for (i64 a = 1; 3 * a * a < hi; ++a) {
        for (i64 b = -a + 1; b <= a; ++b) {
            i64 cmin = std::max(a, ceil_div(lo + b * b, 4 * a));
            for (i64 c = cmin;; ++c) {
                i64 n = 4 * a * c - b * b;
                if (n >= hi) break;
                if (n < lo) continue;
                if (a == c && b < 0) continue;
                if (!sieve.is_fundamental(-n)) continue;
                if (gcd3(a, b, c) != 1) continue;
                buckets[static_cast<size_t>(n - lo)].push_back({a, b, c});
            }
        }
    }
}

// indefinite reduced forms with lo <= d < hi and d fundamental; both sign
// orientations (a>0, c<0) and (a<0, c>0) are distinct reduced forms
void sweep_indefinite_block(const SquarefreeSieve& sieve, i64 lo, i64 hi, FormBuckets& buckets) {
    for (i64 b = 1; b * b < hi; ++b) {
        for (i64 ap = 1;; ++ap) {
            i64 cp_floor = std::max<i64>(1, ap - b + 1);
            if (b * b + 4 * ap * cp_floor >= hi) break;
            i64 cp_min = std::max(cp_floor, ceil_div(lo - b * b, 4 * ap));
            i64 cp_max = ap + b - 1;
            for (i64 cp = cp_min; cp <= cp_max; ++cp) {
                i64 d = b * b + 4 * ap * cp;
                if (d >= hi) break;
                if (d < lo) continue;
                if (!sieve.is_fundamental(d)) continue;
                if (gcd3(ap, b, cp) != 1) continue;
                buckets[static_cast<size_t>(d - lo)].push_back({ap, b, -cp});
                buckets[static_cast<size_t>(d - lo)].push_back({-ap, b, cp});
            }
        }
    }
}

// Decade-aligned block edges: [2, 10), [10, 100), ..., clipped at X, with wide
// decades split so a block's stored forms stay modest (~0.3 * width * sqrt(d)
// reduced forms per block).
std::vector<std::pair<i64, i64>> block_plan(i64 X) {
    std::vector<std::pair<i64, i64>> blocks;
    i64 lo = 2;
    for (i64 decade = 10; lo < X; decade *= 10) {
        i64 hi = std::min(decade, X);
        i64 width = std::max<i64>(1000, 10000000 / (isqrt(hi) + 1));
        for (i64 s = lo; s < hi; s += width)
            blocks.emplace_back(s, std::min(s + width, hi));
        lo = hi;
    }
    return blocks;
}

struct FieldStats {
    i64 cl3 = 1;
    i64 sunits = 1;
    i64 selmer = 1;
    i64 pow3s1 = 1;
    int profile = 0;
    bool all_split = true;
};

// Per-field quantities; without a presentation (splitting-only census) the
// class-group-dependent fields stay at 1 and must not be reported.
FieldStats field_stats(i64 d, const std::optional<ClassGroupPresentation>& pres,
                       const SConfig& S, Signature sig) {
    FieldStats st;
    std::vector<SplitType> types;
    int s1 = 0;
    std::vector<std::vector<i64>> gens;
    for (i64 p : S.primes) {
        SplitType t = splitting_type(d, p);
        types.push_back(t);
        if (t == SplitType::split) ++s1;
        if (t != SplitType::split) st.all_split = false;
        if (pres && t != SplitType::inert) {
            auto it = pres->marked.find(p);
            assert(it != pres->marked.end());
            gens.push_back(it->second);
        }
    }
    st.profile = encode_profile(types);
    st.pow3s1 = ipow(3, s1);

    if (pres) {
        bool has3 = false;
        for (i64 n : pres->invariants) has3 = has3 || n % 3 == 0;
        if (!has3) {
            st.cl3 = 1;
        } else if (gens.empty()) {
            st.cl3 = 1;
            for (i64 n : pres->invariants) st.cl3 *= std::gcd(n, static_cast<i64>(3));
        } else {
            st.cl3 = quotient_three_torsion({pres->invariants, gens});
        }
    }
    SUnitSizeInput su{sig, S.s_size(), s1};
    st.sunits = sunit_size(su);
    st.selmer = st.sunits * st.cl3;
    return st;
}

void accumulate_field(CensusAccumulator& acc, i64 d, const FieldStats& st) {
    acc.field_count += 1;
    acc.sum_cl3 += st.cl3;
    acc.sum_3pow_s1 += st.pow3s1;
    acc.max_disc_seen = std::max(acc.max_disc_seen, std::abs(d));
    ProfileAcc& sub = acc.profiles[st.profile];
    sub.count += 1;
    sub.sum_cl3 += st.cl3;
    if (d == -3) {
        // Q(sqrt(-3)) carries extra cube roots of unity; excluded from the
        // S-unit and Selmer sums and flagged in reports.
        acc.excluded_minus3 += 1;
        return;
    }
    acc.sum_sunits += st.sunits;
    acc.sum_selmer += st.selmer;
    sub.sum_sunits += st.sunits;
    sub.sum_selmer += st.selmer;
}

std::vector<std::pair<i64, CensusAccumulator>> checkpoint_merge(
    const std::vector<std::pair<i64, i64>>& blocks, const std::vector<CensusAccumulator>& per_block,
    i64 X) {
    std::vector<std::pair<i64, CensusAccumulator>> checkpoints;
    CensusAccumulator running;
    for (size_t i = 0; i < blocks.size(); ++i) {
        running.merge(per_block[i]);
        i64 hi = blocks[i].second;
        bool is_decade = hi == 10 || hi == 100 || hi == 1000 || hi == 10000 || hi == 100000 ||
                         hi == 1000000 || hi == 10000000 || hi == 100000000;
        if ((is_decade && hi < X) || i + 1 == blocks.size())
            checkpoints.emplace_back(hi == X || i + 1 == blocks.size() ? X : hi, running);
    }
    return checkpoints;
}

}  // namespace

std::vector<CensusResult> run_classgroup_census_multi(const CensusOptions& base,
                                                      const std::vector<CensusVariant>& variants) {
    if (variants.empty()) throw std::invalid_argument("census: no variants");
    if (base.max_disc < 3) throw std::invalid_argument("census: max_disc too small");
    std::vector<i64> union_primes;
    for (const CensusVariant& v : variants) {
        v.S.validate();
        for (i64 p : v.S.primes)
            if (std::find(union_primes.begin(), union_primes.end(), p) == union_primes.end())
                union_primes.push_back(p);
    }
    std::sort(union_primes.begin(), union_primes.end());

    SquarefreeSieve sieve(base.max_disc, base.max_memory_mb);
    auto blocks = block_plan(base.max_disc);
    bool definite = base.signature == Signature::imaginary;
    size_t nv = variants.size();

    auto process_block = [&](i64 lo, i64 hi, std::vector<CensusAccumulator>& accs) {
        FormBuckets buckets;
        if (base.class_groups) {
            buckets.resize(static_cast<size_t>(hi - lo));
            if (definite)
                sweep_definite_block(sieve, lo, hi, buckets);
            else
                sweep_indefinite_block(sieve, lo, hi, buckets);
        }
        for (i64 n = lo; n < hi; ++n) {
            i64 d = definite ? -n : n;
            std::optional<ClassGroupPresentation> pres;
            if (base.class_groups) {
                auto& forms = buckets[static_cast<size_t>(n - lo)];
                if (forms.empty()) continue;
                pres = class_group_from_forms(d, std::move(forms), union_primes);
            } else if (!sieve.is_fundamental(d)) {
                continue;
            }
            for (size_t vi = 0; vi < nv; ++vi) {
                FieldStats st = field_stats(d, pres, variants[vi].S, base.signature);
                if (variants[vi].require_split && !st.all_split) continue;
                accumulate_field(accs[vi], d, st);
            }
        }
    };

    std::vector<std::vector<CensusAccumulator>> per_block(blocks.size(),
                                                          std::vector<CensusAccumulator>(nv));
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= blocks.size()) return;
            process_block(blocks[i].first, blocks[i].second, per_block[i]);
        }
    };
    if (base.workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < base.workers; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    std::vector<CensusResult> results(nv);
    for (size_t vi = 0; vi < nv; ++vi) {
        std::vector<CensusAccumulator> mine;
        mine.reserve(blocks.size());
        for (size_t i = 0; i < blocks.size(); ++i) mine.push_back(per_block[i][vi]);
        results[vi].options = base;
        results[vi].options.S = variants[vi].S;
        results[vi].options.require_split = variants[vi].require_split;
        results[vi].checkpoints = checkpoint_merge(blocks, mine, base.max_disc);
    }
    return results;
}

CensusResult run_classgroup_census(const CensusOptions& options) {
    CensusVariant v{options.S, options.require_split};
    return run_classgroup_census_multi(options, {v}).front();
}

i64 run_cubic_census(const CubicTable& table, i64 X, const SConfig& S, Signature sig) {
    S.validate();
    if (X > table.limit()) throw std::out_of_range("run_cubic_census: X exceeds table range");
    i64 count = 0;
    for (const CubicFieldRecord& rec : table.records()) {
        if (rec.signature() != sig || std::abs(rec.disc) >= X) continue;
        bool ok = true;
        for (i64 p : S.primes)
            if (local_type(rec.canonical_form, p) == LocalCubicType::inert_3) {
                ok = false;
                break;
            }
        if (ok) ++count;
    }
    return count;
}

i64 run_cubic_census(i64 X, const SConfig& S, Signature sig) {
    CubicTable table(X);
    return run_cubic_census(table, X, S, sig);
}

std::vector<CrosscheckResult> crosscheck_hasse_multi(i64 X, const std::vector<SConfig>& configs,
                                                     int workers,
                                                     const CubicTable* shared_table) {
    if (configs.empty()) throw std::invalid_argument("crosscheck: no configs");
    std::vector<i64> union_primes;
    for (const SConfig& S : configs) {
        S.validate();
        for (i64 p : S.primes)
            if (std::find(union_primes.begin(), union_primes.end(), p) == union_primes.end())
                union_primes.push_back(p);
    }
    std::sort(union_primes.begin(), union_primes.end());

    std::unique_ptr<CubicTable> own;
    if (!shared_table) {
        own = std::make_unique<CubicTable>(X);
        shared_table = own.get();
    }
    const CubicTable& table = *shared_table;

    SquarefreeSieve sieve(X);
    auto blocks = block_plan(X);
    size_t nc = configs.size();

    struct BlockOut {
        i64 checked = 0;
        std::vector<std::vector<CrosscheckResult::Mismatch>> mismatches;
        std::vector<i64> mismatch_count;
    };
    std::vector<BlockOut> outs(blocks.size() * 2);
    for (auto& o : outs) {
        o.mismatches.resize(nc);
        o.mismatch_count.assign(nc, 0);
    }

    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (;;) {
            size_t idx = next.fetch_add(1);
            if (idx >= blocks.size() * 2) return;
            bool definite = idx >= blocks.size();
            auto [lo, hi] = blocks[idx % blocks.size()];
            BlockOut& out = outs[idx];
            FormBuckets buckets(static_cast<size_t>(hi - lo));
            if (definite)
                sweep_definite_block(sieve, lo, hi, buckets);
            else
                sweep_indefinite_block(sieve, lo, hi, buckets);
            for (i64 n = lo; n < hi; ++n) {
                auto& forms = buckets[static_cast<size_t>(n - lo)];
                if (forms.empty()) continue;
                i64 d = definite ? -n : n;
                ClassGroupPresentation pres =
                    class_group_from_forms(d, std::move(forms), union_primes);
                ++out.checked;
                for (size_t ci = 0; ci < nc; ++ci) {
                    std::vector<std::vector<i64>> gens;
                    for (i64 p : configs[ci].primes) {
                        auto it = pres.marked.find(p);
                        if (it != pres.marked.end()) gens.push_back(it->second);
                    }
                    i64 lhs = quotient_three_torsion({pres.invariants, gens});
                    i64 rhs = 1 + 2 * table.count_matching(d, configs[ci].primes);
                    if (lhs != rhs) {
                        ++out.mismatch_count[ci];
                        if (out.mismatches[ci].size() < 32)
                            out.mismatches[ci].push_back({d, lhs, rhs});
                    }
                }
            }
        }
    };
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    std::vector<CrosscheckResult> results(nc);
    for (size_t ci = 0; ci < nc; ++ci) {
        results[ci].X = X;
        results[ci].S = configs[ci];
    }
    for (const BlockOut& out : outs) {
        for (size_t ci = 0; ci < nc; ++ci) {
            results[ci].checked += out.checked;
            results[ci].mismatch_count += out.mismatch_count[ci];
            for (const auto& m : out.mismatches[ci])
                if (results[ci].mismatches.size() < 32) results[ci].mismatches.push_back(m);
        }
    }
    return results;
}

CrosscheckResult crosscheck_hasse(i64 X, const SConfig& S, int workers,
                                  const CubicTable* shared_table) {
    return crosscheck_hasse_multi(X, {S}, workers, shared_table).front();
}

// ---- reports ----

std::string format_prime_set(const std::vector<i64>& primes) {
    std::string s;
    for (size_t i = 0; i < primes.size(); ++i) {
        if (i) s += "+";
        s += std::to_string(primes[i]);
    }
    return s;
}

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

void emit(std::vector<ReportRow>& rows, const std::string& theorem, const std::string& sig,
          const std::string& s_set, const std::string& s1_set, i64 X, double empirical,
          const Rat& predicted) {
    ReportRow row;
    row.theorem = theorem;
    row.signature = sig;
    row.s_set = s_set;
    row.s1_set = s1_set;
    row.X = X;
    row.empirical = empirical;
    row.predicted = predicted;
    row.deviation = std::abs(empirical - predicted.to_double());
    rows.push_back(std::move(row));
}

}  // namespace

std::vector<ReportRow> render_report(const CensusResult& result) {
    const CensusOptions& opt = result.options;
    if (result.checkpoints.empty() || result.final_acc().field_count == 0)
        throw std::invalid_argument("render_report: empty accumulator");
    std::string sig_name = to_string(opt.signature);
    std::string s_set = format_prime_set(opt.S.primes);
    int ns = opt.S.s_size();

    SConfig cfg = opt.S;
    bool cond = opt.require_split;
    if (cond) cfg.split_pattern = cfg.primes;  // all primes split by hypothesis
    int r_inf = opt.signature == Signature::real ? 1 : 0;

    std::vector<ReportRow> rows;
    for (const auto& [X, acc] : result.checkpoints) {
        if (acc.field_count == 0) continue;
        double fc = static_cast<double>(acc.field_count);
        double ufc = static_cast<double>(acc.unit_field_count());
        std::string s1_col = cond ? s_set : "";

        if (opt.class_groups) {
            Rat pred_cl = cond ? predicted_avg_cl_conditioned(cfg, opt.signature)
                               : predicted_avg_cl(cfg, opt.signature);
            emit(rows, "cl", sig_name, s_set, s1_col, X, static_cast<double>(acc.sum_cl3) / fc,
                 pred_cl);
            if (acc.unit_field_count() > 0) {
                Rat pred_selmer = cond ? predicted_avg_selmer_conditioned(cfg, opt.signature)
                                       : predicted_avg_selmer(cfg, opt.signature);
                emit(rows, "selmer", sig_name, s_set, s1_col, X,
                     static_cast<double>(acc.sum_selmer) / ufc, pred_selmer);
            }
        }
        if (acc.unit_field_count() > 0) {
            Rat pred_sunits = cond ? rat_pow(Rat{3}, r_inf + 2 * ns)
                                   : predicted_avg_sunits(cfg, opt.signature);
            emit(rows, "sunits", sig_name, s_set, s1_col, X,
                 static_cast<double>(acc.sum_sunits) / ufc, pred_sunits);
        }

        Rat pred_3s1 = cond ? rat_pow(Rat{3}, ns) : predicted_avg_3_pow_s1(cfg);
        emit(rows, "avg3s1", sig_name, s_set, s1_col, X,
             static_cast<double>(acc.sum_3pow_s1) / fc, pred_3s1);

        if (!cond && ns > 0) {
            // empirical rho(S_1) for each split pattern; "does not split"
            // covers inert and ramified
            for (int mask = 0; mask < (1 << ns); ++mask) {
                std::vector<i64> pattern;
                for (int i = 0; i < ns; ++i)
                    if (mask & (1 << i)) pattern.push_back(opt.S.primes[static_cast<size_t>(i)]);
                i64 matching = 0;
                for (const auto& [key, sub] : acc.profiles) {
                    auto types = decode_profile(key, ns);
                    bool match = true;
                    for (int i = 0; i < ns; ++i) {
                        bool want_split = (mask & (1 << i)) != 0;
                        if ((types[static_cast<size_t>(i)] == SplitType::split) != want_split)
                            match = false;
                    }
                    if (match) matching += sub.count;
                }
                SConfig pat_cfg = opt.S;
                pat_cfg.split_pattern = pattern;
                emit(rows, "rho", sig_name, s_set, format_prime_set(pattern), X,
                     static_cast<double>(matching) / fc,
                     predicted_density_quad(pat_cfg, opt.signature));
            }
        }
    }
    std::sort(rows.begin(), rows.end(), [](const ReportRow& a, const ReportRow& b) {
        return std::tie(a.theorem, a.signature, a.s_set, a.s1_set, a.X) <
               std::tie(b.theorem, b.signature, b.s_set, b.s1_set, b.X);
    });
    return rows;
}

std::vector<ReportRow> render_report(const CrosscheckResult& result) {
    std::vector<ReportRow> rows;
    emit(rows, "hasse_mismatches", "both", format_prime_set(result.S.primes), "", result.X,
         static_cast<double>(result.mismatch_count), Rat{0});
    return rows;
}

void write_csv(const std::vector<ReportRow>& rows, std::ostream& os) {
    os << "theorem,signature,S,S1,X,empirical,predicted,deviation\n";
    for (const ReportRow& r : rows) {
        os << r.theorem << ',' << r.signature << ',' << r.s_set << ',' << r.s1_set << ',' << r.X
           << ',' << fmt_double(r.empirical) << ',' << r.predicted.to_string() << ','
           << fmt_double(r.deviation) << '\n';
    }
}

std::string to_json(const std::vector<ReportRow>& rows,
                    const std::vector<CrosscheckResult>& crosschecks, i64 excluded_minus3) {
    nlohmann::ordered_json doc;
    doc["rows"] = nlohmann::ordered_json::array();
    for (const ReportRow& r : rows) {
        nlohmann::ordered_json jr;
        jr["theorem"] = r.theorem;
        jr["signature"] = r.signature;
        jr["S"] = r.s_set;
        jr["S1"] = r.s1_set;
        jr["X"] = r.X;
        jr["empirical"] = r.empirical;
        jr["predicted"] = {{"fraction", r.predicted.to_string()},
                           {"decimal", r.predicted.to_double()}};
        jr["deviation"] = r.deviation;
        doc["rows"].push_back(std::move(jr));
    }
    if (!crosschecks.empty()) {
        doc["crosschecks"] = nlohmann::ordered_json::array();
        for (const CrosscheckResult& c : crosschecks) {
            nlohmann::ordered_json jc;
            jc["X"] = c.X;
            jc["S"] = format_prime_set(c.S.primes);
            jc["checked"] = c.checked;
            jc["mismatches"] = c.mismatch_count;
            jc["witnesses"] = nlohmann::ordered_json::array();
            for (const auto& m : c.mismatches)
                jc["witnesses"].push_back(
                    {{"d", m.d}, {"forms_side", m.forms_side}, {"cubic_side", m.cubic_side}});
            doc["crosschecks"].push_back(std::move(jc));
        }
    }
    if (excluded_minus3 > 0) {
        doc["notes"] = {{"excluded_from_unit_sums",
                         "d = -3 (extra cube roots of unity), " +
                             std::to_string(excluded_minus3) + " field(s)"}};
    }
    return doc.dump(2) + "\n";
}

}  // namespace clsq
