#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "clsq/abgrp.hpp"
#include "clsq/arith.hpp"
#include "clsq/cubic.hpp"
#include "clsq/predict.hpp"
#include "clsq/quadform.hpp"

namespace clsq {

// Splitting profile of the primes in S for one field: one SplitType per prime
// of S in order, encoded base 3 (split = 0, inert = 1, ramified = 2).
int encode_profile(const std::vector<SplitType>& types);
std::vector<SplitType> decode_profile(int key, int s_size);

struct ProfileAcc {
    i64 count = 0;
    i64 sum_cl3 = 0;
    i64 sum_selmer = 0;
    i64 sum_sunits = 0;
};

// Running sums over one discriminant range; merging is associative and
// commutative, so ranges can be processed in any order or in parallel.
struct CensusAccumulator {
    i64 field_count = 0;
    i64 sum_cl3 = 0;
    i64 sum_selmer = 0;
    i64 sum_sunits = 0;
    i64 sum_3pow_s1 = 0;
    i64 max_disc_seen = 0;    // max |d| processed
    i64 excluded_minus3 = 0;  // d = -3 count, left out of S-unit/Selmer sums
    std::map<int, ProfileAcc> profiles;

    void merge(const CensusAccumulator& o);
    i64 unit_field_count() const { return field_count - excluded_minus3; }
};

struct CensusOptions {
    i64 max_disc = 100000;
    SConfig S;
    Signature signature = Signature::imaginary;
    bool require_split = false;  // keep only fields where every p in S splits
    bool class_groups = true;    // false: splitting-only sweep (densities,
                                 // S-unit sizes), no form enumeration
    int workers = 1;
    i64 max_memory_mb = 0;  // 0 = uncapped
};

struct CensusResult {
    CensusOptions options;
    // snapshots at each decade 10^k <= X and at X itself, ascending
    std::vector<std::pair<i64, CensusAccumulator>> checkpoints;
    const CensusAccumulator& final_acc() const { return checkpoints.back().second; }
};

CensusResult run_classgroup_census(const CensusOptions& options);

// Several S configurations evaluated against one shared sweep (the class
// group of each field is computed once, with the union of all primes marked).
// Each entry reuses options.max_disc / signature / workers; S and
// require_split come from the per-entry config.
struct CensusVariant {
    SConfig S;
    bool require_split = false;
};
std::vector<CensusResult> run_classgroup_census_multi(const CensusOptions& base,
                                                      const std::vector<CensusVariant>& variants);

// Number of nowhere totally ramified cubic fields with |disc| < X, given
// signature, with no inert_3 local type at any p in S.
i64 run_cubic_census(const CubicTable& table, i64 X, const SConfig& S, Signature sig);
i64 run_cubic_census(i64 X, const SConfig& S, Signature sig);

struct CrosscheckResult {
    i64 X = 0;
    SConfig S;
    i64 checked = 0;
    struct Mismatch {
        i64 d;
        i64 forms_side;   // |Cl(K)_S[3]| from the quadratic-form engine
        i64 cubic_side;   // 1 + 2 * matching cubic fields
    };
    std::vector<Mismatch> mismatches;  // capped at 32 witnesses
    i64 mismatch_count = 0;
};

// Field-by-field identity check between the two engines over every
// fundamental |d| < X, both signatures.
CrosscheckResult crosscheck_hasse(i64 X, const SConfig& S, int workers = 1,
                                  const CubicTable* shared_table = nullptr);

// Same sweep, several prime sets at once.
std::vector<CrosscheckResult> crosscheck_hasse_multi(i64 X, const std::vector<SConfig>& configs,
                                                     int workers = 1,
                                                     const CubicTable* shared_table = nullptr);

struct ReportRow {
    std::string theorem;
    std::string signature;
    std::string s_set;
    std::string s1_set;
    i64 X = 0;
    double empirical = 0;
    Rat predicted;
    double deviation = 0;
};

std::string format_prime_set(const std::vector<i64>& primes);  // "2+3", "" for empty

// Rows for every theorem the accumulator supports, deterministic order
// (theorem, signature, S, S1, X).
std::vector<ReportRow> render_report(const CensusResult& result);
std::vector<ReportRow> render_report(const CrosscheckResult& result);

void write_csv(const std::vector<ReportRow>& rows, std::ostream& os);
std::string to_json(const std::vector<ReportRow>& rows,
                    const std::vector<CrosscheckResult>& crosschecks = {},
                    i64 excluded_minus3 = 0);

}  // namespace clsq
