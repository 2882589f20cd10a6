#include "clsq/abgrp.hpp"

#include <algorithm>
#include <cstdlib>

namespace clsq {

namespace {

struct SnfState {
    IntMat m;       // working matrix, rows x cols
    IntMat v;       // cols x cols column transform (identity if untracked)
    bool track_v;
    int rows, cols;

    void row_swap(int i, int j) { std::swap(m[i], m[j]); }
    void col_swap(int i, int j) {
        for (auto& r : m) std::swap(r[i], r[j]);
        if (track_v)
            for (auto& r : v) std::swap(r[i], r[j]);
    }
    void row_add(int dst, int src, i64 k) {
        for (int c = 0; c < cols; ++c) m[dst][c] += k * m[src][c];
    }
    void col_add(int dst, int src, i64 k) {
        for (int r = 0; r < rows; ++r) m[r][dst] += k * m[r][src];
        if (track_v)
            for (int r = 0; r < cols; ++r) v[r][dst] += k * v[r][src];
    }
    void row_negate(int i) {
        for (int c = 0; c < cols; ++c) m[i][c] = -m[i][c];
    }
};

// Classic elimination with the minimal-|entry| pivot; entries stay tiny here
// (class numbers and small invariants), so plain i64 suffices.
void smith_reduce(SnfState& s) {
    int n = std::min(s.rows, s.cols);
    for (int t = 0; t < n; ++t) {
        for (;;) {
            // Locate minimal nonzero |entry| in the trailing block.
            int pr = -1, pc = -1;
            i64 best = 0;
            for (int i = t; i < s.rows; ++i)
                for (int j = t; j < s.cols; ++j) {
                    i64 a = std::abs(s.m[i][j]);
                    if (a != 0 && (pr < 0 || a < best)) { best = a; pr = i; pc = j; }
                }
            if (pr < 0) break;  // trailing block zero
            s.row_swap(t, pr);
            s.col_swap(t, pc);
            bool dirty = false;
            for (int i = t + 1; i < s.rows; ++i)
                if (s.m[i][t] != 0) { s.row_add(i, t, -floor_div(s.m[i][t], s.m[t][t])); dirty = dirty || s.m[i][t] != 0; }
            for (int j = t + 1; j < s.cols; ++j)
                if (s.m[t][j] != 0) { s.col_add(j, t, -floor_div(s.m[t][j], s.m[t][t])); dirty = dirty || s.m[t][j] != 0; }
            if (dirty) continue;
            // Pivot must divide the rest of the block for the SNF chain.
            bool divides = true;
            for (int i = t + 1; i < s.rows && divides; ++i)
                for (int j = t + 1; j < s.cols && divides; ++j)
                    if (s.m[i][j] % s.m[t][t] != 0) { s.row_add(t, i, 1); divides = false; }
            if (divides) break;
        }
        if (s.m[t][t] < 0) s.row_negate(t);
    }
}

}  // namespace

SmithDecomposition smith_with_transform(const IntMat& relations, int cols) {
    SnfState s;
    s.rows = static_cast<int>(relations.size());
    s.cols = cols;
    s.m = relations;
    for (const auto& r : s.m)
        if (static_cast<int>(r.size()) != cols)
            throw std::invalid_argument("smith: ragged relation matrix");
    s.track_v = true;
    s.v.assign(cols, std::vector<i64>(cols, 0));
    for (int i = 0; i < cols; ++i) s.v[i][i] = 1;
    smith_reduce(s);

    SmithDecomposition out;
    out.diag.assign(cols, 0);
    int n = std::min(s.rows, s.cols);
    for (int i = 0; i < n; ++i) out.diag[static_cast<size_t>(i)] = s.m[i][i];
    out.col_transform = std::move(s.v);
    return out;
}

std::vector<i64> smith_invariants(const IntMat& relations, int cols) {
    if (cols == 0) return {};
    SnfState s;
    s.rows = static_cast<int>(relations.size());
    s.cols = cols;
    s.m = relations;
    for (const auto& r : s.m)
        if (static_cast<int>(r.size()) != cols)
            throw std::invalid_argument("smith_invariants: ragged relation matrix");
    s.track_v = false;
    smith_reduce(s);
    std::vector<i64> inv;
    for (int i = 0; i < cols; ++i) {
        i64 d = i < s.rows ? s.m[i][i] : 0;
        if (d == 0)
            throw std::invalid_argument("smith_invariants: presentation of an infinite group");
        if (d > 1) inv.push_back(d);
    }
    return inv;
}

i64 quotient_three_torsion(const QuotientInput& q) {
    int k = static_cast<int>(q.invariants.size());
    IntMat rel;
    for (int i = 0; i < k; ++i) {
        std::vector<i64> row(static_cast<size_t>(k), 0);
        row[static_cast<size_t>(i)] = q.invariants[static_cast<size_t>(i)];
        rel.push_back(std::move(row));
    }
    for (const auto& g : q.generators) {
        if (static_cast<int>(g.size()) != k)
            throw std::invalid_argument("quotient_three_torsion: generator length mismatch");
        rel.push_back(g);
    }
    i64 size = 1;
    for (i64 m : smith_invariants(rel, k)) size *= std::gcd(m, static_cast<i64>(3));
    return size;
}

i64 sunit_size(const SUnitSizeInput& x) {
    if (x.s1_size < 0 || x.s1_size > x.s_size)
        throw std::invalid_argument("sunit_size: need 0 <= |S_1| <= |S|");
    int r_inf = x.signature == Signature::real ? 1 : 0;
    return ipow(3, r_inf + x.s_size + x.s1_size);
}

i64 selmer_size(const SUnitSizeInput& x, i64 cl_s_3) {
    if (!is_power_of_three(cl_s_3))
        throw std::invalid_argument("selmer_size: cl_s_3 must be a power of 3");
    return sunit_size(x) * cl_s_3;
}

}  // namespace clsq
