// normalize.hpp: reduce an arbitrary instance to the normal form the
// certificate construction needs:
//   (i)   b = 0,
//   (ii)  A = (I_k | B),
//   (iii) the rows of B are pairwise linearly independent,
//   (iv)  every row of B has at least two nonzero entries.
// Each stage is a pure function that appends transcript records; degenerate
// inputs (inconsistent, provably solution-free, or no equations left) are
// reported as outcomes, not errors. Solution counts are preserved by every
// stage, via the transcript bijection.

#pragma once

#include <optional>

#include "transcript.hpp"

namespace linrem {

enum class DegenerateKind {
    Inconsistent,  // some equation reduces to 0 = nonzero
    SolutionFree,  // a forced value is unavailable (e.g. x_i = 0, 0 ∉ X_i)
    AllFree,       // no equations remain; solutions = product of the sets
};

struct NormalizedSystem {
    LinSystem sys;
    Transcript transcript;
};

struct Degenerate {
    DegenerateKind kind;
    LinSystem residual;  // the system as it stood when the outcome was decided
    Transcript transcript;
};

using NormalizeOutcome = std::variant<NormalizedSystem, Degenerate>;

// Reason the system fails the normal-form predicates, or nullopt if it holds.
inline std::optional<std::string> normal_form_violation(const LinSystem& s) {
    const Field& f = *s.field;
    const int k = s.k(), m = s.m();
    for (int i = 0; i < k; ++i)
        if (s.b[i] != 0) return "b[" + std::to_string(i + 1) + "] is nonzero";
    if (k > m) return "more equations than variables";
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            if (s.a.at(i, j) != (i == j ? 1 : 0))
                return "left block is not the identity at (" + std::to_string(i + 1) + "," +
                       std::to_string(j + 1) + ")";
    for (int i = 0; i < k; ++i) {
        int nz = 0;
        for (int j = k; j < m; ++j)
            if (s.a.at(i, j) != 0) ++nz;
        if (nz < 2)
            return "row " + std::to_string(i + 1) + " of the right block has fewer than 2 nonzeros";
    }
    for (int i = 0; i < k; ++i) {
        for (int j = i + 1; j < k; ++j) {
            int t0 = -1;
            for (int c = k; c < m; ++c)
                if (s.a.at(i, c) != 0) {
                    t0 = c;
                    break;
                }
            const Elt lambda = f.mul(s.a.at(j, t0), f.inv(s.a.at(i, t0)));
            bool prop = lambda != 0;
            for (int c = k; c < m && prop; ++c)
                if (s.a.at(j, c) != f.mul(lambda, s.a.at(i, c))) prop = false;
            if (prop)
                return "rows " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                       " of the right block are proportional";
        }
    }
    return std::nullopt;
}

// Drop redundant equations; nullopt if some combination reads 0 = nonzero.
inline std::optional<LinSystem> ensure_full_rank(const LinSystem& s, Transcript& tr) {
    Matrix aug(s.field, s.k(), s.m() + 1);
    for (int i = 0; i < s.k(); ++i) {
        for (int j = 0; j < s.m(); ++j) aug.at(i, j) = s.a.at(i, j);
        aug.at(i, s.m()) = s.b[i];
    }
    RrefResult rr = rref(aug);
    for (int p : rr.pivots)
        if (p == s.m()) return std::nullopt;
    if (rr.rank == s.k()) return s;  // already full rank: leave untouched
    RowOpsRec rec{s.k(), rr.rank};
    LinSystem out = apply_record(s, rec);
    tr.push_back(rec);
    return out;
}

// Row-reduce and permute columns so A = (I_k | B). Pre: full row rank.
inline LinSystem to_identity_form(const LinSystem& s, Transcript& tr) {
    Matrix aug(s.field, s.k(), s.m() + 1);
    for (int i = 0; i < s.k(); ++i) {
        for (int j = 0; j < s.m(); ++j) aug.at(i, j) = s.a.at(i, j);
        aug.at(i, s.m()) = s.b[i];
    }
    RrefResult rr = rref(aug);
    if (rr.rank != s.k())
        throw std::invalid_argument("to_identity_form: matrix does not have full row rank");
    LinSystem cur = s;
    bool changed = false;
    for (int i = 0; i < s.k() && !changed; ++i)
        for (int j = 0; j <= s.m() && !changed; ++j)
            if (aug.at(i, j) != rr.reduced.at(i, j)) changed = true;
    if (changed) {
        RowOpsRec rec{s.k(), s.k()};
        cur = apply_record(cur, rec);
        tr.push_back(rec);
    }
    std::vector<int> perm = rr.pivots;
    std::vector<bool> is_pivot(s.m(), false);
    for (int p : rr.pivots) is_pivot[p] = true;
    for (int c = 0; c < s.m(); ++c)
        if (!is_pivot[c]) perm.push_back(c);
    bool is_id = true;
    for (std::size_t j = 0; j < perm.size(); ++j)
        if (perm[j] != static_cast<int>(j)) is_id = false;
    if (!is_id) {
        ColPermuteRec rec{std::move(perm)};
        cur = apply_record(cur, rec);
        tr.push_back(std::move(rec));
    }
    return cur;
}

// Shift sets so b = 0. Pre: A = (I_k | B).
inline LinSystem homogenize(const LinSystem& s, Transcript& tr) {
    LinSystem cur = s;
    for (int i = 0; i < cur.k(); ++i) {
        if (cur.b[i] == 0) continue;
        ShiftSetRec rec{i, cur.b[i]};
        cur = apply_record(cur, rec);
        tr.push_back(rec);
    }
    return cur;
}

// Remove rows of B with fewer than two nonzeros, smallest row index first.
// nullopt: a zero row pins x_i = 0 but 0 ∉ X_i, so no solution exists.
inline std::optional<LinSystem> eliminate_thin_rows(const LinSystem& s, Transcript& tr) {
    const Field& f = *s.field;
    LinSystem cur = s;
    for (;;) {
        const int k = cur.k(), m = cur.m();
        int row = -1, nz_col = -1, nz_count = 0;
        for (int i = 0; i < k && row < 0; ++i) {
            int cnt = 0, last = -1;
            for (int j = k; j < m; ++j)
                if (cur.a.at(i, j) != 0) {
                    ++cnt;
                    last = j;
                }
            if (cnt < 2) {
                row = i;
                nz_col = last;
                nz_count = cnt;
            }
        }
        if (row < 0) return cur;
        if (nz_count == 0) {
            if (!set_contains(cur.sets[row], 0)) return std::nullopt;
            ForceZeroRec rec{row};
            cur = apply_record(cur, rec);
            tr.push_back(rec);
            continue;
        }
        // x_row = lambda * x_{nz_col} with lambda = -B entry
        const Elt lambda = f.neg(cur.a.at(row, nz_col));
        IntersectSetRec isec{nz_col, row, f.inv(lambda)};
        cur = apply_record(cur, isec);
        tr.push_back(isec);
        MergeVariablesRec merge{nz_col, row, lambda};
        cur = apply_record(cur, merge);
        tr.push_back(merge);
    }
}

// Merge pairs of proportional B rows, smallest (i, j) first.
inline LinSystem merge_proportional_rows(const LinSystem& s, Transcript& tr) {
    const Field& f = *s.field;
    LinSystem cur = s;
    for (;;) {
        const int k = cur.k(), m = cur.m();
        int fi = -1, fj = -1;
        Elt lambda = 0;
        for (int i = 0; i < k && fi < 0; ++i) {
            int t0 = -1;
            for (int c = k; c < m; ++c)
                if (cur.a.at(i, c) != 0) {
                    t0 = c;
                    break;
                }
            if (t0 < 0) continue;  // zero row: eliminate_thin_rows territory
            for (int j = i + 1; j < k && fi < 0; ++j) {
                const Elt l = f.mul(cur.a.at(j, t0), f.inv(cur.a.at(i, t0)));
                if (l == 0) continue;
                bool prop = true;
                for (int c = k; c < m && prop; ++c)
                    if (cur.a.at(j, c) != f.mul(l, cur.a.at(i, c))) prop = false;
                if (prop) {
                    fi = i;
                    fj = j;
                    lambda = l;
                }
            }
        }
        if (fi < 0) return cur;
        // rows fi, fj satisfy B_fj = lambda * B_fi, hence x_fj = lambda * x_fi
        IntersectSetRec isec{fi, fj, f.inv(lambda)};
        cur = apply_record(cur, isec);
        tr.push_back(isec);
        MergeVariablesRec merge{fi, fj, lambda};
        cur = apply_record(cur, merge);
        tr.push_back(merge);
    }
}

inline NormalizeOutcome normalize(const LinSystem& s) {
    Transcript tr;
    auto fr = ensure_full_rank(s, tr);
    if (!fr) return Degenerate{DegenerateKind::Inconsistent, s, std::move(tr)};
    LinSystem cur = *fr;
    if (cur.k() == 0) return Degenerate{DegenerateKind::AllFree, std::move(cur), std::move(tr)};
    cur = to_identity_form(cur, tr);
    cur = homogenize(cur, tr);
    for (;;) {
        const std::size_t before = tr.size();
        auto thin = eliminate_thin_rows(cur, tr);
        if (!thin)
            return Degenerate{DegenerateKind::SolutionFree, std::move(cur), std::move(tr)};
        cur = std::move(*thin);
        if (cur.k() == 0)
            return Degenerate{DegenerateKind::AllFree, std::move(cur), std::move(tr)};
        cur = merge_proportional_rows(cur, tr);
        if (tr.size() == before) break;
    }
    if (auto why = normal_form_violation(cur))
        throw std::logic_error("normalize: output violates normal form: " + *why);
    return NormalizedSystem{std::move(cur), std::move(tr)};
}

}  // namespace linrem
