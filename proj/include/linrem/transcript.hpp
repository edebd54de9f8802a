// transcript.hpp: the reversible log of reduction steps. Every system
// transformation that changes variables, sets, or indexing appends one record;
// the transcript then supports three things:
//   * replay        — re-derive the reduced system from the original,
//   * solution maps — push a solution forward / lift one back (a bijection
//                     for all records except DropVariable, which needs the
//                     stored witness element),
//   * pull-back     — translate per-set element removals on the reduced
//                     system into removals on the original sets.
// Record indices always refer to the system state *before* the record applies.

#pragma once

#include <variant>

#include "system.hpp"

namespace linrem {

// Row reduction of the augmented matrix [A|b]; zero rows dropped.
struct RowOpsRec {
    int rows_before = 0;
    int rows_after = 0;
};

// Columns (and sets) reordered; perm[new_index] = old_index.
struct ColPermuteRec {
    std::vector<int> perm;
};

// Variable substitution x_i -> x_i - c on a pivot row with b_i = c;
// afterwards b_i = 0 and X_i is shifted by -c.
struct ShiftSetRec {
    int row = 0;
    Elt c = 0;
};

// X_survivor := X_survivor ∩ (scale · X_source). Emitted just before the
// matching MergeVariables record; solutions are unaffected (the discarded
// elements belong to no solution).
struct IntersectSetRec {
    int survivor = 0;
    int source = 0;
    Elt scale = 0;
};

// Variable `eliminated` (a pivot index) satisfies x_eliminated = lambda *
// x_survivor in every solution; row and column `eliminated` are removed.
struct MergeVariablesRec {
    int survivor = 0;
    int eliminated = 0;
    Elt lambda = 0;
};

// Pivot row `index` reads x_index = 0 with 0 ∈ X_index; the variable, row and
// set are removed.
struct ForceZeroRec {
    int index = 0;
};

// Column `index` is absent from every equation; the variable is dropped.
// `witness` is a fixed element of X_index used when lifting solutions.
struct DropVariableRec {
    int index = 0;
    Elt witness = 0;
};

using Record = std::variant<RowOpsRec, ColPermuteRec, ShiftSetRec, IntersectSetRec,
                            MergeVariablesRec, ForceZeroRec, DropVariableRec>;

using Transcript = std::vector<Record>;

namespace detail {

inline std::vector<int> inverse_perm(const std::vector<int>& perm) {
    std::vector<int> inv(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) inv[perm[i]] = static_cast<int>(i);
    return inv;
}

template <class T>
inline void erase_at(std::vector<T>& v, int idx) {
    v.erase(v.begin() + idx);
}

}  // namespace detail

inline LinSystem apply_record(const LinSystem& s, const Record& rec) {
    const Field& f = *s.field;
    return std::visit(
        [&](const auto& r) -> LinSystem {
            using R = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<R, RowOpsRec>) {
                if (s.k() != r.rows_before)
                    throw std::invalid_argument("transcript: row-op shape mismatch");
                Matrix aug(s.field, s.k(), s.m() + 1);
                for (int i = 0; i < s.k(); ++i) {
                    for (int j = 0; j < s.m(); ++j) aug.at(i, j) = s.a.at(i, j);
                    aug.at(i, s.m()) = s.b[i];
                }
                RrefResult rr = rref(aug);
                for (int p : rr.pivots)
                    if (p == s.m())
                        throw std::invalid_argument("transcript: replay hit an inconsistency");
                if (rr.rank != r.rows_after)
                    throw std::invalid_argument("transcript: row-op rank mismatch");
                Matrix a(s.field, rr.rank, s.m());
                std::vector<Elt> b(rr.rank);
                for (int i = 0; i < rr.rank; ++i) {
                    for (int j = 0; j < s.m(); ++j) a.at(i, j) = rr.reduced.at(i, j);
                    b[i] = rr.reduced.at(i, s.m());
                }
                return {s.field, std::move(a), std::move(b), s.sets};
            } else if constexpr (std::is_same_v<R, ColPermuteRec>) {
                Matrix a = permute_cols(s.a, r.perm);
                std::vector<EltSet> sets(s.m());
                for (int j = 0; j < s.m(); ++j) sets[j] = s.sets[r.perm[j]];
                return {s.field, std::move(a), s.b, std::move(sets)};
            } else if constexpr (std::is_same_v<R, ShiftSetRec>) {
                LinSystem out = s;
                out.b[r.row] = f.sub(out.b[r.row], r.c);
                out.sets[r.row] = set_shift(f, out.sets[r.row], r.c);
                return out;
            } else if constexpr (std::is_same_v<R, IntersectSetRec>) {
                LinSystem out = s;
                out.sets[r.survivor] =
                    set_intersect(out.sets[r.survivor], set_scale(f, out.sets[r.source], r.scale));
                return out;
            } else if constexpr (std::is_same_v<R, MergeVariablesRec>) {
                LinSystem out = s;
                out.a = drop_col(drop_row(out.a, r.eliminated), r.eliminated);
                detail::erase_at(out.b, r.eliminated);
                detail::erase_at(out.sets, r.eliminated);
                return out;
            } else if constexpr (std::is_same_v<R, ForceZeroRec>) {
                LinSystem out = s;
                out.a = drop_col(drop_row(out.a, r.index), r.index);
                detail::erase_at(out.b, r.index);
                detail::erase_at(out.sets, r.index);
                return out;
            } else {
                static_assert(std::is_same_v<R, DropVariableRec>);
                LinSystem out = s;
                out.a = drop_col(out.a, r.index);
                detail::erase_at(out.sets, r.index);
                return out;
            }
        },
        rec);
}

inline LinSystem replay(const LinSystem& original, const Transcript& tr) {
    LinSystem cur = original;
    for (const Record& rec : tr) cur = apply_record(cur, rec);
    return cur;
}

// Map a solution of the pre-record system to the post-record system.
inline std::vector<Elt> push_solution(const Field& f, const Record& rec,
                                      std::vector<Elt> x) {
    return std::visit(
        [&](const auto& r) -> std::vector<Elt> {
            using R = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<R, RowOpsRec> || std::is_same_v<R, IntersectSetRec>) {
                return x;
            } else if constexpr (std::is_same_v<R, ColPermuteRec>) {
                std::vector<Elt> out(x.size());
                for (std::size_t j = 0; j < r.perm.size(); ++j) out[j] = x[r.perm[j]];
                return out;
            } else if constexpr (std::is_same_v<R, ShiftSetRec>) {
                x[r.row] = f.sub(x[r.row], r.c);
                return x;
            } else if constexpr (std::is_same_v<R, MergeVariablesRec>) {
                detail::erase_at(x, r.eliminated);
                return x;
            } else if constexpr (std::is_same_v<R, ForceZeroRec>) {
                detail::erase_at(x, r.index);
                return x;
            } else {
                static_assert(std::is_same_v<R, DropVariableRec>);
                detail::erase_at(x, r.index);
                return x;
            }
        },
        rec);
}

// Map a solution of the post-record system back to the pre-record system.
inline std::vector<Elt> lift_solution(const Field& f, const Record& rec,
                                      std::vector<Elt> x) {
    return std::visit(
        [&](const auto& r) -> std::vector<Elt> {
            using R = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<R, RowOpsRec> || std::is_same_v<R, IntersectSetRec>) {
                return x;
            } else if constexpr (std::is_same_v<R, ColPermuteRec>) {
                std::vector<Elt> out(x.size());
                for (std::size_t j = 0; j < r.perm.size(); ++j) out[r.perm[j]] = x[j];
                return out;
            } else if constexpr (std::is_same_v<R, ShiftSetRec>) {
                x[r.row] = f.add(x[r.row], r.c);
                return x;
            } else if constexpr (std::is_same_v<R, MergeVariablesRec>) {
                const int sv = r.survivor - (r.survivor > r.eliminated ? 1 : 0);
                const Elt val = f.mul(r.lambda, x[sv]);
                x.insert(x.begin() + r.eliminated, val);
                return x;
            } else if constexpr (std::is_same_v<R, ForceZeroRec>) {
                x.insert(x.begin() + r.index, 0);
                return x;
            } else {
                static_assert(std::is_same_v<R, DropVariableRec>);
                x.insert(x.begin() + r.index, r.witness);
                return x;
            }
        },
        rec);
}

inline std::vector<Elt> push_solution(const Field& f, const Transcript& tr,
                                      std::vector<Elt> x) {
    for (const Record& rec : tr) x = push_solution(f, rec, std::move(x));
    return x;
}

inline std::vector<Elt> lift_solution(const Field& f, const Transcript& tr,
                                      std::vector<Elt> x) {
    for (auto it = tr.rbegin(); it != tr.rend(); ++it)
        x = lift_solution(f, *it, std::move(x));
    return x;
}

using Removal = std::pair<int, Elt>;  // (set index, element)

// Translate removals on the reduced system's sets into removals on the sets
// one record earlier. Guarantee used downstream: if deleting the input pairs
// makes the post-record system solution-free, deleting the output pairs makes
// the pre-record system solution-free.
inline std::vector<Removal> pull_back_removals(const Field& f, const Record& rec,
                                               std::vector<Removal> removals) {
    std::visit(
        [&](const auto& r) {
            using R = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<R, RowOpsRec> || std::is_same_v<R, IntersectSetRec>) {
                // set identities, no reindexing
            } else if constexpr (std::is_same_v<R, ColPermuteRec>) {
                for (auto& [idx, v] : removals) idx = r.perm[idx];
            } else if constexpr (std::is_same_v<R, ShiftSetRec>) {
                for (auto& [idx, v] : removals)
                    if (idx == r.row) v = f.add(v, r.c);
            } else if constexpr (std::is_same_v<R, MergeVariablesRec>) {
                for (auto& [idx, v] : removals)
                    if (idx >= r.eliminated) ++idx;
            } else if constexpr (std::is_same_v<R, ForceZeroRec>) {
                for (auto& [idx, v] : removals)
                    if (idx >= r.index) ++idx;
            } else {
                static_assert(std::is_same_v<R, DropVariableRec>);
                for (auto& [idx, v] : removals)
                    if (idx >= r.index) ++idx;
            }
        },
        rec);
    return removals;
}

inline std::vector<Removal> pull_back_removals(const Field& f, const Transcript& tr,
                                               std::vector<Removal> removals) {
    for (auto it = tr.rbegin(); it != tr.rend(); ++it)
        removals = pull_back_removals(f, *it, std::move(removals));
    std::sort(removals.begin(), removals.end());
    removals.erase(std::unique(removals.begin(), removals.end()), removals.end());
    return removals;
}

// Delete the listed elements; pairs naming absent elements are no-ops.
inline std::vector<EltSet> apply_removals(std::vector<EltSet> sets,
                                          const std::vector<Removal>& removals) {
    for (const auto& [idx, v] : removals) {
        if (idx < 0 || idx >= static_cast<int>(sets.size()))
            throw std::invalid_argument("removals: set index out of range");
        auto& s = sets[idx];
        auto it = std::lower_bound(s.begin(), s.end(), v);
        if (it != s.end() && *it == v) s.erase(it);
    }
    return sets;
}

}  // namespace linrem
