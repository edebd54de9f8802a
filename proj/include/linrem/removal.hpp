// removal.hpp: the constructive end of the story. Given an instance, find an
// explicit edge set E' killing every copy of the template in K, convert E'
// into per-set element removals through the exact q^k/m pigeonhole, pull the
// removals back through the reduction transcript, and machine-verify that the
// pruned original system has no solutions. Every theoretical step is checked,
// not assumed; a failed check throws, because the mathematics says it cannot
// fail.

#pragma once

#include <map>

#include "hypergraph.hpp"
#include "normalize.hpp"

namespace linrem {

inline std::uint64_t fnv1a(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

struct SolutionCount {
    std::uint64_t count = 0;
    std::vector<std::vector<Elt>> solutions;  // valid only when collected
    bool collected = true;
};

// Parametrized enumeration: free (non-pivot) variables range over the whole
// field, pivot values follow, memberships are checked last. Exact and
// deterministic; the budget gates q^(number of free variables).
inline SolutionCount count_solutions(const LinSystem& s, std::uint64_t budget,
                                     std::uint64_t collect_limit = 1u << 20) {
    const Field& f = *s.field;
    const std::uint64_t q = f.q();
    const int k = s.k(), m = s.m();
    Matrix aug(s.field, k, m + 1);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < m; ++j) aug.at(i, j) = s.a.at(i, j);
        aug.at(i, m) = s.b[i];
    }
    RrefResult rr = rref(aug);
    for (int p : rr.pivots)
        if (p == m) return {};  // inconsistent: zero solutions
    std::vector<bool> is_pivot(m, false);
    for (int p : rr.pivots) is_pivot[p] = true;
    std::vector<int> free_cols;
    for (int c = 0; c < m; ++c)
        if (!is_pivot[c]) free_cols.push_back(c);
    auto total = checked_pow(q, static_cast<int>(free_cols.size()));
    if (!total || *total > budget)
        throw BudgetError("solution enumeration q^(m-k)",
                          total ? *total : std::numeric_limits<std::uint64_t>::max(), budget);
    SolutionCount out;
    std::vector<Elt> x(m, 0), fv(free_cols.size(), 0);
    for (std::uint64_t n = 0; n < *total; ++n) {
        for (std::size_t t = 0; t < free_cols.size(); ++t) x[free_cols[t]] = fv[t];
        for (int i = 0; i < rr.rank; ++i) {
            Elt v = rr.reduced.at(i, m);
            for (std::size_t t = 0; t < free_cols.size(); ++t) {
                const Elt coef = rr.reduced.at(i, free_cols[t]);
                if (coef != 0 && fv[t] != 0) v = f.sub(v, f.mul(coef, fv[t]));
            }
            x[rr.pivots[i]] = v;
        }
        bool ok = true;
        for (int c = 0; c < m && ok; ++c)
            if (!set_contains(s.sets[c], x[c])) ok = false;
        if (ok) {
            ++out.count;
            if (out.collected) {
                if (out.solutions.size() < collect_limit)
                    out.solutions.push_back(x);
                else
                    out.collected = false;
            }
        }
        for (int t = static_cast<int>(free_cols.size()) - 1; t >= 0; --t) {
            if (++fv[t] < q) break;
            fv[t] = 0;
        }
    }
    if (!out.collected) out.solutions.clear();
    return out;
}

namespace detail {

// Exact minimum hitting set over small universes, by branch and bound on the
// un-hit set with fewest elements. Elements are branched in ascending key
// order, so the result is deterministic.
class HittingSetSolver {
public:
    HittingSetSolver(const std::vector<std::vector<std::uint64_t>>& sets,
                     std::uint64_t node_budget)
        : node_budget_(node_budget) {
        for (const auto& s : sets)
            for (std::uint64_t e : s) keys_.push_back(e);
        std::sort(keys_.begin(), keys_.end());
        keys_.erase(std::unique(keys_.begin(), keys_.end()), keys_.end());
        sets_.reserve(sets.size());
        for (const auto& s : sets) {
            std::vector<int> ids;
            ids.reserve(s.size());
            for (std::uint64_t e : s)
                ids.push_back(static_cast<int>(
                    std::lower_bound(keys_.begin(), keys_.end(), e) - keys_.begin()));
            std::sort(ids.begin(), ids.end());
            ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
            if (ids.empty()) throw std::invalid_argument("hitting set: empty set");
            sets_.push_back(std::move(ids));
        }
        elem_sets_.resize(keys_.size());
        for (std::size_t si = 0; si < sets_.size(); ++si)
            for (int e : sets_[si]) elem_sets_[e].push_back(static_cast<int>(si));
        hit_.assign(sets_.size(), 0);
        chosen_.assign(keys_.size(), 0);
    }

    std::vector<std::uint64_t> solve() {
        best_ = greedy();
        std::vector<int> cur;
        dfs(cur);
        std::vector<std::uint64_t> out;
        out.reserve(best_.size());
        for (int e : best_) out.push_back(keys_[e]);
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    std::vector<std::uint64_t> keys_;
    std::vector<std::vector<int>> sets_;
    std::vector<std::vector<int>> elem_sets_;
    std::vector<int> hit_;
    std::vector<char> chosen_;
    std::vector<int> best_;
    std::uint64_t nodes_ = 0, node_budget_;

    std::vector<int> greedy() {
        std::vector<int> hit(sets_.size(), 0), picks;
        std::size_t remaining = sets_.size();
        while (remaining > 0) {
            int best_elem = -1;
            std::size_t best_cover = 0;
            for (std::size_t e = 0; e < elem_sets_.size(); ++e) {
                std::size_t cover = 0;
                for (int si : elem_sets_[e])
                    if (hit[si] == 0) ++cover;
                if (cover > best_cover) {
                    best_cover = cover;
                    best_elem = static_cast<int>(e);
                }
            }
            picks.push_back(best_elem);
            for (int si : elem_sets_[best_elem])
                if (hit[si]++ == 0) --remaining;
        }
        return picks;
    }

    void dfs(std::vector<int>& cur) {
        if (++nodes_ > node_budget_)
            throw BudgetError("hitting-set search nodes", nodes_, node_budget_);
        if (cur.size() >= best_.size()) return;
        // un-hit set with fewest elements
        int pick = -1;
        std::size_t pick_size = 0;
        for (std::size_t si = 0; si < sets_.size(); ++si) {
            if (hit_[si] > 0) continue;
            if (pick < 0 || sets_[si].size() < pick_size) {
                pick = static_cast<int>(si);
                pick_size = sets_[si].size();
            }
        }
        if (pick < 0) {
            best_ = cur;
            return;
        }
        if (cur.size() + disjoint_bound() >= best_.size()) return;
        for (int e : sets_[pick]) {
            if (chosen_[e]) continue;
            chosen_[e] = 1;
            for (int si : elem_sets_[e]) ++hit_[si];
            cur.push_back(e);
            dfs(cur);
            cur.pop_back();
            for (int si : elem_sets_[e]) --hit_[si];
            chosen_[e] = 0;
        }
    }

    // Number of pairwise-disjoint un-hit sets: a valid lower bound on how many
    // further elements any completion needs.
    std::size_t disjoint_bound() const {
        std::vector<char> used(keys_.size(), 0);
        std::size_t lb = 0;
        for (const auto& s : sets_) {
            bool unhit = true;
            // a set already hit by the current choice needs nothing
            // (hit_ is maintained by dfs)
            const std::size_t si = static_cast<std::size_t>(&s - sets_.data());
            if (hit_[si] > 0) continue;
            for (int e : s)
                if (used[e]) {
                    unhit = false;
                    break;
                }
            if (!unhit) continue;
            ++lb;
            for (int e : s) used[e] = 1;
        }
        return lb;
    }
};

}  // namespace detail

inline std::vector<std::uint64_t> min_hitting_set(
    const std::vector<std::vector<std::uint64_t>>& sets, std::uint64_t node_budget = 10'000'000) {
    if (sets.empty()) return {};
    return detail::HittingSetSolver(sets, node_budget).solve();
}

enum class HitStrategy { Greedy, AllCopyEdges, Exact };

inline const char* to_string(HitStrategy s) {
    switch (s) {
        case HitStrategy::Greedy: return "greedy";
        case HitStrategy::AllCopyEdges: return "all";
        case HitStrategy::Exact: return "exact";
    }
    return "?";
}

inline std::optional<HitStrategy> parse_strategy(const std::string& s) {
    if (s == "greedy") return HitStrategy::Greedy;
    if (s == "all" || s == "all-copy-edges") return HitStrategy::AllCopyEdges;
    if (s == "exact") return HitStrategy::Exact;
    return std::nullopt;
}

struct HitBudgets {
    std::uint64_t materialize_cap = 1'000'000;  // edges of K
    std::uint64_t exact_copy_cap = 10'000;      // copies for the exact strategy
    std::uint64_t node_budget = 10'000'000;     // branch-and-bound nodes
};

// E' hitting every copy of every solution; sorted edge keys. The returned set
// provably hits all copies (rechecked here against the copy lists; the
// pipeline re-verifies against a full recount).
inline std::vector<std::uint64_t> hitting_edge_set(const BigHypergraph& kk,
                                                   const std::vector<std::vector<Elt>>& solutions,
                                                   HitStrategy strategy,
                                                   const HitBudgets& budgets = {}) {
    const std::uint64_t edges = kk.total_edges();
    if (edges > budgets.materialize_cap)
        throw BudgetError("edge materialization", edges, budgets.materialize_cap);
    std::vector<std::vector<std::uint64_t>> copy_keys;
    for (const auto& x : solutions)
        for (const auto& copy : kk.copies_for_solution(x))
            copy_keys.push_back(kk.copy_edge_keys(copy));
    std::vector<std::uint64_t> chosen;
    if (copy_keys.empty()) return chosen;
    switch (strategy) {
        case HitStrategy::AllCopyEdges: {
            for (const auto& keys : copy_keys)
                chosen.insert(chosen.end(), keys.begin(), keys.end());
            std::sort(chosen.begin(), chosen.end());
            chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());
            break;
        }
        case HitStrategy::Greedy: {
            std::vector<char> alive(copy_keys.size(), 1);
            std::size_t remaining = copy_keys.size();
            while (remaining > 0) {
                std::map<std::uint64_t, std::size_t> tally;
                for (std::size_t ci = 0; ci < copy_keys.size(); ++ci) {
                    if (!alive[ci]) continue;
                    for (std::uint64_t key : copy_keys[ci]) ++tally[key];
                }
                std::uint64_t pick = 0;
                std::size_t best = 0;
                for (const auto& [key, cnt] : tally)
                    if (cnt > best) {  // map order makes ties pick the smallest key
                        best = cnt;
                        pick = key;
                    }
                chosen.push_back(pick);
                for (std::size_t ci = 0; ci < copy_keys.size(); ++ci) {
                    if (!alive[ci]) continue;
                    if (std::find(copy_keys[ci].begin(), copy_keys[ci].end(), pick) !=
                        copy_keys[ci].end()) {
                        alive[ci] = 0;
                        --remaining;
                    }
                }
            }
            std::sort(chosen.begin(), chosen.end());
            break;
        }
        case HitStrategy::Exact: {
            if (copy_keys.size() > budgets.exact_copy_cap)
                throw BudgetError("exact hitting-set copy count", copy_keys.size(),
                                  budgets.exact_copy_cap);
            chosen = min_hitting_set(copy_keys, budgets.node_budget);
            break;
        }
    }
    for (const auto& keys : copy_keys) {
        bool hit = false;
        for (std::uint64_t key : keys)
            if (std::binary_search(chosen.begin(), chosen.end(), key)) {
                hit = true;
                break;
            }
        if (!hit) throw std::logic_error("hitting_edge_set: a copy survived");
    }
    return chosen;
}

// The pigeonhole conversion: remove x from X_i exactly when E' holds at least
// q^k/m edges colored i and labeled x (exact integer comparison m·count >= q^k).
inline std::vector<Removal> pigeonhole_elements(const BigHypergraph& kk,
                                                const std::vector<std::uint64_t>& edge_keys) {
    std::map<std::pair<int, Elt>, std::uint64_t> tally;
    for (std::uint64_t key : edge_keys) {
        const auto e = kk.decode_edge(key);
        ++tally[{e.color, e.label}];
    }
    const unsigned __int128 qk = kk.copies_per_solution();
    const unsigned __int128 m = static_cast<std::uint64_t>(kk.m());
    std::vector<Removal> out;
    for (const auto& [colabel, cnt] : tally)
        if (m * static_cast<unsigned __int128>(cnt) >= qk)
            out.push_back({colabel.first, colabel.second});
    // at most m·|E'|/q^k pairs can clear the threshold
    if (static_cast<unsigned __int128>(out.size()) * qk >
        m * static_cast<unsigned __int128>(edge_keys.size()))
        throw std::logic_error("pigeonhole: removed pair count exceeds its bound");
    std::sort(out.begin(), out.end());
    return out;
}

struct RemovalOptions {
    HitStrategy strategy = HitStrategy::Greedy;
    std::uint64_t budget = 100'000'000;  // enumeration budget (assignments / parametrized solutions)
    int threads = 1;
    HitBudgets hit;
};

struct RemovalReport {
    std::string status;  // ok | inconsistent | solution-free | all-free | unremovable-empty
    std::string strategy;
    std::uint32_t p = 0, n = 1;
    std::uint64_t q = 0;
    int cert_k = 0, cert_m = 0;
    std::uint64_t threshold_num = 0;  // q^k; threshold is q^k / m
    int threshold_den = 0;            // m
    std::uint64_t solutions_before = 0;
    std::uint64_t copies_before = 0;
    std::uint64_t edge_set_size = 0;
    std::uint64_t removed_pairs = 0;
    std::vector<Removal> removed_normalized;  // certified-system indexing
    std::vector<Removal> removed_original;
    bool h_free = false;
    bool normalized_solution_free = false;
    bool original_solution_free = false;
    bool pigeonhole_bound_ok = false;
    bool counting_identity_ok = false;
    std::uint64_t final_solutions = 0;
    std::uint64_t certificate_digest = 0;
};

namespace detail {

inline void prune_sets(LinSystem& s, const std::vector<Removal>& removals) {
    s.sets = apply_removals(std::move(s.sets), removals);
}

}  // namespace detail

// Exact minimum number of element deletions destroying every solution;
// independent lower-bound oracle for the pipeline.
inline std::uint64_t min_element_removal_bruteforce(const LinSystem& s,
                                                    std::uint64_t budget = 100'000'000,
                                                    std::uint64_t node_budget = 10'000'000) {
    SolutionCount sc = count_solutions(s, budget);
    if (sc.count == 0) return 0;
    std::uint64_t set_total = 0;
    for (const auto& x : s.sets) set_total += x.size();
    if (set_total > 24 && sc.count > 1000)
        throw BudgetError("element-removal oracle solutions", sc.count, 1000);
    if (!sc.collected)
        throw BudgetError("element-removal oracle collection", sc.count, 1u << 20);
    std::vector<std::vector<std::uint64_t>> sets;
    sets.reserve(sc.solutions.size());
    for (const auto& x : sc.solutions) {
        std::vector<std::uint64_t> pairs(x.size());
        for (std::size_t i = 0; i < x.size(); ++i)
            pairs[i] = (static_cast<std::uint64_t>(i) << 32) | x[i];
        sets.push_back(std::move(pairs));
    }
    return min_hitting_set(sets, node_budget).size();
}

inline RemovalReport removal_pipeline(const LinSystem& s, const RemovalOptions& opts = {}) {
    const Field& f = *s.field;
    RemovalReport rep;
    rep.strategy = to_string(opts.strategy);
    rep.p = f.p();
    rep.n = f.n();
    rep.q = f.q();
    rep.solutions_before = count_solutions(s, opts.budget).count;

    NormalizeOutcome outcome = normalize(s);

    auto finish_original = [&](const std::vector<Removal>& removed_original) {
        rep.removed_original = removed_original;
        LinSystem pruned = s;
        detail::prune_sets(pruned, removed_original);
        rep.final_solutions = count_solutions(pruned, opts.budget).count;
        rep.original_solution_free = rep.final_solutions == 0;
    };

    if (auto* deg = std::get_if<Degenerate>(&outcome)) {
        if (deg->kind == DegenerateKind::Inconsistent ||
            deg->kind == DegenerateKind::SolutionFree) {
            rep.status = deg->kind == DegenerateKind::Inconsistent ? "inconsistent"
                                                                   : "solution-free";
            if (rep.solutions_before != 0)
                throw std::logic_error("pipeline: degenerate outcome with surviving solutions");
            rep.h_free = rep.normalized_solution_free = true;
            rep.pigeonhole_bound_ok = rep.counting_identity_ok = true;
            finish_original({});
            return rep;
        }
        // AllFree: no equations remain; solutions are the set product.
        const LinSystem& residual = deg->residual;
        rep.cert_k = 0;
        rep.cert_m = residual.m();
        bool any_empty = false;
        for (const auto& x : residual.sets)
            if (x.empty()) any_empty = true;
        if (any_empty) {
            rep.status = "solution-free";
            if (rep.solutions_before != 0)
                throw std::logic_error("pipeline: empty set but solutions exist");
            rep.h_free = rep.normalized_solution_free = true;
            rep.pigeonhole_bound_ok = rep.counting_identity_ok = true;
            finish_original({});
            return rep;
        }
        if (residual.m() == 0) {
            // the empty system has the empty solution; no element removal
            // can destroy it
            rep.status = "unremovable-empty";
            rep.final_solutions = 1;
            return rep;
        }
        rep.status = "all-free";
        int best = 0;
        for (int i = 1; i < residual.m(); ++i)
            if (residual.sets[i].size() < residual.sets[best].size()) best = i;
        std::vector<Removal> removals;
        for (Elt v : residual.sets[best]) removals.push_back({best, v});
        rep.removed_normalized = removals;
        rep.removed_pairs = removals.size();
        LinSystem pruned_res = residual;
        detail::prune_sets(pruned_res, removals);
        rep.normalized_solution_free = count_solutions(pruned_res, opts.budget).count == 0;
        rep.h_free = true;  // no equations, no copies
        rep.pigeonhole_bound_ok = rep.counting_identity_ok = true;
        finish_original(pull_back_removals(f, deg->transcript, removals));
        if (!rep.normalized_solution_free || !rep.original_solution_free)
            throw std::logic_error("pipeline: emptied-set removal left solutions");
        return rep;
    }

    auto& ns = std::get<NormalizedSystem>(outcome);
    LinSystem work = std::move(ns.sys);
    Transcript tr = std::move(ns.transcript);

    // The certificate construction cannot house variables absent from every
    // equation; drop them (their sets re-enter via the transcript pull-back).
    for (;;) {
        int zero_col = -1;
        for (int j = work.k(); j < work.m() && zero_col < 0; ++j)
            if (work.a.col_is_zero(j)) zero_col = j;
        if (zero_col < 0) break;
        if (work.sets[zero_col].empty()) {
            rep.status = "solution-free";
            if (rep.solutions_before != 0)
                throw std::logic_error("pipeline: empty set but solutions exist");
            rep.h_free = rep.normalized_solution_free = true;
            rep.pigeonhole_bound_ok = rep.counting_identity_ok = true;
            finish_original({});
            return rep;
        }
        DropVariableRec rec{zero_col, work.sets[zero_col].front()};
        work = apply_record(work, rec);
        tr.push_back(rec);
    }

    KernelCertificate cert = build_certificate(work.a);
    {
        bool is_id = true;
        for (std::size_t j = 0; j < cert.trace.colperm.size(); ++j)
            if (cert.trace.colperm[j] != static_cast<int>(j)) is_id = false;
        if (!is_id) {
            ColPermuteRec rec{cert.trace.colperm};
            work = apply_record(work, rec);
            tr.push_back(std::move(rec));
        }
        if (!(work.a == cert.a))
            throw std::logic_error("pipeline: certified matrix does not match the permuted system");
    }
    rep.cert_k = work.k();
    rep.cert_m = work.m();
    rep.certificate_digest = fnv1a(emit_certificate(cert));

    BigHypergraph kk(work.field, cert.c, cert.s, work.sets, work.k());
    rep.threshold_num = kk.copies_per_solution();
    rep.threshold_den = kk.m();

    SolutionCount sc = count_solutions(work, opts.budget);
    if (!sc.collected)
        throw BudgetError("pipeline solution collection", sc.count, 1u << 20);
    rep.copies_before = kk.count_copies(opts.budget, opts.threads);
    const unsigned __int128 expect =
        static_cast<unsigned __int128>(kk.copies_per_solution()) * sc.count;
    rep.counting_identity_ok = expect == static_cast<unsigned __int128>(rep.copies_before);
    if (!rep.counting_identity_ok)
        throw std::logic_error("pipeline: copy count != q^k * solution count");

    std::vector<std::uint64_t> eprime =
        hitting_edge_set(kk, sc.solutions, opts.strategy, opts.hit);
    rep.edge_set_size = eprime.size();
    rep.h_free = kk.count_copies(opts.budget, opts.threads, &eprime) == 0;
    if (!rep.h_free) throw std::logic_error("pipeline: K - E' still contains a copy");

    std::vector<Removal> removals = pigeonhole_elements(kk, eprime);
    rep.pigeonhole_bound_ok = true;  // pigeonhole_elements asserts the bound
    rep.removed_pairs = removals.size();
    rep.removed_normalized = removals;

    LinSystem pruned = work;
    detail::prune_sets(pruned, removals);
    rep.normalized_solution_free = count_solutions(pruned, opts.budget).count == 0;
    if (rep.h_free && !rep.normalized_solution_free)
        throw std::logic_error("pipeline: H-free but the pruned normalized system has solutions");

    finish_original(pull_back_removals(f, tr, removals));
    if (!rep.original_solution_free)
        throw std::logic_error("pipeline: pruned original system still has solutions");
    rep.status = "ok";
    return rep;
}

inline std::string format_removals(const std::vector<Removal>& removals) {
    std::ostringstream os;
    int cur = -1;
    bool first_set = true;
    for (const auto& [idx, v] : removals) {
        if (idx != cur) {
            if (!first_set) os << "; ";
            os << "X" << (idx + 1) << ":";
            cur = idx;
            first_set = false;
        }
        os << ' ' << v;
    }
    return os.str();
}

inline std::string emit_report_text(const RemovalReport& r) {
    std::ostringstream os;
    os << "status: " << r.status << '\n';
    os << "strategy: " << r.strategy << '\n';
    os << "field: " << r.p;
    if (r.n > 1) os << '^' << r.n;
    os << '\n';
    os << "certified_k: " << r.cert_k << '\n';
    os << "certified_m: " << r.cert_m << '\n';
    os << "threshold: " << r.threshold_num << '/' << r.threshold_den << '\n';
    os << "solutions_before: " << r.solutions_before << '\n';
    os << "copies_before: " << r.copies_before << '\n';
    os << "edge_set_size: " << r.edge_set_size << '\n';
    os << "removed_pairs: " << r.removed_pairs << '\n';
    os << "removed_normalized: " << format_removals(r.removed_normalized) << '\n';
    os << "removed_original: " << format_removals(r.removed_original) << '\n';
    os << "h_free: " << (r.h_free ? "yes" : "no") << '\n';
    os << "normalized_solution_free: " << (r.normalized_solution_free ? "yes" : "no") << '\n';
    os << "original_solution_free: " << (r.original_solution_free ? "yes" : "no") << '\n';
    os << "pigeonhole_bound_ok: " << (r.pigeonhole_bound_ok ? "yes" : "no") << '\n';
    os << "counting_identity_ok: " << (r.counting_identity_ok ? "yes" : "no") << '\n';
    os << "final_solutions: " << r.final_solutions << '\n';
    os << "certificate_digest: " << r.certificate_digest << '\n';
    return os.str();
}

}  // namespace linrem
