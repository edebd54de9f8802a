// hypergraph.hpp: the m-partite, m-colored hypergraph K built from a kernel
// certificate (C, S_1..S_m) and candidate sets X_1..X_m. Vertices are pairs
// (field element, part index); an edge of color i carries a label x and an
// assignment a restricted to S_i, and exists iff
//     sum_{j in S_i} C_ij a_j = x   and   x in X_i.
// K is never materialized for counting: assignments a in F^m are scanned in
// odometer order with incremental label updates, so copy counts are exact and
// independent of the thread count. A copy of the template H is a full
// assignment whose induced labels all land in their sets; its label vector is
// then a solution of Ax = 0 and each solution owns exactly q^k edge-disjoint
// copies.

#pragma once

#include <limits>
#include <thread>

#include "certificate.hpp"
#include "system.hpp"

namespace linrem {

struct BudgetError : std::runtime_error {
    std::string constraint;
    std::uint64_t required = 0;
    std::uint64_t budget = 0;

    BudgetError(std::string what, std::uint64_t req, std::uint64_t lim)
        : std::runtime_error(what + ": requires " + std::to_string(req) +
                             ", budget is " + std::to_string(lim)),
          constraint(std::move(what)), required(req), budget(lim) {}
};

// q^e, or nullopt on uint64 overflow.
inline std::optional<std::uint64_t> checked_pow(std::uint64_t q, int e) {
    std::uint64_t r = 1;
    for (int i = 0; i < e; ++i) {
        if (q != 0 && r > std::numeric_limits<std::uint64_t>::max() / q) return std::nullopt;
        r *= q;
    }
    return r;
}

struct CopyOfH {
    std::vector<Elt> assignment;  // u in F^m, one vertex per part
    std::vector<Elt> labels;      // x = C·u; the copy's edge of color i is labeled x_i
};

class BigHypergraph {
public:
    BigHypergraph(FieldPtr field, Matrix c, std::vector<std::vector<int>> s,
                  std::vector<EltSet> sets, int k)
        : field_(std::move(field)), c_(std::move(c)), s_(std::move(s)),
          sets_(std::move(sets)), k_(k), m_(c_.cols()) {
        if (c_.rows() != m_) throw std::invalid_argument("hypergraph: C must be square");
        if (static_cast<int>(s_.size()) != m_ || static_cast<int>(sets_.size()) != m_)
            throw std::invalid_argument("hypergraph: slice/set count mismatch");
        if (k_ < 0 || k_ >= m_) throw std::invalid_argument("hypergraph: bad k");
        q_ = field_->q();
        member_.assign(static_cast<std::size_t>(m_) * q_, 0);
        for (int i = 0; i < m_; ++i)
            for (Elt v : sets_[i]) member_[static_cast<std::size_t>(i) * q_ + v] = 1;
        col_support_.resize(m_);
        for (int j = 0; j < m_; ++j)
            for (int i = 0; i < m_; ++i)
                if (c_.at(i, j) != 0) col_support_[j].push_back({i, c_.at(i, j)});
    }

    int m() const { return m_; }
    int k() const { return k_; }
    std::uint64_t q() const { return q_; }
    const Matrix& c() const { return c_; }
    const std::vector<std::vector<int>>& slices() const { return s_; }
    const std::vector<EltSet>& sets() const { return sets_; }

    std::uint64_t copies_per_solution() const {
        auto v = checked_pow(q_, k_);
        if (!v) throw BudgetError("q^k evaluation", std::numeric_limits<std::uint64_t>::max(),
                                  std::numeric_limits<std::uint64_t>::max());
        return *v;
    }

    // Total number of edges: q^k per (color, label in X_i) pair.
    std::uint64_t total_edges() const {
        std::uint64_t per = copies_per_solution(), total = 0;
        for (const auto& s : sets_) {
            const std::uint64_t add = per * static_cast<std::uint64_t>(s.size());
            if (per != 0 && add / per != s.size())
                throw BudgetError("edge count evaluation",
                                  std::numeric_limits<std::uint64_t>::max(), 0);
            total += add;
        }
        return total;
    }

    bool label_ok(int i, Elt x) const {
        return member_[static_cast<std::size_t>(i) * q_ + x] != 0;
    }

    // values aligned with the sorted slice S_i.
    bool edge_exists(int i, Elt x, const std::vector<Elt>& values) const {
        if (i < 0 || i >= m_) throw std::invalid_argument("hypergraph: color out of range");
        if (values.size() != s_[i].size())
            throw std::invalid_argument("hypergraph: assignment does not match the slice");
        if (!label_ok(i, x)) return false;
        const Field& f = *field_;
        Elt sum = 0;
        for (std::size_t t = 0; t < values.size(); ++t)
            sum = f.add(sum, f.mul(c_.at(i, s_[i][t]), values[t]));
        return sum == x;
    }

    // Packed edge key: ((color * q + label) * q^(k+1)) + digits of the
    // assignment restricted to S_color, base q, slice order, first coordinate
    // most significant. Fits in 64 bits for every instance within budgets;
    // checked at first use.
    std::uint64_t edge_key(int color, Elt label, const std::vector<Elt>& values) const {
        ensure_keys_fit();
        std::uint64_t key = static_cast<std::uint64_t>(color) * q_ + label;
        for (Elt v : values) key = key * q_ + v;
        return key;
    }

    struct Edge {
        int color = 0;
        Elt label = 0;
        std::vector<Elt> values;  // aligned with the sorted slice
    };

    Edge decode_edge(std::uint64_t key) const {
        Edge e;
        e.values.resize(k_ + 1);
        for (int t = k_; t >= 0; --t) {
            e.values[t] = static_cast<Elt>(key % q_);
            key /= q_;
        }
        e.label = static_cast<Elt>(key % q_);
        e.color = static_cast<int>(key / q_);
        if (e.color >= m_) throw std::invalid_argument("hypergraph: bad edge key");
        return e;
    }

    // The m edge keys induced by a full assignment with the given labels.
    std::vector<std::uint64_t> copy_edge_keys(const CopyOfH& copy) const {
        std::vector<std::uint64_t> keys(m_);
        std::vector<Elt> vals;
        for (int i = 0; i < m_; ++i) {
            vals.clear();
            for (int j : s_[i]) vals.push_back(copy.assignment[j]);
            keys[i] = edge_key(i, copy.labels[i], vals);
        }
        return keys;
    }

    // All q^k edge-disjoint copies carrying a given solution x of Ax = 0:
    // assignments u0 + w for w in kernel(C), enumerated in odometer order over
    // the kernel coordinates.
    std::vector<CopyOfH> copies_for_solution(const std::vector<Elt>& x) const {
        if (static_cast<int>(x.size()) != m_)
            throw std::invalid_argument("hypergraph: solution length mismatch");
        for (int i = 0; i < m_; ++i)
            if (!label_ok(i, x[i]))
                throw std::invalid_argument("hypergraph: vector is not a solution (set membership)");
        auto u0 = solve_particular(c_, x);
        if (!u0)
            throw std::invalid_argument("hypergraph: vector is not a solution (outside im C)");
        Matrix kb = kernel_basis(c_);
        if (kb.cols() != k_)
            throw std::logic_error("hypergraph: kernel dimension is not k");
        const Field& f = *field_;
        const std::uint64_t count = copies_per_solution();
        std::vector<CopyOfH> out;
        out.reserve(count);
        std::vector<Elt> t(k_, 0);
        for (std::uint64_t n = 0; n < count; ++n) {
            CopyOfH copy;
            copy.assignment = *u0;
            for (int j = 0; j < m_; ++j)
                for (int w = 0; w < k_; ++w)
                    if (kb.at(j, w) != 0 && t[w] != 0)
                        copy.assignment[j] = f.add(copy.assignment[j], f.mul(kb.at(j, w), t[w]));
            copy.labels = x;
            out.push_back(std::move(copy));
            for (int w = k_ - 1; w >= 0; --w) {
                if (++t[w] < q_) break;
                t[w] = 0;
            }
        }
        return out;
    }

    // #assignments whose labels all land in their sets; equals q^k times the
    // number of solutions. With `removed`, count only copies none of whose m
    // edges was removed.
    std::uint64_t count_copies(std::uint64_t budget, int threads = 1,
                               const std::vector<std::uint64_t>* removed = nullptr) const {
        auto total = checked_pow(q_, m_);
        if (!total || *total > budget)
            throw BudgetError("copy enumeration q^m",
                              total ? *total : std::numeric_limits<std::uint64_t>::max(), budget);
        if (removed) ensure_keys_fit();
        const std::uint64_t n = *total;
        const int nthreads = std::max(1, std::min<int>(threads, 64));
        if (nthreads == 1 || n < 1024) return scan_range(0, n, removed);
        std::vector<std::uint64_t> partial(nthreads, 0);
        std::vector<std::thread> pool;
        const std::uint64_t chunk = n / nthreads;
        for (int t = 0; t < nthreads; ++t) {
            const std::uint64_t lo = chunk * t;
            const std::uint64_t hi = (t + 1 == nthreads) ? n : chunk * (t + 1);
            pool.emplace_back([this, lo, hi, removed, &partial, t] {
                partial[t] = scan_range(lo, hi, removed);
            });
        }
        for (auto& th : pool) th.join();
        std::uint64_t sum = 0;
        for (std::uint64_t v : partial) sum += v;
        return sum;
    }

    // Materialized list of every existing edge key, sorted. Guarded by an
    // explicit cap since the edge count is q^k per (color, label).
    std::vector<std::uint64_t> materialize(std::uint64_t cap) const {
        const std::uint64_t total = total_edges();
        if (total > cap) throw BudgetError("edge materialization", total, cap);
        ensure_keys_fit();
        const Field& f = *field_;
        std::vector<std::uint64_t> keys;
        keys.reserve(total);
        const std::uint64_t combos = copies_per_solution();  // q^k free coordinates
        for (int i = 0; i < m_; ++i) {
            // coordinate i itself is solved for (C_ii = -1 is always nonzero)
            std::vector<int> free_slots;
            int self = -1;
            for (std::size_t t = 0; t < s_[i].size(); ++t) {
                if (s_[i][t] == i)
                    self = static_cast<int>(t);
                else
                    free_slots.push_back(static_cast<int>(t));
            }
            if (self < 0) throw std::logic_error("hypergraph: diagonal outside its slice");
            const Elt cii_inv = f.inv(c_.at(i, i));
            for (Elt x : sets_[i]) {
                std::vector<Elt> vals(s_[i].size(), 0);
                std::vector<Elt> t(free_slots.size(), 0);
                for (std::uint64_t n = 0; n < combos; ++n) {
                    Elt rest = 0;
                    for (std::size_t w = 0; w < free_slots.size(); ++w) {
                        vals[free_slots[w]] = t[w];
                        rest = f.add(rest, f.mul(c_.at(i, s_[i][free_slots[w]]), t[w]));
                    }
                    vals[self] = f.mul(cii_inv, f.sub(x, rest));
                    keys.push_back(edge_key(i, x, vals));
                    for (int w = static_cast<int>(free_slots.size()) - 1; w >= 0; --w) {
                        if (++t[w] < q_) break;
                        t[w] = 0;
                    }
                }
            }
        }
        std::sort(keys.begin(), keys.end());
        if (std::adjacent_find(keys.begin(), keys.end()) != keys.end())
            throw std::logic_error("hypergraph: duplicate edge key");
        return keys;
    }

private:
    FieldPtr field_;
    Matrix c_;
    std::vector<std::vector<int>> s_;
    std::vector<EltSet> sets_;
    int k_ = 0, m_ = 0;
    std::uint64_t q_ = 0;
    std::vector<std::uint8_t> member_;
    std::vector<std::vector<std::pair<int, Elt>>> col_support_;

    void ensure_keys_fit() const {
        // color * q + label < m*q, then k+1 base-q digits
        auto tail = checked_pow(q_, k_ + 1);
        if (!tail) throw BudgetError("edge key width", std::numeric_limits<std::uint64_t>::max(),
                                     std::numeric_limits<std::uint64_t>::max());
        const std::uint64_t head = static_cast<std::uint64_t>(m_) * q_;
        if (head != 0 && *tail > std::numeric_limits<std::uint64_t>::max() / head)
            throw BudgetError("edge key width", std::numeric_limits<std::uint64_t>::max(),
                              std::numeric_limits<std::uint64_t>::max());
    }

    std::uint64_t scan_range(std::uint64_t lo, std::uint64_t hi,
                             const std::vector<std::uint64_t>* removed) const {
        if (lo >= hi) return 0;
        const Field& f = *field_;
        // decode lo into the assignment digits, last coordinate fastest
        std::vector<Elt> a(m_, 0);
        std::uint64_t v = lo;
        for (int j = m_ - 1; j >= 0; --j) {
            a[j] = static_cast<Elt>(v % q_);
            v /= q_;
        }
        std::vector<Elt> labels(m_, 0);
        for (int i = 0; i < m_; ++i) {
            Elt acc = 0;
            for (int j = 0; j < m_; ++j)
                if (c_.at(i, j) != 0 && a[j] != 0) acc = f.add(acc, f.mul(c_.at(i, j), a[j]));
            labels[i] = acc;
        }
        std::uint64_t count = 0;
        std::vector<Elt> vals;
        for (std::uint64_t n = lo;; ++n) {
            bool all = true;
            for (int i = 0; i < m_; ++i)
                if (!label_ok(i, labels[i])) {
                    all = false;
                    break;
                }
            if (all && removed) {
                for (int i = 0; i < m_ && all; ++i) {
                    vals.clear();
                    for (int j : s_[i]) vals.push_back(a[j]);
                    const std::uint64_t key = edge_key(i, labels[i], vals);
                    if (std::binary_search(removed->begin(), removed->end(), key)) all = false;
                }
            }
            if (all) ++count;
            if (n + 1 == hi) break;
            // odometer step with incremental label updates
            for (int j = m_ - 1; j >= 0; --j) {
                const Elt old = a[j];
                if (old + 1u < q_) {
                    a[j] = static_cast<Elt>(old + 1);
                    // consecutive encodings differ by 1 only in prime fields;
                    // in extension fields the step is a digit-vector increment
                    const Elt delta = f.sub(a[j], old);
                    for (const auto& [i, cij] : col_support_[j])
                        labels[i] =
                            f.add(labels[i], delta == 1 ? cij : f.mul(cij, delta));
                    break;
                }
                a[j] = 0;
                for (const auto& [i, cij] : col_support_[j])
                    labels[i] = f.sub(labels[i], f.mul(cij, old));
            }
        }
        return count;
    }
};

// Claim check: a genuine copy's labels solve Ax = 0; any corrupted copy
// (edge equation broken or label outside its set) is rejected.
inline bool verify_copy_labels(const BigHypergraph& kk, const Matrix& a, const CopyOfH& copy) {
    if (static_cast<int>(copy.assignment.size()) != kk.m() ||
        static_cast<int>(copy.labels.size()) != kk.m())
        return false;
    const std::vector<Elt> derived = mat_vec(kk.c(), copy.assignment);
    if (derived != copy.labels) return false;
    for (int i = 0; i < kk.m(); ++i)
        if (!kk.label_ok(i, copy.labels[i])) return false;
    for (Elt v : mat_vec(a, copy.labels))
        if (v != 0) return false;
    return true;
}

}  // namespace linrem
