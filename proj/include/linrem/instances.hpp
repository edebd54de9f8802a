// instances.hpp: seed-deterministic test instance generators. All randomness
// flows through one mt19937_64 per call; uniform draws use modulo reduction so
// the streams are identical across platforms and standard libraries.

#pragma once

#include <random>

#include "hypergraph.hpp"
#include "normalize.hpp"

namespace linrem {

namespace detail {

inline Elt draw(std::mt19937_64& rng, std::uint64_t q) {
    return static_cast<Elt>(rng() % q);
}

// Include each field element independently with the given probability.
inline EltSet draw_set(std::mt19937_64& rng, std::uint64_t q, double density) {
    EltSet out;
    for (std::uint64_t v = 0; v < q; ++v) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        if (u < density) out.push_back(static_cast<Elt>(v));
    }
    return out;
}

}  // namespace detail

// Full-rank k×m system with density-sampled sets and `plant` solution vectors
// whose coordinates are inserted into the sets.
inline LinSystem random_system(FieldPtr f, int k, int m, std::uint64_t seed,
                               double density = 0.5, int plant = 0) {
    if (k < 1 || m < k + 2) throw std::invalid_argument("random_system: need 1 <= k, m >= k+2");
    const std::uint64_t q = f->q();
    std::mt19937_64 rng(seed);
    Matrix a(f, k, m);
    for (int attempt = 0;; ++attempt) {
        if (attempt >= 1000)
            throw std::runtime_error("random_system: failed to sample a full-rank matrix");
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < m; ++j) a.at(i, j) = detail::draw(rng, q);
        if (rank(a) == k) break;
    }
    std::vector<Elt> b(k);
    for (int i = 0; i < k; ++i) b[i] = detail::draw(rng, q);
    std::vector<EltSet> sets(m);
    for (int i = 0; i < m; ++i) sets[i] = detail::draw_set(rng, q, density);
    if (plant > 0) {
        Matrix aug(f, k, m + 1);
        for (int i = 0; i < k; ++i) {
            for (int j = 0; j < m; ++j) aug.at(i, j) = a.at(i, j);
            aug.at(i, m) = b[i];
        }
        RrefResult rr = rref(aug);  // full rank, hence consistent
        std::vector<bool> is_pivot(m, false);
        for (int p : rr.pivots) is_pivot[p] = true;
        for (int t = 0; t < plant; ++t) {
            std::vector<Elt> x(m, 0);
            for (int c = 0; c < m; ++c)
                if (!is_pivot[c]) x[c] = detail::draw(rng, q);
            for (int i = 0; i < rr.rank; ++i) {
                Elt v = rr.reduced.at(i, m);
                for (int c = 0; c < m; ++c)
                    if (!is_pivot[c] && rr.reduced.at(i, c) != 0 && x[c] != 0)
                        v = f->sub(v, f->mul(rr.reduced.at(i, c), x[c]));
                x[rr.pivots[i]] = v;
            }
            for (int c = 0; c < m; ++c) sets[c].push_back(x[c]);
        }
    }
    return make_system(std::move(f), std::move(a), std::move(b), std::move(sets));
}

// Number of projective classes of vectors in F^w with at least two nonzero
// coordinates — the supply of usable rows for a normalized right block.
inline std::uint64_t normalized_row_classes(std::uint64_t q, int w) {
    auto total = checked_pow(q, w);
    if (!total) return std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t singles = static_cast<std::uint64_t>(w) * (q - 1);
    return (*total - 1 - singles) / (q - 1);
}

// Already-normalized homogeneous system: A = (I_k | B) with pairwise
// independent B rows, every row carrying >= 2 nonzeros and no zero column.
inline LinSystem random_normalized_system(FieldPtr f, int k, int m, std::uint64_t seed,
                                          double density = 0.5, int plant = 0) {
    if (k < 1 || m < k + 2)
        throw std::invalid_argument("random_normalized_system: need 1 <= k, m >= k+2");
    const std::uint64_t q = f->q();
    const int w = m - k;
    if (normalized_row_classes(q, w) < static_cast<std::uint64_t>(k))
        throw std::invalid_argument(
            "random_normalized_system: not enough independent row classes for these parameters");
    std::mt19937_64 rng(seed);
    Matrix a(f, k, m);
    for (int i = 0; i < k; ++i) a.at(i, i) = 1;
    for (int attempt = 0;; ++attempt) {
        if (attempt >= 10000)
            throw std::runtime_error("random_normalized_system: failed to sample a right block");
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < w; ++j) a.at(i, k + j) = detail::draw(rng, q);
        bool ok = true;
        for (int i = 0; i < k && ok; ++i) {
            int nz = 0;
            for (int j = 0; j < w; ++j)
                if (a.at(i, k + j) != 0) ++nz;
            if (nz < 2) ok = false;
        }
        for (int j = 0; j < w && ok; ++j)
            if (a.col_is_zero(k + j)) ok = false;
        for (int i = 0; i < k && ok; ++i) {
            int t0 = -1;
            for (int j = 0; j < w; ++j)
                if (a.at(i, k + j) != 0) {
                    t0 = j;
                    break;
                }
            for (int i2 = i + 1; i2 < k && ok; ++i2) {
                const Elt l = f->mul(a.at(i2, k + t0), f->inv(a.at(i, k + t0)));
                if (l == 0) continue;
                bool prop = true;
                for (int j = 0; j < w && prop; ++j)
                    if (a.at(i2, k + j) != f->mul(l, a.at(i, k + j))) prop = false;
                if (prop) ok = false;
            }
        }
        if (ok) break;
    }
    std::vector<EltSet> sets(m);
    for (int i = 0; i < m; ++i) sets[i] = detail::draw_set(rng, q, density);
    for (int t = 0; t < plant; ++t) {
        std::vector<Elt> x(m, 0);
        for (int j = 0; j < w; ++j) x[k + j] = detail::draw(rng, q);
        for (int i = 0; i < k; ++i) {
            Elt v = 0;
            for (int j = 0; j < w; ++j)
                if (a.at(i, k + j) != 0 && x[k + j] != 0)
                    v = f->add(v, f->mul(a.at(i, k + j), x[k + j]));
            x[i] = f->neg(v);
        }
        for (int c = 0; c < m; ++c) sets[c].push_back(x[c]);
    }
    std::vector<Elt> b(k, 0);
    return make_system(std::move(f), std::move(a), std::move(b), std::move(sets));
}

// Second-difference system for length-`len` arithmetic progressions:
// x_j - 2 x_{j+1} + x_{j+2} = 0 for j in [1, len-2], all sets equal to xs.
// Solutions correspond exactly to ordered pairs (start, difference) whose
// progression stays inside xs, constant progressions included.
inline LinSystem ap_system(FieldPtr f, int len, EltSet xs) {
    if (len < 3) throw std::invalid_argument("ap_system: progression length must be >= 3");
    if (f->p() < static_cast<std::uint32_t>(len))
        throw std::invalid_argument("ap_system: characteristic must be >= the progression length");
    const int k = len - 2;
    Matrix a(f, k, len);
    const Elt minus_two = f->from_int(-2);
    for (int j = 0; j < k; ++j) {
        a.at(j, j) = 1;
        a.at(j, j + 1) = minus_two;
        a.at(j, j + 2) = 1;
    }
    std::vector<Elt> b(k, 0);
    std::vector<EltSet> sets(len, set_canon(std::move(xs)));
    return make_system(std::move(f), std::move(a), std::move(b), std::move(sets));
}

}  // namespace linrem
