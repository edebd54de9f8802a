// Shared test oracles. Everything here recomputes results the slow, obvious
// way so the library has something independent to disagree with.

#pragma once

#include <linrem/system.hpp>

#include <cstdint>
#include <vector>

namespace testsupport {

using linrem::Elt;
using linrem::EltSet;
using linrem::LinSystem;

// Brute force over all q^m assignments: A·x = b checked entry by entry,
// memberships by linear scan. No rref, no parametrization.
inline std::vector<std::vector<Elt>> exhaustive_solutions(const LinSystem& s) {
    const linrem::Field& f = *s.field;
    const std::uint64_t q = f.q();
    const int m = s.m(), k = s.k();
    std::vector<std::vector<Elt>> found;
    std::vector<Elt> x(m, 0);
    for (;;) {
        bool ok = true;
        for (int i = 0; i < m && ok; ++i) {
            bool in = false;
            for (Elt v : s.sets[i])
                if (v == x[i]) in = true;
            ok = in;
        }
        for (int i = 0; i < k && ok; ++i) {
            Elt acc = 0;
            for (int j = 0; j < m; ++j) acc = f.add(acc, f.mul(s.a.at(i, j), x[j]));
            if (acc != s.b[i]) ok = false;
        }
        if (ok) found.push_back(x);
        int pos = m - 1;
        while (pos >= 0) {
            if (++x[pos] < q) break;
            x[pos] = 0;
            --pos;
        }
        if (pos < 0) break;
    }
    return found;
}

inline std::uint64_t exhaustive_count(const LinSystem& s) {
    return exhaustive_solutions(s).size();
}

// Ordered (start, difference) pairs whose length-`len` progression stays in
// xs; constant progressions (d = 0) included.
inline std::uint64_t ap_pair_count(const linrem::Field& f, int len, const EltSet& xs) {
    const std::uint64_t q = f.q();
    std::uint64_t count = 0;
    for (std::uint64_t a = 0; a < q; ++a)
        for (std::uint64_t d = 0; d < q; ++d) {
            bool ok = true;
            Elt term = static_cast<Elt>(a);
            for (int t = 0; t < len && ok; ++t) {
                bool in = false;
                for (Elt v : xs)
                    if (v == term) in = true;
                ok = in;
                term = f.add(term, static_cast<Elt>(d));
            }
            if (ok) ++count;
        }
    return count;
}

inline LinSystem make(linrem::FieldPtr f, std::vector<std::vector<Elt>> rows,
                      std::vector<Elt> b, std::vector<EltSet> sets) {
    const int k = static_cast<int>(rows.size());
    const int m = static_cast<int>(sets.size());
    linrem::Matrix a(f, k, m);
    for (int i = 0; i < k; ++i) {
        if (static_cast<int>(rows[i].size()) != m)
            throw std::invalid_argument("test: row length mismatch");
        for (int j = 0; j < m; ++j) a.at(i, j) = rows[i][j];
    }
    return linrem::make_system(std::move(f), std::move(a), std::move(b), std::move(sets));
}

// The worked instance used across suites: x1 + x2 + x3 = 0 over GF(5) with
// X = ({1,2}, {3}, {0,1}); exactly the solutions (1,3,1) and (2,3,0).
inline LinSystem worked_instance() {
    auto f = linrem::make_field(5);
    return make(f, {{1, 1, 1}}, {0}, {{1, 2}, {3}, {0, 1}});
}

}  // namespace testsupport
