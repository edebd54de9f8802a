// system.hpp: a linear system A x = b over GF(q) together with one finite
// candidate set X_i per variable, and the text format used to exchange
// instances between tools. Sets are kept sorted and duplicate-free.

#pragma once

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "matrix.hpp"

namespace linrem {

using EltSet = std::vector<Elt>;  // sorted ascending, no duplicates

inline EltSet set_canon(EltSet s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

inline bool set_contains(const EltSet& s, Elt v) {
    return std::binary_search(s.begin(), s.end(), v);
}

inline EltSet set_intersect(const EltSet& a, const EltSet& b) {
    EltSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

// {x - c : x in s}
inline EltSet set_shift(const Field& f, const EltSet& s, Elt c) {
    EltSet out;
    out.reserve(s.size());
    for (Elt v : s) out.push_back(f.sub(v, c));
    return set_canon(std::move(out));
}

// {lambda * x : x in s}; lambda must be nonzero so sizes are preserved.
inline EltSet set_scale(const Field& f, const EltSet& s, Elt lambda) {
    if (lambda == 0) throw std::invalid_argument("set_scale: zero scale");
    EltSet out;
    out.reserve(s.size());
    for (Elt v : s) out.push_back(f.mul(lambda, v));
    return set_canon(std::move(out));
}

struct LinSystem {
    FieldPtr field;
    Matrix a;                  // k x m
    std::vector<Elt> b;        // length k
    std::vector<EltSet> sets;  // length m

    int k() const { return a.rows(); }
    int m() const { return a.cols(); }
};

inline LinSystem make_system(FieldPtr field, Matrix a, std::vector<Elt> b,
                             std::vector<EltSet> sets) {
    if (!field) throw std::invalid_argument("system: null field");
    require_same_field(*field, *a.field());
    if (static_cast<int>(b.size()) != a.rows())
        throw std::invalid_argument("system: b length does not match row count");
    if (static_cast<int>(sets.size()) != a.cols())
        throw std::invalid_argument("system: set count does not match column count");
    for (Elt v : b)
        if (v >= field->q()) throw std::invalid_argument("system: b entry out of range");
    for (auto& s : sets) {
        s = set_canon(std::move(s));
        for (Elt v : s)
            if (v >= field->q()) throw std::invalid_argument("system: set entry out of range");
    }
    return LinSystem{std::move(field), std::move(a), std::move(b), std::move(sets)};
}

// True iff A x = b and x_i lies in X_i for every i.
inline bool is_solution(const LinSystem& s, const std::vector<Elt>& x) {
    if (static_cast<int>(x.size()) != s.m()) return false;
    for (int i = 0; i < s.m(); ++i)
        if (!set_contains(s.sets[i], x[i])) return false;
    return mat_vec(s.a, x) == s.b;
}

namespace detail {

inline std::vector<std::string> tokens_of(const std::string& line) {
    std::istringstream is(line);
    std::vector<std::string> out;
    std::string t;
    while (is >> t) out.push_back(t);
    return out;
}

inline std::uint64_t parse_u64(const std::string& tok, int lineno, const char* what) {
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
        v = std::stoull(tok, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != tok.size())
        throw std::invalid_argument("instance line " + std::to_string(lineno) + ": bad " +
                                    what + " '" + tok + "'");
    return v;
}

// Reads the next line, skipping blank lines; tracks the line number.
inline bool next_line(std::istream& in, std::string& line, int& lineno) {
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!tokens_of(line).empty()) return true;
    }
    return false;
}

}  // namespace detail

// Text format:
//   field p n [c_0 ... c_n]      (modulus coefficients only when n > 1)
//   k m
//   k rows of A, m entries each
//   one row of b, k entries
//   m lines "Xi: e_1 e_2 ..." (possibly empty after the colon)
inline LinSystem parse_instance(std::istream& in) {
    using detail::parse_u64;
    std::string line;
    int lineno = 0;
    if (!detail::next_line(in, line, lineno))
        throw std::invalid_argument("instance: empty input");
    auto toks = detail::tokens_of(line);
    if (toks.size() < 3 || toks[0] != "field")
        throw std::invalid_argument("instance line " + std::to_string(lineno) +
                                    ": expected 'field p n ...'");
    const auto p = static_cast<std::uint32_t>(parse_u64(toks[1], lineno, "prime"));
    const auto n = static_cast<std::uint32_t>(parse_u64(toks[2], lineno, "degree"));
    std::vector<Elt> modulus;
    for (std::size_t i = 3; i < toks.size(); ++i)
        modulus.push_back(static_cast<Elt>(parse_u64(toks[i], lineno, "modulus coefficient")));
    FieldPtr f = make_field(p, n, std::move(modulus));

    if (!detail::next_line(in, line, lineno))
        throw std::invalid_argument("instance: missing dimensions line");
    toks = detail::tokens_of(line);
    if (toks.size() != 2)
        throw std::invalid_argument("instance line " + std::to_string(lineno) +
                                    ": expected 'k m'");
    const int k = static_cast<int>(parse_u64(toks[0], lineno, "row count"));
    const int m = static_cast<int>(parse_u64(toks[1], lineno, "column count"));
    if (k < 0 || m < 0 || k > 4096 || m > 4096)
        throw std::invalid_argument("instance line " + std::to_string(lineno) +
                                    ": unreasonable dimensions");

    Matrix a(f, k, m);
    for (int i = 0; i < k; ++i) {
        if (!detail::next_line(in, line, lineno))
            throw std::invalid_argument("instance: missing matrix row " + std::to_string(i + 1));
        toks = detail::tokens_of(line);
        if (static_cast<int>(toks.size()) != m)
            throw std::invalid_argument("instance line " + std::to_string(lineno) + ": expected " +
                                        std::to_string(m) + " entries");
        for (int j = 0; j < m; ++j)
            a.at(i, j) = f->element(parse_u64(toks[j], lineno, "matrix entry"));
    }

    std::vector<Elt> b(k);
    if (k > 0) {  // for k = 0 the right-hand-side line is blank and skipped
        if (!detail::next_line(in, line, lineno))
            throw std::invalid_argument("instance: missing right-hand side");
        toks = detail::tokens_of(line);
        if (static_cast<int>(toks.size()) != k)
            throw std::invalid_argument("instance line " + std::to_string(lineno) +
                                        ": expected " + std::to_string(k) +
                                        " right-hand-side entries");
        for (int i = 0; i < k; ++i)
            b[i] = f->element(parse_u64(toks[i], lineno, "right-hand-side entry"));
    }

    std::vector<EltSet> sets(m);
    for (int i = 0; i < m; ++i) {
        if (!detail::next_line(in, line, lineno))
            throw std::invalid_argument("instance: missing set X" + std::to_string(i + 1));
        toks = detail::tokens_of(line);
        const std::string head = "X" + std::to_string(i + 1) + ":";
        if (toks.empty() || toks[0] != head)
            throw std::invalid_argument("instance line " + std::to_string(lineno) +
                                        ": expected '" + head + " ...'");
        for (std::size_t t = 1; t < toks.size(); ++t)
            sets[i].push_back(f->element(parse_u64(toks[t], lineno, "set element")));
    }
    return make_system(std::move(f), std::move(a), std::move(b), std::move(sets));
}

inline LinSystem parse_instance(const std::string& text) {
    std::istringstream is(text);
    return parse_instance(is);
}

inline void emit_instance(std::ostream& os, const LinSystem& s) {
    const Field& f = *s.field;
    os << "field " << f.p() << ' ' << f.n();
    for (Elt c : f.modulus()) os << ' ' << c;
    os << '\n' << s.k() << ' ' << s.m() << '\n';
    for (int i = 0; i < s.k(); ++i) {
        for (int j = 0; j < s.m(); ++j) {
            if (j) os << ' ';
            os << s.a.at(i, j);
        }
        os << '\n';
    }
    for (int i = 0; i < s.k(); ++i) {
        if (i) os << ' ';
        os << s.b[i];
    }
    os << '\n';
    for (int i = 0; i < s.m(); ++i) {
        os << 'X' << (i + 1) << ':';
        for (Elt v : s.sets[i]) os << ' ' << v;
        os << '\n';
    }
}

inline std::string emit_instance(const LinSystem& s) {
    std::ostringstream os;
    emit_instance(os, s);
    return os.str();
}

}  // namespace linrem
