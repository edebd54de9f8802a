// certificate.hpp: the constructive kernel certificate for a normalized
// system A = (I_k | B).
//
// A basis-exchange sweep produces bases T_k, ..., T_m of the column space
// (first pass) and T_0, ..., T_{k-1} (second pass, starting from T_0 = T_m),
// a permutation g recording which basis element each step evicted, and a
// column permutation applied to A along the way. From the trace we build an
// m×m matrix C with
//   * column j supported on T_{j-1} ∪ {j} (1-based), C_jj = -1,
//   * AC = 0 and rank(C) = m-k,
//   * row i supported inside S_i, the i-th row slice of an explicit
//     staircase region R determined by g,
//   * for each i a k-subset S'_i ⊂ S_i whose complementary columns still
//     have full rank m-k.
// Everything here is 0-based internally; file formats are 1-based.

#pragma once

#include <istream>
#include <ostream>
#include <set>

#include "matrix.hpp"

namespace linrem {

struct CertificateError : std::runtime_error {
    explicit CertificateError(const std::string& msg)
        : std::runtime_error("certificate: " + msg) {}
};

struct BasisTrace {
    int k = 0, m = 0;
    std::vector<std::vector<int>> t;  // t[0..m], sorted k-subsets of [0,m); t[0] = t[m]
    std::vector<int> g;               // bijection on [0,m); g[i] is the element T_i evicts
    std::vector<int> colperm;         // perm[new] = old, applied to the input columns
};

struct BuildBasesResult {
    Matrix a;  // input with colperm applied
    BasisTrace trace;
};

namespace detail {

// Expansion coefficients of the listed columns over the basis columns:
// out[r][t] is the coefficient of basis row-index basis[r] in column cols[t].
inline std::vector<std::vector<Elt>> expand_over_basis(const Matrix& a,
                                                       const std::vector<int>& basis,
                                                       const std::vector<int>& cols) {
    std::vector<int> all = basis;
    all.insert(all.end(), cols.begin(), cols.end());
    RrefResult rr = rref(select_cols(a, all));
    const int kb = static_cast<int>(basis.size());
    if (rr.rank < kb || rr.pivots[kb - 1] != kb - 1)
        throw CertificateError("basis columns are not independent");
    std::vector<std::vector<Elt>> out(basis.size(), std::vector<Elt>(cols.size(), 0));
    for (std::size_t t = 0; t < cols.size(); ++t) {
        // each listed column must lie in the basis span
        for (int i = kb; i < rr.rank; ++i)
            if (rr.reduced.at(i, kb + static_cast<int>(t)) != 0)
                throw CertificateError("column outside the basis span");
        for (int r = 0; r < kb; ++r) out[r][t] = rr.reduced.at(r, kb + static_cast<int>(t));
    }
    return out;
}

inline std::vector<int> replace_in_basis(const std::vector<int>& basis, int out_elt, int in_elt) {
    std::vector<int> next;
    next.reserve(basis.size());
    for (int v : basis)
        if (v != out_elt) next.push_back(v);
    next.push_back(in_elt);
    std::sort(next.begin(), next.end());
    return next;
}

}  // namespace detail

// Structural preconditions shared by the certificate entry points.
inline void require_certifiable(const Matrix& a) {
    const int k = a.rows(), m = a.cols();
    if (k < 1) throw CertificateError("no equations");
    if (m < k + 2) throw CertificateError("fewer than k+2 variables");
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            if (a.at(i, j) != (i == j ? 1 : 0))
                throw CertificateError("left block is not the identity");
    for (int j = 0; j < m; ++j)
        if (a.col_is_zero(j))
            throw CertificateError("zero column " + std::to_string(j + 1) +
                                   " (drop unconstrained variables first)");
}

inline BuildBasesResult build_bases(const Matrix& a) {
    require_certifiable(a);
    const int k = a.rows(), m = a.cols();
    Matrix work = a;
    std::vector<int> perm(m);
    for (int j = 0; j < m; ++j) perm[j] = j;

    std::vector<std::vector<int>> t(m + 1);
    std::vector<int> g(m, -1);
    t[k].resize(k);
    for (int i = 0; i < k; ++i) t[k][i] = i;

    // First pass: push columns k..m-1 into the basis, evicting the smallest
    // usable basis element and swapping a witness column into position i.
    for (int i = k; i < m; ++i) {
        std::vector<int> rest(m - i);
        for (int j = i; j < m; ++j) rest[j - i] = j;
        auto coeff = detail::expand_over_basis(work, t[i], rest);
        int rpos = -1, cpos = -1;
        for (std::size_t r = 0; r < t[i].size() && rpos < 0; ++r)
            for (std::size_t c = 0; c < rest.size(); ++c)
                if (coeff[r][c] != 0) {
                    rpos = static_cast<int>(r);
                    cpos = static_cast<int>(c);
                    break;
                }
        if (rpos < 0) throw CertificateError("remaining columns are all zero");
        const int evicted = t[i][rpos];
        const int witness = rest[cpos];
        if (witness != i) {
            for (int r = 0; r < k; ++r) std::swap(work.at(r, i), work.at(r, witness));
            std::swap(perm[i], perm[witness]);
        }
        g[i] = evicted;
        t[i + 1] = detail::replace_in_basis(t[i], evicted, i);
    }

    // Second pass: wrap around with T_0 = T_m and re-insert columns 0..k-1,
    // evicting the smallest usable element outside the already-fixed prefix.
    t[0] = t[m];
    for (int i = 0; i < k; ++i) {
        auto coeff = detail::expand_over_basis(work, t[i], {i});
        int evicted = -1;
        for (std::size_t r = 0; r < t[i].size(); ++r) {
            if (t[i][r] < i) continue;
            if (coeff[r][0] != 0) {
                evicted = t[i][r];
                break;
            }
        }
        if (evicted < 0) throw CertificateError("second pass found no usable basis element");
        g[i] = evicted;
        auto next = detail::replace_in_basis(t[i], evicted, i);
        if (i + 1 < k) {
            t[i + 1] = next;
        } else if (next != t[k]) {
            throw CertificateError("second pass did not return to the initial basis");
        }
    }

    // Trace invariants; all should be unreachable failures for valid inputs.
    {
        std::vector<bool> seen(m, false);
        for (int v : g) {
            if (v < 0 || v >= m || seen[v]) throw CertificateError("g is not a bijection");
            seen[v] = true;
        }
        if (g[k] != 0) throw CertificateError("g(k+1) != 1");
        for (int i = k; i + 1 < m; ++i)
            if (g[i] >= g[i + 1]) throw CertificateError("g not increasing on the first pass");
        for (int i = 0; i < m; ++i)
            if (std::binary_search(t[i].begin(), t[i].end(), i))
                throw CertificateError("basis T_i contains the incoming column");
        for (int i = 1; i <= k; ++i)
            if (std::binary_search(t[i - 1].begin(), t[i - 1].end(), i))
                throw CertificateError("basis T_{i-1} contains column i+1");
        for (int i = 0; i <= m; ++i) {
            if (static_cast<int>(t[i].size()) != k)
                throw CertificateError("basis size mismatch");
            if (rank(select_cols(work, t[i])) != k)
                throw CertificateError("basis columns are dependent");
        }
        for (int i = 0; i <= k; ++i)
            for (int v = 0; v < i; ++v)
                if (!std::binary_search(t[i].begin(), t[i].end(), v))
                    throw CertificateError("prefix not contained in second-pass basis");
        for (int i = k; i <= m; ++i)
            for (int v : t[i])
                if (v >= i) throw CertificateError("first-pass basis exceeds its window");
    }
    return {std::move(work), BasisTrace{k, m, std::move(t), std::move(g), std::move(perm)}};
}

// C's column j expands column j of A over the basis T_j (the trace basis in
// force before column j is re-inserted), with C_jj = -1.
inline Matrix build_c(const Matrix& a, const BasisTrace& trace) {
    const int k = trace.k, m = trace.m;
    if (a.rows() != k || a.cols() != m) throw CertificateError("trace does not match matrix");
    const Field& f = *a.field();
    Matrix c(a.field(), m, m);
    for (int j = 0; j < m; ++j) {
        auto coeff = detail::expand_over_basis(a, trace.t[j], {j});
        for (std::size_t r = 0; r < trace.t[j].size(); ++r) c.at(trace.t[j][r], j) = coeff[r][0];
        c.at(j, j) = f.neg(1);
    }
    if (!mat_mul(a, c).is_zero()) throw CertificateError("A·C is nonzero");
    if (rank(c) != m - k) throw CertificateError("rank(C) != m-k");
    return c;
}

// The staircase region R: column j of C may be nonzero exactly in
//   rows [0,j] ∪ [g(j), m)   for j < k,
//   rows [g(j), j]           for j >= k.
inline std::vector<std::pair<int, int>> region_r(const std::vector<int>& g, int k, int m) {
    std::vector<std::pair<int, int>> r;
    for (int j = 0; j < m; ++j) {
        if (j < k) {
            for (int i = 0; i <= j; ++i) r.emplace_back(i, j);
            for (int i = g[j]; i < m; ++i) r.emplace_back(i, j);
        } else {
            for (int i = g[j]; i <= j; ++i) r.emplace_back(i, j);
        }
    }
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    return r;
}

// S_i = the i-th row slice of R. Verified: |S_i| = k+1, pairwise distinct.
inline std::vector<std::vector<int>> row_slices(const std::vector<std::pair<int, int>>& region,
                                                int k, int m) {
    std::vector<std::vector<int>> s(m);
    for (auto [i, j] : region) s[i].push_back(j);
    std::set<std::vector<int>> distinct;
    for (int i = 0; i < m; ++i) {
        std::sort(s[i].begin(), s[i].end());
        if (static_cast<int>(s[i].size()) != k + 1)
            throw CertificateError("row slice " + std::to_string(i + 1) + " has size " +
                                   std::to_string(s[i].size()) + ", expected " +
                                   std::to_string(k + 1));
        distinct.insert(s[i]);
    }
    if (static_cast<int>(distinct.size()) != m)
        throw CertificateError("row slices are not pairwise distinct");
    return s;
}

// Drop from S_i the smallest element t whose exclusion keeps the columns
// outside S_i \ {t} at full rank m-k.
inline std::vector<int> find_s_prime(const Matrix& c, const std::vector<int>& s_i, int k) {
    const int m = c.cols();
    for (int t : s_i) {
        std::vector<int> keep;
        for (int j = 0; j < m; ++j) {
            const bool in_slice =
                std::binary_search(s_i.begin(), s_i.end(), j) && j != t;
            if (!in_slice) keep.push_back(j);
        }
        if (rank(select_cols(c, keep)) == m - k) {
            std::vector<int> sp;
            for (int j : s_i)
                if (j != t) sp.push_back(j);
            return sp;
        }
    }
    throw CertificateError("no valid excluded element for a row slice");
}

struct KernelCertificate {
    Matrix a;  // the (permuted) normalized matrix this certificate describes
    Matrix c;
    BasisTrace trace;
    std::vector<std::vector<int>> s;       // row slices S_i
    std::vector<std::vector<int>> sprime;  // k-subsets S'_i
};

inline KernelCertificate build_certificate(const Matrix& a) {
    BuildBasesResult bb = build_bases(a);
    Matrix c = build_c(bb.a, bb.trace);
    auto region = region_r(bb.trace.g, bb.trace.k, bb.trace.m);
    auto s = row_slices(region, bb.trace.k, bb.trace.m);
    std::vector<std::vector<int>> sprime;
    sprime.reserve(s.size());
    for (const auto& si : s) sprime.push_back(find_s_prime(c, si, bb.trace.k));
    return {std::move(bb.a), std::move(c), std::move(bb.trace), std::move(s),
            std::move(sprime)};
}

struct CheckResult {
    std::string name;
    bool pass = true;
    std::string detail;  // counterexample data on failure
};

struct CertReport {
    std::vector<CheckResult> checks;
    std::vector<std::string> notes;

    bool all_pass() const {
        return std::all_of(checks.begin(), checks.end(),
                           [](const CheckResult& c) { return c.pass; });
    }
};

// Re-check every certified property from scratch; failures become report
// entries, never exceptions. Useful as an external audit of a parsed
// certificate.
inline CertReport verify_certificate(const Matrix& a, const KernelCertificate& cert) {
    CertReport rep;
    const int k = a.rows(), m = a.cols();
    auto check = [&rep](const std::string& name, bool pass, std::string detail = "") {
        rep.checks.push_back({name, pass, std::move(detail)});
    };

    bool shape = cert.c.rows() == m && cert.c.cols() == m && cert.a == a &&
                 static_cast<int>(cert.s.size()) == m &&
                 static_cast<int>(cert.sprime.size()) == m && k >= 1 && m >= k + 2;
    check("shape", shape, shape ? "" : "dimension or matrix mismatch");
    if (!shape) return rep;

    {
        Matrix prod = mat_mul(a, cert.c);
        std::string bad;
        for (int i = 0; i < prod.rows() && bad.empty(); ++i)
            for (int j = 0; j < prod.cols() && bad.empty(); ++j)
                if (prod.at(i, j) != 0)
                    bad = "entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                          ") = " + std::to_string(prod.at(i, j));
        check("product", bad.empty(), bad);
    }
    {
        const int r = rank(cert.c);
        check("rank", r == m - k,
              r == m - k ? "" : "rank " + std::to_string(r) + ", expected " +
                                    std::to_string(m - k));
    }
    {
        std::string bad;
        std::set<std::vector<int>> distinct;
        for (int i = 0; i < m && bad.empty(); ++i) {
            const auto& si = cert.s[i];
            if (static_cast<int>(si.size()) != k + 1) {
                bad = "S" + std::to_string(i + 1) + " has size " + std::to_string(si.size());
                break;
            }
            for (int j : si)
                if (j < 0 || j >= m) bad = "S" + std::to_string(i + 1) + " out of range";
            distinct.insert(si);
            for (int j = 0; j < m && bad.empty(); ++j)
                if (cert.c.at(i, j) != 0 && !std::binary_search(si.begin(), si.end(), j))
                    bad = "C(" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                          ") nonzero outside S" + std::to_string(i + 1);
        }
        if (bad.empty() && static_cast<int>(distinct.size()) != m)
            bad = "row slices are not pairwise distinct";
        check("support", bad.empty(), bad);
    }
    {
        std::string bad;
        for (int i = 0; i < m && bad.empty(); ++i) {
            const auto& si = cert.s[i];
            const auto& sp = cert.sprime[i];
            if (static_cast<int>(sp.size()) != k) {
                bad = "S'" + std::to_string(i + 1) + " has size " + std::to_string(sp.size());
                break;
            }
            if (!std::includes(si.begin(), si.end(), sp.begin(), sp.end())) {
                bad = "S'" + std::to_string(i + 1) + " is not a subset of S" +
                      std::to_string(i + 1);
                break;
            }
            std::vector<int> keep;
            for (int j = 0; j < m; ++j)
                if (!std::binary_search(sp.begin(), sp.end(), j)) keep.push_back(j);
            const int r = rank(select_cols(cert.c, keep));
            if (r != m - k)
                bad = "columns outside S'" + std::to_string(i + 1) + " have rank " +
                      std::to_string(r);
        }
        check("sprime", bad.empty(), bad);
    }
    {
        std::string bad;
        const Elt minus_one = a.field()->neg(1);
        for (int j = 0; j < m && bad.empty(); ++j)
            if (cert.c.at(j, j) != minus_one)
                bad = "C(" + std::to_string(j + 1) + "," + std::to_string(j + 1) + ") = " +
                      std::to_string(cert.c.at(j, j));
        check("diagonal", bad.empty(), bad);
    }
    {
        std::string bad;
        for (int j = k; j < m && bad.empty(); ++j)
            for (int i = j + 1; i < m && bad.empty(); ++i)
                if (cert.c.at(i, j) != 0)
                    bad = "C(" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                          ") below the block diagonal is nonzero";
        check("triangular", bad.empty(), bad);
    }
    if (static_cast<int>(cert.trace.g.size()) == m) {
        // Compare the region slices against the trace's closed-form candidate
        // g^{-1}(T_{i-1}) ∪ {i}; mismatches are informational, the region is
        // authoritative.
        std::vector<int> ginv(m, -1);
        for (int i = 0; i < m; ++i)
            if (cert.trace.g[i] >= 0 && cert.trace.g[i] < m) ginv[cert.trace.g[i]] = i;
        std::vector<int> mismatch;
        for (int i = k; i < m; ++i) {
            std::vector<int> closed;
            for (int v : cert.trace.t[i]) closed.push_back(ginv[v]);
            closed.push_back(i);
            closed = [](std::vector<int> v) {
                std::sort(v.begin(), v.end());
                v.erase(std::unique(v.begin(), v.end()), v.end());
                return v;
            }(std::move(closed));
            if (closed != cert.s[i]) mismatch.push_back(i + 1);
        }
        if (mismatch.empty()) {
            rep.notes.push_back("closed-form slices match the region slices");
        } else {
            std::string msg = "closed-form slices differ from the region slices at i =";
            for (int i : mismatch) msg += " " + std::to_string(i);
            rep.notes.push_back(std::move(msg));
        }
    }
    return rep;
}

// --- certificate text format ------------------------------------------------
// All indices are 1-based in the file; matrix entries use the canonical
// element encoding. Layout (fixed order, one blank-free block):
//   certificate
//   field p n [modulus...]
//   system k m
//   colperm p_1 ... p_m
//   A            (k rows follow)
//   C            (m rows follow)
//   g g_1 ... g_m
//   T0 ... Tm    (one line each, k indices)
//   S1 ... Sm    (k+1 indices each)
//   Sp1 ... Spm  (k indices each)
//   end

inline void emit_certificate(std::ostream& os, const KernelCertificate& cert) {
    const Field& f = *cert.a.field();
    const int k = cert.trace.k, m = cert.trace.m;
    os << "certificate\n";
    os << "field " << f.p() << ' ' << f.n();
    for (Elt c : f.modulus()) os << ' ' << c;
    os << '\n';
    os << "system " << k << ' ' << m << '\n';
    os << "colperm";
    for (int v : cert.trace.colperm) os << ' ' << (v + 1);
    os << '\n';
    os << "A\n";
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < m; ++j) {
            if (j) os << ' ';
            os << cert.a.at(i, j);
        }
        os << '\n';
    }
    os << "C\n";
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            if (j) os << ' ';
            os << cert.c.at(i, j);
        }
        os << '\n';
    }
    os << "g";
    for (int v : cert.trace.g) os << ' ' << (v + 1);
    os << '\n';
    for (int i = 0; i <= m; ++i) {
        os << 'T' << i;
        for (int v : cert.trace.t[i]) os << ' ' << (v + 1);
        os << '\n';
    }
    for (int i = 0; i < m; ++i) {
        os << 'S' << (i + 1);
        for (int v : cert.s[i]) os << ' ' << (v + 1);
        os << '\n';
    }
    for (int i = 0; i < m; ++i) {
        os << "Sp" << (i + 1);
        for (int v : cert.sprime[i]) os << ' ' << (v + 1);
        os << '\n';
    }
    os << "end\n";
}

inline std::string emit_certificate(const KernelCertificate& cert) {
    std::ostringstream os;
    emit_certificate(os, cert);
    return os.str();
}

namespace detail {

inline std::vector<std::string> cert_tokens(std::istream& in, const std::string& expect_head,
                                            int min_count) {
    std::string line;
    std::vector<std::string> toks;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream is(line);
        std::string t;
        toks.clear();
        while (is >> t) toks.push_back(t);
        if (!toks.empty()) break;
    }
    if (toks.empty() || toks[0] != expect_head ||
        static_cast<int>(toks.size()) < min_count + 1)
        throw std::invalid_argument("certificate: expected line '" + expect_head + " ...'");
    return toks;
}

inline std::uint64_t cert_num(const std::string& tok, const char* what) {
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
        v = std::stoull(tok, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != tok.size())
        throw std::invalid_argument(std::string("certificate: bad ") + what + " '" + tok + "'");
    return v;
}

}  // namespace detail

inline KernelCertificate parse_certificate(std::istream& in) {
    using detail::cert_num;
    using detail::cert_tokens;
    cert_tokens(in, "certificate", 0);
    auto toks = cert_tokens(in, "field", 2);
    const auto p = static_cast<std::uint32_t>(cert_num(toks[1], "prime"));
    const auto n = static_cast<std::uint32_t>(cert_num(toks[2], "degree"));
    std::vector<Elt> modulus;
    for (std::size_t i = 3; i < toks.size(); ++i)
        modulus.push_back(static_cast<Elt>(cert_num(toks[i], "modulus coefficient")));
    FieldPtr f = make_field(p, n, std::move(modulus));

    toks = cert_tokens(in, "system", 2);
    const int k = static_cast<int>(cert_num(toks[1], "k"));
    const int m = static_cast<int>(cert_num(toks[2], "m"));
    if (k < 1 || m < k + 2 || m > 4096)
        throw std::invalid_argument("certificate: unreasonable dimensions");

    KernelCertificate cert;
    toks = cert_tokens(in, "colperm", m);
    cert.trace.k = k;
    cert.trace.m = m;
    cert.trace.colperm.resize(m);
    for (int j = 0; j < m; ++j)
        cert.trace.colperm[j] = static_cast<int>(cert_num(toks[j + 1], "colperm entry")) - 1;

    auto read_matrix = [&](const char* head, int rows) {
        cert_tokens(in, head, 0);
        Matrix mat(f, rows, m);
        std::string line;
        for (int i = 0; i < rows; ++i) {
            if (!std::getline(in, line))
                throw std::invalid_argument("certificate: missing matrix row");
            std::istringstream is(line);
            for (int j = 0; j < m; ++j) {
                std::string t;
                if (!(is >> t))
                    throw std::invalid_argument("certificate: short matrix row");
                mat.at(i, j) = f->element(cert_num(t, "matrix entry"));
            }
        }
        return mat;
    };
    cert.a = read_matrix("A", k);
    cert.c = read_matrix("C", m);

    toks = cert_tokens(in, "g", m);
    cert.trace.g.resize(m);
    for (int j = 0; j < m; ++j)
        cert.trace.g[j] = static_cast<int>(cert_num(toks[j + 1], "g entry")) - 1;

    cert.trace.t.resize(m + 1);
    for (int i = 0; i <= m; ++i) {
        toks = cert_tokens(in, "T" + std::to_string(i), k);
        cert.trace.t[i].resize(k);
        for (int j = 0; j < k; ++j)
            cert.trace.t[i][j] = static_cast<int>(cert_num(toks[j + 1], "T entry")) - 1;
    }
    cert.s.resize(m);
    for (int i = 0; i < m; ++i) {
        toks = cert_tokens(in, "S" + std::to_string(i + 1), k + 1);
        cert.s[i].resize(k + 1);
        for (int j = 0; j <= k; ++j)
            cert.s[i][j] = static_cast<int>(cert_num(toks[j + 1], "S entry")) - 1;
    }
    cert.sprime.resize(m);
    for (int i = 0; i < m; ++i) {
        toks = cert_tokens(in, "Sp" + std::to_string(i + 1), k);
        cert.sprime[i].resize(k);
        for (int j = 0; j < k; ++j)
            cert.sprime[i][j] = static_cast<int>(cert_num(toks[j + 1], "Sp entry")) - 1;
    }
    cert_tokens(in, "end", 0);
    return cert;
}

inline KernelCertificate parse_certificate(const std::string& text) {
    std::istringstream is(text);
    return parse_certificate(is);
}

}  // namespace linrem
