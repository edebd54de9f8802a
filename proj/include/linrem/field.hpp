// field.hpp: exact arithmetic in GF(p^n) with a canonical integer encoding.
//
// An element is an integer v in [0, q), q = p^n, whose base-p digits
// (d_0, ..., d_{n-1}) are the coefficients of d_0 + d_1*x + ... + d_{n-1}*x^{n-1}
// modulo the field's irreducible polynomial. Multiplication and inversion go
// through discrete log/antilog tables built once at construction.

#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace linrem {

using Elt = std::uint16_t;

namespace detail {

inline bool is_prime(std::uint32_t v) {
    if (v < 2) return false;
    for (std::uint32_t d = 2; d * d <= v; ++d)
        if (v % d == 0) return false;
    return true;
}

// Dense polynomials over GF(p), ascending coefficients.
using Poly = std::vector<std::uint32_t>;

inline void poly_trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline Poly poly_mul(const Poly& a, const Poly& b, std::uint32_t p) {
    if (a.empty() || b.empty()) return {};
    Poly c(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            c[i + j] = (c[i + j] + a[i] * b[j]) % p;
    }
    poly_trim(c);
    return c;
}

// Remainder of a modulo a monic divisor d.
inline Poly poly_rem(Poly a, const Poly& d, std::uint32_t p) {
    poly_trim(a);
    const std::size_t deg = d.size() - 1;
    while (a.size() > deg) {
        const std::uint32_t lead = a.back();
        const std::size_t shift = a.size() - d.size();
        if (lead != 0) {
            for (std::size_t i = 0; i < d.size(); ++i) {
                std::uint32_t t = (lead * d[i]) % p;
                a[shift + i] = (a[shift + i] + p - t) % p;
            }
        }
        a.pop_back();
        poly_trim(a);
        if (a.size() <= deg) break;
    }
    return a;
}

// Trial division by every monic polynomial of degree 1..n/2. Exact and cheap
// at the orders in scope (q <= 2^16).
inline bool poly_irreducible(const Poly& m, std::uint32_t p) {
    const std::size_t n = m.size() - 1;
    if (n == 0) return false;
    if (m[0] == 0) return n == 1;  // divisible by x unless it *is* x
    std::uint64_t count = 1;
    for (std::size_t deg = 1; 2 * deg <= n; ++deg) {
        count *= p;
        for (std::uint64_t enc = 0; enc < count; ++enc) {
            Poly d(deg + 1, 0);
            std::uint64_t t = enc;
            for (std::size_t i = 0; i < deg; ++i) {
                d[i] = static_cast<std::uint32_t>(t % p);
                t /= p;
            }
            d[deg] = 1;
            if (poly_rem(m, d, p).empty()) return false;
        }
    }
    return true;
}

}  // namespace detail

// Immutable description of GF(p^n) plus the arithmetic tables. Safe to share
// across threads after construction; all operations are pure.
class Field {
public:
    static constexpr std::uint32_t kMaxOrder = 1u << 16;

    Field(std::uint32_t p, std::uint32_t n, std::vector<Elt> modulus = {})
        : p_(p), n_(n) {
        if (!detail::is_prime(p_))
            throw std::invalid_argument("field: " + std::to_string(p_) + " is not prime");
        if (n_ < 1) throw std::invalid_argument("field: extension degree must be >= 1");
        std::uint64_t q = 1;
        for (std::uint32_t i = 0; i < n_; ++i) {
            q *= p_;
            if (q > kMaxOrder)
                throw std::invalid_argument("field: order p^n exceeds the 2^16 cap");
        }
        q_ = static_cast<std::uint32_t>(q);
        if (n_ == 1) {
            if (!modulus.empty())
                throw std::invalid_argument("field: modulus not accepted for prime fields");
        } else if (modulus.empty()) {
            modulus_ = default_modulus();
        } else {
            if (modulus.size() != n_ + 1 || modulus.back() != 1)
                throw std::invalid_argument("field: modulus must be monic of degree n");
            for (Elt c : modulus)
                if (c >= p_) throw std::invalid_argument("field: modulus coefficient out of range");
            detail::Poly m(modulus.begin(), modulus.end());
            if (!detail::poly_irreducible(m, p_))
                throw std::invalid_argument("field: modulus is reducible");
            modulus_ = std::move(modulus);
        }
        build_tables();
    }

    std::uint32_t p() const { return p_; }
    std::uint32_t n() const { return n_; }
    std::uint32_t q() const { return q_; }
    // Ascending coefficients c_0..c_n with c_n = 1; empty for prime fields.
    const std::vector<Elt>& modulus() const { return modulus_; }

    bool same(const Field& o) const {
        return p_ == o.p_ && n_ == o.n_ && modulus_ == o.modulus_;
    }

    Elt element(std::uint64_t value) const {
        if (value >= q_) throw std::invalid_argument("field: element value out of range");
        return static_cast<Elt>(value);
    }

    // Reduce a signed integer into the prime subfield.
    Elt from_int(std::int64_t v) const {
        std::int64_t r = v % static_cast<std::int64_t>(p_);
        if (r < 0) r += p_;
        return static_cast<Elt>(r);
    }

    Elt add(Elt a, Elt b) const {
        if (n_ == 1) {
            std::uint32_t s = static_cast<std::uint32_t>(a) + b;
            return static_cast<Elt>(s >= p_ ? s - p_ : s);
        }
        if (!add_.empty()) return add_[static_cast<std::size_t>(a) * q_ + b];
        return add_digitwise(a, b);
    }

    Elt neg(Elt a) const {
        if (n_ == 1) return static_cast<Elt>(a == 0 ? 0 : p_ - a);
        if (!neg_.empty()) return neg_[a];
        return neg_digitwise(a);
    }

    Elt sub(Elt a, Elt b) const { return add(a, neg(b)); }

    Elt mul(Elt a, Elt b) const {
        if (a == 0 || b == 0) return 0;
        std::uint32_t t = static_cast<std::uint32_t>(log_[a]) + log_[b];
        const std::uint32_t ord = q_ - 1;
        if (t >= ord) t -= ord;
        return exp_[t];
    }

    Elt inv(Elt a) const {
        if (a == 0) throw std::domain_error("field: division by zero");
        const std::uint32_t ord = q_ - 1;
        return exp_[(ord - log_[a]) % ord];
    }

    Elt pow(Elt a, std::int64_t e) const {
        if (a == 0) {
            if (e > 0) return 0;
            if (e == 0) return 1;
            throw std::domain_error("field: division by zero");
        }
        const std::int64_t ord = q_ - 1;
        std::int64_t t = e % ord;
        if (t < 0) t += ord;
        std::uint64_t idx = static_cast<std::uint64_t>(log_[a]) * static_cast<std::uint64_t>(t);
        return exp_[idx % ord];
    }

    std::vector<Elt> digits(Elt a) const {
        std::vector<Elt> d(n_);
        std::uint32_t v = a;
        for (std::uint32_t i = 0; i < n_; ++i) {
            d[i] = static_cast<Elt>(v % p_);
            v /= p_;
        }
        return d;
    }

    Elt from_digits(const std::vector<Elt>& d) const {
        if (d.size() != n_) throw std::invalid_argument("field: digit count mismatch");
        std::uint32_t v = 0;
        for (std::uint32_t i = n_; i-- > 0;) {
            if (d[i] >= p_) throw std::invalid_argument("field: digit out of range");
            v = v * p_ + d[i];
        }
        return static_cast<Elt>(v);
    }

private:
    std::uint32_t p_, n_, q_ = 0;
    std::vector<Elt> modulus_;
    std::vector<Elt> exp_, log_;  // exp_[t] = g^t for t in [0, q-1); log_ inverse on [1, q)
    std::vector<Elt> add_, neg_;  // full tables for small extension fields

    Elt add_digitwise(Elt a, Elt b) const {
        std::uint32_t va = a, vb = b, out = 0, scale = 1;
        for (std::uint32_t i = 0; i < n_; ++i) {
            std::uint32_t s = va % p_ + vb % p_;
            if (s >= p_) s -= p_;
            out += s * scale;
            scale *= p_;
            va /= p_;
            vb /= p_;
        }
        return static_cast<Elt>(out);
    }

    Elt neg_digitwise(Elt a) const {
        std::uint32_t va = a, out = 0, scale = 1;
        for (std::uint32_t i = 0; i < n_; ++i) {
            std::uint32_t d = va % p_;
            out += (d == 0 ? 0 : p_ - d) * scale;
            scale *= p_;
            va /= p_;
        }
        return static_cast<Elt>(out);
    }

    // Polynomial product mod modulus, used only while building the tables.
    Elt raw_mul(Elt a, Elt b) const {
        if (n_ == 1)
            return static_cast<Elt>((static_cast<std::uint64_t>(a) * b) % p_);
        std::vector<std::uint32_t> da(n_), db(n_), c(2 * n_ - 1, 0);
        std::uint32_t va = a, vb = b;
        for (std::uint32_t i = 0; i < n_; ++i) {
            da[i] = va % p_;
            db[i] = vb % p_;
            va /= p_;
            vb /= p_;
        }
        for (std::uint32_t i = 0; i < n_; ++i) {
            if (da[i] == 0) continue;
            for (std::uint32_t j = 0; j < n_; ++j)
                c[i + j] = (c[i + j] + da[i] * db[j]) % p_;
        }
        // reduce: x^t = -(m_0 + ... + m_{n-1} x^{n-1}) * x^{t-n}
        for (std::uint32_t t = 2 * n_ - 2; t >= n_; --t) {
            std::uint32_t lead = c[t];
            if (lead != 0) {
                c[t] = 0;
                for (std::uint32_t i = 0; i < n_; ++i) {
                    std::uint32_t sub = (lead * modulus_[i]) % p_;
                    c[t - n_ + i] = (c[t - n_ + i] + p_ - sub) % p_;
                }
            }
            if (t == n_) break;
        }
        std::uint32_t out = 0;
        for (std::uint32_t i = n_; i-- > 0;) out = out * p_ + c[i];
        return static_cast<Elt>(out);
    }

    Elt raw_pow(Elt a, std::uint64_t e) const {
        Elt r = 1, base = a;
        while (e) {
            if (e & 1) r = raw_mul(r, base);
            base = raw_mul(base, base);
            e >>= 1;
        }
        return r;
    }

    std::vector<Elt> default_modulus() const {
        // Smallest monic irreducible of degree n, ordering the candidates by
        // their coefficient encoding; deterministic across runs.
        std::uint64_t inner = 1;
        for (std::uint32_t i = 0; i < n_; ++i) inner *= p_;
        for (std::uint64_t enc = 0; enc < inner; ++enc) {
            detail::Poly m(n_ + 1, 0);
            std::uint64_t t = enc;
            for (std::uint32_t i = 0; i < n_; ++i) {
                m[i] = static_cast<std::uint32_t>(t % p_);
                t /= p_;
            }
            m[n_] = 1;
            if (detail::poly_irreducible(m, p_))
                return std::vector<Elt>(m.begin(), m.end());
        }
        throw std::logic_error("field: no irreducible polynomial found");  // unreachable
    }

    void build_tables() {
        const std::uint32_t ord = q_ - 1;
        exp_.assign(ord == 0 ? 1 : ord, 1);
        log_.assign(q_, 0);
        if (ord > 0) {
            // prime factors of q-1
            std::vector<std::uint32_t> factors;
            std::uint32_t r = ord;
            for (std::uint32_t d = 2; d * d <= r; ++d) {
                if (r % d == 0) {
                    factors.push_back(d);
                    while (r % d == 0) r /= d;
                }
            }
            if (r > 1) factors.push_back(r);
            Elt gen = 1;
            for (std::uint32_t cand = 2; cand < q_; ++cand) {
                bool ok = true;
                for (std::uint32_t f : factors) {
                    if (raw_pow(static_cast<Elt>(cand), ord / f) == 1) {
                        ok = false;
                        break;
                    }
                }
                if (ok) {
                    gen = static_cast<Elt>(cand);
                    break;
                }
            }
            Elt cur = 1;
            for (std::uint32_t t = 0; t < ord; ++t) {
                exp_[t] = cur;
                log_[cur] = static_cast<Elt>(t);
                cur = raw_mul(cur, gen);
            }
        }
        if (n_ > 1 && q_ <= 256) {
            add_.resize(static_cast<std::size_t>(q_) * q_);
            neg_.resize(q_);
            for (std::uint32_t a = 0; a < q_; ++a) {
                neg_[a] = neg_digitwise(static_cast<Elt>(a));
                for (std::uint32_t b = 0; b < q_; ++b)
                    add_[static_cast<std::size_t>(a) * q_ + b] =
                        add_digitwise(static_cast<Elt>(a), static_cast<Elt>(b));
            }
        }
    }
};

using FieldPtr = std::shared_ptr<const Field>;

inline FieldPtr make_field(std::uint32_t p, std::uint32_t n = 1, std::vector<Elt> modulus = {}) {
    return std::make_shared<const Field>(p, n, std::move(modulus));
}

inline void require_same_field(const Field& a, const Field& b) {
    if (!a.same(b)) throw std::invalid_argument("field: operands from different fields");
}

}  // namespace linrem
