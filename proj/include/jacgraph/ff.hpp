#pragma once

// Finite fields F_{p^n} at desk scale: n <= 4, p^n < 2^63. A prime field is
// the degree-1 case. Extension fields always use one canonical modulus — the
// first monic irreducible polynomial of the requested degree in base-p counter
// order of the non-leading coefficients (constant term fastest) — so every run
// and every machine agrees on element representation.

#include <algorithm>
#include <optional>
#include <sstream>

#include "common.hpp"

namespace jacgraph {

// Element of F_{p^n}: coefficients of the residue polynomial, c[i] <-> x^i.
// Coefficients at positions >= deg stay zero; comparisons rely on that.
struct FqElem {
    std::array<u64, 4> c{};

    bool operator==(const FqElem& o) const { return c == o.c; }
    bool operator!=(const FqElem& o) const { return c != o.c; }
};

struct FqElemHash {
    std::size_t operator()(const FqElem& e) const {
        u64 h = 0x9e3779b97f4a7c15ull;
        for (u64 v : e.c) {
            h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return (std::size_t)h;
    }
};

namespace detail {

// Dense polynomials over F_p with plain u64 coefficients, low degree first.
// Only what the canonical-modulus search needs.
inline void ptrim(std::vector<u64>& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline std::vector<u64> pmulmod(const std::vector<u64>& a, const std::vector<u64>& b,
                                const std::vector<u64>& f, u64 p) {
    if (a.empty() || b.empty()) return {};
    std::vector<u64> prod(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) {
            prod[i + j] = (prod[i + j] + mulmod(a[i], b[j], p)) % p;
        }
    }
    // reduce by monic f
    std::size_t d = f.size() - 1;
    for (std::size_t k = prod.size(); k-- > d;) {
        u64 coef = prod[k];
        if (coef == 0) continue;
        prod[k] = 0;
        for (std::size_t i = 0; i < d; ++i) {
            u64 negfi = f[i] == 0 ? 0 : p - f[i];
            prod[k - d + i] = (prod[k - d + i] + mulmod(coef, negfi, p)) % p;
        }
    }
    prod.resize(d);
    ptrim(prod);
    return prod;
}

inline std::vector<u64> ppowmod(std::vector<u64> base, u64 e, const std::vector<u64>& f, u64 p) {
    std::vector<u64> r{1};
    while (e) {
        if (e & 1) r = pmulmod(r, base, f, p);
        base = pmulmod(base, base, f, p);
        e >>= 1;
    }
    return r;
}

inline std::vector<u64> pgcd(std::vector<u64> a, std::vector<u64> b, u64 p) {
    ptrim(a);
    ptrim(b);
    while (!b.empty()) {
        // a mod b, b made monic on the fly
        u64 lead_inv = invmod(b.back(), p);
        std::vector<u64> bm = b;
        for (u64& x : bm) x = mulmod(x, lead_inv, p);
        while (a.size() >= bm.size() && !a.empty()) {
            u64 coef = a.back();
            std::size_t shift = a.size() - bm.size();
            for (std::size_t i = 0; i < bm.size(); ++i) {
                a[shift + i] = submod(a[shift + i], mulmod(coef, bm[i], p), p);
            }
            ptrim(a);
        }
        std::swap(a, b);
    }
    return a;
}

// f monic of degree d >= 1 over F_p. Frobenius-power criterion:
// irreducible iff x^(p^d) = x mod f and gcd(x^(p^(d/r)) - x, f) = 1
// for every prime r | d.
inline bool is_irreducible_monic(const std::vector<u64>& f, u64 p) {
    std::size_t d = f.size() - 1;
    if (d == 1) return true;
    std::vector<u64> x{0, 1};
    // frob[k] = x^(p^k) mod f
    std::vector<std::vector<u64>> frob(d + 1);
    frob[0] = x;
    for (std::size_t k = 1; k <= d; ++k) frob[k] = ppowmod(frob[k - 1], p, f, p);
    std::vector<u64> xd = frob[d];
    if (xd.size() != 2 || xd[0] != 0 || xd[1] != 1) return false;
    for (std::size_t r = 2; r <= d; ++r) {
        if (d % r != 0) continue;
        bool rprime = true;
        for (std::size_t t = 2; t * t <= r; ++t)
            if (r % t == 0) rprime = false;
        if (!rprime) continue;
        std::vector<u64> g = frob[d / r];
        // g - x
        if (g.size() < 2) g.resize(2, 0);
        g[1] = submod(g[1], 1, p);
        ptrim(g);
        std::vector<u64> gg = pgcd(g, f, p);
        if (gg.size() != 1) return false;
    }
    return true;
}

}  // namespace detail

class Fq {
public:
    // Canonical field of order p^deg.
    Fq(u64 p, unsigned deg) : p_(p), deg_(deg) {
        require(deg >= 1 && deg <= 4, "field degree must be in [1,4]");
        require(p >= 2 && p <= 0x7fffffffull, "field characteristic must be a prime < 2^31");
        require(is_prime_u64(p), "field characteristic must be prime");
        u128 q = 1;
        for (unsigned i = 0; i < deg; ++i) {
            q *= p;
            require(q < ((u128)1 << 63), "field order must stay below 2^63");
        }
        q_ = (u64)q;
        if (deg == 1) {
            mod_ = {0, 1, 0, 0, 0};
        } else {
            find_modulus();
        }
        if (deg >= 2) precompute_reduction();
    }

    u64 p() const { return p_; }
    unsigned deg() const { return deg_; }
    u64 size() const { return q_; }
    // modulus coefficients, low degree first, length deg+1, monic
    std::vector<u64> modulus() const {
        return std::vector<u64>(mod_.begin(), mod_.begin() + deg_ + 1);
    }

    bool operator==(const Fq& o) const { return p_ == o.p_ && deg_ == o.deg_; }

    FqElem zero() const { return {}; }
    FqElem one() const {
        FqElem e;
        e.c[0] = 1 % p_;
        return e;
    }
    // residue class of x; only meaningful for deg >= 2
    FqElem gen() const {
        FqElem e;
        e.c[1] = 1;
        return e;
    }
    FqElem from_int(i64 v) const {
        i64 r = v % (i64)p_;
        if (r < 0) r += (i64)p_;
        FqElem e;
        e.c[0] = (u64)r;
        return e;
    }
    FqElem make(std::initializer_list<u64> coeffs) const {
        FqElem e;
        unsigned i = 0;
        for (u64 v : coeffs) {
            require(i < deg_, "coefficient list longer than field degree");
            e.c[i++] = v % p_;
        }
        return e;
    }

    bool is_zero(const FqElem& a) const { return a == zero(); }
    bool is_one(const FqElem& a) const { return a == one(); }

    FqElem add(const FqElem& a, const FqElem& b) const {
        FqElem r;
        for (unsigned i = 0; i < deg_; ++i) r.c[i] = addmod(a.c[i], b.c[i], p_);
        return r;
    }
    FqElem sub(const FqElem& a, const FqElem& b) const {
        FqElem r;
        for (unsigned i = 0; i < deg_; ++i) r.c[i] = submod(a.c[i], b.c[i], p_);
        return r;
    }
    FqElem neg(const FqElem& a) const {
        FqElem r;
        for (unsigned i = 0; i < deg_; ++i) r.c[i] = a.c[i] == 0 ? 0 : p_ - a.c[i];
        return r;
    }

    FqElem mul(const FqElem& a, const FqElem& b) const {
        if (deg_ == 1) {
            FqElem r;
            r.c[0] = mulmod(a.c[0], b.c[0], p_);
            return r;
        }
        u128 prod[7] = {};
        for (unsigned i = 0; i < deg_; ++i) {
            if (a.c[i] == 0) continue;
            for (unsigned j = 0; j < deg_; ++j) {
                prod[i + j] += (u128)a.c[i] * b.c[j];
            }
        }
        for (unsigned k = 2 * deg_ - 2; k >= deg_; --k) {
            u64 coef = (u64)(prod[k] % p_);
            prod[k] = 0;
            if (coef == 0) continue;
            const auto& red = red_[k - deg_];
            for (unsigned i = 0; i < deg_; ++i) {
                prod[i] += (u128)coef * red[i];
            }
        }
        FqElem r;
        for (unsigned i = 0; i < deg_; ++i) r.c[i] = (u64)(prod[i] % p_);
        return r;
    }

    FqElem mul_int(const FqElem& a, i64 k) const { return mul(a, from_int(k)); }

    FqElem pow(FqElem a, u64 e) const {
        FqElem r = one();
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }

    FqElem inv(const FqElem& a) const {
        require(!is_zero(a), "division by zero field element");
        if (deg_ == 1) {
            FqElem r;
            r.c[0] = invmod(a.c[0], p_);
            return r;
        }
        return pow(a, q_ - 2);
    }
    FqElem div(const FqElem& a, const FqElem& b) const { return mul(a, inv(b)); }

    // Legendre symbol, prime fields with odd p only.
    int legendre(const FqElem& a) const {
        require(deg_ == 1 && p_ > 2, "legendre symbol needs an odd prime field");
        return jacobi(a.c[0], p_);
    }

    bool is_square(const FqElem& a) const {
        if (is_zero(a)) return true;
        if (p_ == 2) return true;  // Frobenius is bijective
        return is_one(pow(a, (q_ - 1) / 2));
    }

    // Square root with deterministic representative: of the two roots y, -y the
    // one with lexicographically smaller coefficient vector is returned.
    std::optional<FqElem> sqrt(const FqElem& a) const {
        if (is_zero(a)) return zero();
        if (p_ == 2) return pow(a, q_ / 2);
        if (!is_square(a)) return std::nullopt;
        FqElem r;
        if ((q_ & 3) == 3) {
            r = pow(a, (q_ + 1) / 4);
        } else {
            // Tonelli-Shanks; the non-residue scan order is the element order,
            // so the algorithm is fully deterministic.
            u64 m = q_ - 1;
            unsigned s = 0;
            while ((m & 1) == 0) { m >>= 1; ++s; }
            FqElem z;
            for (u64 idx = 1; idx < q_; ++idx) {
                z = element_from_index(idx);
                if (!is_square(z)) break;
            }
            FqElem c = pow(z, m);
            FqElem t = pow(a, m);
            r = pow(a, (m + 1) / 2);
            unsigned big = s;
            while (!is_one(t)) {
                FqElem t2 = t;
                unsigned i = 0;
                while (!is_one(t2)) {
                    t2 = mul(t2, t2);
                    ++i;
                }
                FqElem b = c;
                for (unsigned j = 0; j + i + 1 < big; ++j) b = mul(b, b);
                big = i;
                c = mul(b, b);
                t = mul(t, c);
                r = mul(r, b);
            }
        }
        internal_check(mul(r, r) == a, "sqrt postcondition failed");
        FqElem nr = neg(r);
        return lex_less(nr, r) ? nr : r;
    }

    // Lexicographic order on coefficient vectors, constant term most significant.
    bool lex_less(const FqElem& a, const FqElem& b) const {
        for (unsigned i = 0; i < deg_; ++i) {
            if (a.c[i] != b.c[i]) return a.c[i] < b.c[i];
        }
        return false;
    }

    // Element enumeration follows the same lexicographic order.
    FqElem element_from_index(u64 idx) const {
        FqElem e;
        for (unsigned i = deg_; i-- > 0;) {
            e.c[i] = idx % p_;
            idx /= p_;
        }
        return e;
    }
    u64 index_of(const FqElem& e) const {
        u64 idx = 0;
        for (unsigned i = 0; i < deg_; ++i) idx = idx * p_ + e.c[i];
        return idx;
    }

    std::string to_string(const FqElem& e) const {
        if (deg_ == 1) return std::to_string(e.c[0]);
        std::ostringstream os;
        bool first = true;
        for (unsigned i = deg_; i-- > 0;) {
            u64 v = e.c[i];
            if (v == 0) continue;
            if (!first) os << "+";
            if (i == 0 || v != 1) os << v;
            if (i >= 1) {
                os << "x";
                if (i >= 2) os << "^" << i;
            }
            first = false;
        }
        if (first) os << "0";
        return os.str();
    }

private:
    void find_modulus() {
        u64 count = 1;
        for (unsigned i = 0; i < deg_; ++i) count *= p_;
        for (u64 m = 0; m < count; ++m) {
            std::vector<u64> f(deg_ + 1, 0);
            u64 v = m;
            for (unsigned i = 0; i < deg_; ++i) {
                f[i] = v % p_;
                v /= p_;
            }
            f[deg_] = 1;
            if (detail::is_irreducible_monic(f, p_)) {
                for (unsigned i = 0; i <= deg_; ++i) mod_[i] = f[i];
                return;
            }
        }
        throw InternalCheckError("no irreducible modulus found");  // unreachable
    }

    void precompute_reduction() {
        // red_[k] = x^(deg+k) mod modulus, k = 0..deg-2
        std::array<u64, 4> cur{};
        for (unsigned i = 0; i < deg_; ++i) cur[i] = mod_[i] == 0 ? 0 : p_ - mod_[i];
        red_[0] = cur;
        for (unsigned k = 1; k + 1 < deg_; ++k) {
            std::array<u64, 4> nxt{};
            u64 top = cur[deg_ - 1];
            for (unsigned i = deg_ - 1; i >= 1; --i) nxt[i] = cur[i - 1];
            nxt[0] = 0;
            if (top != 0) {
                for (unsigned i = 0; i < deg_; ++i) {
                    nxt[i] = addmod(nxt[i], mulmod(top, red_[0][i], p_), p_);
                }
            }
            red_[k] = nxt;
            cur = nxt;
        }
    }

    u64 p_;
    unsigned deg_;
    u64 q_;
    std::array<u64, 5> mod_{};
    std::array<std::array<u64, 4>, 3> red_{};
};

}  // namespace jacgraph
