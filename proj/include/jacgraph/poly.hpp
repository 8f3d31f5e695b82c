#pragma once

// Dense univariate polynomials over Fq, low degree first. Zero polynomial is
// the empty vector; every routine keeps results trimmed to that invariant.

#include "ff.hpp"

namespace jacgraph {

struct Poly {
    std::vector<FqElem> c;

    bool operator==(const Poly& o) const { return c == o.c; }
    bool operator!=(const Poly& o) const { return c != o.c; }
};

inline void poly_trim(const Fq& F, Poly& a) {
    while (!a.c.empty() && F.is_zero(a.c.back())) a.c.pop_back();
}

inline int poly_deg(const Poly& a) { return (int)a.c.size() - 1; }
inline bool poly_is_zero(const Poly& a) { return a.c.empty(); }

inline Poly poly_make(const Fq& F, std::initializer_list<i64> low_first) {
    Poly r;
    for (i64 v : low_first) r.c.push_back(F.from_int(v));
    poly_trim(F, r);
    return r;
}
inline Poly poly_const(const Fq& F, const FqElem& v) {
    Poly r;
    if (!F.is_zero(v)) r.c.push_back(v);
    return r;
}
inline Poly poly_one(const Fq& F) { return poly_const(F, F.one()); }
// x - r
inline Poly poly_linear(const Fq& F, const FqElem& root) {
    Poly p;
    p.c = {F.neg(root), F.one()};
    return p;
}

inline Poly poly_add(const Fq& F, const Poly& a, const Poly& b) {
    Poly r;
    r.c.resize(std::max(a.c.size(), b.c.size()));
    for (std::size_t i = 0; i < r.c.size(); ++i) {
        FqElem x = i < a.c.size() ? a.c[i] : F.zero();
        FqElem y = i < b.c.size() ? b.c[i] : F.zero();
        r.c[i] = F.add(x, y);
    }
    poly_trim(F, r);
    return r;
}

inline Poly poly_sub(const Fq& F, const Poly& a, const Poly& b) {
    Poly r;
    r.c.resize(std::max(a.c.size(), b.c.size()));
    for (std::size_t i = 0; i < r.c.size(); ++i) {
        FqElem x = i < a.c.size() ? a.c[i] : F.zero();
        FqElem y = i < b.c.size() ? b.c[i] : F.zero();
        r.c[i] = F.sub(x, y);
    }
    poly_trim(F, r);
    return r;
}

inline Poly poly_scale(const Fq& F, const Poly& a, const FqElem& s) {
    if (F.is_zero(s)) return {};
    Poly r = a;
    for (auto& x : r.c) x = F.mul(x, s);
    return r;
}

inline Poly poly_mul(const Fq& F, const Poly& a, const Poly& b) {
    if (poly_is_zero(a) || poly_is_zero(b)) return {};
    Poly r;
    r.c.assign(a.c.size() + b.c.size() - 1, F.zero());
    for (std::size_t i = 0; i < a.c.size(); ++i) {
        if (F.is_zero(a.c[i])) continue;
        for (std::size_t j = 0; j < b.c.size(); ++j) {
            r.c[i + j] = F.add(r.c[i + j], F.mul(a.c[i], b.c[j]));
        }
    }
    poly_trim(F, r);
    return r;
}

// quotient/remainder with deg(rem) < deg(b); b != 0
inline std::pair<Poly, Poly> poly_divmod(const Fq& F, Poly a, const Poly& b) {
    require(!poly_is_zero(b), "polynomial division by zero");
    Poly q;
    if (a.c.size() < b.c.size()) return {q, a};
    std::size_t nb = b.c.size();
    q.c.assign(a.c.size() - nb + 1, F.zero());
    FqElem lead_inv = F.inv(b.c.back());
    for (std::size_t shift = q.c.size(); shift-- > 0;) {
        FqElem coef = F.mul(a.c[shift + nb - 1], lead_inv);
        if (F.is_zero(coef)) continue;
        q.c[shift] = coef;
        for (std::size_t i = 0; i < nb; ++i) {
            a.c[shift + i] = F.sub(a.c[shift + i], F.mul(coef, b.c[i]));
        }
    }
    poly_trim(F, a);
    poly_trim(F, q);
    return {q, a};
}

inline Poly poly_mod(const Fq& F, const Poly& a, const Poly& b) {
    return poly_divmod(F, a, b).second;
}
inline Poly poly_div(const Fq& F, const Poly& a, const Poly& b) {
    return poly_divmod(F, a, b).first;
}

inline Poly poly_monic(const Fq& F, const Poly& a) {
    if (poly_is_zero(a)) return a;
    return poly_scale(F, a, F.inv(a.c.back()));
}

inline Poly poly_gcd(const Fq& F, Poly a, Poly b) {
    while (!poly_is_zero(b)) {
        Poly r = poly_mod(F, a, b);
        a = b;
        b = r;
    }
    return poly_monic(F, a);
}

// g = gcd(a,b) monic, with s*a + t*b = g.
struct PolyXgcd {
    Poly g, s, t;
};
inline PolyXgcd poly_ext_gcd(const Fq& F, const Poly& a, const Poly& b) {
    Poly r0 = a, r1 = b;
    Poly s0 = poly_one(F), s1;
    Poly t0, t1 = poly_one(F);
    while (!poly_is_zero(r1)) {
        auto [q, r] = poly_divmod(F, r0, r1);
        r0 = r1;
        r1 = r;
        Poly s2 = poly_sub(F, s0, poly_mul(F, q, s1));
        s0 = s1;
        s1 = s2;
        Poly t2 = poly_sub(F, t0, poly_mul(F, q, t1));
        t0 = t1;
        t1 = t2;
    }
    if (!poly_is_zero(r0)) {
        FqElem inv = F.inv(r0.c.back());
        r0 = poly_scale(F, r0, inv);
        s0 = poly_scale(F, s0, inv);
        t0 = poly_scale(F, t0, inv);
    }
    return {r0, s0, t0};
}

inline FqElem poly_eval(const Fq& F, const Poly& a, const FqElem& x) {
    FqElem r = F.zero();
    for (std::size_t i = a.c.size(); i-- > 0;) {
        r = F.add(F.mul(r, x), a.c[i]);
    }
    return r;
}

inline Poly poly_derivative(const Fq& F, const Poly& a) {
    Poly r;
    if (a.c.size() <= 1) return r;
    r.c.resize(a.c.size() - 1);
    for (std::size_t i = 1; i < a.c.size(); ++i) {
        r.c[i - 1] = F.mul_int(a.c[i], (i64)i);
    }
    poly_trim(F, r);
    return r;
}

inline bool poly_is_squarefree(const Fq& F, const Poly& a) {
    Poly d = poly_derivative(F, a);
    if (poly_is_zero(d)) return false;  // p-th power or constant
    return poly_deg(poly_gcd(F, a, d)) == 0;
}

inline std::string poly_to_string(const Fq& F, const Poly& a) {
    if (poly_is_zero(a)) return "0";
    std::string s;
    for (std::size_t i = a.c.size(); i-- > 0;) {
        if (F.is_zero(a.c[i])) continue;
        if (!s.empty()) s += "+";
        if (i == 0 || !F.is_one(a.c[i])) s += "(" + F.to_string(a.c[i]) + ")";
        if (i >= 1) {
            s += "X";
            if (i >= 2) s += "^" + std::to_string(i);
        }
    }
    return s;
}

}  // namespace jacgraph
