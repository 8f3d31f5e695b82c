#pragma once

// Curves over prime fields: genus 1 as y^2 = x^3 + a x + b, genus 2 as
// y^2 = f(x) with deg f = 5 squarefree. Characteristic at least 5 throughout.
// Counting over extensions runs on exact big-integer trace recurrences so the
// numbers stay honest far beyond enumeration range.

#include <cctype>

#include <boost/multiprecision/cpp_int.hpp>

#include "poly.hpp"

namespace jacgraph {

using bigint = boost::multiprecision::cpp_int;

struct CurveData {
    unsigned genus = 0;  // 1 or 2
    u64 p = 0;
    // right-hand side of y^2 = rhs(x), low degree first, length 4 or 6
    std::vector<u64> rhs;

    static CurveData genus1(u64 p, i64 a, i64 b) {
        require(is_prime_u64(p) && p >= 5, "genus-1 curves need a prime field of characteristic >= 5");
        Fq F(p, 1);
        u64 ar = F.from_int(a).c[0], br = F.from_int(b).c[0];
        // nonsingular iff 4a^3 + 27b^2 != 0
        u64 disc = addmod(mulmod(4, powmod(ar, 3, p), p), mulmod(27, mulmod(br, br, p), p), p);
        require(disc != 0, "singular genus-1 curve: 4a^3 + 27b^2 = 0");
        CurveData c;
        c.genus = 1;
        c.p = p;
        c.rhs = {br, ar, 0, 1};
        return c;
    }

    // Coefficients are taken highest degree first, matching the CLI format.
    static CurveData genus2(u64 p, const std::vector<i64>& c5_to_c0) {
        require(is_prime_u64(p) && p >= 5, "genus-2 curves need a prime field of characteristic >= 5");
        require(c5_to_c0.size() == 6, "genus-2 rhs needs exactly six coefficients");
        Fq F(p, 1);
        CurveData c;
        c.genus = 2;
        c.p = p;
        c.rhs.resize(6);
        for (int i = 0; i < 6; ++i) c.rhs[i] = F.from_int(c5_to_c0[5 - i]).c[0];
        require(c.rhs[5] != 0, "genus-2 rhs must have degree exactly 5");
        Poly f = c.rhs_poly(F);
        require(poly_is_squarefree(F, f), "genus-2 rhs must be squarefree");
        return c;
    }

    u64 a_coeff() const { return rhs[1]; }  // genus 1 only
    u64 b_coeff() const { return rhs[0]; }

    // rhs lifted into K (K must have characteristic p)
    Poly rhs_poly(const Fq& K) const {
        internal_check(K.p() == p, "field characteristic does not match the curve");
        Poly f;
        for (u64 v : rhs) f.c.push_back(K.from_int((i64)v));
        poly_trim(K, f);
        return f;
    }
};

struct CurvePoint {
    bool inf = true;
    FqElem x{}, y{};

    static CurvePoint infinity() { return {}; }
    static CurvePoint affine(const FqElem& x, const FqElem& y) { return {false, x, y}; }

    bool operator==(const CurvePoint& o) const {
        if (inf != o.inf) return false;
        return inf || (x == o.x && y == o.y);
    }
    bool operator!=(const CurvePoint& o) const { return !(*this == o); }
};

inline bool point_lex_less(const Fq& K, const CurvePoint& a, const CurvePoint& b) {
    if (a.inf != b.inf) return a.inf;  // infinity sorts first
    if (a.x != b.x) return K.lex_less(a.x, b.x);
    return K.lex_less(a.y, b.y);
}

inline std::string point_to_string(const Fq& K, const CurvePoint& P) {
    if (P.inf) return "inf";
    return "(" + K.to_string(P.x) + "," + K.to_string(P.y) + ")";
}

inline bool is_on_curve(const CurveData& C, const Fq& K, const CurvePoint& P) {
    if (P.inf) return true;
    FqElem r = poly_eval(K, C.rhs_poly(K), P.x);
    return K.mul(P.y, P.y) == r;
}

// ----- genus-1 group law (affine Weierstrass, char >= 5) -----

inline CurvePoint ec_neg(const Fq& K, const CurvePoint& P) {
    if (P.inf) return P;
    return CurvePoint::affine(P.x, K.neg(P.y));
}

inline CurvePoint ec_add(const CurveData& C, const Fq& K, const CurvePoint& P, const CurvePoint& Q) {
    internal_check(C.genus == 1, "chord-tangent law is the genus-1 path");
    if (P.inf) return Q;
    if (Q.inf) return P;
    FqElem lambda;
    if (P.x == Q.x) {
        if (P.y == K.neg(Q.y)) return CurvePoint::infinity();
        // tangent: (3x^2 + a) / 2y
        FqElem num = K.add(K.mul_int(K.mul(P.x, P.x), 3), K.from_int((i64)C.a_coeff()));
        lambda = K.div(num, K.mul_int(P.y, 2));
    } else {
        lambda = K.div(K.sub(Q.y, P.y), K.sub(Q.x, P.x));
    }
    FqElem x3 = K.sub(K.sub(K.mul(lambda, lambda), P.x), Q.x);
    FqElem y3 = K.sub(K.mul(lambda, K.sub(P.x, x3)), P.y);
    return CurvePoint::affine(x3, y3);
}

inline CurvePoint ec_mul(const CurveData& C, const Fq& K, CurvePoint P, u64 k) {
    CurvePoint R = CurvePoint::infinity();
    while (k) {
        if (k & 1) R = ec_add(C, K, R, P);
        P = ec_add(C, K, P, P);
        k >>= 1;
    }
    return R;
}

// ----- point enumeration -----

inline constexpr u64 kEnumerateFieldCap = 10'000'000;

// Infinity first, then affine points ordered by (x, y) coefficient vectors.
inline std::vector<CurvePoint> enumerate_points(const CurveData& C, const Fq& K) {
    if (K.size() > kEnumerateFieldCap) {
        throw CapError("point enumeration capped at 10^7 field elements");
    }
    std::vector<CurvePoint> pts;
    pts.push_back(CurvePoint::infinity());
    Poly f = C.rhs_poly(K);
    for (u64 i = 0; i < K.size(); ++i) {
        FqElem x = K.element_from_index(i);
        FqElem r = poly_eval(K, f, x);
        if (K.is_zero(r)) {
            pts.push_back(CurvePoint::affine(x, K.zero()));
            continue;
        }
        auto root = K.sqrt(r);
        if (!root) continue;
        FqElem y1 = *root, y2 = K.neg(*root);
        if (K.lex_less(y2, y1)) std::swap(y1, y2);
        pts.push_back(CurvePoint::affine(x, y1));
        pts.push_back(CurvePoint::affine(x, y2));
    }
    return pts;
}

// ----- zeta data and extension counts -----

struct ZetaData {
    unsigned genus = 0;
    u64 p = 0;
    i64 a = 0;        // genus 1: trace of Frobenius
    i64 a1 = 0, a2 = 0;  // genus 2: numerator 1 + a1 T + a2 T^2 + p a1 T^3 + p^2 T^4
};

inline ZetaData zeta_data(const CurveData& C) {
    ZetaData z;
    z.genus = C.genus;
    z.p = C.p;
    Fq F(C.p, 1);
    u64 n1 = enumerate_points(C, F).size();
    if (C.genus == 1) {
        z.a = (i64)C.p + 1 - (i64)n1;
        // Hasse: a^2 <= 4p
        internal_check(z.a * z.a <= 4 * (i64)C.p, "genus-1 trace violates the Hasse bound");
    } else {
        Fq F2(C.p, 2);
        u64 n2 = enumerate_points(C, F2).size();
        i64 s1 = (i64)C.p + 1 - (i64)n1;
        i64 s2 = (i64)(C.p * C.p) + 1 - (i64)n2;
        z.a1 = -s1;
        internal_check((s1 * s1 - s2) % 2 == 0, "genus-2 power sums have impossible parity");
        z.a2 = (s1 * s1 - s2) / 2;
    }
    return z;
}

// Power sums s_k of the Frobenius eigenvalues, k = 1..kmax, exact integers.
// Newton's identities seed the recurrence attached to the reciprocal of the
// zeta numerator.
inline std::vector<bigint> frobenius_power_sums(const ZetaData& z, unsigned kmax) {
    std::vector<bigint> s(kmax + 1, 0);
    if (kmax == 0) return s;
    bigint q = z.p;
    if (z.genus == 1) {
        // e1 = a, e2 = q
        bigint e1 = z.a, e2 = q;
        if (kmax >= 1) s[1] = e1;
        if (kmax >= 2) s[2] = e1 * s[1] - 2 * e2;
        for (unsigned k = 3; k <= kmax; ++k) s[k] = e1 * s[k - 1] - e2 * s[k - 2];
    } else {
        bigint e1 = -bigint(z.a1), e2 = z.a2, e3 = -q * z.a1, e4 = q * q;
        if (kmax >= 1) s[1] = e1;
        if (kmax >= 2) s[2] = e1 * s[1] - 2 * e2;
        if (kmax >= 3) s[3] = e1 * s[2] - e2 * s[1] + 3 * e3;
        if (kmax >= 4) s[4] = e1 * s[3] - e2 * s[2] + e3 * s[1] - 4 * e4;
        for (unsigned k = 5; k <= kmax; ++k) {
            s[k] = e1 * s[k - 1] - e2 * s[k - 2] + e3 * s[k - 3] - e4 * s[k - 4];
        }
    }
    return s;
}

struct ExtCounts {
    unsigned n = 1;
    bigint field_size;    // q^n
    bigint trace;         // s_n
    bigint curve_points;  // |C(k_n)|
    bigint jac_split;     // genus 1: (q^n - 1) |C(k_n)|
    bigint jac_double;    // genus 1: q^n |C(k_n)|
    bigint jac_order;     // genus 2: |J(k_n)|; genus 1: equals curve_points
};

inline bigint pow_bigint(const bigint& b, unsigned e) {
    bigint r = 1;
    for (unsigned i = 0; i < e; ++i) r *= b;
    return r;
}

inline ExtCounts count_points_ext(const ZetaData& z, unsigned n) {
    require(n >= 1, "extension degree must be positive");
    ExtCounts out;
    out.n = n;
    out.field_size = pow_bigint(z.p, n);
    if (z.genus == 1) {
        auto s = frobenius_power_sums(z, n);
        out.trace = s[n];
        out.curve_points = out.field_size + 1 - s[n];
        out.jac_order = out.curve_points;
        out.jac_split = (out.field_size - 1) * out.curve_points;
        out.jac_double = out.field_size * out.curve_points;
    } else {
        auto s = frobenius_power_sums(z, 3 * n);
        out.trace = s[n];
        out.curve_points = out.field_size + 1 - s[n];
        // elementary symmetric functions of the n-th powers of the eigenvalues
        bigint e1 = s[n];
        bigint num2 = e1 * s[n] - s[2 * n];
        internal_check(num2 % 2 == 0, "jacobian order recurrence: e2 not integral");
        bigint e2 = num2 / 2;
        bigint num3 = s[3 * n] - e1 * s[2 * n] + e2 * s[n];
        internal_check(num3 % 3 == 0, "jacobian order recurrence: e3 not integral");
        bigint e3 = num3 / 3;
        bigint e4 = pow_bigint(bigint(z.p) * z.p, n);
        out.jac_order = 1 - e1 + e2 - e3 + e4;
        internal_check(out.jac_order > 0, "jacobian order must be positive");
    }
    return out;
}

// Weil bound |s_n| <= 2g q^(n/2), checked exactly as s_n^2 <= 4g^2 q^n.
inline bool weil_bound_holds(const ZetaData& z, unsigned n) {
    auto s = frobenius_power_sums(z, n);
    bigint g2 = z.genus == 1 ? 4 : 16;
    return s[n] * s[n] <= g2 * pow_bigint(z.p, n);
}

inline bool is_ordinary(const ZetaData& z) {
    if (z.genus == 1) return z.a % (i64)z.p != 0;
    return z.a2 % (i64)z.p != 0;
}

// Multiplicative order of the genus-1 trace mod p; empty when p divides a.
inline std::optional<u64> trace_order_mod_p(const ZetaData& z) {
    require(z.genus == 1, "trace order applies to the genus-1 trace");
    i64 am = z.a % (i64)z.p;
    if (am < 0) am += (i64)z.p;
    if (am == 0) return std::nullopt;
    u64 a = (u64)am, ord = 1, x = a;
    while (x != 1) {
        x = mulmod(x, a, z.p);
        ++ord;
        internal_check(ord <= z.p, "order search exceeded group size");
    }
    return ord;
}

// ----- curve spec strings -----
// g1:p=<p>,a=<a>,b=<b>
// g2:p=<p>,f=<c5,c4,c3,c2,c1,c0>

namespace detail {

class SpecCursor {
public:
    SpecCursor(const std::string& s, const std::string& what) : s_(s), what_(what) {}
    bool eat(const std::string& tok) {
        if (s_.compare(pos_, tok.size(), tok) == 0) {
            pos_ += tok.size();
            return true;
        }
        return false;
    }
    void expect(const std::string& tok) {
        if (!eat(tok)) fail("expected '" + tok + "'");
    }
    i64 integer() {
        std::size_t start = pos_;
        if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
        std::size_t digits = pos_;
        while (pos_ < s_.size() && std::isdigit((unsigned char)s_[pos_])) ++pos_;
        if (pos_ == digits) fail("expected an integer");
        try {
            return std::stoll(s_.substr(start, pos_ - start));
        } catch (const std::out_of_range&) {
            pos_ = start;
            fail("integer out of range");
        }
        return 0;  // unreachable
    }
    void done() {
        if (pos_ != s_.size()) fail("trailing characters");
    }
    [[noreturn]] void fail(const std::string& msg) const {
        throw ValidationError(what_ + " '" + s_ + "', position " + std::to_string(pos_) + ": " + msg);
    }

private:
    const std::string& s_;
    std::string what_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline CurveData parse_curve_spec(const std::string& spec) {
    detail::SpecCursor cur(spec, "curve spec");
    if (cur.eat("g1:")) {
        cur.expect("p=");
        i64 p = cur.integer();
        cur.expect(",a=");
        i64 a = cur.integer();
        cur.expect(",b=");
        i64 b = cur.integer();
        cur.done();
        if (p < 2) cur.fail("characteristic must be a prime >= 5");
        return CurveData::genus1((u64)p, a, b);
    }
    if (cur.eat("g2:")) {
        cur.expect("p=");
        i64 p = cur.integer();
        cur.expect(",f=");
        std::vector<i64> coeffs;
        coeffs.push_back(cur.integer());
        for (int i = 0; i < 5; ++i) {
            cur.expect(",");
            coeffs.push_back(cur.integer());
        }
        cur.done();
        if (p < 2) cur.fail("characteristic must be a prime >= 5");
        return CurveData::genus2((u64)p, coeffs);
    }
    cur.fail("expected 'g1:' or 'g2:'");
}

}  // namespace jacgraph
