#pragma once

// Rational points of generalized jacobians, three constructions:
//   * split modulus m = (M) + (N), genus 1: pairs (P, s) with s in K^*,
//     multiplicative twist by line-function values at M and N;
//   * double-point modulus m = 2(x0), genus 1: pairs (P, s) with s in K,
//     additive twist by the logarithmic derivative at x0;
//   * empty modulus, genus 2: Mumford pairs (u, v) under Cantor composition.
//
// Lines through the modulus support are handled exactly: paired simple zeros
// of chord and vertical cancel via leading expansion coefficients, labels over
// support fibers are read through a fixed translation base, and subtraction is
// solved from the law rather than searched. Group axioms are certified
// exhaustively by the test suite, not assumed.

#include <functional>
#include <memory>
#include <unordered_map>

#include "abgroup.hpp"
#include "curve.hpp"

namespace jacgraph {

enum class ModulusKind { Split, Double, Empty };

struct ModulusSpec {
    ModulusKind kind = ModulusKind::Empty;
    i64 x1 = 0, y1 = 0;  // split: first point; double: the doubled point
    i64 x2 = 0, y2 = 0;  // split: second point

    static ModulusSpec split(i64 x1, i64 y1, i64 x2, i64 y2) {
        return {ModulusKind::Split, x1, y1, x2, y2};
    }
    static ModulusSpec double_point(i64 x0, i64 y0) {
        return {ModulusKind::Double, x0, y0, 0, 0};
    }
    static ModulusSpec empty() { return {}; }

    // support size: the number of punctured curve points
    unsigned support_size() const {
        switch (kind) {
            case ModulusKind::Split: return 2;
            case ModulusKind::Double: return 1;
            default: return 0;
        }
    }
};

// m=split:(x1,y1),(x2,y2) | m=double:(x0,y0) | m=empty
inline ModulusSpec parse_modulus_spec(const std::string& spec) {
    detail::SpecCursor cur(spec, "modulus spec");
    cur.expect("m=");
    if (cur.eat("split:")) {
        cur.expect("(");
        i64 x1 = cur.integer();
        cur.expect(",");
        i64 y1 = cur.integer();
        cur.expect("),(");
        i64 x2 = cur.integer();
        cur.expect(",");
        i64 y2 = cur.integer();
        cur.expect(")");
        cur.done();
        return ModulusSpec::split(x1, y1, x2, y2);
    }
    if (cur.eat("double:")) {
        cur.expect("(");
        i64 x0 = cur.integer();
        cur.expect(",");
        i64 y0 = cur.integer();
        cur.expect(")");
        cur.done();
        return ModulusSpec::double_point(x0, y0);
    }
    if (cur.eat("empty")) {
        cur.done();
        return ModulusSpec::empty();
    }
    cur.fail("expected 'split:', 'double:' or 'empty'");
}

inline std::string modulus_to_string(const ModulusSpec& m) {
    switch (m.kind) {
        case ModulusKind::Split:
            return "m=split:(" + std::to_string(m.x1) + "," + std::to_string(m.y1) + "),(" +
                   std::to_string(m.x2) + "," + std::to_string(m.y2) + ")";
        case ModulusKind::Double:
            return "m=double:(" + std::to_string(m.x1) + "," + std::to_string(m.y1) + ")";
        default:
            return "m=empty";
    }
}

// One jacobian element. Which fields are live depends on the construction:
// genus 1 uses (P, s), genus 2 uses (u, v).
struct JacElem {
    CurvePoint P;
    FqElem s{};
    Poly u, v;

    bool operator==(const JacElem& o) const {
        return P == o.P && s == o.s && u == o.u && v == o.v;
    }
    bool operator!=(const JacElem& o) const { return !(*this == o); }
};

namespace detail {

// A line on the genus-1 curve, in the three shapes the group law meets.
struct Line {
    enum class Kind { Chord, Vertical, One } kind;
    FqElem lambda{}, mu{};  // chord/tangent: y - lambda x - mu
    FqElem xcut{};          // vertical: x - xcut
};

// Line through P and Q (either may be infinity; P == Q means the tangent).
inline Line line_through(const CurveData& C, const Fq& K, const CurvePoint& P, const CurvePoint& Q) {
    if (P.inf && Q.inf) return {Line::Kind::One};
    if (P.inf) return {Line::Kind::Vertical, {}, {}, Q.x};
    if (Q.inf) return {Line::Kind::Vertical, {}, {}, P.x};
    if (P.x == Q.x && P.y != Q.y) return {Line::Kind::Vertical, {}, {}, P.x};
    if (P == Q && K.is_zero(P.y)) return {Line::Kind::Vertical, {}, {}, P.x};  // 2-torsion tangent
    FqElem lambda;
    if (P == Q) {
        FqElem num = K.add(K.mul_int(K.mul(P.x, P.x), 3), K.from_int((i64)C.a_coeff()));
        lambda = K.div(num, K.mul_int(P.y, 2));
    } else {
        lambda = K.div(K.sub(Q.y, P.y), K.sub(Q.x, P.x));
    }
    FqElem mu = K.sub(P.y, K.mul(lambda, P.x));
    return {Line::Kind::Chord, lambda, mu, {}};
}

inline FqElem line_value(const Fq& K, const Line& L, const CurvePoint& A) {
    switch (L.kind) {
        case Line::Kind::One: return K.one();
        case Line::Kind::Vertical: return K.sub(A.x, L.xcut);
        default: return K.sub(A.y, K.add(K.mul(L.lambda, A.x), L.mu));
    }
}

// First two coefficients of the expansion of the line function in the local
// parameter t = x - x(A). Only called when the value at A vanishes, which
// forces y(A) != 0 for the honest configurations the law is evaluated on.
struct LineJet {
    FqElem d1, d2;
};

inline LineJet line_jet(const CurveData& C, const Fq& K, const Line& L, const CurvePoint& A) {
    switch (L.kind) {
        case Line::Kind::One: return {K.zero(), K.zero()};
        case Line::Kind::Vertical: return {K.one(), K.zero()};
        default: {
            // on y^2 = x^3 + ax + b:  y' = (3x^2 + a)/2y,  y'' = (3x - y'^2)/y
            internal_check(!K.is_zero(A.y), "line expansion needs x as a local parameter");
            FqElem num = K.add(K.mul_int(K.mul(A.x, A.x), 3), K.from_int((i64)C.a_coeff()));
            FqElem yp = K.div(num, K.mul_int(A.y, 2));
            FqElem ypp2 = K.div(K.sub(K.mul_int(A.x, 3), K.mul(yp, yp)), K.mul_int(A.y, 2));
            return {K.sub(yp, L.lambda), ypp2};
        }
    }
}

}  // namespace detail

inline constexpr u64 kJacobianEnumCap = 1'000'000;

class Jacobian {
public:
    Jacobian(const CurveData& C, const Fq& K, const ModulusSpec& m, u64 enum_cap = kJacobianEnumCap)
        : C_(C), K_(K), m_(m) {
        require(K.p() == C.p, "field characteristic does not match the curve");
        if (C.genus == 1) {
            require(m.kind != ModulusKind::Empty, "genus-1 jacobian graphs need a nontrivial modulus");
        } else {
            require(m.kind == ModulusKind::Empty, "genus-2 construction uses the empty modulus");
        }
        if (m.kind != ModulusKind::Empty) {
            Fq base(C.p, 1);
            M_ = CurvePoint::affine(K.from_int(m.x1), K.from_int(m.y1));
            require(is_on_curve(C, K, M_), "modulus point is not on the curve");
            if (m.kind == ModulusKind::Split) {
                N_ = CurvePoint::affine(K.from_int(m.x2), K.from_int(m.y2));
                require(is_on_curve(C, K, N_), "modulus point is not on the curve");
                require(M_ != N_, "split modulus needs two distinct points");
            } else {
                require(!K.is_zero(M_.y), "double-point modulus needs y(x0) != 0");
            }
        } else {
            f_ = C.rhs_poly(K);
        }
        pts_ = enumerate_points(C_, K_);
        if (C_.genus == 1) choose_translation_base();
        enumerate_elements(enum_cap);
    }

    const CurveData& curve() const { return C_; }
    const Fq& field() const { return K_; }
    const ModulusSpec& modulus() const { return m_; }
    const std::vector<CurvePoint>& curve_points() const { return pts_; }

    std::size_t size() const { return els_.size(); }

    JacElem identity() const {
        if (C_.genus == 2) return mumford(poly_one(K_), {});
        return pair_elem(CurvePoint::infinity(), m_.kind == ModulusKind::Split ? K_.one() : K_.zero());
    }

    // ----- element-level group operations -----

    JacElem add(const JacElem& a, const JacElem& b) const {
        if (C_.genus == 2) return cantor_add(a, b);
        return gadd(a, b);
    }

    JacElem neg(const JacElem& a) const {
        if (C_.genus == 2) return mumford(a.u, poly_is_zero(a.v) ? Poly{} : poly_sub(K_, Poly{}, a.v));
        return gneg(a);
    }

    JacElem sub(const JacElem& a, const JacElem& b) const { return add(a, neg(b)); }

    JacElem scalar_mul(const JacElem& a, u64 k) const {
        JacElem r = identity(), base = a;
        while (k) {
            if (k & 1) r = add(r, base);
            base = add(base, base);
            k >>= 1;
        }
        return r;
    }

    // Abel-Jacobi embedding of a curve point outside the modulus support.
    JacElem abel_jacobi(const CurvePoint& P) const {
        if (C_.genus == 2) {
            if (P.inf) return identity();
            Poly u = poly_linear(K_, P.x);
            Poly v = poly_const(K_, P.y);
            return mumford(u, v);
        }
        require(!in_support(P), "the embedding is undefined on the modulus support");
        return pair_elem(P, unit_s());
    }

    bool in_support(const CurvePoint& P) const {
        if (P.inf || m_.kind == ModulusKind::Empty) return false;
        if (P == M_) return true;
        return m_.kind == ModulusKind::Split && P == N_;
    }

    // ----- indexed view -----

    std::size_t identity_idx() const { return index_of(identity()); }
    std::size_t add_idx(std::size_t i, std::size_t j) const {
        return index_of(add(element(i), element(j)));
    }
    std::size_t neg_idx(std::size_t i) const { return index_of(neg(element(i))); }

    JacElem element(std::size_t i) const { return decode(els_[i]); }

    std::size_t index_of(const JacElem& e) const {
        Key k = encode(e);
        auto it = std::lower_bound(els_.begin(), els_.end(), k);
        internal_check(it != els_.end() && *it == k, "element outside the enumerated jacobian");
        return (std::size_t)(it - els_.begin());
    }

    // Abel-Jacobi image of every rational curve point off the support, as indices.
    std::vector<std::size_t> connection_set() const {
        std::vector<std::size_t> S;
        for (const auto& P : pts_) {
            if (in_support(P)) continue;
            S.push_back(index_of(abel_jacobi(P)));
        }
        return S;
    }

    std::string to_string(const JacElem& e) const {
        if (C_.genus == 2) {
            return "(u=" + poly_to_string(K_, e.u) + ", v=" + poly_to_string(K_, e.v) + ")";
        }
        return "(" + point_to_string(K_, e.P) + ", " + K_.to_string(e.s) + ")";
    }

private:
    using Key = std::array<u64, 5>;

    FqElem unit_s() const { return m_.kind == ModulusKind::Split ? K_.one() : K_.zero(); }

    JacElem pair_elem(const CurvePoint& P, const FqElem& s) const {
        JacElem e;
        e.P = P;
        e.s = s;
        return e;
    }
    JacElem mumford(Poly u, Poly v) const {
        JacElem e;
        e.P = CurvePoint::infinity();
        e.u = std::move(u);
        e.v = std::move(v);
        return e;
    }

    // --- twisted chord-tangent law ---
    //
    // Labels whose curve point avoids the modulus support carry the honest
    // class (P) - (inf) with twist s; the law between them is total. A line
    // vanishing at a support point is always matched by a vanishing of the
    // other line there, and the twist factor uses the exact leading
    // coefficients of both expansions. Labels sitting on the support are
    // read through a fixed translation base T0:  (P0, s) means the honest
    // label (P0 + T0, s) minus the embedded point i(T0).

    bool honest(const CurvePoint& P) const { return !in_support(P); }

    JacElem unit_label(const CurvePoint& P) const { return pair_elem(P, unit_s()); }

    // Split: s-factor  l_{P,Q}(M)/l_{R,inf}(M) * l_{R,inf}(N)/l_{P,Q}(N).
    // Double: additive  [l'_{P,Q}/l_{P,Q} - l'_{R,inf}/l_{R,inf}](x0).
    // Inputs must be honest; nullopt exactly when P+Q lands on the support.
    std::optional<JacElem> raw2(const JacElem& a, const JacElem& b) const {
        internal_check(honest(a.P) && honest(b.P), "raw law needs labels off the support");
        bool split = m_.kind == ModulusKind::Split;
        if (a.P.inf || b.P.inf) {
            const CurvePoint& P = a.P.inf ? b.P : a.P;
            return pair_elem(P, split ? K_.mul(a.s, b.s) : K_.add(a.s, b.s));
        }
        CurvePoint R = ec_add(C_, K_, a.P, b.P);
        if (in_support(R)) return std::nullopt;
        detail::Line l1 = detail::line_through(C_, K_, a.P, b.P);
        detail::Line l2 = detail::line_through(C_, K_, R, CurvePoint::infinity());
        if (split) {
            FqElem factor = K_.one();
            // multiply by (l1/l2)(M), divide by (l1/l2)(N)
            for (int which = 0; which < 2; ++which) {
                const CurvePoint& A = which == 0 ? M_ : N_;
                FqElem u = detail::line_value(K_, l1, A);
                FqElem w = detail::line_value(K_, l2, A);
                FqElem r;
                if (!K_.is_zero(u) && !K_.is_zero(w)) {
                    r = K_.div(u, w);
                } else {
                    internal_check(K_.is_zero(u) && K_.is_zero(w),
                                   "line zeros at the support must pair up");
                    FqElem du = detail::line_jet(C_, K_, l1, A).d1;
                    FqElem dw = detail::line_jet(C_, K_, l2, A).d1;
                    internal_check(!K_.is_zero(du) && !K_.is_zero(dw),
                                   "paired support zeros must be simple");
                    r = K_.div(du, dw);
                }
                factor = which == 0 ? K_.mul(factor, r) : K_.div(factor, r);
            }
            return pair_elem(R, K_.mul(K_.mul(a.s, b.s), factor));
        }
        FqElem u = detail::line_value(K_, l1, M_);
        FqElem w = detail::line_value(K_, l2, M_);
        FqElem c;
        if (!K_.is_zero(u) && !K_.is_zero(w)) {
            c = K_.sub(K_.div(detail::line_jet(C_, K_, l1, M_).d1, u),
                       K_.div(detail::line_jet(C_, K_, l2, M_).d1, w));
        } else {
            internal_check(K_.is_zero(u) && K_.is_zero(w),
                           "line zeros at the support must pair up");
            auto j1 = detail::line_jet(C_, K_, l1, M_);
            auto j2 = detail::line_jet(C_, K_, l2, M_);
            internal_check(!K_.is_zero(j1.d1) && !K_.is_zero(j2.d1),
                           "paired support zeros must be simple");
            c = K_.sub(K_.div(j1.d2, j1.d1), K_.div(j2.d2, j2.d1));
        }
        return pair_elem(R, K_.add(K_.add(a.s, b.s), c));
    }

    // negation when both P and -P avoid the support
    JacElem neg_honest(const JacElem& a) const {
        bool split = m_.kind == ModulusKind::Split;
        if (a.P.inf) return pair_elem(a.P, split ? K_.inv(a.s) : K_.neg(a.s));
        CurvePoint nP = ec_neg(K_, a.P);
        auto w = raw2(unit_label(a.P), unit_label(nP));  // lands at infinity
        internal_check(w.has_value(), "negation chain must land at infinity");
        if (split) return pair_elem(nP, K_.inv(K_.mul(a.s, w->s)));
        return pair_elem(nP, K_.sub(K_.neg(a.s), w->s));
    }

    // z - u, exact whenever the difference fiber stays honest: the twist
    // factor of raw2((W, unit), u) does not depend on the unknown twist, so
    // it can be solved for instead of searched along a chain.
    JacElem solve_sub(const JacElem& z, const JacElem& u) const {
        CurvePoint W = z.P.inf ? ec_neg(K_, u.P) : ec_add(C_, K_, z.P, ec_neg(K_, u.P));
        internal_check(honest(W), "difference fiber must be honest");
        auto t = raw2(unit_label(W), u);
        internal_check(t.has_value() && t->P == z.P, "subtraction witness must close");
        FqElem sigma =
            m_.kind == ModulusKind::Split ? K_.div(z.s, t->s) : K_.sub(z.s, t->s);
        return pair_elem(W, sigma);
    }

    JacElem gadd(JacElem x, JacElem y) const {
        int defects = 0;
        if (in_support(x.P)) {
            x.P = ec_add(C_, K_, x.P, T0_);
            ++defects;
        }
        if (in_support(y.P)) {
            y.P = ec_add(C_, K_, y.P, T0_);
            ++defects;
        }
        // h = x + y + (0 or 1 more) * i(T0)
        JacElem h;
        if (auto r = raw2(x, y)) {
            h = *r;
        } else {
            // the direct sum fiber is on the support; land one step past it
            if (auto mx = raw2(x, unit_label(T0_))) {
                auto c = raw2(*mx, y);
                internal_check(c.has_value(), "shifted sum must clear the support");
                h = *c;
            } else if (auto my = raw2(y, unit_label(T0_))) {
                auto c = raw2(*my, x);
                internal_check(c.has_value(), "shifted sum must clear the support");
                h = *c;
            } else {
                // both one-step shifts are blocked: go two steps up, one down
                auto p = raw2(x, w2_);
                internal_check(p.has_value(), "double shift must clear the support");
                auto q = raw2(*p, y);
                internal_check(q.has_value(), "double shift must clear the support");
                h = solve_sub(*q, unit_label(T0_));
            }
            ++defects;
        }
        while (defects > 0) {
            CurvePoint f = ec_add(C_, K_, h.P, ec_neg(K_, T0_));
            if (honest(f)) {
                h = solve_sub(h, unit_label(T0_));
                --defects;
                continue;
            }
            if (defects == 1) {
                return pair_elem(f, h.s);  // exactly the support-label convention
            }
            h = solve_sub(h, w2_);  // h.P - 2*T0 is honest; drop two defects
            defects -= 2;
        }
        return h;
    }

    JacElem gneg(const JacElem& x) const {
        if (in_support(x.P)) {
            // x reads as (x.P + T0, s) - i(T0), so -x = -(that label) + i(T0)
            JacElem nh = neg_honest(pair_elem(ec_add(C_, K_, x.P, T0_), x.s));
            CurvePoint nS = ec_neg(K_, x.P);
            if (honest(nS)) {
                auto r = raw2(nh, unit_label(T0_));
                internal_check(r.has_value() && r->P == nS, "negation must close");
                return *r;
            }
            // -x also sits over the support: encode it through T0 again
            auto q = raw2(nh, w2_);
            internal_check(q.has_value(), "shifted negation must clear the support");
            return pair_elem(nS, q->s);
        }
        CurvePoint nP = ec_neg(K_, x.P);
        if (!in_support(nP)) return neg_honest(x);
        // -x sits over the support: compute -(x - i(T0)) honestly, then encode
        JacElem w = solve_sub(x, unit_label(T0_));
        JacElem nw = neg_honest(w);
        return pair_elem(nP, nw.s);
    }

    // The translation base: first point whose shifts keep every fiber used
    // by the law off the support.
    void choose_translation_base() {
        for (const auto& T : pts_) {
            if (T.inf) continue;
            CurvePoint nT = ec_neg(K_, T);
            CurvePoint T2 = ec_add(C_, K_, T, T);
            if (!honest(T) || !honest(T2)) continue;
            bool ok = true;
            for (const CurvePoint& S0 : support_points()) {
                if (!honest(ec_add(C_, K_, S0, T)) || !honest(ec_add(C_, K_, S0, nT)) ||
                    !honest(ec_add(C_, K_, ec_neg(K_, S0), nT)) ||
                    !honest(ec_add(C_, K_, S0, T2))) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            T0_ = T;
            w2_ = *raw2(unit_label(T0_), unit_label(T0_));
            return;
        }
        // Can happen on very small curve groups when the support is an inverse
        // pair {P, -P}: the shift orbit of the support then covers every point.
        throw CapError("no translation base point exists for this modulus");
    }

    std::vector<CurvePoint> support_points() const {
        if (m_.kind == ModulusKind::Split) return {M_, N_};
        if (m_.kind == ModulusKind::Double) return {M_};
        return {};
    }

    // --- genus 2: Cantor composition and reduction ---

    JacElem cantor_add(const JacElem& a, const JacElem& b) const {
        const Fq& F = K_;
        // compose
        auto x1 = poly_ext_gcd(F, a.u, b.u);
        Poly vsum = poly_add(F, a.v, b.v);
        auto x2 = poly_ext_gcd(F, x1.g, vsum);
        Poly d = x2.g;
        Poly s1 = poly_mul(F, x2.s, x1.s);
        Poly s2 = poly_mul(F, x2.s, x1.t);
        Poly s3 = x2.t;
        auto [u, ur] = poly_divmod(F, poly_mul(F, a.u, b.u), poly_mul(F, d, d));
        internal_check(poly_is_zero(ur), "compose: u division not exact");
        Poly t1 = poly_mul(F, poly_mul(F, s1, a.u), b.v);
        Poly t2 = poly_mul(F, poly_mul(F, s2, b.u), a.v);
        Poly t3 = poly_mul(F, s3, poly_add(F, poly_mul(F, a.v, b.v), f_));
        auto [vq, vr] = poly_divmod(F, poly_add(F, poly_add(F, t1, t2), t3), d);
        internal_check(poly_is_zero(vr), "compose: v division not exact");
        Poly v = poly_mod(F, vq, u);
        // reduce to deg u <= 2
        while (poly_deg(u) > 2) {
            auto [u2, rr] = poly_divmod(F, poly_sub(F, f_, poly_mul(F, v, v)), u);
            internal_check(poly_is_zero(rr), "reduce: division not exact");
            u = poly_monic(F, u2);
            v = poly_mod(F, poly_sub(F, Poly{}, v), u);
        }
        u = poly_monic(F, u);
        return mumford(u, v);
    }

    // --- enumeration ---

    void enumerate_elements(u64 cap) {
        // predicted order from the zeta function, also the cap and a cross-check
        ZetaData z = zeta_data(C_);
        ExtCounts ec = count_points_ext(z, (unsigned)K_.deg());
        bigint expected = C_.genus == 2 ? ec.jac_order
                          : m_.kind == ModulusKind::Split ? ec.jac_split
                                                          : ec.jac_double;
        if (expected > cap) {
            throw CapError("jacobian enumeration capped at " + std::to_string(cap) +
                           " elements, this group has " + expected.str());
        }
        u64 expected_u = expected.convert_to<u64>();
        if (C_.genus == 1) {
            els_.reserve(expected_u);
            u64 smin = m_.kind == ModulusKind::Split ? 1 : 0;
            for (const auto& P : pts_) {
                for (u64 si = smin; si < K_.size(); ++si) {
                    els_.push_back(encode(pair_elem(P, K_.element_from_index(si))));
                }
            }
        } else {
            enumerate_mumford();
        }
        internal_check(els_.size() == expected_u,
                       "enumerated jacobian size disagrees with the point-count prediction");
        for (std::size_t i = 1; i < els_.size(); ++i) {
            internal_check(els_[i - 1] < els_[i], "jacobian enumeration must be strictly ordered");
        }
    }

    void enumerate_mumford() {
        const Fq& F = K_;
        u64 q = F.size();
        els_.push_back(encode(mumford(poly_one(F), {})));
        // degree-1 divisors are embedded affine points
        for (const auto& P : pts_) {
            if (P.inf) continue;
            els_.push_back(encode(mumford(poly_linear(F, P.x), poly_const(F, P.y))));
        }
        // degree-2: u = X^2 + u1 X + u0, v = v1 X + v0 with u | v^2 - f
        FqElem two = F.from_int(2);
        for (u64 iu1 = 0; iu1 < q; ++iu1) {
            FqElem u1 = F.element_from_index(iu1);
            for (u64 iu0 = 0; iu0 < q; ++iu0) {
                FqElem u0 = F.element_from_index(iu0);
                Poly u;
                u.c = {u0, u1, F.one()};
                Poly fr = poly_mod(F, f_, u);
                FqElem A = poly_deg(fr) >= 1 ? fr.c[1] : F.zero();
                FqElem B = poly_deg(fr) >= 0 ? fr.c[0] : F.zero();
                std::vector<std::pair<u64, u64>> vs;  // (idx v1, idx v0)
                // v1 = 0: v0^2 = B and A = 0
                if (F.is_zero(A)) {
                    if (auto r = F.sqrt(B)) {
                        vs.push_back({0, F.index_of(*r)});
                        FqElem nr = F.neg(*r);
                        if (nr != *r) vs.push_back({0, F.index_of(nr)});
                    }
                }
                for (u64 iv1 = 1; iv1 < q; ++iv1) {
                    FqElem v1 = F.element_from_index(iv1);
                    FqElem v1sq = F.mul(v1, v1);
                    // 2 v1 v0 - u1 v1^2 = A
                    FqElem v0 = F.div(F.add(A, F.mul(u1, v1sq)), F.mul(two, v1));
                    // v0^2 - u0 v1^2 = B
                    if (F.sub(F.mul(v0, v0), F.mul(u0, v1sq)) == B) {
                        vs.push_back({iv1, F.index_of(v0)});
                    }
                }
                std::sort(vs.begin(), vs.end());
                for (auto [iv1, iv0] : vs) {
                    Poly v;
                    v.c = {F.element_from_index(iv0), F.element_from_index(iv1)};
                    poly_trim(F, v);
                    els_.push_back(encode(mumford(u, v)));
                }
            }
        }
    }

    // --- compact keys; the enumeration order equals ascending key order ---

    Key encode(const JacElem& e) const {
        if (C_.genus == 1) {
            if (e.P.inf) return {0, 0, 0, K_.index_of(e.s), 0};
            return {1, K_.index_of(e.P.x) + 1, K_.index_of(e.P.y), K_.index_of(e.s), 0};
        }
        int du = poly_deg(e.u);
        auto vc = [&](const Poly& v, int i) -> u64 {
            return poly_deg(v) >= i ? K_.index_of(v.c[i]) : K_.index_of(K_.zero());
        };
        if (du == 0) return {0, 0, 0, 0, 0};
        if (du == 1) {
            // u = X - x, v = y: key by the embedded point
            FqElem x = K_.neg(e.u.c[0]);
            return {1, K_.index_of(x), vc(e.v, 0), 0, 0};
        }
        internal_check(du == 2, "mumford element with unexpected degree");
        return {2, K_.index_of(e.u.c[1]), K_.index_of(e.u.c[0]), vc(e.v, 1), vc(e.v, 0)};
    }

    JacElem decode(const Key& k) const {
        if (C_.genus == 1) {
            if (k[0] == 0) return pair_elem(CurvePoint::infinity(), K_.element_from_index(k[3]));
            return pair_elem(CurvePoint::affine(K_.element_from_index(k[1] - 1), K_.element_from_index(k[2])),
                             K_.element_from_index(k[3]));
        }
        if (k[0] == 0) return mumford(poly_one(K_), {});
        if (k[0] == 1) {
            FqElem x = K_.element_from_index(k[1]);
            FqElem y = K_.element_from_index(k[2]);
            return mumford(poly_linear(K_, x), poly_const(K_, y));
        }
        Poly u, v;
        u.c = {K_.element_from_index(k[2]), K_.element_from_index(k[1]), K_.one()};
        v.c = {K_.element_from_index(k[4]), K_.element_from_index(k[3])};
        poly_trim(K_, v);
        return mumford(u, v);
    }

    CurveData C_;
    Fq K_;
    ModulusSpec m_;
    CurvePoint M_, N_;
    CurvePoint T0_;
    JacElem w2_;  // i(T0) + i(T0), the honest label over 2*T0
    Poly f_;
    std::vector<CurvePoint> pts_;
    std::vector<Key> els_;
};

// ----- generic indexed abelian group interface -----

inline EnumeratedGroup group_of(const std::shared_ptr<Jacobian>& J) {
    EnumeratedGroup G;
    G.n = J->size();
    G.identity = J->identity_idx();
    G.neg.resize(G.n);
    for (std::size_t i = 0; i < G.n; ++i) G.neg[i] = J->neg_idx(i);
    G.add = [J](std::size_t i, std::size_t j) { return J->add_idx(i, j); };
    G.name = "jacobian";
    return G;
}

// ----- Sidon analysis -----

inline constexpr std::size_t kSidonSetCap = 100'000;

struct SidonReport {
    bool is_sidon = false;
    bool is_symmetric = false;
    std::optional<std::size_t> center;
    bool center_in_2g = false;
    // a + b = c + d with {a,b} != {c,d} and a+b away from the center
    std::optional<std::array<std::size_t, 4>> witness;
};

// Checks the Sidon property with the symmetric exemption: every nontrivial
// coincidence a+b = c+d must land on the symmetry center a0 with S = a0 - S.
inline SidonReport sidon_check(const EnumeratedGroup& G, const std::vector<std::size_t>& S) {
    require(!S.empty(), "sidon check needs a nonempty set");
    if (S.size() > kSidonSetCap) throw CapError("sidon check capped at 10^5 set elements");
    std::vector<char> inS(G.n, 0);
    for (auto s : S) {
        require(s < G.n, "set element outside the group");
        require(!inS[s], "sidon set must not repeat elements");
        inS[s] = 1;
    }

    struct Entry {
        std::array<std::size_t, 2> first{}, second{};
        unsigned pairs = 0;
    };
    std::unordered_map<std::size_t, Entry> sums;
    sums.reserve(S.size() * (S.size() + 1) / 2);
    for (std::size_t i = 0; i < S.size(); ++i) {
        for (std::size_t j = i; j < S.size(); ++j) {
            std::size_t v = G.add(S[i], S[j]);
            auto& e = sums[v];
            if (e.pairs == 0) {
                e.first = {S[i], S[j]};
            } else if (e.pairs == 1) {
                e.second = {S[i], S[j]};
            }
            ++e.pairs;
        }
    }

    // symmetry centers: a0 with S = a0 - S; every candidate is s0 + s for s in S
    std::vector<std::size_t> centers;
    for (std::size_t s : S) {
        std::size_t a0 = G.add(S[0], s);
        bool ok = true;
        for (std::size_t t : S) {
            if (!inS[G.add(a0, G.neg[t])]) {
                ok = false;
                break;
            }
        }
        if (ok && std::find(centers.begin(), centers.end(), a0) == centers.end()) {
            centers.push_back(a0);
        }
    }
    std::sort(centers.begin(), centers.end());

    SidonReport rep;
    rep.is_symmetric = !centers.empty();

    // collision sums and the verdict
    std::vector<std::size_t> collisions;
    for (const auto& [v, e] : sums) {
        if (e.pairs >= 2) collisions.push_back(v);
    }
    std::sort(collisions.begin(), collisions.end());

    if (collisions.empty()) {
        rep.is_sidon = true;
        if (rep.is_symmetric) rep.center = centers.front();
    } else if (collisions.size() == 1 &&
               std::find(centers.begin(), centers.end(), collisions[0]) != centers.end()) {
        rep.is_sidon = true;
        rep.center = collisions[0];
    } else {
        rep.is_sidon = false;
        if (rep.is_symmetric) rep.center = centers.front();
        // first collision value that no admissible center can exempt
        for (std::size_t v : collisions) {
            if (rep.center && v == *rep.center && collisions.size() > 1) continue;
            const auto& e = sums[v];
            rep.witness = {e.first[0], e.first[1], e.second[0], e.second[1]};
            break;
        }
    }

    if (rep.center) {
        for (std::size_t x = 0; x < G.n; ++x) {
            if (G.add(x, x) == *rep.center) {
                rep.center_in_2g = true;
                break;
            }
        }
    }
    return rep;
}

}  // namespace jacgraph
