#pragma once

// Spectrum of the Markov averaging operator M f(y) = (1/|S|) sum_{s in S}
// f(s - y) on a Cayley sum graph, two independent routes:
//   * character sums: real characters contribute (1/|S|) sum chi(y) directly,
//     conjugate pairs contribute +|sum| and -|sum|;
//   * a dense symmetric eigensolver on A/d as the oracle (Householder
//     tridiagonalization, then implicit-shift QL).
// Downstream: spectral-gap normalization, Ramanujan verdicts, and the exact
// 1-Wasserstein distance to the semicircle law.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "abgroup.hpp"
#include "sumgraph.hpp"

namespace jacgraph {

inline constexpr std::size_t kDenseSpectrumCap = 5'000;

struct SpectrumReport {
    std::vector<double> eigenvalues;  // sorted ascending, Markov-normalized
    std::size_t degree = 0;
    std::string method;  // "char_sum" or "dense"

    // filled by normalize_and_judge
    std::size_t trivial_count = 0;
    std::vector<double> normalized_nontrivial;  // lambda * d / sqrt(d-1), sorted
    double max_nontrivial_abs = 0.0;
    double c2_bound = 0.0;
    bool ramanujan = false;
    bool criterion_dn_ge_qn_plus_1 = false;
    bool disconnected_flag = false;
    double w1_semicircle = 0.0;
};

// ----- route 1: character sums -----

inline SpectrumReport spectrum_char(const GroupStructure& G,
                                    const std::vector<std::size_t>& S_in) {
    std::vector<std::size_t> S = detail::checked_set(G.n, S_in);
    const double d = (double)S.size();
    SpectrumReport rep;
    rep.degree = S.size();
    rep.method = "char_sum";
    rep.eigenvalues.reserve(G.n);

    u64 nchars = 1;
    for (u64 f : G.invariant_factors) nchars *= f;
    internal_check(nchars == (u64)G.n, "character count must equal the order");

    for (u64 t = 0; t < nchars; ++t) {
        CharacterIndex c = character_from_ordinal(G, t);
        CharacterIndex nc(c.size());
        for (std::size_t j = 0; j < c.size(); ++j) {
            nc[j] = c[j] == 0 ? 0 : G.invariant_factors[j] - c[j];
        }
        if (c == nc) {  // real character: a single real eigenvalue
            std::complex<double> sum = char_sum_over_set(G, c, S);
            internal_check(std::abs(sum.imag()) / d < 1e-8,
                           "real-character eigenvalue must be real");
            rep.eigenvalues.push_back(sum.real() / d);
        } else if (c < nc) {  // conjugate pair: eigenvalues +|sum| and -|sum|
            double m = std::abs(char_sum_over_set(G, c, S)) / d;
            rep.eigenvalues.push_back(m);
            rep.eigenvalues.push_back(-m);
        }
    }
    internal_check(rep.eigenvalues.size() == G.n, "spectrum size must equal the order");
    for (double v : rep.eigenvalues) {
        internal_check(std::abs(v) <= 1.0 + 1e-9, "Markov eigenvalue outside [-1, 1]");
    }
    std::sort(rep.eigenvalues.begin(), rep.eigenvalues.end());
    return rep;
}

// ----- route 2: dense eigensolver oracle -----

namespace detail {

// Householder reduction of a symmetric matrix (row-major, destroyed) to
// tridiagonal form. Only the lower triangle is referenced or kept valid.
// Eigenvectors are never needed downstream, so the orthogonal factor is not
// accumulated. On return d holds the diagonal and e[0..n-2] the subdiagonal.
inline void householder_tridiag(std::vector<double>& a, std::size_t n, std::vector<double>& d,
                                std::vector<double>& e) {
    d.assign(n, 0.0);
    e.assign(n, 0.0);
    for (std::size_t i = n; i-- > 1;) {
        const std::size_t l = i - 1;
        double* ai = a.data() + i * n;
        if (l == 0) {
            e[i] = ai[0];
            continue;
        }
        double scale = 0.0;
        for (std::size_t k = 0; k <= l; ++k) scale += std::abs(ai[k]);
        if (scale == 0.0) {  // row already tridiagonal
            e[i] = ai[l];
            continue;
        }
        double h = 0.0;
        for (std::size_t k = 0; k <= l; ++k) {
            ai[k] /= scale;
            h += ai[k] * ai[k];
        }
        double f = ai[l];
        double g = f >= 0.0 ? -std::sqrt(h) : std::sqrt(h);
        e[i] = scale * g;
        h -= f * g;  // h = |u|^2 / 2 with u the Householder vector in ai[0..l]
        ai[l] = f - g;
        // p = A u / h, accumulated in e[0..l] (scratch; those entries are
        // rewritten when their own rows come up)
        double tau = 0.0;
        for (std::size_t j = 0; j <= l; ++j) {
            const double* aj = a.data() + j * n;
            double s = 0.0;
            for (std::size_t k = 0; k <= j; ++k) s += aj[k] * ai[k];
            for (std::size_t k = j + 1; k <= l; ++k) s += a[k * n + j] * ai[k];
            e[j] = s / h;
            tau += e[j] * ai[j];
        }
        // q = p - (u'p / 2h) u, then A <- A - u q' - q u'
        const double hh = tau / (2.0 * h);
        for (std::size_t j = 0; j <= l; ++j) e[j] -= hh * ai[j];
        for (std::size_t j = 0; j <= l; ++j) {
            const double fj = ai[j], gj = e[j];
            double* aj = a.data() + j * n;
            for (std::size_t k = 0; k <= j; ++k) aj[k] -= fj * e[k] + gj * ai[k];
        }
    }
    for (std::size_t i = 0; i < n; ++i) d[i] = a[i * n + i];
    for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;
}

// Implicit-shift QL iteration on a symmetric tridiagonal matrix. d carries
// the diagonal in and the (unsorted) eigenvalues out; e[0..n-2] holds the
// subdiagonal and is destroyed.
inline void tridiag_ql(std::vector<double>& d, std::vector<double>& e, std::size_t n) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    for (std::size_t l = 0; l < n; ++l) {
        int iter = 0;
        while (true) {
            std::size_t m = l;
            for (; m + 1 < n; ++m) {
                double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd + 1e-300) break;
            }
            if (m == l) break;
            internal_check(iter++ < 60, "QL iteration did not converge");
            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
            double s = 1.0, c = 1.0, p = 0.0;
            bool underflow = false;
            for (std::size_t i = m; i-- > l;) {
                double f = s * e[i], b = c * e[i];
                r = std::hypot(f, g);
                e[i + 1] = r;
                if (r == 0.0) {  // deflate and restart this block
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if (underflow) continue;
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}

// Eigenvalues of a dense symmetric matrix, sorted ascending. Destroys its
// input. Deterministic: no pivot choices, no randomness.
inline std::vector<double> dense_symmetric_eigenvalues(std::vector<double>& a, std::size_t n) {
    std::vector<double> d, e;
    householder_tridiag(a, n, d, e);
    tridiag_ql(d, e, n);
    std::sort(d.begin(), d.end());
    return d;
}

}  // namespace detail

inline SpectrumReport spectrum_dense(const SumGraphData& g) {
    require(g.dense, "dense spectrum needs the dense adjacency mode");
    if (g.n > kDenseSpectrumCap) throw CapError("dense spectrum capped at 5000 vertices");
    const std::size_t n = g.n;
    std::vector<double> a(n * n, 0.0);
    const double inv_d = 1.0 / (double)g.degree;
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t w = 0; w < g.words; ++w) {
            u64 m = g.row(x)[w];
            while (m) {
                std::size_t y = w * 64 + (std::size_t)std::countr_zero(m);
                m &= m - 1;
                a[x * n + y] = inv_d;
            }
        }
    }
    SpectrumReport rep;
    rep.degree = g.degree;
    rep.method = "dense";
    rep.eigenvalues = detail::dense_symmetric_eigenvalues(a, n);
    for (double v : rep.eigenvalues) {
        internal_check(std::abs(v) <= 1.0 + 1e-9, "Markov eigenvalue outside [-1, 1]");
    }
    return rep;
}

// ----- semicircle comparison -----

namespace detail {

// CDF of the semicircle law on [-2, 2]
inline double semicircle_cdf(double x) {
    if (x <= -2.0) return 0.0;
    if (x >= 2.0) return 1.0;
    return 0.5 + (x * std::sqrt(4.0 - x * x) + 4.0 * std::asin(0.5 * x)) /
                     (4.0 * std::numbers::pi);
}

// antiderivative of semicircle_cdf on [-2, 2]
inline double semicircle_cdf_antideriv(double x) {
    double r = 4.0 - x * x;
    return 0.5 * x + (-std::pow(r, 1.5) / 3.0 + 4.0 * x * std::asin(0.5 * x) +
                      4.0 * std::sqrt(r)) /
                         (4.0 * std::numbers::pi);
}

}  // namespace detail

// Exact 1-Wasserstein distance between the empirical measure of `values` and
// the semicircle law: the L1 distance of their CDFs, integrated in closed
// form piece by piece (the empirical CDF is a step function and the
// semicircle CDF is strictly increasing, so each piece has at most one sign
// change, located by bisection).
inline double w1_to_semicircle(std::vector<double> values, std::size_t* clamped_out = nullptr) {
    require(!values.empty(), "Wasserstein distance needs a nonempty multiset");
    std::size_t clamped = 0;
    for (double& v : values) {
        if (v < -2.0 || v > 2.0) {
            ++clamped;
            v = std::clamp(v, -2.0, 2.0);
        }
    }
    if (clamped_out) *clamped_out = clamped;
    std::sort(values.begin(), values.end());
    const double N = (double)values.size();

    double total = 0.0;
    double lo = -2.0;
    std::size_t i = 0;
    while (lo < 2.0) {
        std::size_t j = i;
        while (j < values.size() && values[j] <= lo) ++j;
        double hi = j < values.size() ? std::min(values[j], 2.0) : 2.0;
        i = j;
        if (hi <= lo) continue;
        double F = (double)j / N;  // empirical CDF on (lo, hi)
        double fa = detail::semicircle_cdf(lo), fb = detail::semicircle_cdf(hi);
        auto seg = [&](double a, double b, double sign) {
            double v = sign * (F * (b - a) - (detail::semicircle_cdf_antideriv(b) -
                                              detail::semicircle_cdf_antideriv(a)));
            return v;
        };
        if (F >= fb) {
            total += seg(lo, hi, 1.0);
        } else if (F <= fa) {
            total += seg(lo, hi, -1.0);
        } else {  // one crossing: F - F_sc decreasing through zero
            double a = lo, b = hi;
            for (int it = 0; it < 80; ++it) {
                double m = 0.5 * (a + b);
                (detail::semicircle_cdf(m) < F ? a : b) = m;
            }
            double x = 0.5 * (a + b);
            total += seg(lo, x, 1.0) + seg(x, hi, -1.0);
        }
        lo = hi;
    }
    internal_check(total >= -1e-12, "Wasserstein integral must be nonnegative");
    return std::max(total, 0.0);
}

// ----- normalization and verdicts -----

// Removes one trivial eigenvalue, rescales the rest by d/sqrt(d-1), and
// applies the spectral judgements. q_n is the field size backing the graph;
// the 2 sqrt(q_n)/d bound is a theorem for jacobian graphs and treated as an
// internal consistency condition.
inline SpectrumReport normalize_and_judge(SpectrumReport rep, u64 q_n) {
    require(!rep.eigenvalues.empty(), "judging needs a computed spectrum");
    require(q_n >= 1, "field size must be positive");
    const double d = (double)rep.degree;

    rep.trivial_count = 0;
    for (double v : rep.eigenvalues) {
        if (v > 1.0 - 1e-9) ++rep.trivial_count;
    }
    internal_check(rep.trivial_count >= 1, "the trivial eigenvalue is missing");
    rep.disconnected_flag = rep.trivial_count > 1;

    // drop exactly one copy of the largest eigenvalue
    std::vector<double> nt(rep.eigenvalues.begin(), rep.eigenvalues.end() - 1);
    rep.max_nontrivial_abs = 0.0;
    for (double v : nt) rep.max_nontrivial_abs = std::max(rep.max_nontrivial_abs, std::abs(v));

    rep.c2_bound = 2.0 * std::sqrt((double)q_n) / d;
    internal_check(rep.max_nontrivial_abs <= rep.c2_bound + 1e-9,
                   "spectrum violates the 2 sqrt(q)/d bound");
    rep.ramanujan = rep.max_nontrivial_abs <= 2.0 * std::sqrt(d - 1.0) / d + 1e-9;
    rep.criterion_dn_ge_qn_plus_1 = rep.degree >= q_n + 1;

    rep.normalized_nontrivial.clear();
    if (!nt.empty()) {
        require(rep.degree >= 2, "normalization needs degree at least 2");
        double scale = d / std::sqrt(d - 1.0);
        rep.normalized_nontrivial.reserve(nt.size());
        for (double v : nt) rep.normalized_nontrivial.push_back(v * scale);
        std::sort(rep.normalized_nontrivial.begin(), rep.normalized_nontrivial.end());
        rep.w1_semicircle = w1_to_semicircle(rep.normalized_nontrivial);
    }
    return rep;
}

// ----- distribution tables -----

struct DistributionTables {
    struct CdfRow {
        double x, f_emp, f_sc;
    };
    struct HistRow {
        double lo, hi;
        std::size_t count;
        double emp_density, sc_density;
    };
    std::vector<CdfRow> cdf;
    std::vector<HistRow> hist;
};

inline DistributionTables emit_distribution_data(const std::vector<double>& values,
                                                 std::size_t bins) {
    require(bins >= 1, "histogram needs at least one bin");
    require(!values.empty(), "distribution tables need data");
    std::vector<double> v(values);
    for (double& x : v) x = std::clamp(x, -2.0, 2.0);
    std::sort(v.begin(), v.end());
    const double N = (double)v.size();

    DistributionTables out;
    // sample points merged with a uniform grid over [-2, 2]
    std::vector<double> xs(v);
    const std::size_t grid = 401;
    for (std::size_t i = 0; i < grid; ++i) xs.push_back(-2.0 + 4.0 * (double)i / (grid - 1));
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    for (double x : xs) {
        std::size_t le = (std::size_t)(std::upper_bound(v.begin(), v.end(), x) - v.begin());
        out.cdf.push_back({x, (double)le / N, detail::semicircle_cdf(x)});
    }

    const double width = 4.0 / (double)bins;
    out.hist.resize(bins);
    for (std::size_t b = 0; b < bins; ++b) {
        out.hist[b].lo = -2.0 + width * (double)b;
        out.hist[b].hi = -2.0 + width * (double)(b + 1);
        out.hist[b].count = 0;
    }
    for (double x : v) {
        std::size_t b = std::min((std::size_t)((x + 2.0) / width), bins - 1);
        ++out.hist[b].count;
    }
    for (std::size_t b = 0; b < bins; ++b) {
        out.hist[b].emp_density = (double)out.hist[b].count / (N * width);
        out.hist[b].sc_density =
            (detail::semicircle_cdf(out.hist[b].hi) - detail::semicircle_cdf(out.hist[b].lo)) /
            width;
    }
    return out;
}

}  // namespace jacgraph
