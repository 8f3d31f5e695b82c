#pragma once

// Structure theory for a finite abelian group presented as an indexed element
// list with an addition oracle: invariant factors, generators, a full
// discrete-log table, and the character machinery built on top of them.

#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "common.hpp"

namespace jacgraph {

inline constexpr std::size_t kGroupEnumCap = 1'000'000;

// A finite abelian group as an indexed table: elements are 0..n-1.
struct EnumeratedGroup {
    std::size_t n = 0;
    std::size_t identity = 0;
    std::vector<std::size_t> neg;  // full negation table
    std::function<std::size_t(std::size_t, std::size_t)> add;
    std::string name;
};

// Direct product of cyclic groups Z/d1 x ... x Z/dk, mixed-radix element
// indices with the last factor fastest. The raw-group harness for testing.
inline EnumeratedGroup raw_group(const std::vector<u64>& ds) {
    require(!ds.empty(), "raw group needs at least one cyclic factor");
    u64 n = 1;
    for (u64 d : ds) {
        require(d >= 1, "cyclic factor must be positive");
        if (n > kGroupEnumCap / d) throw CapError("raw group exceeds the enumeration cap");
        n *= d;
    }
    EnumeratedGroup G;
    G.n = (std::size_t)n;
    G.identity = 0;
    auto decode = [ds](u64 idx) {
        std::vector<u64> x(ds.size());
        for (std::size_t i = ds.size(); i-- > 0;) {
            x[i] = idx % ds[i];
            idx /= ds[i];
        }
        return x;
    };
    auto encode = [ds](const std::vector<u64>& x) {
        u64 idx = 0;
        for (std::size_t i = 0; i < ds.size(); ++i) idx = idx * ds[i] + x[i];
        return idx;
    };
    G.neg.resize(G.n);
    for (u64 i = 0; i < n; ++i) {
        auto x = decode(i);
        for (std::size_t k = 0; k < ds.size(); ++k) x[k] = x[k] == 0 ? 0 : ds[k] - x[k];
        G.neg[i] = (std::size_t)encode(x);
    }
    G.add = [ds, decode, encode](std::size_t i, std::size_t j) {
        auto a = decode(i), b = decode(j);
        for (std::size_t k = 0; k < ds.size(); ++k) a[k] = (a[k] + b[k]) % ds[k];
        return (std::size_t)encode(a);
    };
    G.name = "raw";
    return G;
}

// Invariant-factor decomposition d_1 | d_2 | ... | d_r with generators and a
// flat dlog table: dlog[x*r + j] is the j-th exponent of element x. The
// trivial group has rank 0 and an empty table.
struct GroupStructure {
    std::size_t n = 0;
    std::vector<u64> invariant_factors;
    std::vector<std::size_t> generators;
    std::vector<std::uint32_t> dlog;

    std::size_t rank() const { return invariant_factors.size(); }
    std::uint32_t exponent(std::size_t x, std::size_t j) const { return dlog[x * rank() + j]; }
};

namespace detail {

inline unsigned exact_log(u64 base, u64 value) {
    unsigned e = 0;
    u64 v = 1;
    while (v < value) {
        v *= base;
        ++e;
    }
    internal_check(v == value, "count is not an exact prime power");
    return e;
}

}  // namespace detail

// Sylow-by-Sylow basis extraction. For each prime power l^e || n the l-part
// is the image of multiplication by n/l^e; its type is read off exactly from
// the kill counts #{h : l^j h = 0}, and a basis is picked greedily, each
// candidate g of order l^a passing the directness test l^(a-1) g not in the
// span so far. Per-prime bases are merged by CRT into invariant factors.
inline GroupStructure group_structure(const EnumeratedGroup& G) {
    require(G.n >= 1, "group structure needs a nonempty element list");
    if (G.n > kGroupEnumCap) throw CapError("group structure capped at 10^6 elements");
    const std::size_t n = G.n;
    require(G.identity < n, "identity index outside the element list");
    require(G.neg.size() == n, "negation table must cover every element");

    auto add = [&](std::size_t i, std::size_t j) {
        std::size_t k = G.add(i, j);
        if (k >= n) {
            throw ValidationError("closure violation: add(" + std::to_string(i) + ", " +
                                  std::to_string(j) + ") is not an element index");
        }
        return k;
    };
    for (std::size_t x = 0; x < n; ++x) {
        if (add(G.identity, x) != x) {
            throw ValidationError("identity violation at element " + std::to_string(x));
        }
        require(G.neg[x] < n, "negation table entry out of range");
        if (add(x, G.neg[x]) != G.identity) {
            throw ValidationError("inverse violation at element " + std::to_string(x));
        }
    }

    auto mul = [&](std::size_t x, u64 k) {
        std::size_t acc = G.identity, base = x;
        while (k) {
            if (k & 1) acc = add(acc, base);
            k >>= 1;
            if (k) base = add(base, base);
        }
        return acc;
    };

    GroupStructure S;
    S.n = n;
    if (n == 1) return S;

    struct PrimePart {
        u64 ell = 0;
        std::vector<unsigned> lambda;     // cyclic orders l^lambda_i, nonincreasing
        std::vector<std::size_t> gens;
    };
    std::vector<PrimePart> parts;

    for (auto [ell, e] : factorize((u64)n)) {
        u64 target = 1;
        for (int i = 0; i < e; ++i) target *= ell;
        u64 cof = (u64)n / target;

        std::vector<char> seen(n, 0);
        std::vector<std::size_t> H;
        H.reserve((std::size_t)target);
        for (std::size_t x = 0; x < n; ++x) {
            std::size_t y = mul(x, cof);
            if (!seen[y]) {
                seen[y] = 1;
                H.push_back(y);
            }
        }
        internal_check(H.size() == target, "sylow image has the wrong size");

        std::vector<unsigned> ordexp(H.size());
        std::vector<u64> killed(e + 1, 0);  // killed[j] = #{h : l^j h = 0}
        for (std::size_t i = 0; i < H.size(); ++i) {
            std::size_t y = H[i];
            unsigned j = 0;
            while (y != G.identity) {
                y = mul(y, ell);
                ++j;
                internal_check(j <= (unsigned)e, "element order exceeds the sylow bound");
            }
            ordexp[i] = j;
            for (unsigned k = j; k <= (unsigned)e; ++k) ++killed[k];
        }

        // mu_j = #{parts >= j} of the type; its conjugate is the type itself
        std::vector<unsigned> mu(e + 1, 0);
        for (int j = 1; j <= e; ++j) {
            mu[j] = detail::exact_log(ell, killed[j]) - detail::exact_log(ell, killed[j - 1]);
            internal_check(j == 1 || mu[j] <= mu[j - 1], "kill counts are not a valid type");
        }
        PrimePart part;
        part.ell = ell;
        for (unsigned i = 1; i <= mu[1]; ++i) {
            unsigned li = 0;
            for (int j = 1; j <= e; ++j) {
                if (mu[j] >= i) li = (unsigned)j;
            }
            part.lambda.push_back(li);
        }

        std::vector<char> inspan(n, 0);
        std::vector<std::size_t> span = {G.identity};
        inspan[G.identity] = 1;
        for (unsigned li : part.lambda) {
            u64 below = 1;
            for (unsigned i = 1; i < li; ++i) below *= ell;
            std::size_t pick = n;
            for (std::size_t i = 0; i < H.size(); ++i) {
                if (ordexp[i] != li) continue;
                if (inspan[mul(H[i], below)]) continue;
                pick = H[i];
                break;
            }
            internal_check(pick < n, "sylow basis extraction stalled");
            part.gens.push_back(pick);
            std::size_t old = span.size();
            std::size_t shift = pick;
            for (u64 t = 1; t < below * ell; ++t) {
                for (std::size_t i2 = 0; i2 < old; ++i2) {
                    std::size_t y = add(span[i2], shift);
                    internal_check(!inspan[y], "sylow span expansion collided");
                    inspan[y] = 1;
                    span.push_back(y);
                }
                if (t + 1 < below * ell) shift = add(shift, pick);
            }
        }
        internal_check(span.size() == target, "sylow span does not exhaust the subgroup");
        parts.push_back(std::move(part));
    }

    // CRT merge, slot 0 holding the largest lambda of every prime
    std::size_t r = 0;
    for (const auto& pp : parts) r = std::max(r, pp.lambda.size());
    S.invariant_factors.assign(r, 1);
    S.generators.assign(r, G.identity);
    for (std::size_t t = 0; t < r; ++t) {
        u64 d = 1;
        std::size_t g = G.identity;
        for (const auto& pp : parts) {
            if (t < pp.lambda.size()) {
                for (unsigned i = 0; i < pp.lambda[t]; ++i) d *= pp.ell;
                g = add(g, pp.gens[t]);
            }
        }
        S.invariant_factors[r - 1 - t] = d;
        S.generators[r - 1 - t] = g;
    }
    u64 prod = 1;
    for (std::size_t j = 0; j < r; ++j) {
        internal_check(j == 0 || S.invariant_factors[j] % S.invariant_factors[j - 1] == 0,
                       "invariant factors must form a divisibility chain");
        prod *= S.invariant_factors[j];
    }
    internal_check(prod == (u64)n, "invariant factors must multiply to the order");

    // dlog by product expansion from the combined generators
    S.dlog.assign(n * r, 0xFFFFFFFFu);
    std::vector<std::size_t> filled = {G.identity};
    filled.reserve(n);
    for (std::size_t j = 0; j < r; ++j) S.dlog[G.identity * r + j] = 0;
    for (std::size_t j = 0; j < r; ++j) {
        std::size_t old = filled.size();
        std::size_t shift = S.generators[j];
        for (u64 t = 1; t < S.invariant_factors[j]; ++t) {
            for (std::size_t i2 = 0; i2 < old; ++i2) {
                std::size_t y = add(filled[i2], shift);
                internal_check(S.dlog[y * r + j] == 0xFFFFFFFFu, "dlog expansion collided");
                for (std::size_t j2 = 0; j2 < r; ++j2) {
                    S.dlog[y * r + j2] = S.dlog[filled[i2] * r + j2];
                }
                S.dlog[y * r + j] = (std::uint32_t)t;
                filled.push_back(y);
            }
            if (t + 1 < S.invariant_factors[j]) shift = add(shift, S.generators[j]);
        }
    }
    internal_check(filled.size() == n, "generators do not span the group");
    return S;
}

// ----- characters -----

// chi_c(x) = exp(2 pi i sum_j c_j e_j(x) / d_j)
using CharacterIndex = std::vector<u64>;

inline CharacterIndex character_from_ordinal(const GroupStructure& S, u64 t) {
    CharacterIndex c(S.rank());
    for (std::size_t j = S.rank(); j-- > 0;) {
        c[j] = t % S.invariant_factors[j];
        t /= S.invariant_factors[j];
    }
    require(t == 0, "character ordinal outside the dual group");
    return c;
}

inline bool character_is_real(const GroupStructure& S, const CharacterIndex& c) {
    for (std::size_t j = 0; j < S.rank(); ++j) {
        if ((2 * c[j]) % S.invariant_factors[j] != 0) return false;
    }
    return true;
}

inline std::complex<double> character_eval(const GroupStructure& S, const CharacterIndex& c,
                                           std::size_t x) {
    require(c.size() == S.rank(), "character index has the wrong rank");
    require(x < S.n, "element index out of range");
    long double frac = 0.0L;
    for (std::size_t j = 0; j < S.rank(); ++j) {
        u64 d = S.invariant_factors[j];
        require(c[j] < d, "character component out of range");
        frac += (long double)((c[j] * S.exponent(x, j)) % d) / (long double)d;
    }
    long double ang = 2.0L * std::numbers::pi_v<long double> * frac;
    return {(double)std::cos(ang), (double)std::sin(ang)};
}

inline std::complex<double> char_sum_over_set(const GroupStructure& S, const CharacterIndex& c,
                                              const std::vector<std::size_t>& set) {
    KahanSum re, im;
    for (std::size_t x : set) {
        std::complex<double> v = character_eval(S, c, x);
        re.add(v.real());
        im.add(v.imag());
    }
    return {re.value(), im.value()};
}

}  // namespace jacgraph
