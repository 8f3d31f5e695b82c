#pragma once

// Shared plumbing: error taxonomy, 64-bit modular helpers, deterministic RNG,
// compensated summation. Everything here is exact integer or IEEE double work.

#include <array>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace jacgraph {

// Error taxonomy maps 1:1 onto the CLI exit codes (2/3/4).
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& m) : std::runtime_error(m) {}
};
struct CapError : std::runtime_error {
    explicit CapError(const std::string& m) : std::runtime_error(m) {}
};
struct InternalCheckError : std::logic_error {
    explicit InternalCheckError(const std::string& m) : std::logic_error(m) {}
};

inline void internal_check(bool ok, const std::string& msg) {
    if (!ok) throw InternalCheckError(msg);
}
inline void require(bool ok, const std::string& msg) {
    if (!ok) throw ValidationError(msg);
}

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

inline u64 mulmod(u64 a, u64 b, u64 m) { return (u64)((u128)a * b % m); }
inline u64 addmod(u64 a, u64 b, u64 m) {
    u64 s = a + b;  // a,b < m <= 2^63 so no wrap
    return s >= m ? s - m : s;
}
inline u64 submod(u64 a, u64 b, u64 m) { return a >= b ? a - b : a + m - b; }

inline u64 powmod(u64 a, u64 e, u64 m) {
    u64 r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

// Euclidean inverse; requires gcd(a,m)=1.
inline u64 invmod(u64 a, u64 m) {
    i64 t = 0, nt = 1;
    i64 r = (i64)m, nr = (i64)(a % m);
    while (nr != 0) {
        i64 q = r / nr;
        t -= q * nt; std::swap(t, nt);
        r -= q * nr; std::swap(r, nr);
    }
    if (r != 1) throw ValidationError("invmod: argument not invertible");
    return (u64)(t < 0 ? t + (i64)m : t);
}

// Jacobi symbol (a/n), n odd positive. Binary algorithm.
inline int jacobi(u64 a, u64 n) {
    if (n % 2 == 0) throw ValidationError("jacobi: modulus must be odd");
    a %= n;
    int s = 1;
    while (a != 0) {
        while ((a & 1) == 0) {
            a >>= 1;
            u64 r = n & 7;
            if (r == 3 || r == 5) s = -s;
        }
        std::swap(a, n);
        if ((a & 3) == 3 && (n & 3) == 3) s = -s;
        a %= n;
    }
    return n == 1 ? s : 0;
}

// Deterministic Miller-Rabin, valid for all n < 3'215'031'751 with these bases;
// supported field characteristics stay below 2^31.
inline bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (u64 a : {2ull, 3ull, 5ull, 7ull}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool comp = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) { comp = false; break; }
        }
        if (comp) return false;
    }
    return true;
}

// Trial-division factorisation, ascending (prime, multiplicity) pairs.
inline std::vector<std::pair<u64, int>> factorize(u64 n) {
    std::vector<std::pair<u64, int>> out;
    for (u64 d = 2; d * d <= n; d += (d == 2 ? 1 : 2)) {
        if (n % d == 0) {
            int e = 0;
            while (n % d == 0) { n /= d; ++e; }
            out.push_back({d, e});
        }
    }
    if (n > 1) out.push_back({n, 1});
    return out;
}

// Seeded generator for the sampled invariant tests. Raw draws only; stdlib
// distributions are not byte-stable across implementations.
class DetRng {
public:
    explicit DetRng(u64 seed = 0) : eng_(seed) {}
    u64 next() { return eng_(); }
    // uniform in [0, n) by rejection
    u64 below(u64 n) {
        u64 lim = std::numeric_limits<u64>::max() - std::numeric_limits<u64>::max() % n;
        u64 v;
        do { v = eng_(); } while (v >= lim);
        return v % n;
    }
    double unit() { return (eng_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 eng_;
};

class KahanSum {
public:
    void add(double x) {
        double y = x - c_;
        double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

private:
    double s_ = 0.0, c_ = 0.0;
};

// Chunked parallel loop. Chunk boundaries depend only on (n, threads), so any
// worker-to-chunk assignment yields identical results when chunks write
// disjoint state.
inline void parallel_for(std::size_t n, unsigned threads,
                         const std::function<void(std::size_t, std::size_t)>& body) {
    if (threads <= 1 || n < 2) {
        body(0, n);
        return;
    }
    std::size_t chunk = (n + threads - 1) / threads;
    std::vector<std::thread> pool;
    for (std::size_t lo = 0; lo < n; lo += chunk) {
        std::size_t hi = std::min(n, lo + chunk);
        pool.emplace_back([&, lo, hi] { body(lo, hi); });
    }
    for (auto& t : pool) t.join();
}

inline unsigned default_threads() {
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : hc;
}

}  // namespace jacgraph
