#pragma once

// Cayley sum graphs on a finite abelian group: x ~ y iff x + y lies in the
// connection set S. Undirected, no multiple edges, loops allowed (one
// diagonal bit, counted once in the row popcount). Dense bitset rows up to
// the cap; larger graphs stream their edge list without dense analyses.

#include <algorithm>
#include <bit>
#include <cmath>
#include <optional>
#include <vector>

#include "abgroup.hpp"

namespace jacgraph {

inline constexpr std::size_t kDenseGraphCap = 20'000;
inline constexpr std::size_t kExactIndependenceCap = 60;

struct SumGraphData {
    std::size_t n = 0;
    std::vector<std::size_t> S;  // sorted, distinct
    std::size_t degree = 0;      // = |S|, the row popcount with diagonal counted once
    bool dense = false;
    std::size_t words = 0;  // 64-bit words per adjacency row
    std::vector<u64> adj;   // n rows by `words`, dense mode only
    std::vector<std::size_t> loop_vertices;

    bool bit(std::size_t u, std::size_t v) const {
        return (adj[u * words + v / 64] >> (v % 64)) & 1u;
    }
    const u64* row(std::size_t u) const { return adj.data() + u * words; }
};

struct CombinatoricsReport {
    bool connected = false;
    std::size_t max_common_neighbors = 0;
    bool k23_free = false;
    u64 c4_count = 0;
    std::size_t independence_lower = 0;
    std::optional<std::size_t> independence_upper;
};

namespace detail {

inline std::vector<std::size_t> checked_set(std::size_t n, std::vector<std::size_t> S) {
    require(!S.empty(), "connection set must be nonempty");
    std::sort(S.begin(), S.end());
    for (std::size_t i = 0; i < S.size(); ++i) {
        require(S[i] < n, "connection set element outside the group");
        require(i == 0 || S[i] != S[i - 1], "connection set must not repeat elements");
    }
    return S;
}

}  // namespace detail

// Neighbors of x are {s - x : s in S}; they are pairwise distinct, so every
// row carries exactly |S| bits. Loop at x iff 2x is in S.
inline SumGraphData build_sum_graph(const EnumeratedGroup& G, std::vector<std::size_t> S) {
    require(G.n >= 1, "sum graph needs a nonempty group");
    SumGraphData g;
    g.n = G.n;
    g.S = detail::checked_set(G.n, std::move(S));
    g.degree = g.S.size();

    std::vector<char> inS(g.n, 0);
    for (std::size_t s : g.S) inS[s] = 1;
    for (std::size_t x = 0; x < g.n; ++x) {
        if (inS[G.add(x, x)]) g.loop_vertices.push_back(x);
    }

    if (g.n > kDenseGraphCap) return g;  // streaming mode: no dense rows

    g.dense = true;
    g.words = (g.n + 63) / 64;
    g.adj.assign(g.n * g.words, 0);
    for (std::size_t x = 0; x < g.n; ++x) {
        for (std::size_t s : g.S) {
            std::size_t y = G.add(s, G.neg[x]);
            internal_check(y < g.n, "neighbor fell outside the vertex set");
            g.adj[x * g.words + y / 64] |= 1ull << (y % 64);
        }
    }
    std::size_t loops_seen = 0;
    for (std::size_t x = 0; x < g.n; ++x) {
        std::size_t pc = 0;
        for (std::size_t w = 0; w < g.words; ++w) pc += (std::size_t)std::popcount(g.row(x)[w]);
        internal_check(pc == g.degree, "row popcount must equal |S|");
        if (g.bit(x, x)) ++loops_seen;
        for (std::size_t w = 0; w < g.words; ++w) {
            u64 m = g.row(x)[w];
            while (m) {
                std::size_t y = w * 64 + (std::size_t)std::countr_zero(m);
                m &= m - 1;
                internal_check(g.bit(y, x), "adjacency must be symmetric");
            }
        }
    }
    internal_check(loops_seen == g.loop_vertices.size(), "diagonal bits must match loop list");
    return g;
}

// Every edge once, u <= v, ascending in (u, then v); loops appear as (x, x).
// Works at any group size; this is the export path past the dense cap.
template <typename Fn>
inline void stream_edges(const EnumeratedGroup& G, std::vector<std::size_t> S, Fn&& fn) {
    std::vector<std::size_t> set = detail::checked_set(G.n, std::move(S));
    std::vector<std::size_t> ys;
    for (std::size_t x = 0; x < G.n; ++x) {
        ys.clear();
        for (std::size_t s : set) {
            std::size_t y = G.add(s, G.neg[x]);
            if (y >= x) ys.push_back(y);
        }
        std::sort(ys.begin(), ys.end());
        for (std::size_t y : ys) fn(x, y);
    }
}

namespace detail {

// exact maximum independent set, branching on the densest remaining vertex
struct MisSolver {
    std::size_t n = 0, words = 0;
    std::vector<u64> nbr;  // stripped rows, n x words
    std::size_t best = 0;

    std::size_t count(const std::vector<u64>& m) const {
        std::size_t c = 0;
        for (u64 w : m) c += (std::size_t)std::popcount(w);
        return c;
    }
    void run(std::vector<u64> P, std::size_t have) {
        std::size_t left = count(P);
        if (have + left <= best) return;
        if (left == 0) {
            best = have;
            return;
        }
        std::size_t pick = n, pickdeg = 0;
        for (std::size_t v = 0; v < n; ++v) {
            if (!((P[v / 64] >> (v % 64)) & 1u)) continue;
            std::size_t d = 0;
            for (std::size_t w = 0; w < words; ++w) {
                d += (std::size_t)std::popcount(nbr[v * words + w] & P[w]);
            }
            if (pick == n || d > pickdeg) {
                pick = v;
                pickdeg = d;
            }
        }
        if (pickdeg == 0) {  // P is fully independent
            best = std::max(best, have + left);
            return;
        }
        std::vector<u64> in = P;
        for (std::size_t w = 0; w < words; ++w) in[w] &= ~nbr[pick * words + w];
        in[pick / 64] &= ~(1ull << (pick % 64));
        run(std::move(in), have + 1);
        P[pick / 64] &= ~(1ull << (pick % 64));
        run(std::move(P), have);
    }
};

}  // namespace detail

// Connectivity, common-neighbor statistics, and independence bounds. Loops
// are ignored throughout (diagonal stripped): subgraph copies of K_{2,3} and
// C_4 must use distinct vertices, and a loop never disqualifies its vertex
// from an independent set.
inline CombinatoricsReport combinatorics_report(const SumGraphData& g,
                                                std::size_t exact_cap = kExactIndependenceCap) {
    require(g.dense, "combinatorics needs the dense adjacency mode");
    const std::size_t n = g.n, words = g.words;

    std::vector<u64> st(g.adj);  // stripped rows
    for (std::size_t x = 0; x < n; ++x) st[x * words + x / 64] &= ~(1ull << (x % 64));
    auto srow = [&](std::size_t x) { return st.data() + x * words; };

    CombinatoricsReport rep;

    // breadth-first search from vertex 0 (loops are irrelevant to reach)
    std::vector<char> vis(n, 0);
    std::vector<std::size_t> queue = {0};
    vis[0] = 1;
    std::size_t reached = 1;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        std::size_t x = queue[qi];
        for (std::size_t w = 0; w < words; ++w) {
            u64 m = srow(x)[w];
            while (m) {
                std::size_t y = w * 64 + (std::size_t)std::countr_zero(m);
                m &= m - 1;
                if (!vis[y]) {
                    vis[y] = 1;
                    ++reached;
                    queue.push_back(y);
                }
            }
        }
    }
    rep.connected = reached == n;

    // pairwise common neighbors; endpoints never appear because the
    // diagonal is stripped (u in N'(u) is false)
    u64 diag_pairs = 0;
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = u + 1; v < n; ++v) {
            std::size_t c = 0;
            const u64* ru = srow(u);
            const u64* rv = srow(v);
            for (std::size_t w = 0; w < words; ++w) c += (std::size_t)std::popcount(ru[w] & rv[w]);
            rep.max_common_neighbors = std::max(rep.max_common_neighbors, c);
            diag_pairs += (u64)c * (c - 1) / 2;
        }
    }
    rep.k23_free = rep.max_common_neighbors <= 2;
    // each 4-cycle is seen from both of its diagonals
    internal_check(diag_pairs % 2 == 0, "diagonal pair count must be even");
    rep.c4_count = diag_pairs / 2;

    // greedy independent set: ascending stripped degree, ties by index
    std::vector<std::size_t> deg(n, 0), order(n);
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t w = 0; w < words; ++w) deg[x] += (std::size_t)std::popcount(srow(x)[w]);
        order[x] = x;
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return deg[a] != deg[b] ? deg[a] < deg[b] : a < b;
    });
    std::vector<u64> blocked(words, 0);
    for (std::size_t v : order) {
        if ((blocked[v / 64] >> (v % 64)) & 1u) continue;
        ++rep.independence_lower;
        for (std::size_t w = 0; w < words; ++w) blocked[w] |= srow(v)[w];
    }

    if (n <= exact_cap) {
        detail::MisSolver solver;
        solver.n = n;
        solver.words = words;
        solver.nbr = st;
        solver.best = rep.independence_lower > 0 ? rep.independence_lower - 1 : 0;
        std::vector<u64> all(words, 0);
        for (std::size_t v = 0; v < n; ++v) all[v / 64] |= 1ull << (v % 64);
        solver.run(all, 0);
        rep.independence_upper = solver.best;
        internal_check(rep.independence_lower <= solver.best,
                       "greedy bound exceeded the exact independence number");
    }
    return rep;
}

// d is expected to track |V|^(1/2): the group is 2-dimensional for every
// supported modulus (genus 1 with two-point support, genus 2 bare).
struct DegreeRatioReport {
    double ratio = 0.0;
    bool in_band = false;
};

inline DegreeRatioReport ratio_check_degree(const SumGraphData& g) {
    DegreeRatioReport r;
    r.ratio = (double)g.degree / std::sqrt((double)g.n);
    r.in_band = r.ratio >= 0.5 && r.ratio <= 2.0;
    return r;
}

}  // namespace jacgraph
