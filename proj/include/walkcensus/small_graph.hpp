#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "walkcensus/int128.hpp"

namespace walkcensus {

// Adjacency of an arbitrarily labeled graph on at most 12 vertices.
// Shapes induced by closed walks never need more; canonical codes are the
// upper-triangle bits of the minimizing vertex order, packed into a u128.
struct SmallGraph {
    int n = 0;
    std::array<std::uint16_t, 12> adj{};

    static constexpr int max_vertices = 12;

    void add_edge(int a, int b) {
        if (a == b) throw std::invalid_argument("self-loop in shape");
        adj[a] |= std::uint16_t(1u << b);
        adj[b] |= std::uint16_t(1u << a);
    }
    bool has_edge(int a, int b) const { return (adj[a] >> b) & 1u; }
    int degree(int v) const { return __builtin_popcount(adj[v]); }
    int edge_count() const {
        int s = 0;
        for (int v = 0; v < n; ++v) s += degree(v);
        return s / 2;
    }
    std::vector<int> degree_sequence_sorted() const {
        std::vector<int> d(n);
        for (int v = 0; v < n; ++v) d[v] = degree(v);
        std::sort(d.begin(), d.end());
        return d;
    }
    std::vector<std::pair<int, int>> edges() const {
        std::vector<std::pair<int, int>> es;
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                if (has_edge(a, b)) es.emplace_back(a, b);
        return es;
    }
    bool connected() const {
        if (n == 0) return true;
        std::uint16_t seen = 1, frontier = 1;
        while (frontier) {
            std::uint16_t next = 0;
            for (int v = 0; v < n; ++v)
                if ((frontier >> v) & 1u) next |= adj[v];
            frontier = next & std::uint16_t(~seen);
            seen |= next;
        }
        return seen == std::uint16_t((1u << n) - 1);
    }
};

inline SmallGraph path_graph(int n) {
    SmallGraph g;
    g.n = n;
    for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
    return g;
}
inline SmallGraph cycle_graph(int n) {
    if (n < 3) throw std::invalid_argument("cycle needs >= 3 vertices");
    SmallGraph g = path_graph(n);
    g.add_edge(n - 1, 0);
    return g;
}
inline SmallGraph star_graph(int leaves) {
    SmallGraph g;
    g.n = leaves + 1;
    for (int i = 1; i <= leaves; ++i) g.add_edge(0, i);
    return g;
}
inline SmallGraph complete_graph(int n) {
    SmallGraph g;
    g.n = n;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) g.add_edge(a, b);
    return g;
}
// C_c with a pendant path of l edges attached at vertex 0.
inline SmallGraph tadpole_graph(int c, int l) {
    SmallGraph g = cycle_graph(c);
    g.n = c + l;
    for (int i = 0; i < l; ++i) g.add_edge(i == 0 ? 0 : c + i - 1, c + i);
    return g;
}
// Two cycles sharing exactly vertex 0.
inline SmallGraph lemniscate_graph(int a, int b) {
    SmallGraph g = cycle_graph(a);
    g.n = a + b - 1;
    int prev = 0;
    for (int i = 0; i < b - 1; ++i) {
        g.add_edge(prev, a + i);
        prev = a + i;
    }
    g.add_edge(prev, 0);
    return g;
}
// C_3 with `legs` pendant edges on one cycle vertex.
inline SmallGraph triangle_star_graph(int legs) {
    SmallGraph g = cycle_graph(3);
    g.n = 3 + legs;
    for (int i = 0; i < legs; ++i) g.add_edge(0, 3 + i);
    return g;
}

using CanonicalCode = u128;

namespace detail {

struct CanonState {
    const SmallGraph* g;
    CanonicalCode best;
    bool have_best;
    std::array<int, 12> perm;   // position -> original vertex
    std::array<int, 12> order;  // degree-descending candidate order
    std::array<bool, 12> used;
};

// Branch-and-bound lexicographic maximization of the packed adjacency bits;
// trying high-degree vertices first makes the first descent near-optimal so
// pruning engages immediately.
inline void canon_rec(CanonState& st, int pos, CanonicalCode prefix, int bits) {
    const int n = st.g->n;
    if (pos == n) {
        if (!st.have_best || prefix > st.best) {
            st.best = prefix;
            st.have_best = true;
        }
        return;
    }
    for (int c = 0; c < n; ++c) {
        int v = st.order[c];
        if (st.used[v]) continue;
        CanonicalCode code = prefix;
        for (int i = 0; i < pos; ++i) {
            code <<= 1;
            if (st.g->has_edge(v, st.perm[i])) code |= 1;
        }
        int nbits = bits + pos;
        // compare against the same-length prefix of the best complete code
        if (st.have_best) {
            int total = n * (n - 1) / 2;
            CanonicalCode best_prefix = st.best >> (total - nbits);
            if (code < best_prefix) continue;
        }
        st.used[v] = true;
        st.perm[pos] = v;
        canon_rec(st, pos + 1, code, nbits);
        st.used[v] = false;
    }
}

} // namespace detail

// Identical codes iff isomorphic; supports up to 12 vertices.
inline CanonicalCode canonical_form(const SmallGraph& g) {
    if (g.n > SmallGraph::max_vertices)
        throw std::invalid_argument("canonical_form: more than 12 vertices");
    if (g.n == 0) return 0;
    detail::CanonState st{&g, 0, false, {}, {}, {}};
    for (int v = 0; v < g.n; ++v) st.order[v] = v;
    std::sort(st.order.begin(), st.order.begin() + g.n,
              [&](int a, int b) { return g.degree(a) > g.degree(b); });
    detail::canon_rec(st, 0, 0, 0);
    // embed vertex count so graphs of different order never collide
    return (u128(g.n) << 66) | st.best;
}

// Number of embeddings (injective adjacency-preserving maps) of `pat` into
// `host`, both small. aut(F) = embeddings(F, F).
inline u128 count_embeddings_small(const SmallGraph& pat, const SmallGraph& host) {
    if (pat.n > host.n) return 0;
    // order pattern vertices so each is adjacent to an earlier one when possible
    std::vector<int> order;
    std::vector<bool> placed(pat.n, false);
    for (int step = 0; step < pat.n; ++step) {
        int pick = -1, best_links = -1;
        for (int v = 0; v < pat.n; ++v) {
            if (placed[v]) continue;
            int links = 0;
            for (int u : order)
                if (pat.has_edge(v, u)) ++links;
            if (links > best_links ||
                (links == best_links && pick >= 0 && pat.degree(v) > pat.degree(pick))) {
                best_links = links;
                pick = v;
            }
        }
        order.push_back(pick);
        placed[pick] = true;
    }
    u128 total = 0;
    std::array<int, 12> map{};
    std::uint16_t used = 0;
    auto rec = [&](auto&& self, int step) -> void {
        if (step == pat.n) {
            ++total;
            return;
        }
        int pv = order[step];
        for (int hv = 0; hv < host.n; ++hv) {
            if ((used >> hv) & 1u) continue;
            bool ok = true;
            for (int i = 0; i < step && ok; ++i) {
                bool pe = pat.has_edge(pv, order[i]);
                if (pe && !host.has_edge(hv, map[order[i]])) ok = false;
            }
            if (!ok) continue;
            map[pv] = hv;
            used |= std::uint16_t(1u << hv);
            self(self, step + 1);
            used &= std::uint16_t(~(1u << hv));
        }
    };
    rec(rec, 0);
    return total;
}

inline u128 automorphism_order(const SmallGraph& g) { return count_embeddings_small(g, g); }

// All free (unlabeled) trees on n vertices, 1 <= n <= 8.
inline std::vector<SmallGraph> free_trees(int n) {
    if (n < 1 || n > 8) throw std::invalid_argument("free_trees: supported for 1..8 vertices");
    SmallGraph single;
    single.n = 1;
    std::vector<SmallGraph> frontier{single};
    for (int sz = 2; sz <= n; ++sz) {
        std::vector<SmallGraph> next;
        std::vector<CanonicalCode> codes;
        for (const auto& t : frontier) {
            for (int attach = 0; attach < t.n; ++attach) {
                SmallGraph t2 = t;
                t2.n = t.n + 1;
                t2.add_edge(attach, t.n);
                CanonicalCode c = canonical_form(t2);
                if (std::find(codes.begin(), codes.end(), c) == codes.end()) {
                    codes.push_back(c);
                    next.push_back(t2);
                }
            }
        }
        frontier = std::move(next);
    }
    return frontier;
}

} // namespace walkcensus
