#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "walkcensus/graph.hpp"
#include "walkcensus/int128.hpp"
#include "walkcensus/small_graph.hpp"
#include "walkcensus/walk_shapes.hpp"

namespace walkcensus {

struct too_dense_error : std::runtime_error {
    too_dense_error(const std::string& what) : std::runtime_error(what) {}
};

// Local structure of one graph: degrees, codegree (A^2) rows, triangles and
// small-cycle incidences. Built once, then queried by the closed-form
// subgraph counters used by the trace-based cycle counts.
class SubgraphCounts {
public:
    explicit SubgraphCounts(const Graph& g) : g_(g), n_(g.node_count()) {
        degrees_ = g.degree_sequence();
        build_codegree_rows();
        enumerate_triangles();
    }

    const Graph& graph() const { return g_; }
    int degree(int v) const { return degrees_[v]; }
    u128 edge_count() const { return g_.edge_count(); }

    // codegree(a,b) = |N(a) cap N(b)| for a != b
    int codegree(int a, int b) const {
        const auto& row = srow_[a];
        auto it = std::lower_bound(row.begin(), row.end(), std::make_pair(b, 0),
                                   [](auto x, auto y) { return x.first < y.first; });
        return (it != row.end() && it->first == b) ? it->second : 0;
    }

    u128 triangle_count() const { return c3_; }
    std::uint64_t triangles_at(int v) const { return tri_v_[v]; }
    const std::vector<std::array<int, 3>>& triangles() const { return tris_; }

    // --- tree counts ---
    u128 count_p2() const { return g_.edge_count(); }
    u128 count_p3() const {
        u128 s = 0;
        for (int v = 0; v < n_; ++v) s += binomial_u128(degrees_[v], 2);
        return s;
    }
    u128 count_k13() const {
        u128 s = 0;
        for (int v = 0; v < n_; ++v) s += binomial_u128(degrees_[v], 3);
        return s;
    }
    u128 count_k14() const {
        u128 s = 0;
        for (int v = 0; v < n_; ++v) s += binomial_u128(degrees_[v], 4);
        return s;
    }
    u128 count_p4() const {
        u128 s = 0;
        for (auto [u, v] : g_.edges()) s += u128(degrees_[u] - 1) * u128(degrees_[v] - 1);
        return s - 3 * c3_;
    }
    // Paths on 5 vertices, by extending ordered simple 3-edge paths.
    u128 count_p5() const {
        require_path_budget();
        u128 ordered = 0;
        for (auto [b, c] : g_.edges()) {
            for (int dir = 0; dir < 2; ++dir) {
                int x = dir ? c : b, y = dir ? b : c; // path a-x-y-d
                for (const int* ap = g_.neighbors_begin(x); ap != g_.neighbors_end(x); ++ap) {
                    int a = *ap;
                    if (a == y) continue;
                    for (const int* dp = g_.neighbors_begin(y); dp != g_.neighbors_end(y); ++dp) {
                        int d = *dp;
                        if (d == x || d == a) continue;
                        int ext = degrees_[d];
                        if (g_.has_edge(d, a)) --ext;
                        if (g_.has_edge(d, x)) --ext;
                        --ext; // y itself
                        ordered += u128(ext);
                    }
                }
            }
        }
        return ordered / 2;
    }
    // Spider tree: center with two pendant edges and one pendant 2-path.
    u128 count_spider112() const {
        require_path_budget();
        u128 s = 0;
        for (int c = 0; c < n_; ++c) {
            if (degrees_[c] < 3) continue;
            for (const int* up = g_.neighbors_begin(c); up != g_.neighbors_end(c); ++up) {
                int u = *up;
                for (const int* wp = g_.neighbors_begin(u); wp != g_.neighbors_end(u); ++wp) {
                    int w = *wp;
                    if (w == c) continue;
                    int avail = degrees_[c] - 1 - (g_.has_edge(w, c) ? 1 : 0);
                    if (avail >= 2) s += binomial_u128(std::uint64_t(avail), 2);
                }
            }
        }
        return s;
    }

    // --- cyclic counts used by the trace method ---
    u128 count_diamond() const {
        u128 s = 0;
        for (auto [u, v] : g_.edges()) s += binomial_u128(std::uint64_t(codegree(u, v)), 2);
        return s;
    }
    u128 count_book3() const {
        u128 s = 0;
        for (auto [u, v] : g_.edges()) s += binomial_u128(std::uint64_t(codegree(u, v)), 3);
        return s;
    }
    u128 count_c3p2() const {
        u128 s = 0;
        for (int v = 0; v < n_; ++v)
            if (degrees_[v] > 2) s += u128(tri_v_[v]) * u128(degrees_[v] - 2);
        return s;
    }
    u128 count_c4p2() const {
        const auto& c4v = cycle4_at();
        u128 s = 0;
        for (int v = 0; v < n_; ++v)
            if (degrees_[v] > 2) s += u128(c4v[v]) * u128(degrees_[v] - 2);
        // a pendant edge landing on the cycle's antipode forms a diamond
        return s - 2 * count_diamond();
    }
    u128 count_c5p2() const {
        const auto& c5v = cycle5_at();
        u128 s = 0;
        for (int v = 0; v < n_; ++v)
            if (degrees_[v] > 2) s += u128(c5v[v]) * u128(degrees_[v] - 2);
        // a pendant edge landing on a non-neighbor cycle vertex forms a house
        return s - 2 * count_house();
    }
    u128 count_c3c3() const {
        u128 s = 0;
        for (int v = 0; v < n_; ++v) s += binomial_u128(tri_v_[v], 2);
        u128 shared_edge = 0;
        for (auto [u, v] : g_.edges()) shared_edge += binomial_u128(std::uint64_t(codegree(u, v)), 2);
        return s - 2 * shared_edge;
    }
    u128 count_c3c4() const {
        // triangle/4-cycle pairs sharing one vertex, by inclusion-exclusion
        // over the shared vertex count: N1 = S1 - 2 N2' + 3 N3 where S1 sums
        // shared vertices, N2' counts pairs sharing an edge's endpoints and
        // N3 (= 2 X_diamond) pairs with the triangle inside the 4-cycle.
        const auto& c4v = cycle4_at();
        u128 s = 0;
        for (int v = 0; v < n_; ++v) s += u128(tri_v_[v]) * u128(c4v[v]);
        u128 overlap = 0;
        for (auto [u, v] : g_.edges()) {
            std::uint64_t te = std::uint64_t(codegree(u, v));
            if (te == 0) continue;
            overlap += u128(te) * (u128(cycle4_on_edge(u, v)) + binomial_u128(te, 2));
        }
        return s - 2 * overlap + 6 * count_diamond();
    }
    u128 count_c3p3() const {
        u128 s = 0;
        for (const auto& t : tris_) {
            for (int i = 0; i < 3; ++i) {
                int v = t[i];
                for (const int* up = g_.neighbors_begin(v); up != g_.neighbors_end(v); ++up) {
                    int u = *up;
                    if (u == t[0] || u == t[1] || u == t[2]) continue;
                    int ext = degrees_[u] - 1;
                    for (int j = 0; j < 3; ++j)
                        if (t[j] != v && g_.has_edge(u, t[j])) --ext;
                    s += u128(ext);
                }
            }
        }
        return s;
    }
    u128 count_bull() const {
        u128 s = 0;
        for (const auto& t : tris_) {
            for (int i = 0; i < 3; ++i)
                for (int j = i + 1; j < 3; ++j) {
                    int a = t[i], b = t[j];
                    u128 prod = u128(std::max(0, degrees_[a] - 2)) * u128(std::max(0, degrees_[b] - 2));
                    int common = codegree(a, b) - 1; // the third triangle vertex
                    s += prod - u128(common);
                }
        }
        return s;
    }
    u128 count_cricket() const {
        u128 s = 0;
        for (const auto& t : tris_)
            for (int i = 0; i < 3; ++i)
                s += binomial_u128(std::uint64_t(std::max(0, degrees_[t[i]] - 2)), 2);
        return s;
    }
    u128 count_house() const {
        u128 s = 0;
        for (const auto& t : tris_) {
            for (int i = 0; i < 3; ++i)
                for (int j = i + 1; j < 3; ++j) {
                    int a = t[i], b = t[j];
                    // paths a-x-y-b with x, y outside the triangle
                    for (const int* xp = g_.neighbors_begin(a); xp != g_.neighbors_end(a); ++xp) {
                        int x = *xp;
                        if (x == t[0] || x == t[1] || x == t[2]) continue;
                        for (const int* yp = g_.neighbors_begin(x); yp != g_.neighbors_end(x); ++yp) {
                            int y = *yp;
                            if (y == t[0] || y == t[1] || y == t[2]) continue;
                            if (g_.has_edge(y, b)) ++s;
                        }
                    }
                }
        }
        return s;
    }

    // number of 4-cycles containing edge (u,v)
    std::uint64_t cycle4_on_edge(int u, int v) const {
        std::uint64_t s = 0;
        for (const int* ap = g_.neighbors_begin(v); ap != g_.neighbors_end(v); ++ap) {
            int a = *ap;
            if (a == u) continue;
            s += std::uint64_t(std::max(0, codegree(a, u) - 1)); // v is always common
        }
        return s;
    }

    const std::vector<std::uint64_t>& cycle4_at() const {
        if (c4v_.empty()) {
            c4v_.assign(n_, 0);
            for (int v = 0; v < n_; ++v) {
                // closed 4-walks at v = d^2 + sum_{a~v}(d_a - 1) + 2 c4_v
                u128 walks4 = u128(degrees_[v]) * u128(degrees_[v]);
                for (const auto& [b, cd] : srow_[v]) walks4 += u128(cd) * u128(cd);
                u128 rest = u128(degrees_[v]) * u128(degrees_[v]);
                for (const int* ap = g_.neighbors_begin(v); ap != g_.neighbors_end(v); ++ap)
                    rest += u128(degrees_[*ap] - 1);
                c4v_[v] = std::uint64_t((walks4 - rest) / 2);
            }
        }
        return c4v_;
    }

    const std::vector<std::uint64_t>& cycle5_at() const {
        if (c5v_.empty()) {
            c5v_.assign(n_, 0);
            // tadpole incidences by role
            std::vector<u128> tad_attach(n_, 0), tad_base(n_, 0), tad_pend(n_, 0);
            for (int v = 0; v < n_; ++v) {
                tad_attach[v] = u128(tri_v_[v]) * u128(std::max(0, degrees_[v] - 2));
                for (const int* up = g_.neighbors_begin(v); up != g_.neighbors_end(v); ++up)
                    tad_pend[v] += u128(tri_v_[*up]) - u128(codegree(v, *up));
            }
            for (const auto& t : tris_)
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j)
                        if (i != j) tad_base[t[i]] += u128(std::max(0, degrees_[t[j]] - 2));
            for (int v = 0; v < n_; ++v) {
                u128 walks5 = closed_walks5_at(v);
                u128 nonsimple = 10 * u128(tri_v_[v]) + 2 * tad_pend[v] + 4 * tad_attach[v] + 2 * tad_base[v];
                c5v_[v] = std::uint64_t((walks5 - nonsimple) / 2);
            }
        }
        return c5v_;
    }

    // Full A^2 row of v (codegrees plus the diagonal degree), sorted by column.
    u128 closed_walks4_total() const {
        u128 s = 0;
        for (int v = 0; v < n_; ++v) {
            s += u128(degrees_[v]) * u128(degrees_[v]);
            for (const auto& [b, cd] : srow_[v]) s += u128(cd) * u128(cd);
        }
        return s;
    }
    u128 closed_walks5_total() const {
        u128 s = 0;
        for (int v = 0; v < n_; ++v) s += closed_walks5_at(v);
        return s;
    }

    u128 closed_walks5_at(int v) const {
        // (A^5)_vv = sum_{u ~ v} (A^4)_{uv}
        u128 s = 0;
        for (const int* up = g_.neighbors_begin(v); up != g_.neighbors_end(v); ++up)
            s += a4_entry(*up, v);
        return s;
    }

    // (A^4)_{uv} as a sparse dot of full A^2 rows.
    u128 a4_entry(int u, int v) const {
        u128 s = 0;
        auto fu = full_row(u), fv = full_row(v);
        std::size_t i = 0, j = 0;
        while (i < fu.size() && j < fv.size()) {
            if (fu[i].first < fv[j].first)
                ++i;
            else if (fu[i].first > fv[j].first)
                ++j;
            else {
                s += u128(fu[i].second) * u128(fv[j].second);
                ++i;
                ++j;
            }
        }
        return s;
    }

    std::vector<std::pair<int, int>> full_row(int v) const {
        std::vector<std::pair<int, int>> row;
        row.reserve(srow_[v].size() + 1);
        bool placed = false;
        for (const auto& [b, cd] : srow_[v]) {
            if (!placed && b > v) {
                if (degrees_[v] > 0) row.emplace_back(v, degrees_[v]);
                placed = true;
            }
            row.emplace_back(b, cd);
        }
        if (!placed && degrees_[v] > 0) row.emplace_back(v, degrees_[v]);
        return row;
    }

    const std::vector<std::vector<std::pair<int, int>>>& codegree_rows() const { return srow_; }

private:
    void build_codegree_rows() {
        srow_.assign(n_, {});
        std::vector<int> acc(n_, 0);
        std::vector<int> touched;
        for (int a = 0; a < n_; ++a) {
            touched.clear();
            for (const int* xp = g_.neighbors_begin(a); xp != g_.neighbors_end(a); ++xp)
                for (const int* bp = g_.neighbors_begin(*xp); bp != g_.neighbors_end(*xp); ++bp) {
                    int b = *bp;
                    if (b == a) continue;
                    if (acc[b]++ == 0) touched.push_back(b);
                }
            std::sort(touched.begin(), touched.end());
            auto& row = srow_[a];
            row.reserve(touched.size());
            for (int b : touched) {
                row.emplace_back(b, acc[b]);
                acc[b] = 0;
            }
        }
    }

    void enumerate_triangles() {
        tri_v_.assign(n_, 0);
        c3_ = 0;
        std::size_t words = g_.row_words();
        std::vector<std::uint64_t> tmp(words);
        for (auto [u, v] : g_.edges()) {
            const std::uint64_t* ru = g_.row(u);
            const std::uint64_t* rv = g_.row(v);
            for (std::size_t w = 0; w < words; ++w) tmp[w] = ru[w] & rv[w];
            // only keep x > v so each triangle is listed once (u < v < x)
            std::size_t wv = std::size_t(v) / 64;
            for (std::size_t w = 0; w < wv; ++w) tmp[w] = 0;
            int bit = v % 64;
            if (bit == 63)
                tmp[wv] = 0;
            else
                tmp[wv] &= ~((2ull << bit) - 1);
            for (std::size_t w = wv; w < words; ++w) {
                std::uint64_t bits = tmp[w];
                while (bits) {
                    int x = int(w * 64 + std::size_t(__builtin_ctzll(bits)));
                    bits &= bits - 1;
                    tris_.push_back({u, v, x});
                    ++tri_v_[u];
                    ++tri_v_[v];
                    ++tri_v_[x];
                    ++c3_;
                    if (tris_.size() > max_triangles)
                        throw too_dense_error("triangle list exceeds budget");
                }
            }
        }
    }

    void require_path_budget() const {
        u128 est = 0;
        for (auto [u, v] : g_.edges()) est += u128(degrees_[u]) * u128(degrees_[v]);
        if (est > u128(200000000)) throw too_dense_error("path enumeration exceeds budget");
    }

    static constexpr std::size_t max_triangles = 20000000;

    const Graph& g_;
    int n_;
    std::vector<int> degrees_;
    std::vector<std::vector<std::pair<int, int>>> srow_; // codegree rows (no diagonal)
    std::vector<std::array<int, 3>> tris_;
    std::vector<std::uint64_t> tri_v_;
    u128 c3_ = 0;
    mutable std::vector<std::uint64_t> c4v_;
    mutable std::vector<std::uint64_t> c5v_;
};

} // namespace walkcensus
