#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "walkcensus/int128.hpp"
#include "walkcensus/small_graph.hpp"

namespace walkcensus {

// Unlabeled shape induced by closed k-walks, with the quantities every
// other module keeps asking for.
struct WalkShape {
    CanonicalCode code = 0;
    int v = 0;
    int e = 0;
    std::vector<int> degrees; // sorted ascending
    u128 aut = 1;
    std::map<int, u128> ind_self; // k -> ind_k(F,F), filled as computed
    SmallGraph rep;               // dense-labeled representative

    int euler() const { return v - e; }
    bool is_tree() const { return e == v - 1; }
    bool is_cycle() const { return v >= 3 && e == v && *std::min_element(degrees.begin(), degrees.end()) == 2 &&
                                   *std::max_element(degrees.begin(), degrees.end()) == 2; }
};

struct ClosedWalk {
    int k = 0;
    std::vector<int> nodes; // length k+1, first == last

    void validate() const {
        if (int(nodes.size()) != k + 1) throw std::invalid_argument("closed walk length mismatch");
        if (nodes.front() != nodes.back()) throw std::invalid_argument("walk is not closed");
        for (int i = 0; i < k; ++i)
            if (nodes[i] == nodes[i + 1]) throw std::invalid_argument("walk repeats a vertex consecutively");
    }
};

inline SmallGraph shape_from_walk(const std::vector<int>& nodes) {
    std::vector<int> ids;
    for (int v : nodes) ids.push_back(v);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    SmallGraph g;
    g.n = int(ids.size());
    if (g.n > SmallGraph::max_vertices) throw std::invalid_argument("walk visits too many vertices");
    auto dense = [&](int v) { return int(std::lower_bound(ids.begin(), ids.end(), v) - ids.begin()); };
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        int a = dense(nodes[i]), b = dense(nodes[i + 1]);
        if (a != b) g.add_edge(a, b);
    }
    return g;
}

namespace detail {

inline int pair_index(int a, int b, int n) {
    if (a > b) std::swap(a, b);
    return a * n - a * (a + 1) / 2 + (b - a - 1);
}

struct MaskTally {
    std::unordered_map<std::uint64_t, std::uint64_t> counts;
};

// DFS over closed k-walks in K_k tallying traversed-edge sets. With
// `nb` set, only non-backtracking tailless walks are visited.
inline MaskTally tally_walk_masks(int k, bool nb) {
    MaskTally tal;
    tal.counts.reserve(1 << 18);
    std::vector<int> walk(k + 1);
    std::vector<int> edge_use(k * (k - 1) / 2, 0);
    std::uint64_t mask = 0;
    auto rec = [&](auto&& self, int depth) -> void {
        int cur = walk[depth];
        if (depth == k - 1) {
            // the final step is forced back to the start
            int v0 = walk[0];
            if (cur == v0) return;
            if (nb) {
                if (depth >= 1 && walk[depth - 1] == v0) return; // would backtrack into wrap
                if (walk[1] == cur) return;                      // tailless
            }
            int ei = pair_index(cur, v0, k);
            std::uint64_t m2 = mask | (1ull << ei);
            ++tal.counts[m2];
            return;
        }
        for (int nxt = 0; nxt < k; ++nxt) {
            if (nxt == cur) continue;
            if (nb && depth >= 1 && nxt == walk[depth - 1]) continue;
            int ei = pair_index(cur, nxt, k);
            walk[depth + 1] = nxt;
            bool fresh_edge = edge_use[ei]++ == 0;
            if (fresh_edge) mask |= 1ull << ei;
            self(self, depth + 1);
            if (--edge_use[ei] == 0) mask &= ~(1ull << ei);
        }
    };
    for (int start = 0; start < k; ++start) {
        walk[0] = start;
        rec(rec, 0);
    }
    return tal;
}

inline SmallGraph mask_to_graph(std::uint64_t mask, int n) {
    std::vector<std::pair<int, int>> es;
    std::uint16_t present = 0;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if ((mask >> pair_index(a, b, n)) & 1ull) {
                es.emplace_back(a, b);
                present |= std::uint16_t((1u << a) | (1u << b));
            }
    std::vector<int> ids;
    for (int v = 0; v < n; ++v)
        if ((present >> v) & 1u) ids.push_back(v);
    SmallGraph g;
    g.n = int(ids.size());
    auto dense = [&](int v) { return int(std::lower_bound(ids.begin(), ids.end(), v) - ids.begin()); };
    for (auto [a, b] : es) g.add_edge(dense(a), dense(b));
    return g;
}

inline std::vector<WalkShape> shapes_from_tally(const MaskTally& tal, int k, int host_n) {
    std::map<CanonicalCode, WalkShape> by_code;
    for (auto [mask, cnt] : tal.counts) {
        SmallGraph g = mask_to_graph(mask, host_n);
        CanonicalCode code = canonical_form(g);
        auto it = by_code.find(code);
        if (it == by_code.end()) {
            WalkShape s;
            s.code = code;
            s.v = g.n;
            s.e = g.edge_count();
            s.degrees = g.degree_sequence_sorted();
            s.aut = automorphism_order(g);
            s.ind_self[k] = cnt;
            s.rep = g;
            by_code.emplace(code, std::move(s));
        } else if (it->second.ind_self[k] != u128(cnt)) {
            throw std::logic_error("walk tally differs between labeled copies of one shape");
        }
    }
    std::vector<WalkShape> out;
    out.reserve(by_code.size());
    for (auto& [code, s] : by_code) out.push_back(std::move(s));
    std::sort(out.begin(), out.end(), [](const WalkShape& a, const WalkShape& b) {
        return std::tie(a.v, a.e, a.code) < std::tie(b.v, b.e, b.code);
    });
    return out;
}

} // namespace detail

inline constexpr int max_scale = 9;

// W_k: the set of unlabeled shapes induced by closed k-walks, with
// ind_k(F,F) tallied during enumeration. Exact for 2 <= k <= 9.
inline const std::vector<WalkShape>& enumerate_walk_shapes(int k) {
    if (k < 2 || k > max_scale) throw std::invalid_argument("enumerate_walk_shapes: need 2 <= k <= 9");
    static std::map<int, std::vector<WalkShape>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(k);
    if (it != cache.end()) return it->second;
    auto tal = detail::tally_walk_masks(k, false);
    auto shapes = detail::shapes_from_tally(tal, k, k);
    return cache.emplace(k, std::move(shapes)).first->second;
}

// W_k^b: shapes induced by non-backtracking tailless closed k-walks.
inline const std::vector<WalkShape>& enumerate_nb_walk_shapes(int k) {
    if (k < 3 || k > max_scale) throw std::invalid_argument("enumerate_nb_walk_shapes: need 3 <= k <= 9");
    static std::map<int, std::vector<WalkShape>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(k);
    if (it != cache.end()) return it->second;
    auto tal = detail::tally_walk_masks(k, true);
    auto shapes = detail::shapes_from_tally(tal, k, k);
    return cache.emplace(k, std::move(shapes)).first->second;
}

inline const WalkShape* find_shape(const std::vector<WalkShape>& table, CanonicalCode code) {
    for (const auto& s : table)
        if (s.code == code) return &s;
    return nullptr;
}

// Canonical shape of a concrete closed walk.
inline const WalkShape& classify_walk(const ClosedWalk& w) {
    w.validate();
    CanonicalCode code = canonical_form(shape_from_walk(w.nodes));
    const auto& table = enumerate_walk_shapes(w.k);
    const WalkShape* s = find_shape(table, code);
    if (!s) throw std::logic_error("walk induced a shape outside W_k");
    return *s;
}

// ind_k(F,F): closed k-walks in F traversing every edge of F. Exact by
// exhaustive enumeration; zero when no such walk exists.
inline u128 ind_self_count(const SmallGraph& f, int k) {
    if (k < 1) throw std::invalid_argument("ind_self_count: k >= 1");
    int e = f.edge_count();
    if (e == 0 || e > k || !f.connected()) return 0;
    std::uint64_t full = (1ull << e) - 1;
    auto es = f.edges();
    std::array<std::array<int, 12>, 12> eidx{};
    for (std::size_t i = 0; i < es.size(); ++i) {
        eidx[es[i].first][es[i].second] = int(i);
        eidx[es[i].second][es[i].first] = int(i);
    }
    u128 total = 0;
    std::vector<int> walk(k + 1);
    auto rec = [&](auto&& self, int depth, std::uint64_t mask) -> void {
        int cur = walk[depth];
        if (depth == k - 1) {
            int v0 = walk[0];
            if (cur == v0 || !f.has_edge(cur, v0)) return;
            if ((mask | (1ull << eidx[cur][v0])) == full) ++total;
            return;
        }
        std::uint16_t nb = f.adj[cur];
        while (nb) {
            int nxt = __builtin_ctz(nb);
            nb &= std::uint16_t(nb - 1);
            walk[depth + 1] = nxt;
            self(self, depth + 1, mask | (1ull << eidx[cur][nxt]));
        }
    };
    for (int start = 0; start < f.n; ++start) {
        walk[0] = start;
        rec(rec, 0, 0);
    }
    return total;
}

// Fully extended shapes admit no extension: the k-cycle, and for even k
// every tree on k/2+1 vertices.
inline bool is_fully_extended(const WalkShape& f, int k) {
    if (f.v == k && f.is_cycle()) return true;
    if (k % 2 == 0 && f.is_tree() && f.v == k / 2 + 1) return true;
    return false;
}

struct ExtensionCover {
    CanonicalCode from;
    CanonicalCode to;
    int degree_case = 0; // 1..4 per the degree-sequence cases; 0 = outside them
};

namespace detail {

inline std::vector<int> erase_one(std::vector<int> v, int x) {
    auto it = std::find(v.begin(), v.end(), x);
    v.erase(it);
    return v;
}

inline bool multiset_eq(std::vector<int> a, std::vector<int> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b;
}

// Which of the four degree-sequence cases the cover (d -> d2) realizes.
inline int classify_degree_case(const std::vector<int>& d, const std::vector<int>& d2) {
    // case 1: one degree x -> x-2, new vertex of degree 2
    for (int x : d) {
        if (x < 3) continue;
        auto rest = erase_one(d, x);
        rest.push_back(x - 2);
        rest.push_back(2);
        if (multiset_eq(rest, d2)) return 1;
    }
    // case 2: degrees x -> x-1 and y -> y+1, new vertex of degree 2
    for (std::size_t i = 0; i < d.size(); ++i)
        for (std::size_t j = 0; j < d.size(); ++j) {
            if (i == j) continue;
            if (d[i] < 2) continue;
            std::vector<int> rest = d;
            rest.erase(rest.begin() + std::max(i, j));
            rest.erase(rest.begin() + std::min(i, j));
            rest.push_back(d[i] - 1);
            rest.push_back(d[j] + 1);
            rest.push_back(2);
            if (multiset_eq(rest, d2)) return 2;
        }
    // case 4: one degree x -> x-1, new vertex of degree 1
    for (int x : d) {
        if (x < 2) continue;
        auto rest = erase_one(d, x);
        rest.push_back(x - 1);
        rest.push_back(1);
        if (multiset_eq(rest, d2)) return 4;
    }
    // case 3: two degrees (x,y) -> (x', y') with x' <= x, y' <= y+1, new vertex of degree 1
    for (std::size_t i = 0; i < d.size(); ++i)
        for (std::size_t j = 0; j < d.size(); ++j) {
            if (i == j) continue;
            std::vector<int> rest = d;
            rest.erase(rest.begin() + std::max(i, j));
            rest.erase(rest.begin() + std::min(i, j));
            // d2 must contain a 1 for the new leaf
            if (std::find(d2.begin(), d2.end(), 1) == d2.end()) continue;
            auto d2rest = erase_one(d2, 1);
            // remove two entries (x', y') from d2rest matching the pattern
            for (std::size_t a = 0; a < d2rest.size(); ++a)
                for (std::size_t b = 0; b < d2rest.size(); ++b) {
                    if (a == b) continue;
                    if (!(d2rest[a] <= d[i] && d2rest[b] <= d[j] + 1)) continue;
                    std::vector<int> r2 = d2rest;
                    r2.erase(r2.begin() + std::max(a, b));
                    r2.erase(r2.begin() + std::min(a, b));
                    if (multiset_eq(rest, r2)) return 3;
                }
        }
    return 0;
}

// Closed k-walks inside f (dense labels) traversing all of f.
inline std::vector<std::vector<int>> covering_walks(const SmallGraph& f, int k) {
    std::vector<std::vector<int>> out;
    int e = f.edge_count();
    if (e == 0 || e > k || !f.connected()) return out;
    auto es = f.edges();
    std::array<std::array<int, 12>, 12> eidx{};
    for (std::size_t i = 0; i < es.size(); ++i) {
        eidx[es[i].first][es[i].second] = int(i);
        eidx[es[i].second][es[i].first] = int(i);
    }
    std::uint64_t full = (1ull << e) - 1;
    std::vector<int> walk(k + 1);
    auto rec = [&](auto&& self, int depth, std::uint64_t mask) -> void {
        int cur = walk[depth];
        if (depth == k - 1) {
            int v0 = walk[0];
            if (cur == v0 || !f.has_edge(cur, v0)) return;
            if ((mask | (1ull << eidx[cur][v0])) == full) {
                walk[k] = v0;
                out.push_back(walk);
            }
            return;
        }
        std::uint16_t nb = f.adj[cur];
        while (nb) {
            int nxt = __builtin_ctz(nb);
            nb &= std::uint16_t(nb - 1);
            walk[depth + 1] = nxt;
            self(self, depth + 1, mask | (1ull << eidx[cur][nxt]));
        }
    };
    for (int start = 0; start < f.n; ++start) {
        walk[0] = start;
        rec(rec, 0, 0);
    }
    return out;
}

} // namespace detail

// All extensions F |> F' realized by Hamming-distance-1 walk modifications,
// each tagged with the degree-sequence case it matches. Empty exactly when
// F is fully extended.
inline const std::vector<ExtensionCover>& extensions_of(const WalkShape& f, int k) {
    static std::map<std::pair<u128, int>, std::vector<ExtensionCover>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(f.code, k);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    const auto& table = enumerate_walk_shapes(k);
    if (!find_shape(table, f.code)) throw std::domain_error("extensions_of: shape not in W_k");

    std::vector<ExtensionCover> covers;
    std::map<CanonicalCode, int> found; // code -> degree case
    if (f.v < k) {                      // only C_k has v == k and it admits no extension
        auto walks = detail::covering_walks(f.rep, k);
        int fresh = f.v;
        for (const auto& w : walks) {
            for (int i = 1; i < k; ++i) {
                std::vector<int> w2 = w;
                w2[i] = fresh;
                SmallGraph g2 = shape_from_walk(w2);
                if (g2.n != f.v + 1) continue;
                if (g2.edge_count() - f.e > 1) continue;
                CanonicalCode c2 = canonical_form(g2);
                if (!found.count(c2)) {
                    int tag = detail::classify_degree_case(f.degrees, g2.degree_sequence_sorted());
                    found.emplace(c2, tag);
                }
            }
        }
    }
    for (auto [code, tag] : found) covers.push_back(ExtensionCover{f.code, code, tag});
    return cache.emplace(key, std::move(covers)).first->second;
}

// One-step extension witness: a walk at Hamming distance 1 inducing an
// extension of F_w, or nothing when F_w is fully extended.
inline std::optional<ClosedWalk> extend_walk(const ClosedWalk& w) {
    w.validate();
    const WalkShape& f = classify_walk(w);
    if (is_fully_extended(f, w.k)) return std::nullopt;
    const auto& covers = extensions_of(f, w.k);
    int fresh = *std::max_element(w.nodes.begin(), w.nodes.end()) + 1;
    for (int i = 1; i < w.k; ++i) {
        ClosedWalk w2 = w;
        w2.nodes[i] = fresh;
        SmallGraph g2 = shape_from_walk(w2.nodes);
        CanonicalCode c2 = canonical_form(g2);
        for (const auto& cov : covers)
            if (cov.to == c2) return w2;
    }
    return std::nullopt;
}

struct ShapePoset {
    int k = 0;
    std::vector<WalkShape> shapes;
    std::vector<ExtensionCover> covers;
};

inline ShapePoset build_shape_poset(int k) {
    ShapePoset p;
    p.k = k;
    p.shapes = enumerate_walk_shapes(k);
    for (const auto& s : p.shapes) {
        const auto& cov = extensions_of(s, k);
        p.covers.insert(p.covers.end(), cov.begin(), cov.end());
    }
    return p;
}

// Convenience: canonical codes of the named families.
inline CanonicalCode code_of_cycle(int n) { return canonical_form(cycle_graph(n)); }
inline CanonicalCode code_of_path(int n) { return canonical_form(path_graph(n)); }
inline CanonicalCode code_of_star(int leaves) { return canonical_form(star_graph(leaves)); }
inline CanonicalCode code_of_tadpole(int c, int l) { return canonical_form(tadpole_graph(c, l)); }

} // namespace walkcensus
