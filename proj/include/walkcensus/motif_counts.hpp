#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "walkcensus/graph.hpp"
#include "walkcensus/int128.hpp"
#include "walkcensus/small_graph.hpp"
#include "walkcensus/subgraph_counts.hpp"
#include "walkcensus/walk_shapes.hpp"

namespace walkcensus {

// ---------- trace powers ----------

namespace detail {

inline constexpr int dense_trace_threshold = 512;

// Exact Tr(A^k) by dense multiplication; n <= 512.
class DensePower {
public:
    explicit DensePower(const Graph& g) : n_(g.node_count()) {
        cur_.assign(std::size_t(n_) * n_, 0);
        adj_.assign(std::size_t(n_) * n_, 0);
        for (auto [a, b] : g.edges()) {
            adj_[std::size_t(a) * n_ + b] = 1;
            adj_[std::size_t(b) * n_ + a] = 1;
        }
        cur_ = adj_;
        exp_ = 1;
    }
    u128 trace_at(int k) {
        if (k < 1) throw std::invalid_argument("trace power k >= 1");
        if (exp_ > k) {
            cur_ = adj_;
            exp_ = 1;
        }
        while (exp_ < k) step();
        u128 t = 0;
        for (int i = 0; i < n_; ++i) t = checked_add(t, cur_[std::size_t(i) * n_ + i]);
        return t;
    }

private:
    void step() {
        std::vector<u128> next(std::size_t(n_) * n_, 0);
        for (int i = 0; i < n_; ++i) {
            const u128* row = &cur_[std::size_t(i) * n_];
            u128* out = &next[std::size_t(i) * n_];
            for (int x = 0; x < n_; ++x) {
                u128 c = row[x];
                if (c == 0) continue;
                const u128* arow = &adj_[std::size_t(x) * n_];
                for (int j = 0; j < n_; ++j)
                    if (arow[j]) out[j] = checked_add(out[j], c);
            }
        }
        cur_ = std::move(next);
        ++exp_;
    }
    int n_;
    int exp_ = 0;
    std::vector<u128> cur_, adj_;
};

// Tr(A^k) for sparse graphs via combined A^2 rows; supports k <= 8.
inline u128 trace_power_sparse(const SubgraphCounts& sc, int k) {
    const Graph& g = sc.graph();
    int n = g.node_count();
    switch (k) {
    case 1: return 0;
    case 2: return 2 * u128(g.edge_count());
    case 3: return 6 * sc.triangle_count();
    case 4: return sc.closed_walks4_total();
    case 5: return sc.closed_walks5_total();
    default: break;
    }
    if (k > 8) throw too_dense_error("sparse trace supports k <= 8");
    // rows of A^3 / A^4 accumulated into flat arrays per start vertex
    std::vector<std::uint64_t> r3(n, 0), r4(n, 0);
    std::vector<int> t3, t4;
    u128 total = 0;
    for (int a = 0; a < n; ++a) {
        t3.clear();
        for (const int* xp = g.neighbors_begin(a); xp != g.neighbors_end(a); ++xp)
            for (const auto& [b, c] : sc.full_row(*xp)) {
                if (r3[b] == 0) t3.push_back(b);
                r3[b] += std::uint64_t(c);
            }
        if (k == 6) {
            for (int b : t3) {
                total = checked_add(total, u128(r3[b]) * u128(r3[b]));
                r3[b] = 0;
            }
            continue;
        }
        t4.clear();
        for (const auto& [x, c] : sc.full_row(a))
            for (const auto& [b, c2] : sc.full_row(x)) {
                if (r4[b] == 0) t4.push_back(b);
                r4[b] += std::uint64_t(c) * std::uint64_t(c2);
            }
        if (k == 7) {
            for (int b : t4) {
                total = checked_add(total, u128(r3[b]) * u128(r4[b]));
                r4[b] = 0;
            }
        } else { // k == 8
            for (int b : t4) {
                total = checked_add(total, u128(r4[b]) * u128(r4[b]));
                r4[b] = 0;
            }
        }
        for (int b : t3) r3[b] = 0;
    }
    return total;
}

} // namespace detail

// ---------- exact cycle counting ----------

// Number of k-cycle subgraphs of K_n: (n)_k / 2k.
inline u128 cycle_count_complete(std::uint64_t n, int k) {
    if (k < 3) throw std::invalid_argument("cycles need k >= 3");
    if (n < std::uint64_t(k)) return 0;
    return falling_factorial(n, unsigned(k)) / u128(2 * k);
}

// Method A (reference): pruned DFS rooted at the smallest-index vertex,
// each cycle counted once via direction dedup.
inline u128 cycle_count_dfs(const Graph& g, int k) {
    if (k < 3 || k > max_scale) throw std::invalid_argument("cycle_count: need 3 <= k <= 9");
    int n = g.node_count();
    u128 total = 0;
    std::vector<char> used(n, 0);
    std::vector<int> path(k);
    std::uint64_t visits = 0;
    auto rec = [&](auto&& self, int depth) -> void {
        if (++visits > 4000000000ull) throw too_dense_error("cycle DFS exceeds budget");
        int cur = path[depth - 1];
        int anchor = path[0];
        if (depth == k) {
            if (g.has_edge(cur, anchor)) ++total;
            return;
        }
        for (const int* vp = g.neighbors_begin(cur); vp != g.neighbors_end(cur); ++vp) {
            int v = *vp;
            if (v <= anchor || used[v]) continue;
            used[v] = 1;
            path[depth] = v;
            self(self, depth + 1);
            used[v] = 0;
        }
    };
    for (int a = 0; a < n; ++a) {
        path[0] = a;
        used[a] = 1;
        rec(rec, 1);
        used[a] = 0;
    }
    return total / 2;
}

// Bidirectional variant of method A: meets two anchored simple paths in the
// middle; exact, and fast enough for k in {8,9} on sparse graphs.
inline u128 cycle_count_mitm(const Graph& g, int k) {
    if (k < 3 || k > max_scale) throw std::invalid_argument("cycle_count: need 3 <= k <= 9");
    int n = g.node_count();
    int l1 = k / 2, l2 = k - l1;
    struct PathRec {
        std::array<int, 4> internal;
        int len = 0;
    };
    std::vector<std::vector<PathRec>> bucket(n);
    std::vector<int> touched;
    std::vector<char> used(n, 0);
    u128 total = 0;
    std::uint64_t visits = 0;

    auto disjoint = [](const PathRec& p, const PathRec& q) {
        for (int i = 0; i < p.len; ++i)
            for (int j = 0; j < q.len; ++j)
                if (p.internal[i] == q.internal[j]) return false;
        return true;
    };

    std::vector<int> path;
    for (int a = 0; a < n; ++a) {
        touched.clear();
        used[a] = 1;
        path.assign(1, a);
        // store paths of length l1 from a
        auto store = [&](auto&& self, int depth) -> void {
            if (++visits > 4000000000ull) throw too_dense_error("cycle search exceeds budget");
            int cur = path.back();
            if (depth == l1) {
                if (bucket[cur].empty()) touched.push_back(cur);
                PathRec r;
                r.len = l1 - 1;
                for (int i = 0; i < r.len; ++i) r.internal[i] = path[1 + i];
                bucket[cur].push_back(r);
                return;
            }
            for (const int* vp = g.neighbors_begin(cur); vp != g.neighbors_end(cur); ++vp) {
                int v = *vp;
                if (v <= a || used[v]) continue;
                used[v] = 1;
                path.push_back(v);
                self(self, depth + 1);
                path.pop_back();
                used[v] = 0;
            }
        };
        store(store, 0);

        if (l1 == l2) {
            for (int x : touched) {
                auto& vec = bucket[x];
                for (std::size_t i = 0; i < vec.size(); ++i)
                    for (std::size_t j = i + 1; j < vec.size(); ++j)
                        if (disjoint(vec[i], vec[j])) ++total;
            }
        } else {
            // probe with paths of length l2
            u128 found = 0;
            auto probe = [&](auto&& self, int depth) -> void {
                if (++visits > 4000000000ull) throw too_dense_error("cycle search exceeds budget");
                int cur = path.back();
                if (depth == l2) {
                    auto& vec = bucket[cur];
                    if (vec.empty()) return;
                    PathRec r;
                    r.len = l2 - 1;
                    for (int i = 0; i < r.len; ++i) r.internal[i] = path[1 + i];
                    for (const auto& p : vec)
                        if (disjoint(p, r)) ++found;
                    return;
                }
                for (const int* vp = g.neighbors_begin(cur); vp != g.neighbors_end(cur); ++vp) {
                    int v = *vp;
                    if (v <= a || used[v]) continue;
                    used[v] = 1;
                    path.push_back(v);
                    self(self, depth + 1);
                    path.pop_back();
                    used[v] = 0;
                }
            };
            path.assign(1, a);
            probe(probe, 0);
            total = checked_add(total, found / 2);
        }
        used[a] = 0;
        for (int x : touched) bucket[x].clear();
    }
    return total;
}

class MotifCounter;
u128 cycle_count_trace(MotifCounter& mc, int k);

// Per-graph counter with shared lazy structure: one SubgraphCounts and one
// dense power ladder serve every scale.
class MotifCounter {
public:
    explicit MotifCounter(const Graph& g) : g_(g) {}

    const Graph& graph() const { return g_; }

    SubgraphCounts& subgraph_counts() {
        if (!sc_) sc_.emplace(g_);
        return *sc_;
    }

    bool is_complete() const {
        return u128(g_.edge_count()) == binomial_u128(std::uint64_t(g_.node_count()), 2);
    }

    // Tr(A^k), exact.
    u128 closed_walk_count(int k) {
        if (k < 1) throw std::invalid_argument("closed_walk_count: k >= 1");
        auto it = trace_.find(k);
        if (it != trace_.end()) return it->second;
        u128 t;
        if (k == 1)
            t = 0;
        else if (k == 2)
            t = 2 * u128(g_.edge_count());
        else if (g_.node_count() <= detail::dense_trace_threshold) {
            if (!dense_) dense_.emplace(g_);
            t = dense_->trace_at(k);
        } else {
            t = detail::trace_power_sparse(subgraph_counts(), k);
        }
        trace_[k] = t;
        return t;
    }

    // Exact k-cycle subgraph count; trace route for k <= 7, bidirectional
    // DFS for k in {8,9}, closed form on complete graphs.
    u128 cycle_count(int k) {
        if (k < 3 || k > max_scale) throw std::invalid_argument("cycle_count: need 3 <= k <= 9");
        auto it = cycles_.find(k);
        if (it != cycles_.end()) return it->second;
        u128 c;
        if (is_complete())
            c = cycle_count_complete(std::uint64_t(g_.node_count()), k);
        else if (k <= 7)
            c = cycle_count_trace(*this, k);
        else
            c = cycle_count_mitm(g_, k);
        cycles_[k] = c;
        return c;
    }

    // X_F(G) for the shapes the analytic layer asks about (trees to five
    // vertices, cycles, tadpoles, and the rest of W_6 and W_7).
    u128 shape_count(CanonicalCode code) {
        build_registry();
        auto it = registry_.find(code);
        if (it == registry_.end()) throw std::invalid_argument("no closed-form counter for this shape");
        return it->second();
    }
    bool shape_supported(CanonicalCode code) {
        build_registry();
        return registry_.count(code) > 0;
    }

    // ind_k(F, G) = ind_k(F,F) X_F(G) through the closed-form counters.
    u128 shape_walk_count(const SmallGraph& f, int k) {
        u128 ind = ind_self_count(f, k);
        if (ind == 0) return 0;
        return checked_mul(ind, shape_count(canonical_form(f)));
    }

    std::pair<u128, u128> two_path_counts() {
        if (g_.node_count() < 3) throw std::domain_error("two_path_counts needs n >= 3");
        u128 paths = 0, sumdeg = 0;
        for (int v = 0; v < g_.node_count(); ++v) {
            std::uint64_t d = std::uint64_t(g_.degree(v));
            if (d >= 2) paths += u128(d) * u128(d - 1) / 2;
            sumdeg += d;
        }
        u128 norm = u128(g_.node_count() - 2) * sumdeg / 2;
        return {paths, norm};
    }

    // t_2 from the two-path ratio, t_k as the k-th root of the cycle
    // proportion; all in [0,1].
    std::vector<double> scale_summaries(int k_max) {
        if (k_max < 2) throw std::invalid_argument("scale_summaries: k_max >= 2");
        if (g_.node_count() <= k_max) throw std::invalid_argument("scale_summaries: need n > k_max");
        std::vector<double> t(k_max + 1, 0.0);
        auto [paths, norm] = two_path_counts();
        t[2] = norm == 0 ? 0.0 : to_double(paths) / to_double(norm);
        for (int k = 3; k <= k_max; ++k) {
            u128 ck = cycle_count(k);
            u128 total = cycle_count_complete(std::uint64_t(g_.node_count()), k);
            double prop = total == 0 ? 0.0 : to_double(ck) / to_double(total);
            t[k] = std::pow(prop, 1.0 / double(k));
        }
        for (int k = 2; k <= k_max; ++k) t[k] = std::clamp(t[k], 0.0, 1.0);
        return t;
    }

    u128 nb_closed_walk_count(int k);

private:
    void build_registry();

    const Graph& g_;
    std::optional<SubgraphCounts> sc_;
    std::optional<detail::DensePower> dense_;
    std::map<int, u128> trace_;
    std::map<int, u128> cycles_;
    std::map<CanonicalCode, std::function<u128()>> registry_;
};

inline void MotifCounter::build_registry() {
    if (!registry_.empty()) return;
    auto& sc = subgraph_counts();
    auto reg = [&](const SmallGraph& g, std::function<u128()> fn) {
        registry_.emplace(canonical_form(g), std::move(fn));
    };
    reg(path_graph(2), [&sc] { return sc.count_p2(); });
    reg(path_graph(3), [&sc] { return sc.count_p3(); });
    reg(path_graph(4), [&sc] { return sc.count_p4(); });
    reg(path_graph(5), [&sc] { return sc.count_p5(); });
    reg(star_graph(3), [&sc] { return sc.count_k13(); });
    reg(star_graph(4), [&sc] { return sc.count_k14(); });
    { // spider: star with one subdivided leg
        SmallGraph sp;
        sp.n = 5;
        sp.add_edge(0, 1);
        sp.add_edge(0, 2);
        sp.add_edge(0, 3);
        sp.add_edge(3, 4);
        reg(sp, [&sc] { return sc.count_spider112(); });
    }
    for (int c = 3; c <= max_scale; ++c)
        registry_.emplace(code_of_cycle(c), [this, c] { return cycle_count(c); });
    reg(tadpole_graph(3, 1), [&sc] { return sc.count_c3p2(); });
    reg(tadpole_graph(4, 1), [&sc] { return sc.count_c4p2(); });
    reg(tadpole_graph(5, 1), [&sc] { return sc.count_c5p2(); });
    reg(tadpole_graph(3, 2), [&sc] { return sc.count_c3p3(); });
    reg(lemniscate_graph(3, 3), [&sc] { return sc.count_c3c3(); });
    reg(lemniscate_graph(3, 4), [&sc] { return sc.count_c3c4(); });
    { // diamond
        SmallGraph d = cycle_graph(4);
        d.add_edge(0, 2);
        reg(d, [&sc] { return sc.count_diamond(); });
    }
    { // book with three pages: K_{2,3} plus the spine edge
        SmallGraph b;
        b.n = 5;
        b.add_edge(0, 1);
        for (int p = 2; p <= 4; ++p) {
            b.add_edge(0, p);
            b.add_edge(1, p);
        }
        reg(b, [&sc] { return sc.count_book3(); });
    }
    { // bull: triangle plus pendants at two vertices
        SmallGraph b = cycle_graph(3);
        b.n = 5;
        b.add_edge(0, 3);
        b.add_edge(1, 4);
        reg(b, [&sc] { return sc.count_bull(); });
    }
    reg(triangle_star_graph(2), [&sc] { return sc.count_cricket(); }); // cricket
    { // house: C_5 with one chord
        SmallGraph h = cycle_graph(5);
        h.add_edge(0, 2);
        reg(h, [&sc] { return sc.count_house(); });
    }
}

// Method B: the walk-partition identity solved for the k-cycle term,
// Tr(A^k) minus every non-cycle shape's walk count. Exact for k <= 7.
inline u128 cycle_count_trace(MotifCounter& mc, int k) {
    if (k < 3 || k > 7) throw std::invalid_argument("cycle_count_trace: need 3 <= k <= 7");
    const auto& shapes = enumerate_walk_shapes(k);
    CanonicalCode target = code_of_cycle(k);
    u128 walks = mc.closed_walk_count(k);
    u128 ind_cycle = 0;
    for (const auto& s : shapes) {
        u128 ind = s.ind_self.at(k);
        if (s.code == target) {
            ind_cycle = ind;
            continue;
        }
        u128 contrib = checked_mul(ind, mc.shape_count(s.code));
        if (contrib > walks) throw std::logic_error("walk partition underflow");
        walks -= contrib;
    }
    return walks / ind_cycle;
}

// ---------- non-backtracking counts ----------

namespace detail {

// Exact Tr(B^k) from the Ihara-Bass companion matrix
//   M = [[A, I-D],[I,0]],  Tr(B^k) = Tr(M^k) + (m-n)(1+(-1)^k).
inline u128 nb_trace_companion(const Graph& g, int k) {
    int n = g.node_count();
    int N = 2 * n;
    std::vector<i128> M(std::size_t(N) * N, 0), cur;
    for (auto [a, b] : g.edges()) {
        M[std::size_t(a) * N + b] = 1;
        M[std::size_t(b) * N + a] = 1;
    }
    for (int v = 0; v < n; ++v) {
        M[std::size_t(v) * N + n + v] = 1 - i128(g.degree(v));
        M[std::size_t(n + v) * N + v] = 1;
    }
    cur = M;
    for (int step = 2; step <= k; ++step) {
        std::vector<i128> next(std::size_t(N) * N, 0);
        for (int i = 0; i < N; ++i)
            for (int x = 0; x < N; ++x) {
                i128 c = cur[std::size_t(i) * N + x];
                if (c == 0) continue;
                const i128* mrow = &M[std::size_t(x) * N];
                i128* out = &next[std::size_t(i) * N];
                for (int j = 0; j < N; ++j)
                    if (mrow[j]) out[j] += c * mrow[j];
            }
        cur = std::move(next);
    }
    i128 tr = 0;
    for (int i = 0; i < N; ++i) tr += cur[std::size_t(i) * N + i];
    i128 corr = (i128(g.edge_count()) - n) * ((k % 2 == 0) ? 2 : 0);
    i128 total = tr + corr;
    if (total < 0) throw std::logic_error("negative non-backtracking trace");
    return u128(total);
}

// Exact Tr(B^k) on sparse graphs by meeting two directed-edge DFS halves.
inline u128 nb_trace_split(const Graph& g, int k) {
    std::size_t m = g.edge_count();
    std::size_t dir = 2 * m;
    int n = g.node_count();
    // directed edge ids: 2i = (u->v), 2i+1 = (v->u) for edge i = (u,v);
    // out[v] lists the directed edges leaving v, so rev(e) = e ^ 1 is the
    // only continuation ever skipped
    std::vector<std::uint32_t> out_off(n + 1, 0), outs(dir);
    const auto& edges = g.edges();
    for (auto [u, v] : edges) {
        ++out_off[u + 1];
        ++out_off[v + 1];
    }
    for (int v = 0; v < n; ++v) out_off[v + 1] += out_off[v];
    {
        std::vector<std::uint32_t> cur(out_off.begin(), out_off.end() - 1);
        for (std::size_t i = 0; i < m; ++i) {
            auto [u, v] = edges[i];
            outs[cur[u]++] = std::uint32_t(2 * i);
            outs[cur[v]++] = std::uint32_t(2 * i + 1);
        }
    }
    std::vector<int> head(dir);
    for (std::size_t i = 0; i < m; ++i) {
        head[2 * i] = edges[i].second;
        head[2 * i + 1] = edges[i].first;
    }
    int a = (k + 1) / 2, b = k - a;
    std::vector<std::uint64_t> rowa(dir, 0), rowb(dir, 0);
    std::vector<std::uint32_t> ta, tb;
    // DFS accumulating row of B^len starting from directed edge e
    auto walk = [&](std::uint32_t e0, int len, std::vector<std::uint64_t>& row,
                    std::vector<std::uint32_t>& touched) {
        touched.clear();
        auto rec = [&](auto&& self, std::uint32_t e, int depth) -> void {
            if (depth == len) {
                if (row[e] == 0) touched.push_back(e);
                ++row[e];
                return;
            }
            int v = head[e];
            std::uint32_t rev = e ^ 1u;
            for (std::uint32_t idx = out_off[v]; idx < out_off[v + 1]; ++idx) {
                std::uint32_t f = outs[idx];
                if (f == rev) continue;
                self(self, f, depth + 1);
            }
        };
        rec(rec, e0, 0);
    };
    u128 total = 0;
    for (std::uint32_t e = 0; e < dir; ++e) {
        std::uint32_t erev = e ^ 1u;
        walk(e, a, rowa, ta);
        walk(erev, b, rowb, tb);
        u128 dot = 0;
        for (std::uint32_t f : ta) {
            std::uint64_t other = rowb[f ^ 1u];
            if (other) dot += u128(rowa[f]) * u128(other);
        }
        total = checked_add(total, dot);
        for (std::uint32_t f : tb) rowb[f] = 0;
        for (std::uint32_t f : ta) rowa[f] = 0;
    }
    return total;
}

} // namespace detail

inline u128 MotifCounter::nb_closed_walk_count(int k) {
    if (k < 3) throw std::invalid_argument("nb_closed_walk_count: k >= 3");
    if (g_.node_count() <= 300) return detail::nb_trace_companion(g_, k);
    if (k <= 8) {
        double mu = g_.node_count() ? 2.0 * double(g_.edge_count()) / double(g_.node_count()) : 0.0;
        double est = 2.0 * double(g_.edge_count()) * std::pow(std::max(mu, 2.0), double((k + 1) / 2));
        if (est < 4.0e9) return detail::nb_trace_split(g_, k);
    }
    throw too_dense_error("non-backtracking trace not feasible at this size");
}

// ---------- free functions mirroring the per-operation contracts ----------

inline u128 closed_walk_count(const Graph& g, int k) { return MotifCounter(g).closed_walk_count(k); }
inline u128 nb_closed_walk_count(const Graph& g, int k) { return MotifCounter(g).nb_closed_walk_count(k); }
inline u128 cycle_count(const Graph& g, int k) { return MotifCounter(g).cycle_count(k); }
inline std::pair<u128, u128> two_path_counts(const Graph& g) { return MotifCounter(g).two_path_counts(); }
inline std::vector<double> scale_summaries(const Graph& g, int k_max) {
    return MotifCounter(g).scale_summaries(k_max);
}

// ---------- embeddings into a host graph, ind counts, walk density ----------

// Exhaustive embedding count of a small pattern into a host graph; desk
// scale only (v <= 10, n <= 64).
inline u128 count_embeddings(const SmallGraph& pat, const Graph& host) {
    if (pat.n > 10 || host.node_count() > 64)
        throw std::invalid_argument("count_embeddings: exhaustive search limited to v <= 10, n <= 64");
    if (pat.n > host.node_count()) return 0;
    std::vector<int> order;
    std::vector<bool> placed(pat.n, false);
    for (int step = 0; step < pat.n; ++step) {
        int pick = -1, best = -1;
        for (int v = 0; v < pat.n; ++v) {
            if (placed[v]) continue;
            int links = 0;
            for (int u : order)
                if (pat.has_edge(v, u)) ++links;
            if (links > best || (links == best && pick >= 0 && pat.degree(v) > pat.degree(pick))) {
                best = links;
                pick = v;
            }
        }
        order.push_back(pick);
        placed[pick] = true;
    }
    u128 total = 0;
    std::array<int, 10> map{};
    std::uint64_t used = 0;
    auto rec = [&](auto&& self, int step) -> void {
        if (step == pat.n) {
            ++total;
            return;
        }
        int pv = order[step];
        for (int hv = 0; hv < host.node_count(); ++hv) {
            if ((used >> hv) & 1ull) continue;
            if (host.degree(hv) < pat.degree(pv)) continue;
            bool ok = true;
            for (int i = 0; i < step && ok; ++i)
                if (pat.has_edge(pv, order[i]) && !host.has_edge(hv, map[order[i]])) ok = false;
            if (!ok) continue;
            map[pv] = hv;
            used |= 1ull << hv;
            self(self, step + 1);
            used &= ~(1ull << hv);
        }
    };
    rec(rec, 0);
    return total;
}

// X_F(G) = emb(F,G)/aut(F), exhaustive.
inline u128 subgraph_copies(const SmallGraph& pat, const Graph& host) {
    u128 emb = count_embeddings(pat, host);
    return emb / automorphism_order(pat);
}

// ind_k(F,G) = ind_k(F,F) X_F(G).
inline u128 ind_count(const SmallGraph& f, const Graph& g, int k) {
    if (f.n > g.node_count()) return 0;
    u128 ind = ind_self_count(f, k);
    if (ind == 0) return 0;
    return checked_mul(ind, subgraph_copies(f, g));
}

// Graph walk density X_F(G)/X_F(K_n) as an exact rational.
inline Rat128 graph_walk_density(const SmallGraph& f, const Graph& g) {
    if (f.n > g.node_count()) throw std::invalid_argument("graph_walk_density: pattern larger than host");
    u128 copies = subgraph_copies(f, g);
    u128 denom = falling_factorial(std::uint64_t(g.node_count()), unsigned(f.n));
    return Rat128(checked_mul(copies, automorphism_order(f)), denom);
}

// ---------- brute-force walk censuses (test oracles) ----------

namespace detail {
struct U128Hash {
    std::size_t operator()(u128 v) const {
        return std::hash<std::uint64_t>()(std::uint64_t(v)) ^
               (std::hash<std::uint64_t>()(std::uint64_t(v >> 64)) * 0x9e3779b97f4a7c15ULL);
    }
};
} // namespace detail

// Exhaustive census of closed k-walks by induced shape; n <= 14, k <= 8.
inline std::map<CanonicalCode, u128> brute_force_walk_census(const Graph& g, int k, bool nb = false) {
    if (g.node_count() > 14 || k > 8) throw std::invalid_argument("brute census limited to n <= 14, k <= 8");
    if (nb && k < 3) throw std::invalid_argument("non-backtracking census needs k >= 3");
    int n = g.node_count();
    auto pidx = [n](int a, int b) {
        if (a > b) std::swap(a, b);
        return a * n - a * (a + 1) / 2 + (b - a - 1);
    };
    std::unordered_map<u128, u128, detail::U128Hash> tally;
    std::vector<int> walk(k + 1);
    std::vector<int> edge_use(n * (n - 1) / 2, 0);
    u128 mask = 0;
    auto rec = [&](auto&& self, int depth) -> void {
        int cur = walk[depth];
        int v0 = walk[0];
        if (depth == k - 1) {
            if (cur == v0 || !g.has_edge(cur, v0)) return;
            if (nb) {
                if (walk[depth - 1] == v0) return;
                if (walk[1] == cur) return;
            }
            ++tally[mask | (u128(1) << pidx(cur, v0))];
            return;
        }
        for (const int* vp = g.neighbors_begin(cur); vp != g.neighbors_end(cur); ++vp) {
            int nxt = *vp;
            if (nb && depth >= 1 && nxt == walk[depth - 1]) continue;
            int ei = pidx(cur, nxt);
            walk[depth + 1] = nxt;
            bool fresh = edge_use[ei]++ == 0;
            if (fresh) mask |= u128(1) << ei;
            self(self, depth + 1);
            if (--edge_use[ei] == 0) mask &= ~(u128(1) << ei);
        }
    };
    for (int start = 0; start < n; ++start) {
        if (g.degree(start) == 0) continue;
        walk[0] = start;
        rec(rec, 0);
    }
    std::map<CanonicalCode, u128> out;
    std::unordered_map<u128, CanonicalCode, detail::U128Hash> canon_cache;
    for (auto [m, cnt] : tally) {
        auto it = canon_cache.find(m);
        CanonicalCode code;
        if (it != canon_cache.end())
            code = it->second;
        else {
            std::vector<int> nodes;
            SmallGraph sg;
            std::vector<std::pair<int, int>> es;
            std::vector<char> present(n, 0);
            for (int a = 0; a < n; ++a)
                for (int b = a + 1; b < n; ++b)
                    if ((m >> pidx(a, b)) & 1) {
                        es.emplace_back(a, b);
                        present[a] = present[b] = 1;
                    }
            std::vector<int> ids;
            for (int v = 0; v < n; ++v)
                if (present[v]) ids.push_back(v);
            sg.n = int(ids.size());
            auto dense = [&](int v) {
                return int(std::lower_bound(ids.begin(), ids.end(), v) - ids.begin());
            };
            for (auto [a, b] : es) sg.add_edge(dense(a), dense(b));
            code = canonical_form(sg);
            canon_cache.emplace(m, code);
        }
        out[code] += cnt;
    }
    return out;
}

inline std::map<CanonicalCode, u128> brute_force_nb_census(const Graph& g, int k) {
    return brute_force_walk_census(g, k, true);
}

// ---------- census record for the CLI ----------

struct CensusResult {
    int k_max = 0;
    std::vector<u128> closed_walks;      // index k
    std::vector<u128> nb_closed_walks;   // index k, 0 below k=3
    std::map<int, u128> cycles;          // k -> count
    u128 two_paths = 0;
    u128 two_path_norm = 0;
};

inline CensusResult run_census(const Graph& g, int k_max) {
    if (k_max < 2 || k_max > max_scale) throw std::invalid_argument("census: need 2 <= k_max <= 9");
    CensusResult r;
    r.k_max = k_max;
    MotifCounter mc(g);
    r.closed_walks.assign(k_max + 1, 0);
    r.nb_closed_walks.assign(k_max + 1, 0);
    for (int k = 2; k <= k_max; ++k) r.closed_walks[k] = mc.closed_walk_count(k);
    for (int k = 3; k <= k_max; ++k) r.nb_closed_walks[k] = mc.nb_closed_walk_count(k);
    for (int k = 3; k <= k_max; ++k) r.cycles[k] = mc.cycle_count(k);
    if (g.node_count() >= 3) {
        auto [p, norm] = mc.two_path_counts();
        r.two_paths = p;
        r.two_path_norm = norm;
    }
    return r;
}

} // namespace walkcensus
