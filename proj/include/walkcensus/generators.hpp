#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "walkcensus/graph.hpp"
#include "walkcensus/prng.hpp"

namespace walkcensus {

// Bounded symmetric kernel on (0,1)^2 with ||kappa||_1 = 1. Piecewise
// constant forms keep every embedding density computable in closed form.
struct Kernel {
    enum class Form { constant, blockmodel, rank_one };
    Form form = Form::constant;
    std::vector<double> block_sizes;         // sums to 1
    std::vector<std::vector<double>> values; // blockmodel: B x B symmetric
    std::vector<double> rank_values;         // rank_one: a(x) per block

    static Kernel constant() { return Kernel{}; }

    static Kernel blockmodel(std::vector<double> sizes, std::vector<std::vector<double>> vals) {
        Kernel k;
        k.form = Form::blockmodel;
        k.block_sizes = std::move(sizes);
        k.values = std::move(vals);
        k.validate();
        return k;
    }

    static Kernel rank_one(std::vector<double> sizes, std::vector<double> a) {
        Kernel k;
        k.form = Form::rank_one;
        k.block_sizes = std::move(sizes);
        k.rank_values = std::move(a);
        k.validate();
        return k;
    }

    std::size_t blocks() const {
        return form == Form::constant ? 1 : block_sizes.size();
    }

    double block_value(std::size_t a, std::size_t b) const {
        switch (form) {
        case Form::constant: return 1.0;
        case Form::blockmodel: return values[a][b];
        case Form::rank_one: return rank_values[a] * rank_values[b];
        }
        return 1.0;
    }

    double block_size(std::size_t a) const { return form == Form::constant ? 1.0 : block_sizes[a]; }

    double sup_norm() const {
        double m = 0;
        for (std::size_t a = 0; a < blocks(); ++a)
            for (std::size_t b = 0; b < blocks(); ++b) m = std::max(m, block_value(a, b));
        return m;
    }

    void validate() const {
        if (form == Form::constant) return;
        if (block_sizes.empty()) throw std::invalid_argument("kernel: empty block partition");
        double total = std::accumulate(block_sizes.begin(), block_sizes.end(), 0.0);
        if (std::fabs(total - 1.0) > 1e-9) throw std::invalid_argument("kernel: block sizes must sum to 1");
        for (double s : block_sizes)
            if (s <= 0) throw std::invalid_argument("kernel: block sizes must be positive");
        if (form == Form::blockmodel) {
            if (values.size() != block_sizes.size()) throw std::invalid_argument("kernel: value matrix shape");
            for (std::size_t a = 0; a < values.size(); ++a) {
                if (values[a].size() != block_sizes.size())
                    throw std::invalid_argument("kernel: value matrix shape");
                for (std::size_t b = 0; b < values.size(); ++b) {
                    if (values[a][b] < 0) throw std::invalid_argument("kernel: negative value");
                    if (std::fabs(values[a][b] - values[b][a]) > 1e-12)
                        throw std::invalid_argument("kernel: asymmetric values");
                }
            }
        } else if (rank_values.size() != block_sizes.size()) {
            throw std::invalid_argument("kernel: rank-one values shape");
        }
        double one = 0;
        for (std::size_t a = 0; a < blocks(); ++a)
            for (std::size_t b = 0; b < blocks(); ++b)
                one += block_size(a) * block_size(b) * block_value(a, b);
        if (std::fabs(one - 1.0) > 1e-6) throw std::invalid_argument("kernel: ||kappa||_1 must equal 1");
    }
};

struct KernelModel {
    int n = 0;
    double rho = 0;
    Kernel kappa;

    KernelModel(int n_, double rho_, Kernel k) : n(n_), rho(rho_), kappa(std::move(k)) {
        if (n < 1) throw std::invalid_argument("kernel model: n >= 1");
        if (!(rho > 0) || !(rho < 1.0 / kappa.sup_norm()))
            throw std::invalid_argument("kernel model: need rho in (0, 1/||kappa||_inf)");
    }
    double mu() const { return double(n) * rho; }
};

struct PowerLawModel {
    int n = 0;
    double gamma = 0;
    double theta = 1;

    PowerLawModel(int n_, double gamma_, double theta_) : n(n_), gamma(gamma_), theta(theta_) {
        if (n < 1) throw std::invalid_argument("power-law model: n >= 1");
        if (!(gamma > 0)) throw std::invalid_argument("power-law model: gamma > 0");
        if (!(theta > 0 && theta <= 1)) throw std::invalid_argument("power-law model: theta in (0,1]");
    }
    // 1-indexed node pair probability theta^2 (ij)^{-gamma}
    double edge_probability(int i, int j) const {
        return theta * theta * std::pow(double(i + 1) * double(j + 1), -gamma);
    }
    double beta_n() const { return std::fabs(std::log(theta)) / std::log(double(n)); }
};

namespace detail {

// Bernoulli(p) over an indexable pair range via geometric skipping.
template <typename EmitPair>
inline void skip_sample(CounterRng& rng, std::uint64_t count, double p, EmitPair&& emit) {
    if (p <= 0 || count == 0) return;
    if (p >= 1) {
        for (std::uint64_t i = 0; i < count; ++i) emit(i);
        return;
    }
    std::uint64_t i = rng.geometric_skip(p);
    while (i < count) {
        emit(i);
        std::uint64_t step = rng.geometric_skip(p);
        if (step == ~std::uint64_t(0) || i + step + 1 < i) break;
        i += step + 1;
    }
}

} // namespace detail

// Latent-position sampler: draw block labels from the kernel's partition of
// (0,1), then independent edges with probability rho kappa(x_i, x_j).
// `clip` caps per-pair probabilities at one (used by the rate experiment,
// where the requested mean degree can exceed the model's admissible range).
inline Graph sample_kernel_graph_impl(int n, double rho, const Kernel& kappa, std::uint64_t seed,
                                      bool clip) {
    std::size_t nblocks = kappa.blocks();
    std::vector<std::vector<int>> members(nblocks);
    {
        CounterRng latents(seed, Stream::latents);
        std::vector<double> cum(nblocks);
        double acc = 0;
        for (std::size_t b = 0; b < nblocks; ++b) {
            acc += kappa.block_size(b);
            cum[b] = acc;
        }
        for (int v = 0; v < n; ++v) {
            double x = latents.next_double();
            std::size_t b = std::size_t(std::lower_bound(cum.begin(), cum.end(), x) - cum.begin());
            if (b >= nblocks) b = nblocks - 1;
            members[b].push_back(v);
        }
    }
    std::vector<std::pair<int, int>> edges;
    for (std::size_t a = 0; a < nblocks; ++a) {
        for (std::size_t b = a; b < nblocks; ++b) {
            double p = rho * kappa.block_value(a, b);
            if (clip) p = std::min(p, 1.0);
            else if (p > 1.0) throw std::invalid_argument("kernel sampling: rho kappa exceeds 1");
            CounterRng pair_rng(seed, Stream::edges, a * nblocks + b);
            const auto& A = members[a];
            const auto& B = members[b];
            if (a == b) {
                std::uint64_t m = A.size();
                if (m < 2) continue;
                detail::skip_sample(pair_rng, m * (m - 1) / 2, p, [&](std::uint64_t idx) {
                    // linear index over pairs i < j
                    std::uint64_t i = std::uint64_t((1.0 + std::sqrt(1.0 + 8.0 * double(idx))) / 2.0);
                    while (i * (i - 1) / 2 > idx) --i;
                    while ((i + 1) * i / 2 <= idx) ++i;
                    std::uint64_t j = idx - i * (i - 1) / 2;
                    edges.emplace_back(A[j], A[i]);
                });
            } else {
                if (A.empty() || B.empty()) continue;
                detail::skip_sample(pair_rng, A.size() * B.size(), p, [&](std::uint64_t idx) {
                    edges.emplace_back(A[idx / B.size()], B[idx % B.size()]);
                });
            }
        }
    }
    return Graph(n, edges);
}

inline Graph sample_kernel_graph(const KernelModel& m, std::uint64_t seed) {
    return sample_kernel_graph_impl(m.n, m.rho, m.kappa, seed, false);
}

inline Graph sample_powerlaw_graph(const PowerLawModel& m, std::uint64_t seed) {
    CounterRng rng(seed, Stream::edges);
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < m.n; ++i)
        for (int j = i + 1; j < m.n; ++j)
            if (rng.bernoulli(m.edge_probability(i, j))) edges.emplace_back(i, j);
    return Graph(m.n, edges);
}

inline Graph sample_erdos_renyi(int n, double p, std::uint64_t seed) {
    if (n < 0 || p < 0 || p > 1) throw std::invalid_argument("erdos-renyi: need n >= 0, p in [0,1]");
    std::vector<std::pair<int, int>> edges;
    CounterRng rng(seed, Stream::edges);
    std::uint64_t total = std::uint64_t(n) * (n - 1) / 2;
    detail::skip_sample(rng, total, p, [&](std::uint64_t idx) {
        std::uint64_t i = std::uint64_t((1.0 + std::sqrt(1.0 + 8.0 * double(idx))) / 2.0);
        while (i * (i - 1) / 2 > idx) --i;
        while ((i + 1) * i / 2 <= idx) ++i;
        std::uint64_t j = idx - i * (i - 1) / 2;
        edges.emplace_back(int(j), int(i));
    });
    return Graph(n, edges);
}

// Ring lattice joining each node to `neighbors` nodes on each side, then
// rewiring every lattice edge with probability p_rewire.
inline Graph sample_watts_strogatz(int n, int neighbors, double p_rewire, std::uint64_t seed) {
    if (n < 3 || neighbors < 1 || 2 * neighbors >= n)
        throw std::invalid_argument("watts-strogatz: need n >= 3 and 1 <= neighbors < n/2");
    if (p_rewire < 0 || p_rewire > 1) throw std::invalid_argument("watts-strogatz: p in [0,1]");
    std::vector<std::unordered_set<int>> adj(n);
    auto connect = [&](int a, int b) {
        adj[a].insert(b);
        adj[b].insert(a);
    };
    for (int u = 0; u < n; ++u)
        for (int j = 1; j <= neighbors; ++j) connect(u, (u + j) % n);
    CounterRng rng(seed, Stream::rewires);
    for (int u = 0; u < n; ++u) {
        for (int j = 1; j <= neighbors; ++j) {
            int v = (u + j) % n;
            if (!rng.bernoulli(p_rewire)) continue;
            if (int(adj[u].size()) >= n - 1) continue; // already saturated
            int w;
            do {
                w = int(rng.below(std::uint64_t(n)));
            } while (w == u || adj[u].count(w));
            adj[u].erase(v);
            adj[v].erase(u);
            connect(u, w);
        }
    }
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < n; ++u)
        for (int v : adj[u])
            if (v > u) edges.emplace_back(u, v);
    return Graph(n, edges);
}

// Classic one-edge-per-arrival preferential attachment; always a tree.
inline Graph sample_pref_attachment(int n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("preferential attachment: n >= 1");
    CounterRng rng(seed, Stream::edges);
    std::vector<std::pair<int, int>> edges;
    std::vector<int> chances; // one entry per edge endpoint
    for (int t = 1; t < n; ++t) {
        int target = t == 1 ? 0 : chances[rng.below(chances.size())];
        edges.emplace_back(target, t);
        chances.push_back(target);
        chances.push_back(t);
    }
    return Graph(n, edges);
}

// Repeatedly close random triangles while deleting a random other edge,
// keeping |E| fixed: sample a node triplet, mark one node, and if the marked
// node connects to both others with the third edge absent, add it and drop a
// uniformly random different edge.
inline Graph triadic_closure_rewire(const Graph& g, std::uint64_t iterations, std::uint64_t seed) {
    int n = g.node_count();
    if (n < 3) return g;
    std::vector<std::unordered_set<int>> adj(n);
    std::vector<std::pair<int, int>> edges = g.edges();
    for (auto [a, b] : edges) {
        adj[a].insert(b);
        adj[b].insert(a);
    }
    CounterRng rng(seed, Stream::rewires);
    for (std::uint64_t it = 0; it < iterations; ++it) {
        int a, b, c;
        do {
            a = int(rng.below(std::uint64_t(n)));
            b = int(rng.below(std::uint64_t(n)));
            c = int(rng.below(std::uint64_t(n)));
        } while (a == b || a == c || b == c);
        // `a` is the marked node of the triplet
        if (!adj[a].count(b) || !adj[a].count(c) || adj[b].count(c)) continue;
        if (edges.empty()) continue;
        // close the triangle
        adj[b].insert(c);
        adj[c].insert(b);
        edges.emplace_back(std::min(b, c), std::max(b, c));
        // delete another edge chosen at random (never the one just added)
        std::size_t pick = std::size_t(rng.below(edges.size() - 1));
        auto [x, y] = edges[pick];
        adj[x].erase(y);
        adj[y].erase(x);
        edges[pick] = edges.back();
        edges.pop_back();
    }
    return Graph(n, edges);
}

} // namespace walkcensus
