#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "walkcensus/int128.hpp"
#include "walkcensus/small_graph.hpp"

#include <json.hpp>

namespace walkcensus {

struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Sorted distinct node indices of a host graph.
using NodeSet = std::vector<int>;

// Simple undirected graph, immutable once built. Carries both packed
// bit-rows (fast neighborhood intersection) and a flat edge list (cheap
// generators and I/O). Optional labels preserve external node ids.
class Graph {
public:
    Graph() = default;

    explicit Graph(int n, const std::vector<std::pair<int, int>>& edge_list = {},
                   std::vector<std::string> labels = {})
        : n_(n), labels_(std::move(labels)) {
        if (n < 0) throw std::invalid_argument("negative node count");
        if (n > max_nodes) throw std::invalid_argument("graph too large for bit-row storage");
        if (!labels_.empty() && int(labels_.size()) != n)
            throw std::invalid_argument("label count mismatch");
        words_ = (std::size_t(n) + 63) / 64;
        bits_.assign(words_ * std::size_t(n), 0);
        for (auto [a, b] : edge_list) add_edge_internal(a, b);
        finalize();
    }

    static constexpr int max_nodes = 65536;

    int node_count() const { return n_; }
    std::size_t edge_count() const { return edges_.size(); }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    const std::vector<std::string>& labels() const { return labels_; }

    bool has_edge(int a, int b) const {
        check_node(a);
        check_node(b);
        return (row(a)[std::size_t(b) / 64] >> (b % 64)) & 1ull;
    }
    const std::uint64_t* row(int v) const { return bits_.data() + std::size_t(v) * words_; }
    std::size_t row_words() const { return words_; }

    int degree(int v) const {
        check_node(v);
        return int(neighbors_off_[v + 1] - neighbors_off_[v]);
    }
    // Sorted neighbor list.
    const int* neighbors_begin(int v) const { return neighbors_.data() + neighbors_off_[v]; }
    const int* neighbors_end(int v) const { return neighbors_.data() + neighbors_off_[v + 1]; }

    std::vector<int> degree_sequence() const {
        std::vector<int> d(n_);
        for (int v = 0; v < n_; ++v) d[v] = degree(v);
        return d;
    }

    SmallGraph to_small() const {
        if (n_ > SmallGraph::max_vertices) throw std::invalid_argument("graph too large for SmallGraph");
        SmallGraph g;
        g.n = n_;
        for (auto [a, b] : edges_) g.add_edge(a, b);
        return g;
    }

private:
    void check_node(int v) const {
        if (v < 0 || v >= n_) throw std::out_of_range("node index out of range");
    }
    void add_edge_internal(int a, int b) {
        check_node(a);
        check_node(b);
        if (a == b) throw std::invalid_argument("self-loop");
        if (has_edge_raw(a, b)) return;
        bits_[std::size_t(a) * words_ + std::size_t(b) / 64] |= 1ull << (b % 64);
        bits_[std::size_t(b) * words_ + std::size_t(a) / 64] |= 1ull << (a % 64);
        edges_.emplace_back(std::min(a, b), std::max(a, b));
    }
    bool has_edge_raw(int a, int b) const {
        return (bits_[std::size_t(a) * words_ + std::size_t(b) / 64] >> (b % 64)) & 1ull;
    }
    void finalize() {
        std::sort(edges_.begin(), edges_.end());
        std::vector<int> deg(n_, 0);
        for (auto [a, b] : edges_) {
            ++deg[a];
            ++deg[b];
        }
        neighbors_off_.assign(n_ + 1, 0);
        for (int v = 0; v < n_; ++v) neighbors_off_[v + 1] = neighbors_off_[v] + deg[v];
        neighbors_.resize(edges_.size() * 2);
        std::vector<std::size_t> cur(neighbors_off_.begin(), neighbors_off_.end() - 1);
        for (auto [a, b] : edges_) {
            neighbors_[cur[a]++] = b;
            neighbors_[cur[b]++] = a;
        }
        for (int v = 0; v < n_; ++v)
            std::sort(neighbors_.begin() + neighbors_off_[v], neighbors_.begin() + neighbors_off_[v + 1]);
    }

    int n_ = 0;
    std::size_t words_ = 0;
    std::vector<std::uint64_t> bits_;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::size_t> neighbors_off_{0};
    std::vector<int> neighbors_;
    std::vector<std::string> labels_;
};

struct LoadResult {
    Graph graph;
    int self_loops_dropped = 0;
    int duplicates_collapsed = 0;
};

// Whitespace-separated node-id pairs, one per line; '#' starts a comment.
// External ids are reindexed densely in first-appearance order and kept as
// labels.
inline LoadResult load_edge_list(std::istream& in) {
    std::map<std::string, int> ids;
    std::vector<std::string> labels;
    std::vector<std::pair<int, int>> edges;
    int self_loops = 0, duplicates = 0;
    std::string line;
    int lineno = 0;
    auto intern = [&](const std::string& tok) {
        auto it = ids.find(tok);
        if (it != ids.end()) return it->second;
        int id = int(labels.size());
        ids.emplace(tok, id);
        labels.push_back(tok);
        return id;
    };
    std::vector<std::pair<int, int>> seen_sorted;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        std::string a, b, extra;
        if (!(ls >> a)) continue; // blank
        if (!(ls >> b) || (ls >> extra))
            throw parse_error("edge list line " + std::to_string(lineno) + ": expected two node ids");
        int ia = intern(a), ib = intern(b);
        if (ia == ib) {
            ++self_loops;
            continue;
        }
        edges.emplace_back(ia, ib);
    }
    std::vector<std::pair<int, int>> uniq;
    for (auto [a, b] : edges) uniq.emplace_back(std::min(a, b), std::max(a, b));
    std::sort(uniq.begin(), uniq.end());
    duplicates = int(uniq.size());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    duplicates -= int(uniq.size());
    LoadResult r{Graph(int(labels.size()), uniq, labels), self_loops, duplicates};
    return r;
}

inline LoadResult load_edge_list(const std::string& text) {
    std::istringstream in(text);
    return load_edge_list(in);
}

inline void write_edge_list(const Graph& g, std::ostream& out) {
    const auto& lab = g.labels();
    for (auto [a, b] : g.edges()) {
        if (lab.empty())
            out << a << ' ' << b << '\n';
        else
            out << lab[a] << ' ' << lab[b] << '\n';
    }
}

inline nlohmann::json graph_to_json(const Graph& g) {
    nlohmann::json j;
    j["n"] = g.node_count();
    auto& es = j["edges"] = nlohmann::json::array();
    for (auto [a, b] : g.edges()) es.push_back({a, b});
    if (!g.labels().empty()) j["labels"] = g.labels();
    return j;
}

inline Graph graph_from_json(const nlohmann::json& j) {
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : j.at("edges")) edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    std::vector<std::string> labels;
    if (j.contains("labels")) labels = j["labels"].get<std::vector<std::string>>();
    return Graph(j.at("n").get<int>(), edges, labels);
}

// Subgraph on `nodes` containing exactly the internal edges; nodes are
// relabeled 0..|u|-1 in the given sorted order.
inline Graph induced_subgraph(const Graph& g, const NodeSet& nodes) {
    std::vector<int> inv(g.node_count(), -1);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        int v = nodes[i];
        if (v < 0 || v >= g.node_count()) throw std::out_of_range("induced_subgraph: node out of range");
        if (inv[v] != -1) throw std::invalid_argument("induced_subgraph: duplicate node");
        inv[v] = int(i);
    }
    std::vector<std::pair<int, int>> edges;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        int v = nodes[i];
        for (const int* u = g.neighbors_begin(v); u != g.neighbors_end(v); ++u)
            if (inv[*u] > int(i)) edges.emplace_back(int(i), inv[*u]);
    }
    std::vector<std::string> labels;
    if (!g.labels().empty()) {
        labels.reserve(nodes.size());
        for (int v : nodes) labels.push_back(g.labels()[v]);
    }
    return Graph(int(nodes.size()), edges, labels);
}

inline std::vector<std::vector<int>> connected_components(const Graph& g) {
    std::vector<int> comp(g.node_count(), -1);
    std::vector<std::vector<int>> out;
    for (int s = 0; s < g.node_count(); ++s) {
        if (comp[s] != -1) continue;
        int id = int(out.size());
        out.emplace_back();
        std::vector<int> stack{s};
        comp[s] = id;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            out[id].push_back(v);
            for (const int* u = g.neighbors_begin(v); u != g.neighbors_end(v); ++u)
                if (comp[*u] == -1) {
                    comp[*u] = id;
                    stack.push_back(*u);
                }
        }
        std::sort(out[id].begin(), out[id].end());
    }
    return out;
}

inline Graph remove_isolated(const Graph& g) {
    NodeSet keep;
    for (int v = 0; v < g.node_count(); ++v)
        if (g.degree(v) > 0) keep.push_back(v);
    return induced_subgraph(g, keep);
}

inline Rat128 edge_density(const Graph& g) {
    if (g.node_count() < 2) throw std::domain_error("edge_density needs >= 2 nodes");
    return Rat128(u128(g.edge_count()), binomial_u128(std::uint64_t(g.node_count()), 2));
}

} // namespace walkcensus
