#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "walkcensus/graph.hpp"
#include "walkcensus/motif_counts.hpp"
#include "walkcensus/parallel.hpp"
#include "walkcensus/prng.hpp"
#include "walkcensus/stats.hpp"

namespace walkcensus {

// R = ceil( [ Phi^{-1}(1 - alpha/(2(k_max-1))) / (2 alpha) ]^2 ), the
// Bonferroni-corrected replicate count.
inline int replicate_count(double alpha, int k_max) {
    if (!(alpha > 0 && alpha < 1)) throw std::invalid_argument("replicate_count: alpha in (0,1)");
    if (k_max < 3) throw std::invalid_argument("replicate_count: k_max > 2");
    double q = normal_quantile(1.0 - alpha / (2.0 * double(k_max - 1)));
    double raw = q / (2.0 * alpha);
    int r = int(std::ceil(raw * raw));
    return std::max(r, 1);
}

struct SummaryConfig {
    std::vector<int> sizes; // s_1 .. s_{N_s}
    int k_max = 9;
    double alpha = 0.01;
    std::uint64_t seed = 0;
    int threads = 0;

    void validate(int n) const {
        if (sizes.empty()) throw std::invalid_argument("summary config: at least one size");
        for (int s : sizes)
            if (!(1 < s && s < n)) throw std::invalid_argument("summary config: need 1 < s < n");
        int smin = *std::min_element(sizes.begin(), sizes.end());
        if (!(2 < k_max && k_max < smin))
            throw std::invalid_argument("summary config: need 2 < k_max < min size");
        if (!(alpha > 0 && alpha < 1)) throw std::invalid_argument("summary config: alpha in (0,1)");
    }
};

struct ScaleSamples {
    int replicates = 0;
    int k_max = 0;
    double alpha = 0;
    std::uint64_t seed = 0;
    std::vector<int> sizes;
    std::vector<int> size_used;          // per replicate
    std::vector<std::vector<double>> t;  // t[k][r] for k = 2..k_max
};

namespace detail {

// Uniform s-subset by partial Fisher-Yates on a per-replicate substream.
inline NodeSet sample_subset(int n, int s, CounterRng& rng, std::vector<int>& pool) {
    pool.resize(n);
    for (int i = 0; i < n; ++i) pool[i] = i;
    for (int i = 0; i < s; ++i) {
        int j = i + int(rng.below(std::uint64_t(n - i)));
        std::swap(pool[i], pool[j]);
    }
    NodeSet out(pool.begin(), pool.begin() + s);
    std::sort(out.begin(), out.end());
    return out;
}

inline ScaleSamples run_scale_samples(const Graph& g, const std::vector<int>& sizes, int k_max,
                                      double alpha, std::uint64_t seed, int threads,
                                      std::uint64_t substream_salt = 0) {
    ScaleSamples out;
    out.replicates = replicate_count(alpha, k_max);
    out.k_max = k_max;
    out.alpha = alpha;
    out.seed = seed;
    out.sizes = sizes;
    out.size_used.assign(out.replicates, 0);
    out.t.assign(k_max + 1, std::vector<double>(out.replicates, 0.0));
    const int R = out.replicates;
    const int Ns = int(sizes.size());
    parallel_for(std::uint64_t(R), threads, [&](std::uint64_t idx) {
        int r = int(idx) + 1; // replicate indices are 1-based in the size rule
        int size = sizes[std::size_t((std::int64_t(Ns) * r + R - 1) / R) - 1];
        CounterRng rng(seed, Stream::subsets, substream_salt * 1000003ull + std::uint64_t(r));
        std::vector<int> pool;
        NodeSet u = sample_subset(g.node_count(), size, rng, pool);
        Graph sub = induced_subgraph(g, u);
        MotifCounter mc(sub);
        auto ts = mc.scale_summaries(k_max);
        out.size_used[idx] = size;
        for (int k = 2; k <= k_max; ++k) out.t[k][idx] = ts[k];
    });
    return out;
}

} // namespace detail

// Algorithm 1: subsample node sets of the configured sizes and record the
// tree and cycle summaries t_k(r) for every scale.
inline ScaleSamples summarize(const Graph& g, const SummaryConfig& cfg) {
    cfg.validate(g.node_count());
    return detail::run_scale_samples(g, cfg.sizes, cfg.k_max, cfg.alpha, cfg.seed, cfg.threads);
}

struct ViolinScale {
    int k = 0;
    DensityCurve curve;       // weighted by positive_fraction when re-weighted
    double zero_mass = 0;     // atom at zero (0 unless zeros exceed alpha)
    double positive_fraction = 1;
    double mean_t = 0;
};

struct ViolinSummary {
    double alpha = 0;
    std::vector<ViolinScale> scales;
};

// Kernel density estimates with the zero-atom re-weighting rule.
inline ViolinSummary violin(const ScaleSamples& samples, double alpha) {
    if (samples.replicates < 2) throw std::invalid_argument("violin: needs R >= 2");
    ViolinSummary out;
    out.alpha = alpha;
    for (int k = 2; k <= samples.k_max; ++k) {
        const auto& v = samples.t[k];
        ViolinScale sc;
        sc.k = k;
        sc.mean_t = mean(v);
        std::vector<double> positive;
        for (double x : v)
            if (x > 0) positive.push_back(x);
        double zero_fraction = double(v.size() - positive.size()) / double(v.size());
        if (positive.empty()) {
            sc.zero_mass = 1.0;
            sc.positive_fraction = 0.0;
            out.scales.push_back(std::move(sc));
            continue;
        }
        double weight = 1.0;
        if (zero_fraction > alpha) {
            sc.zero_mass = zero_fraction;
            weight = 1.0 - zero_fraction;
        }
        sc.positive_fraction = weight;
        double h = silverman_bandwidth(positive);
        double lo = std::max(0.0, *std::min_element(positive.begin(), positive.end()) - 4 * h);
        double hi = std::min(1.0, *std::max_element(positive.begin(), positive.end()) + 4 * h);
        if (hi - lo < 1e-9) {
            lo = std::max(0.0, lo - 1e-3);
            hi = std::min(1.0, hi + 1e-3);
        }
        sc.curve = gaussian_kde(positive, h, lo, hi, 257);
        double integral = sc.curve.integral();
        if (integral > 0)
            for (double& y : sc.curve.values) y *= weight / integral;
        out.scales.push_back(std::move(sc));
    }
    return out;
}

// Algorithm 2: automatic subsampling-size selection. Grows a trial size
// geometrically, testing at level alpha/(k_max-1) whether every tracked
// scale's summary separates from zero; after the first stop it restarts
// with the all-zero scales dropped and the ceiling lowered to 0.8 n, and
// the second stop emits N_s equispaced sizes around the final trial size.
inline std::vector<int> select_sizes(const Graph& g, int k_max, double alpha, int n_sizes,
                                     double delta, std::uint64_t seed, int threads = 0) {
    int n = g.node_count();
    if (!(2 < k_max && k_max < n / 2)) throw std::invalid_argument("select_sizes: need 2 < k_max < n/2");
    if (!(alpha > 0 && alpha < 1)) throw std::invalid_argument("select_sizes: alpha in (0,1)");
    if (n_sizes < 1) throw std::invalid_argument("select_sizes: N_s >= 1");
    if (!(delta > 0)) throw std::invalid_argument("select_sizes: delta > 0");

    const double init = std::min(std::max(double(k_max + 1),
                                          std::min(std::floor(n / 4.0), 3.0 * (k_max + 1))),
                                 double(n)) /
                        (1.0 + delta);
    double s_star = init;
    std::set<int> tracked;
    for (int k = 2; k <= k_max; ++k) tracked.insert(k);
    double s_max = double(n);
    bool second_phase = false;
    const double threshold = alpha / double(k_max - 1);
    const int budget = 2 * int(std::ceil(std::log(double(n)) / std::log1p(delta))) + 8;

    auto emit = [&](double center) {
        std::vector<int> sizes;
        for (int i = 0; i < n_sizes; ++i) {
            double frac = n_sizes == 1 ? 0.5 : double(i) / double(n_sizes - 1);
            double v = center * (0.9 + 0.2 * frac);
            int s = int(std::llround(v));
            s = std::clamp(s, k_max + 1, std::max(k_max + 1, n - 1));
            sizes.push_back(s);
        }
        return sizes;
    };

    for (int iter = 0; iter < budget; ++iter) {
        s_star = std::min(s_star * (1.0 + delta), double(n));
        int trial = std::clamp(int(std::llround(s_star)), k_max + 1, n);
        auto samples = detail::run_scale_samples(g, {trial}, k_max, alpha, seed, threads,
                                                 std::uint64_t(iter) + 1);
        std::map<int, double> p;
        for (int k : tracked) {
            const auto& v = samples.t[k];
            bool any_positive = false;
            for (double x : v)
                if (x > 0) any_positive = true;
            if (!any_positive) {
                p[k] = 0.5;
                continue;
            }
            double m = mean(v);
            double var = sample_variance(v);
            if (var <= 0) {
                p[k] = m > 0 ? 0.0 : 0.5;
                continue;
            }
            p[k] = 1.0 - normal_cdf(m / std::sqrt(var));
        }
        double worst = 0.0;
        for (auto& [k, pk] : p) worst = std::max(worst, pk);
        if (worst <= threshold || s_star >= s_max) {
            if (second_phase) return emit(s_star);
            // reset: drop the scales that never left zero, lower the ceiling
            s_star = init;
            std::set<int> keep;
            for (auto& [k, pk] : p)
                if (pk < 0.5) keep.insert(k);
            tracked = keep;
            s_max = std::floor(0.8 * n);
            second_phase = true;
        }
    }
    return emit(s_star); // budget exhausted; behave as a final stop
}

// ---------- export helpers ----------

inline void export_samples_csv(const ScaleSamples& s, std::ostream& out,
                               const std::string& manifest_comment = {}) {
    if (!manifest_comment.empty()) out << "# " << manifest_comment << "\n";
    out << "k,r,size,t\n";
    char buf[64];
    for (int k = 2; k <= s.k_max; ++k)
        for (int r = 0; r < s.replicates; ++r) {
            std::snprintf(buf, sizeof buf, "%.12g", s.t[k][r]);
            out << k << ',' << (r + 1) << ',' << s.size_used[r] << ',' << buf << "\n";
        }
}

// One mirrored density per scale, with the zero atom drawn as a base bar.
inline std::string render_violin_svg(const ViolinSummary& summary,
                                     const std::string& manifest_comment = {}) {
    const double panel_w = 70, panel_gap = 18, height = 320, top = 24, bottom = 40;
    const double plot_h = height - top - bottom;
    std::size_t nscales = summary.scales.size();
    double width = panel_gap + (panel_w + panel_gap) * double(nscales ? nscales : 1) + 40;
    std::ostringstream os;
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.3f", v);
        return std::string(buf);
    };
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\""
       << num(height) << "\" viewBox=\"0 0 " << num(width) << " " << num(height) << "\">\n";
    if (!manifest_comment.empty()) os << "<!-- " << manifest_comment << " -->\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    // y axis: t value from 0 (bottom) to 1 (top)
    double axis_x = 28;
    os << "<line x1=\"" << num(axis_x) << "\" y1=\"" << num(top) << "\" x2=\"" << num(axis_x)
       << "\" y2=\"" << num(top + plot_h) << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    for (int tick = 0; tick <= 4; ++tick) {
        double tv = double(tick) / 4.0;
        double y = top + plot_h * (1.0 - tv);
        os << "<line x1=\"" << num(axis_x - 4) << "\" y1=\"" << num(y) << "\" x2=\"" << num(axis_x)
           << "\" y2=\"" << num(y) << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
        os << "<text x=\"" << num(axis_x - 7) << "\" y=\"" << num(y + 3)
           << "\" font-size=\"9\" text-anchor=\"end\">" << num(tv) << "</text>\n";
    }
    double x0 = axis_x + panel_gap;
    for (const auto& sc : summary.scales) {
        double cx = x0 + panel_w / 2;
        double max_density = 0;
        for (double v : sc.curve.values) max_density = std::max(max_density, v);
        if (max_density > 0 && !sc.curve.grid.empty()) {
            std::ostringstream pts;
            const auto& gxs = sc.curve.grid;
            const auto& gys = sc.curve.values;
            for (std::size_t i = 0; i < gxs.size(); ++i) {
                double y = top + plot_h * (1.0 - gxs[i]);
                double half = (panel_w / 2 - 4) * (gys[i] / max_density);
                pts << num(cx - half) << ',' << num(y) << ' ';
            }
            for (std::size_t i = gxs.size(); i-- > 0;) {
                double y = top + plot_h * (1.0 - gxs[i]);
                double half = (panel_w / 2 - 4) * (gys[i] / max_density);
                pts << num(cx + half) << ',' << num(y) << ' ';
            }
            os << "<polygon points=\"" << pts.str()
               << "\" fill=\"#4878a8\" fill-opacity=\"0.7\" stroke=\"#2b4a68\" stroke-width=\"0.8\"/>\n";
        }
        if (sc.zero_mass > 0) {
            double bar_half = (panel_w / 2 - 4) * sc.zero_mass;
            double y = top + plot_h;
            os << "<rect x=\"" << num(cx - bar_half) << "\" y=\"" << num(y - 3) << "\" width=\""
               << num(2 * bar_half) << "\" height=\"6\" fill=\"#c04040\"/>\n";
        }
        os << "<text x=\"" << num(cx) << "\" y=\"" << num(height - 18)
           << "\" font-size=\"11\" text-anchor=\"middle\">k=" << sc.k << "</text>\n";
        x0 += panel_w + panel_gap;
    }
    os << "</svg>\n";
    return os.str();
}

} // namespace walkcensus
