#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "walkcensus/generators.hpp"
#include "walkcensus/motif_counts.hpp"
#include "walkcensus/small_graph.hpp"
#include "walkcensus/stats.hpp"
#include "walkcensus/walk_shapes.hpp"

namespace walkcensus {

inline constexpr double boundary_tolerance = 1e-9;

// ---------- kernel-side expectations ----------

// s(F, kappa): the kernel embedding density, an exact nested block sum for
// piecewise-constant kernels and a product of moments for rank-one ones.
inline double kernel_embedding_density(const SmallGraph& f, const Kernel& kappa) {
    if (kappa.form == Kernel::Form::constant) return 1.0;
    if (kappa.form == Kernel::Form::rank_one) {
        double out = 1.0;
        for (int v = 0; v < f.n; ++v) {
            double moment = 0;
            for (std::size_t b = 0; b < kappa.blocks(); ++b)
                moment += kappa.block_size(b) * std::pow(kappa.rank_values[b], double(f.degree(v)));
            out *= moment;
        }
        return out;
    }
    std::size_t nb = kappa.blocks();
    auto es = f.edges();
    std::vector<std::size_t> assign(f.n, 0);
    double total = 0;
    auto rec = [&](auto&& self, int v) -> void {
        if (v == f.n) {
            double w = 1.0;
            for (int i = 0; i < f.n; ++i) w *= kappa.block_size(assign[i]);
            for (auto [a, b] : es) w *= kappa.block_value(assign[a], assign[b]);
            total += w;
            return;
        }
        for (std::size_t b = 0; b < nb; ++b) {
            assign[v] = b;
            self(self, v + 1);
        }
    };
    rec(rec, 0);
    return total;
}

// nu_k(F, kappa) = ind_k(F,F) s(F,kappa) / aut(F)
inline double nu_k(const SmallGraph& f, int k, const Kernel& kappa = Kernel::constant()) {
    u128 ind = ind_self_count(f, k);
    if (ind == 0) return 0.0;
    return to_double(ind) * kernel_embedding_density(f, kappa) / to_double(automorphism_order(f));
}

// E ind_k(F, G(n, rho kappa)) = (n)_v rho^e ind_k(F,F) s(F,kappa) / aut(F)
inline double expected_ind_kernel(const SmallGraph& f, int k, int n, double rho,
                                  const Kernel& kappa = Kernel::constant()) {
    if (f.n > n) return 0.0;
    double nv = to_double(falling_factorial(std::uint64_t(n), unsigned(f.n)));
    return nv * std::pow(rho, double(f.edge_count())) * nu_k(f, k, kappa);
}

// Phase boundary between tree- and cycle-dominated even scales.
inline double k_star(double n, double rho) {
    double mu = n * rho;
    if (!(mu > 1.0)) throw std::domain_error("k_star: requires n rho > 1");
    return std::log(n) / std::log(std::sqrt(mu));
}

struct DominanceReport {
    int k = 0;
    double k_star_value = 0;
    int case_id = 0; // phase-theorem case (1..7), or backtracking case (1..3; 0 when empty)
    std::vector<CanonicalCode> dominant;
    std::vector<CanonicalCode> subdominant;
    double first_order_ratio = 1.0; // 1 + leading correction, epsilon terms dropped
};

namespace detail {

inline std::vector<SmallGraph> trees_on(int vertices) { return free_trees(vertices); }

inline double tree_nu_sum(int vertices, int k, const Kernel& kappa) {
    double s = 0;
    for (const auto& t : trees_on(vertices)) s += nu_k(t, k, kappa);
    return s;
}

inline std::vector<CanonicalCode> tree_codes(int vertices) {
    std::vector<CanonicalCode> out;
    for (const auto& t : trees_on(vertices)) out.push_back(canonical_form(t));
    return out;
}

} // namespace detail

// The seven-case dominance table for kernel-based random graphs, with the
// leading first-order ratio correction.
inline DominanceReport dominant_shapes_kernel(int k, double n, double rho,
                                              const Kernel& kappa = Kernel::constant()) {
    if (k <= 3) throw std::invalid_argument("dominant_shapes_kernel: k > 3");
    if (k > max_scale) throw std::invalid_argument("dominant_shapes_kernel: k <= 9 supported");
    if (n <= double(k)) throw std::invalid_argument("dominant_shapes_kernel: n > k");
    double mu = n * rho;
    DominanceReport r;
    r.k = k;
    r.k_star_value = k_star(n, rho);
    double ks = r.k_star_value;
    bool ks_integer = std::fabs(ks - std::round(ks)) < boundary_tolerance;

    SmallGraph ck = cycle_graph(k);
    double nu_ck = nu_k(ck, k, kappa);
    // C_{k-2}P_2 exists for k >= 5; at k = 4 no case involving it is reachable
    // (k > k* + 2 would force rho >= 1)
    auto tadpole_code = [&] { return code_of_tadpole(k - 2, 1); };
    auto nu_tad = [&] { return nu_k(tadpole_graph(k - 2, 1), k, kappa); };

    auto case1 = [&] {
        r.case_id = 1;
        r.dominant = {canonical_form(ck)};
        r.subdominant = {tadpole_code()};
        r.first_order_ratio = 1.0 + (nu_tad() / nu_ck) / mu;
    };
    if (k % 2 == 1) {
        case1();
        return r;
    }
    double gap = double(k) - ks; // boundaries occur only when k* is integral
    double half_trees = detail::tree_nu_sum(k / 2 + 1, k, kappa);
    if (ks_integer && std::fabs(gap - 2) < boundary_tolerance) {
        r.case_id = 2;
        r.dominant = {canonical_form(ck)};
        r.subdominant = detail::tree_codes(k / 2 + 1);
        r.subdominant.insert(r.subdominant.begin(), tadpole_code());
        r.first_order_ratio = 1.0 + ((nu_tad() + half_trees) / nu_ck) / mu;
    } else if (gap > 2) {
        case1();
    } else if (gap > boundary_tolerance) { // k in (k*, k*+2)
        r.case_id = 3;
        r.dominant = {canonical_form(ck)};
        r.subdominant = detail::tree_codes(k / 2 + 1);
        r.first_order_ratio = 1.0 + (half_trees / nu_ck) * std::pow(mu, -gap / 2);
    } else if (ks_integer && std::fabs(gap) < boundary_tolerance) {
        r.case_id = 4;
        r.dominant = detail::tree_codes(k / 2 + 1);
        r.dominant.insert(r.dominant.begin(), canonical_form(ck));
        r.subdominant = detail::tree_codes(k / 2);
        r.subdominant.insert(r.subdominant.begin(), tadpole_code());
        double small_trees = detail::tree_nu_sum(k / 2, k, kappa);
        r.first_order_ratio = 1.0 + ((nu_tad() + small_trees) / (nu_ck + half_trees)) / mu;
    } else if (gap > -2 + boundary_tolerance) { // k in (k*-2, k*)
        r.case_id = 5;
        r.dominant = detail::tree_codes(k / 2 + 1);
        r.subdominant = {canonical_form(ck)};
        r.first_order_ratio = 1.0 + (nu_ck / half_trees) * std::pow(mu, gap / 2);
    } else if (ks_integer && std::fabs(gap + 2) < boundary_tolerance) {
        r.case_id = 6;
        r.dominant = detail::tree_codes(k / 2 + 1);
        r.subdominant = detail::tree_codes(k / 2);
        r.subdominant.insert(r.subdominant.begin(), canonical_form(ck));
        double small_trees = detail::tree_nu_sum(k / 2, k, kappa);
        r.first_order_ratio = 1.0 + ((nu_ck + small_trees) / half_trees) / mu;
    } else { // k < k* - 2
        r.case_id = 7;
        r.dominant = detail::tree_codes(k / 2 + 1);
        r.subdominant = detail::tree_codes(k / 2);
        double small_trees = detail::tree_nu_sum(k / 2, k, kappa);
        r.first_order_ratio = 1.0 + (small_trees / half_trees) / mu;
    }
    return r;
}

// h_k: the largest divisor of k in {3, ..., max(3, floor(k/2))}; nullopt
// encodes "none" (k prime or k = 4).
inline std::optional<int> largest_divisor_h(int k) {
    int hi = std::max(3, k / 2);
    for (int d = hi; d >= 3; --d)
        if (k % d == 0) return d;
    return std::nullopt;
}

// Dominance report for non-backtracking tailless closed walks: the k-cycle
// always dominates; the second-order set depends on h_k versus k*/2.
inline DominanceReport dominant_shapes_nb(int k, double n, double rho,
                                          const Kernel& kappa = Kernel::constant()) {
    if (k < 3) throw std::invalid_argument("dominant_shapes_nb: k >= 3");
    if (k > max_scale) throw std::invalid_argument("dominant_shapes_nb: k <= 9 supported");
    double mu = n * rho;
    DominanceReport r;
    r.k = k;
    r.k_star_value = k_star(n, rho);
    r.dominant = {code_of_cycle(k)};
    if (k <= 5) {
        r.case_id = 0;
        r.first_order_ratio = 1.0;
        return r;
    }
    double nu_ck = nu_k(cycle_graph(k), k, kappa);
    double lem_sum = 0;
    std::vector<CanonicalCode> lem_codes;
    for (int p = 3; p <= k / 2; ++p) {
        SmallGraph lem = lemniscate_graph(p, k - p);
        lem_codes.push_back(canonical_form(lem));
        lem_sum += nu_k(lem, k, kappa);
    }
    auto h = largest_divisor_h(k);
    double gap = h ? double(k - *h) : std::numeric_limits<double>::infinity();
    // walk embedding density of C_h under non-backtracking counting:
    // ind_k^b(C_h, C_h) = 2h = aut(C_h), so it reduces to s(C_h, kappa)
    double nu_ch_b = h ? kernel_embedding_density(cycle_graph(*h), kappa) : 0.0;
    if (h && gap < r.k_star_value / 2 - boundary_tolerance) {
        r.case_id = 1;
        r.subdominant = {code_of_cycle(*h)};
        r.first_order_ratio = 1.0 + (nu_ch_b / nu_ck) * std::pow(mu, -gap);
    } else if (h && std::fabs(gap - r.k_star_value / 2) <= boundary_tolerance) {
        r.case_id = 2;
        r.subdominant = lem_codes;
        r.subdominant.insert(r.subdominant.begin(), code_of_cycle(*h));
        r.first_order_ratio = 1.0 + ((nu_ch_b + lem_sum) / nu_ck) / n;
    } else {
        r.case_id = 3;
        r.subdominant = lem_codes;
        r.first_order_ratio = 1.0 + (lem_sum / nu_ck) / n;
    }
    return r;
}

// ---------- log-count decomposition ----------

struct LogCopiesDecomposition {
    double const_term = 0;    // log nu_k for kernel models; unknown (0) for power laws
    double node_term = 0;     // v(F) log n
    double local_penalty = 0; // subtractive local-density term
    double total() const { return const_term + node_term - local_penalty; }
};

inline LogCopiesDecomposition log_expected_copies_kernel(const SmallGraph& f, int k, double n,
                                                         double rho,
                                                         const Kernel& kappa = Kernel::constant()) {
    LogCopiesDecomposition d;
    double nu = nu_k(f, k, kappa);
    d.const_term = nu > 0 ? std::log(nu) : -std::numeric_limits<double>::infinity();
    d.node_term = double(f.n) * std::log(n);
    d.local_penalty = double(f.edge_count()) * std::fabs(std::log(rho));
    return d;
}

inline LogCopiesDecomposition log_expected_copies_powerlaw(const SmallGraph& f, double n,
                                                           double gamma, double theta) {
    LogCopiesDecomposition d;
    d.const_term = 0; // const_{w,M} not exposed by the closed form
    d.node_term = double(f.n) * std::log(n);
    double min_sum = 0, deg_sum = 0;
    for (int v = 0; v < f.n; ++v) {
        min_sum += std::min(1.0, double(f.degree(v)) * gamma);
        deg_sum += double(f.degree(v));
    }
    d.local_penalty = min_sum * std::log(n) + deg_sum * std::fabs(std::log(theta));
    return d;
}

// ---------- power-law sum machinery ----------

namespace detail {

struct DegreeSplit {
    int q = 0; // d_t gamma < 1
    int h = 0; // d_t gamma <= 1
    int v = 0;
};

inline DegreeSplit split_degrees(const std::vector<int>& d, double gamma) {
    DegreeSplit s;
    s.v = int(d.size());
    for (int x : d) {
        double p = double(x) * gamma;
        if (p < 1.0 - boundary_tolerance) ++s.q;
        if (p < 1.0 + boundary_tolerance) ++s.h;
    }
    return s;
}

inline void require_sorted_positive(const std::vector<int>& d) {
    if (d.empty()) throw std::invalid_argument("degree tuple must be non-empty");
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (d[i] <= 0) throw std::invalid_argument("degrees must be strictly positive");
        if (i > 0 && d[i] < d[i - 1]) throw std::invalid_argument("degrees must be non-decreasing");
    }
}

// exact partial power sum sum_{r=1}^{n} r^{-s}
inline double partial_power_sum(std::uint64_t n, double s) {
    static thread_local std::map<std::pair<std::uint64_t, double>, double> cache;
    auto key = std::make_pair(n, s);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    double total = 0;
    for (std::uint64_t r = n; r >= 1; --r) total += std::pow(double(r), -s);
    cache[key] = total;
    return total;
}

// single-sum forms: exact, leading-order (as displayed), and constant-
// corrected (leading order plus its additive constant)
enum class SumForm { exact, leading, corrected };

inline double single_sum(std::uint64_t n, double s, SumForm form) {
    if (form == SumForm::exact) return partial_power_sum(n, s);
    double logn = std::log(double(n));
    const double euler_gamma = 0.57721566490153286061;
    if (std::fabs(s - 1.0) < boundary_tolerance) {
        double v = logn + euler_gamma;
        if (form == SumForm::corrected) v += 0.5 / double(n);
        return v;
    }
    if (s < 1.0) {
        double v = std::pow(double(n), 1.0 - s) / (1.0 - s);
        if (form == SumForm::corrected) v += zeta(s) + 0.5 * std::pow(double(n), -s);
        return v;
    }
    double v = zeta(s);
    if (form == SumForm::corrected) v -= std::pow(double(n), 1.0 - s) / (s - 1.0);
    return v;
}

// distinct-index sums via the inclusion-exclusion recursion
//   S(d_1..d_v) = S(d_1..d_{v-1}) T(d_v) - sum_j S(..., d_j + d_v, ...)
inline double distinct_sum_rec(std::vector<int> d, std::uint64_t n, double gamma, SumForm form,
                               std::map<std::vector<int>, double>& memo) {
    std::sort(d.begin(), d.end());
    auto it = memo.find(d);
    if (it != memo.end()) return it->second;
    double out;
    if (d.size() == 1) {
        out = single_sum(n, double(d[0]) * gamma, form);
    } else {
        std::vector<int> head(d.begin(), d.end() - 1);
        int last = d.back();
        out = distinct_sum_rec(head, n, gamma, form, memo) * single_sum(n, double(last) * gamma, form);
        for (std::size_t j = 0; j < head.size(); ++j) {
            std::vector<int> merged = head;
            merged[j] += last;
            out -= distinct_sum_rec(merged, n, gamma, form, memo);
        }
    }
    memo[d] = out;
    return out;
}

} // namespace detail

// C_gamma constants; every d_t gamma must exceed one.
inline double C_gamma(std::vector<int> degrees, double gamma) {
    detail::require_sorted_positive(degrees);
    for (int d : degrees)
        if (!(double(d) * gamma > 1.0 + boundary_tolerance))
            throw std::domain_error("C_gamma: requires d gamma > 1 for every degree");
    std::function<double(std::vector<int>)> rec = [&](std::vector<int> d) -> double {
        if (d.size() == 1) return zeta(double(d[0]) * gamma);
        std::vector<int> head(d.begin(), d.end() - 1);
        int last = d.back();
        double out = rec(head) * zeta(double(last) * gamma);
        for (std::size_t j = 0; j < head.size(); ++j) {
            std::vector<int> merged = head;
            merged[j] += last;
            out -= rec(merged);
        }
        return out;
    };
    return rec(degrees);
}

struct AsymptoticValue {
    double value = 0;
    std::string error_order; // the epsilon_gamma(d) envelope
};

// Leading-order S_gamma per the displayed single-sum table, assembled into
// the proposition's closed form, with the stated error-order tag.
inline AsymptoticValue S_gamma(std::vector<int> degrees, std::uint64_t n, double gamma) {
    detail::require_sorted_positive(degrees);
    auto split = detail::split_degrees(degrees, gamma);
    AsymptoticValue out;
    double value = std::pow(double(n), double(split.q) -
                                           gamma * double(std::accumulate(degrees.begin(),
                                                                          degrees.begin() + split.q, 0)));
    value *= std::pow(std::log(double(n)), double(split.h - split.q));
    for (int t = 0; t < split.q; ++t) value /= (1.0 - double(degrees[t]) * gamma);
    if (split.h > split.q) {
        const double euler_gamma = 0.57721566490153286061;
        // the log n + gamma_E factor: fold the constant in per eq. displays
        value *= std::pow((std::log(double(n)) + euler_gamma) / std::log(double(n)),
                          double(split.h - split.q));
    }
    if (split.h < split.v) {
        std::vector<int> tail(degrees.begin() + split.h, degrees.end());
        value *= C_gamma(tail, gamma);
    }
    out.value = value;
    std::ostringstream err;
    err << "O(";
    bool first = true;
    if (split.q > 0) {
        err << "n^-" << (1.0 - double(degrees[split.q - 1]) * gamma);
        first = false;
    }
    if (split.h < split.v) {
        if (!first) err << " + ";
        err << "n^-" << (double(degrees[split.h]) * gamma - 1.0);
        first = false;
    }
    if (split.q < split.h && split.h < split.v) {
        if (!first) err << " + ";
        err << "1/log n";
        first = false;
    }
    if (first) err << "n^-1";
    err << ")";
    out.error_order = err.str();
    return out;
}

// Exact distinct-index power sum (inclusion-exclusion over coincidences
// with exact partial sums); the brute-force variant is the literal nested
// loop for cross-checks at tiny sizes.
inline double S_gamma_exact(std::vector<int> degrees, std::uint64_t n, double gamma) {
    detail::require_sorted_positive(degrees);
    if (degrees.size() > 6) throw std::invalid_argument("S_gamma_exact: up to 6 degrees supported");
    std::map<std::vector<int>, double> memo;
    return detail::distinct_sum_rec(degrees, n, gamma, detail::SumForm::exact, memo);
}

inline double S_gamma_exact_bruteforce(const std::vector<int>& degrees, int n, double gamma) {
    detail::require_sorted_positive(degrees);
    if (degrees.size() > 4 || n > 80)
        throw std::invalid_argument("brute-force distinct sum limited to v <= 4, n <= 80");
    int v = int(degrees.size());
    std::vector<int> idx(v, 0);
    double total = 0;
    auto rec = [&](auto&& self, int pos) -> void {
        if (pos == v) {
            double term = 1;
            for (int t = 0; t < v; ++t) term *= std::pow(double(idx[t]), -double(degrees[t]) * gamma);
            total += term;
            return;
        }
        for (int r = 1; r <= n; ++r) {
            bool dup = false;
            for (int t = 0; t < pos; ++t)
                if (idx[t] == r) dup = true;
            if (dup) continue;
            idx[pos] = r;
            self(self, pos + 1);
        }
    };
    rec(rec, 0);
    return total;
}

struct PowerLawExpectation {
    double value = 0;
    std::string error_order;
};

// E X_F(G_n) under the power-law model: theta^{sum d} S_gamma(d) / aut(F),
// with the single sums carried at constant-corrected accuracy so that the
// finite-n relative error stays small.
inline PowerLawExpectation expected_X_powerlaw(const SmallGraph& f, std::uint64_t n, double gamma,
                                               double theta) {
    std::vector<int> d = f.degree_sequence_sorted();
    detail::require_sorted_positive(d);
    double degsum = 0;
    for (int x : d) degsum += x;
    std::map<std::vector<int>, double> memo;
    double s = detail::distinct_sum_rec(d, n, gamma, detail::SumForm::corrected, memo);
    PowerLawExpectation out;
    out.value = std::pow(theta, degsum) * s / to_double(automorphism_order(f));
    out.error_order = S_gamma(d, n, gamma).error_order;
    return out;
}

// Exact counterpart via S_gamma_exact; equals the Eq. (EXFG) nested sum.
inline double expected_X_powerlaw_exact(const SmallGraph& f, std::uint64_t n, double gamma,
                                        double theta) {
    std::vector<int> d = f.degree_sequence_sorted();
    double degsum = 0;
    for (int x : d) degsum += x;
    return std::pow(theta, degsum) * S_gamma_exact(d, n, gamma) / to_double(automorphism_order(f));
}

// Leading term of log E phi(w, G_n) for the power-law model.
inline double log_walk_density_powerlaw(const SmallGraph& f, double n, double gamma, double theta) {
    double min_sum = 0, deg_sum = 0;
    for (int v = 0; v < f.n; ++v) {
        min_sum += std::min(1.0, double(f.degree(v)) * gamma);
        deg_sum += double(f.degree(v));
    }
    return -(min_sum * std::log(n) + deg_sum * std::fabs(std::log(theta)));
}

inline double beta_exponent(double theta, double n) {
    if (!(theta > 0 && theta <= 1)) throw std::domain_error("beta_n: theta in (0,1]");
    return std::fabs(std::log(theta)) / std::log(n);
}

// ---------- power-law regime classifier ----------

enum class ShapeFamily {
    cycle_k,          // C_k
    trees_half,       // all trees on k/2+1 vertices
    star_half,        // K_{1,k/2}
    triangle_star,    // C_3 K_{1,(k-3)/2}
};

inline std::string family_name(ShapeFamily f, int k) {
    switch (f) {
    case ShapeFamily::cycle_k: return "C_" + std::to_string(k);
    case ShapeFamily::trees_half: return "T_" + std::to_string(k / 2 + 1);
    case ShapeFamily::star_half: return "K_{1," + std::to_string(k / 2) + "}";
    case ShapeFamily::triangle_star: return "C_3K_{1," + std::to_string((k - 3) / 2) + "}";
    }
    return "?";
}

struct PowerLawRegime {
    int k = 0;
    double gamma = 0, beta = 0;
    bool classified = false; // false when beta + gamma >= 1/2 (no degree growth)
    std::string branch;      // which displayed regime applies
    std::vector<ShapeFamily> dominating;
    double k_star_value = std::numeric_limits<double>::quiet_NaN();
    double k_dagger = std::numeric_limits<double>::quiet_NaN();
    double k_circ = std::numeric_limits<double>::quiet_NaN();
    double k_plus = std::numeric_limits<double>::quiet_NaN();
    bool nb_cycle_dominated = false;
};

inline PowerLawRegime regime_powerlaw(int k, double gamma, double beta) {
    if (k < 2) throw std::invalid_argument("regime_powerlaw: k >= 2");
    if (!(gamma > 0 && gamma < 1)) throw std::invalid_argument("regime_powerlaw: gamma in (0,1)");
    if (beta < 0) throw std::invalid_argument("regime_powerlaw: beta >= 0");
    PowerLawRegime r;
    r.k = k;
    r.gamma = gamma;
    r.beta = beta;
    double bg = beta + gamma;
    r.nb_cycle_dominated = bg < 0.5 - boundary_tolerance;
    if (bg >= 0.5 - boundary_tolerance) {
        r.classified = false;
        r.branch = "unclassified: beta + gamma >= 1/2, degrees do not grow";
        return r;
    }
    r.classified = true;
    r.k_dagger = 2.0 / gamma;
    double lower = (1.0 - gamma) / 2.0;
    if (bg < lower - boundary_tolerance) {
        r.branch = "sub-critical: beta + gamma < (1-gamma)/2";
        r.k_star_value = 1.0 / (0.5 - bg);
        if (k % 2 == 1 || double(k) > r.k_star_value + boundary_tolerance) {
            r.dominating = {ShapeFamily::cycle_k};
        } else if (std::fabs(double(k) - r.k_star_value) <= boundary_tolerance) {
            r.dominating = {ShapeFamily::cycle_k, ShapeFamily::trees_half};
        } else {
            r.dominating = {ShapeFamily::trees_half};
        }
    } else if (std::fabs(bg - lower) <= boundary_tolerance) {
        r.branch = "critical: beta + gamma = (1-gamma)/2";
        r.k_star_value = 2.0 / gamma;
        if (k % 2 == 1) {
            r.dominating = {ShapeFamily::cycle_k};
        } else if (double(k) < r.k_star_value - boundary_tolerance) {
            r.dominating = {ShapeFamily::trees_half};
        } else {
            r.dominating = {ShapeFamily::cycle_k, ShapeFamily::star_half};
        }
    } else {
        r.branch = "super-critical: (1-gamma)/2 < beta + gamma < 1/2";
        r.k_circ = 2.0 * (0.5 - gamma) / (bg - lower) + 3.0;
        r.k_plus = std::max(r.k_circ, r.k_dagger + 1.0);
        if (k % 2 == 0) {
            if (double(k) < r.k_dagger - boundary_tolerance)
                r.dominating = {ShapeFamily::trees_half};
            else
                r.dominating = {ShapeFamily::star_half};
        } else {
            if (double(k) < r.k_plus - boundary_tolerance) {
                r.dominating = {ShapeFamily::cycle_k};
            } else if (std::fabs(double(k) - r.k_plus) <= boundary_tolerance) {
                if (r.k_plus <= r.k_dagger + 1.0 + boundary_tolerance)
                    r.dominating = {ShapeFamily::cycle_k};
                else
                    r.dominating = {ShapeFamily::cycle_k, ShapeFamily::triangle_star};
            } else {
                r.dominating = {ShapeFamily::triangle_star};
            }
        }
    }
    return r;
}

// ---------- tree / unicyclic dominance rates ----------

struct DominanceRate {
    enum class Kind { theta_one, theta_inv_log, big_o_power, big_o_inv_log, big_o_inv_n } kind;
    double exponent = 0; // n-exponent for the power classes (positive decay rate)
    int log_power = 0;   // (log n)^{d*} factor
    std::string text;
};

namespace detail {
inline int degrees_equal_inv_gamma(const SmallGraph& g, double gamma) {
    int c = 0;
    for (int v = 0; v < g.n; ++v)
        if (std::fabs(double(g.degree(v)) * gamma - 1.0) < boundary_tolerance) ++c;
    return c;
}

inline DominanceRate make_rate(DominanceRate::Kind kind, double expnt, int logp) {
    DominanceRate r{kind, expnt, logp, ""};
    std::ostringstream os;
    switch (kind) {
    case DominanceRate::Kind::theta_one: os << "Theta(1)"; break;
    case DominanceRate::Kind::theta_inv_log: os << "Theta(1/log n)"; break;
    case DominanceRate::Kind::big_o_inv_log: os << "O(1/log n)"; break;
    case DominanceRate::Kind::big_o_inv_n: os << "O((log n)^" << logp << " / n)"; break;
    case DominanceRate::Kind::big_o_power:
        os << "O((log n)^" << logp << " n^-" << expnt << ")";
        break;
    }
    r.text = os.str();
    return r;
}
} // namespace detail

// Decay class of E X_T / E X_{K_{1,e}} for a tree T distinct from the star.
inline DominanceRate star_dominance_rate(const SmallGraph& tree, double gamma) {
    int e = tree.edge_count();
    if (e != tree.n - 1 || !tree.connected()) throw std::invalid_argument("star_dominance_rate: not a tree");
    if (e < 3) throw std::invalid_argument("star_dominance_rate: needs at least 3 edges");
    if (canonical_form(tree) == canonical_form(star_graph(e)))
        throw std::invalid_argument("star_dominance_rate: compare a non-star tree");
    if (!(gamma > 0 && gamma <= 1)) throw std::domain_error("star_dominance_rate: gamma in (0,1]");
    int dstar = detail::degrees_equal_inv_gamma(tree, gamma);
    double inv_e = 1.0 / double(e);
    if (gamma < inv_e - boundary_tolerance)
        return detail::make_rate(DominanceRate::Kind::theta_one, 0, 0);
    if (std::fabs(gamma - inv_e) <= boundary_tolerance)
        return detail::make_rate(DominanceRate::Kind::theta_inv_log, 0, 0);
    if (gamma < 0.5 - boundary_tolerance)
        return detail::make_rate(DominanceRate::Kind::big_o_power,
                                 std::min(gamma, double(e) * gamma - 1.0), dstar);
    if (gamma < 1.0 - boundary_tolerance)
        return detail::make_rate(DominanceRate::Kind::big_o_inv_n, 1.0, dstar);
    return detail::make_rate(DominanceRate::Kind::big_o_inv_log, 0, 0);
}

// Decay class of E X_U / E X_{C_3 K_{1,e-3}} for unicyclic U.
inline DominanceRate unicyclic_dominance_rate(const SmallGraph& u, double gamma) {
    int e = u.edge_count();
    if (e != u.n || !u.connected()) throw std::invalid_argument("unicyclic_dominance_rate: not unicyclic");
    if (e < 4) throw std::invalid_argument("unicyclic_dominance_rate: needs at least 4 edges");
    if (canonical_form(u) == canonical_form(triangle_star_graph(e - 3)))
        throw std::invalid_argument("unicyclic_dominance_rate: compare a different unicyclic graph");
    if (!(gamma > 0 && gamma <= 0.5 + boundary_tolerance))
        throw std::domain_error("unicyclic_dominance_rate: gamma in (0,1/2]");
    int dstar = detail::degrees_equal_inv_gamma(u, gamma);
    double inv = 1.0 / double(e - 1);
    if (gamma < inv - boundary_tolerance)
        return detail::make_rate(DominanceRate::Kind::theta_one, 0, 0);
    if (std::fabs(gamma - inv) <= boundary_tolerance)
        return detail::make_rate(DominanceRate::Kind::theta_inv_log, 0, 0);
    if (gamma < 0.5 - boundary_tolerance)
        return detail::make_rate(DominanceRate::Kind::big_o_power,
                                 std::min({gamma, 1.0 - 2.0 * gamma, double(e - 1) * gamma - 1.0}),
                                 dstar);
    return detail::make_rate(DominanceRate::Kind::big_o_inv_log, 0, 0);
}

// ---------- Monte Carlo verification helpers ----------

struct FractionEstimate {
    double fraction = 0;
    double ci_low = 0, ci_high = 0;
    int replicates = 0;
};

// Monte Carlo estimate of sum_{F in set} ind_k(F, G) / |W_k(G)| with a
// normal confidence interval over replicates.
inline FractionEstimate empirical_dominance_fraction(
    const std::function<Graph(std::uint64_t)>& sampler, int k,
    const std::vector<SmallGraph>& shapes, int replicates, std::uint64_t seed,
    double level = 0.95) {
    std::vector<double> fracs;
    for (int r = 0; r < replicates; ++r) {
        Graph g = sampler(CounterRng::derive_key(seed, 17, std::uint64_t(r)));
        MotifCounter mc(g);
        u128 walks = mc.closed_walk_count(k);
        if (walks == 0) continue;
        u128 hits = 0;
        for (const auto& f : shapes) hits = checked_add(hits, mc.shape_walk_count(f, k));
        fracs.push_back(to_double(hits) / to_double(walks));
    }
    if (fracs.empty()) throw std::domain_error("empirical_dominance_fraction: no replicate had walks");
    FractionEstimate est;
    est.replicates = int(fracs.size());
    est.fraction = mean(fracs);
    double se = std::sqrt(sample_variance(fracs) / double(fracs.size()));
    double z = normal_quantile(0.5 + level / 2);
    est.ci_low = est.fraction - z * se;
    est.ci_high = est.fraction + z * se;
    return est;
}

// ---------- the convergence-rate experiment ----------

struct RatePoint {
    double alpha = 0;
    double predicted = 0;  // beta(alpha; k) = alpha min(1, |k - k*|/2)
    double estimated = 0;  // minus the regression slope of log(ratio-1) on log n
    int points_used = 0;
    bool flagged = false;  // some sizes dropped because ratio <= 1
};

// The symmetric three-block kernel standing in for a mixed-membership model
// with three communities.
inline Kernel rate_experiment_kernel() {
    double third = 1.0 / 3.0;
    return Kernel::blockmodel({third, third, third},
                              {{1.4, 0.8, 0.8}, {0.8, 1.4, 0.8}, {0.8, 0.8, 1.4}});
}

namespace detail {

// (Tr A^4, #P_3, m) fast enough for the dense sizes the experiment hits.
struct Walk4Stats {
    double trace4 = 0;
    double p3 = 0;
    double edges = 0;
};

inline Walk4Stats walk4_stats(const Graph& g) {
    Walk4Stats s;
    int n = g.node_count();
    s.edges = double(g.edge_count());
    double mu = n ? 2.0 * s.edges / n : 0;
    for (int v = 0; v < n; ++v) {
        double d = double(g.degree(v));
        s.p3 += d * (d - 1) / 2;
    }
    if (mu <= 64.0) {
        SubgraphCounts sc(g);
        s.trace4 = to_double(sc.closed_walks4_total());
        return s;
    }
    // dense route: codegrees by bit-row intersection
    std::size_t words = g.row_words();
    double tr = 0;
    for (int v = 0; v < n; ++v) {
        double d = double(g.degree(v));
        tr += d * d;
    }
    for (int a = 0; a < n; ++a) {
        const std::uint64_t* ra = g.row(a);
        for (int b = a + 1; b < n; ++b) {
            const std::uint64_t* rb = g.row(b);
            int c = 0;
            for (std::size_t w = 0; w < words; ++w) c += __builtin_popcountll(ra[w] & rb[w]);
            tr += 2.0 * double(c) * double(c);
        }
    }
    s.trace4 = tr;
    return s;
}

} // namespace detail

// Estimated versus predicted convergence rates of the k = 4 walk ratio for
// mu = 2 n^alpha, across sizes 2^j_lo .. 2^j_hi.
inline std::vector<RatePoint> rate_experiment(const std::vector<double>& alphas, int j_lo, int j_hi,
                                              std::uint64_t seed, int replicates_at_largest = 10) {
    Kernel kappa = rate_experiment_kernel();
    std::vector<RatePoint> out;
    for (double alpha : alphas) {
        RatePoint pt;
        pt.alpha = alpha;
        double ks_limit = alpha > 0 ? 2.0 / alpha : std::numeric_limits<double>::infinity();
        pt.predicted = alpha * std::min(1.0, std::fabs(4.0 - ks_limit) / 2.0);
        std::vector<double> xs, ys;
        for (int j = j_lo; j <= j_hi; ++j) {
            int n = 1 << j;
            double rho = 2.0 * std::pow(double(n), alpha - 1.0);
            double mu = double(n) * rho;
            bool trees = 4.0 < k_star(double(n), rho); // dominant family at this size
            // fully clipped probabilities give the complete graph exactly
            bool complete = rho * 0.8 >= 1.0;
            int reps = complete ? 1 : replicates_at_largest << std::min(5, j_hi - j);
            double mean_walks = 0, mean_dom = 0;
            for (int r = 0; r < reps; ++r) {
                Graph g = complete
                              ? Graph(0)
                              : sample_kernel_graph_impl(n, rho, kappa,
                                                         CounterRng::derive_key(seed, 23,
                                                                                (std::uint64_t(j) << 32) ^
                                                                                    std::uint64_t(r) ^
                                                                                    std::uint64_t(alpha * 1e6)),
                                                         true);
                double tr4, p3, m;
                if (complete) {
                    double nn = double(n);
                    tr4 = std::pow(nn - 1, 4) + (nn - 1);
                    p3 = nn * (nn - 1) * (nn - 2) / 2;
                    m = nn * (nn - 1) / 2;
                } else {
                    auto st = detail::walk4_stats(g);
                    tr4 = st.trace4;
                    p3 = st.p3;
                    m = st.edges;
                }
                double c4walks = tr4 - 2 * m - 4 * p3; // = 8 c_4
                mean_walks += tr4;
                mean_dom += trees ? 4 * p3 : c4walks;
            }
            mean_walks /= reps;
            mean_dom /= reps;
            double ratio = mean_walks / mean_dom;
            if (ratio <= 1.0) {
                pt.flagged = true;
                continue;
            }
            xs.push_back(std::log(double(n)));
            ys.push_back(std::log(ratio - 1.0));
            (void)mu;
        }
        pt.points_used = int(xs.size());
        pt.estimated = xs.size() >= 2 ? -regression_slope(xs, ys) : std::numeric_limits<double>::quiet_NaN();
        out.push_back(pt);
    }
    return out;
}

} // namespace walkcensus
