#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <vector>

namespace walkcensus {

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Wichura's AS241 rational approximation, then one Halley step against
// erfc so the quantile is good to ~1e-15 everywhere we evaluate it.
inline double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("normal_quantile: p outside (0,1)");
    double q = p - 0.5, r, x;
    if (std::fabs(q) <= 0.425) {
        r = 0.180625 - q * q;
        x = q *
            (((((((2509.0809287301226727 * r + 33430.575583588128105) * r + 67265.770927008700853) * r +
                 45921.953931549871457) * r + 13731.693765509461125) * r + 1971.5909503065514427) * r +
              133.14166789178437745) * r + 3.387132872796366608) /
            (((((((5226.495278852545703 * r + 28729.085735721942674) * r + 39307.89580009271061) * r +
                 21213.794301586595867) * r + 5394.1960214247511077) * r + 687.1870074920579083) * r +
              42.313330701600911252) * r + 1.0);
    } else {
        r = q < 0 ? p : 1 - p;
        r = std::sqrt(-std::log(r));
        if (r <= 5.0) {
            r -= 1.6;
            x = (((((((7.7454501427834140764e-4 * r + 0.0227238449892691845833) * r +
                      0.24178072517745061177) * r + 1.27045825245236838258) * r +
                    3.64784832476320460504) * r + 5.7694972214606914055) * r +
                  4.6303378461565452959) * r + 1.42343711074968357734) /
                (((((((1.05075007164441684324e-9 * r + 5.475938084995344946e-4) * r +
                      0.0151986665636164571966) * r + 0.14810397642748007459) * r +
                    0.68976733498510000455) * r + 1.6763848301838038494) * r +
                  2.05319162663775882187) * r + 1.0);
        } else {
            r -= 5.0;
            x = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                      0.0012426609473880784386) * r + 0.026532189526576123093) * r +
                    0.29656057182850489123) * r + 1.7848265399172913358) * r +
                  5.4637849111641143699) * r + 6.6579046435011037772) /
                (((((((2.04426310338993978564e-15 * r + 1.4215117583164458887e-7) * r +
                      1.8463183175100546818e-5) * r + 7.868691311456132591e-4) * r +
                    0.0148753612908506148525) * r + 0.13692988092273580531) * r +
                  0.59983220655588793769) * r + 1.0);
        }
        if (q < 0) x = -x;
    }
    double e = normal_cdf(x) - p;
    double u = e * std::sqrt(2.0 * M_PI) * std::exp(x * x / 2.0);
    return x - u / (1.0 + x * u / 2.0);
}

inline double mean(const std::vector<double>& v) {
    if (v.empty()) throw std::domain_error("mean of empty sample");
    double s = 0;
    for (double x : v) s += x;
    return s / double(v.size());
}

// Unbiased sample variance.
inline double sample_variance(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    double m = mean(v), s = 0;
    for (double x : v) s += (x - m) * (x - m);
    return s / double(v.size() - 1);
}

// Riemann zeta on s > 0, s != 1, by direct summation plus Euler-Maclaurin
// tail. Also valid as the analytic continuation for s in (0,1).
inline double zeta(double s) {
    if (s <= 0.0 || s == 1.0) throw std::domain_error("zeta: need s > 0, s != 1");
    static thread_local std::map<double, double> cache;
    auto it = cache.find(s);
    if (it != cache.end()) return it->second;
    const double N = 1.0e6;
    double sum = 0;
    for (double r = 1; r <= N; r += 1) sum += std::pow(r, -s);
    double tail = std::pow(N, 1 - s) / (s - 1) - 0.5 * std::pow(N, -s) +
                  s / 12.0 * std::pow(N, -s - 1) -
                  s * (s + 1) * (s + 2) / 720.0 * std::pow(N, -s - 3);
    double z = sum + tail;
    cache[s] = z;
    return z;
}

// Least-squares slope of y on x.
inline double regression_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::domain_error("regression needs >= 2 points");
    double mx = mean(x), my = mean(y), sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0) throw std::domain_error("regression with constant x");
    return sxy / sxx;
}

// Silverman rule-of-thumb bandwidth with a floor for near-constant samples.
inline double silverman_bandwidth(std::vector<double> v, double floor_bw = 1e-4) {
    std::size_t n = v.size();
    if (n < 2) return floor_bw;
    double sd = std::sqrt(sample_variance(v));
    std::sort(v.begin(), v.end());
    auto quantile = [&](double q) {
        double pos = q * double(n - 1);
        std::size_t lo = std::size_t(pos);
        double frac = pos - double(lo);
        return lo + 1 < n ? v[lo] * (1 - frac) + v[lo + 1] * frac : v[lo];
    };
    double iqr = quantile(0.75) - quantile(0.25);
    double spread = sd;
    if (iqr > 0) spread = std::min(sd, iqr / 1.34);
    double h = 0.9 * spread * std::pow(double(n), -0.2);
    return std::max(h, floor_bw);
}

struct DensityCurve {
    std::vector<double> grid;
    std::vector<double> values;

    double integral() const {
        double s = 0;
        for (std::size_t i = 1; i < grid.size(); ++i)
            s += 0.5 * (values[i] + values[i - 1]) * (grid[i] - grid[i - 1]);
        return s;
    }
};

// Gaussian KDE evaluated on an equispaced grid covering [lo, hi].
inline DensityCurve gaussian_kde(const std::vector<double>& sample, double bandwidth,
                                 double lo, double hi, std::size_t points = 201) {
    DensityCurve c;
    c.grid.resize(points);
    c.values.assign(points, 0.0);
    double step = (hi - lo) / double(points - 1);
    const double norm = 1.0 / (double(sample.size()) * bandwidth * std::sqrt(2.0 * M_PI));
    for (std::size_t i = 0; i < points; ++i) {
        double x = lo + step * double(i);
        c.grid[i] = x;
        double acc = 0;
        for (double s : sample) {
            double z = (x - s) / bandwidth;
            acc += std::exp(-0.5 * z * z);
        }
        c.values[i] = acc * norm;
    }
    return c;
}

} // namespace walkcensus
