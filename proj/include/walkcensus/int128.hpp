#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace walkcensus {

using u128 = unsigned __int128;
using i128 = __int128;

struct count_overflow : std::overflow_error {
    count_overflow() : std::overflow_error("128-bit count overflow") {}
};

inline u128 checked_add(u128 a, u128 b) {
    u128 r = a + b;
    if (r < a) throw count_overflow();
    return r;
}

inline u128 checked_mul(u128 a, u128 b) {
    if (a != 0 && b > ~u128(0) / a) throw count_overflow();
    return a * b;
}

// (n)_k = n (n-1) ... (n-k+1), exact.
inline u128 falling_factorial(std::uint64_t n, unsigned k) {
    if (k > n) return 0;
    u128 r = 1;
    for (unsigned i = 0; i < k; ++i) r = checked_mul(r, u128(n - i));
    return r;
}

inline u128 binomial_u128(std::uint64_t n, unsigned k) {
    if (k > n) return 0;
    if (k > n - k) k = unsigned(n - k);
    u128 r = 1;
    for (unsigned i = 1; i <= k; ++i) {
        r = checked_mul(r, u128(n - k + i));
        r /= i;
    }
    return r;
}

inline std::string to_string(u128 v) {
    if (v == 0) return "0";
    std::string s;
    while (v > 0) {
        s.push_back(char('0' + int(v % 10)));
        v /= 10;
    }
    return {s.rbegin(), s.rend()};
}

inline double to_double(u128 v) {
    return double(std::uint64_t(v >> 64)) * 18446744073709551616.0 +
           double(std::uint64_t(v));
}

// Exact non-negative rational with 128-bit parts; enough for desk-scale
// subgraph-count ratios.
struct Rat128 {
    u128 num = 0;
    u128 den = 1;

    Rat128() = default;
    Rat128(u128 n, u128 d) : num(n), den(d) {
        if (den == 0) throw std::domain_error("rational with zero denominator");
        reduce();
    }

    void reduce() {
        u128 a = num, b = den;
        while (b) { u128 t = a % b; a = b; b = t; }
        if (a > 1) { num /= a; den /= a; }
        if (num == 0) den = 1;
    }

    bool operator==(const Rat128& o) const { return num == o.num && den == o.den; }
    double value() const { return to_double(num) / to_double(den); }
};

} // namespace walkcensus
