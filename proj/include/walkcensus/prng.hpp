#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace walkcensus {

// Counter-based generator: every draw is a stateless mix of (key, counter).
// Purpose/substream ids derive independent keys from one master seed, so
// replicates can run in parallel and still reproduce bit-for-bit.
namespace detail {
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
} // namespace detail

enum class Stream : std::uint64_t {
    latents = 1,
    edges = 2,
    rewires = 3,
    subsets = 4,
    generic = 5,
};

class CounterRng {
public:
    CounterRng(std::uint64_t master_seed, Stream purpose, std::uint64_t substream = 0)
        : key_(derive_key(master_seed, static_cast<std::uint64_t>(purpose), substream)) {}

    static std::uint64_t derive_key(std::uint64_t seed, std::uint64_t purpose,
                                    std::uint64_t substream) {
        std::uint64_t k = detail::mix64(seed);
        k = detail::mix64(k ^ (purpose * 0xd6e8feb86659fd93ULL));
        k = detail::mix64(k ^ (substream * 0xa0761d6478bd642fULL));
        return k;
    }

    std::uint64_t next_u64() { return detail::mix64(key_ ^ (ctr_++ * 0x2545f4914f6cdd1dULL)); }

    // Uniform on [0,1) with 53 random bits.
    double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("below(0)");
        std::uint64_t bound = ~std::uint64_t(0) - (~std::uint64_t(0) % n);
        for (;;) {
            std::uint64_t v = next_u64();
            if (v < bound) return v % n;
        }
    }

    bool bernoulli(double p) { return next_double() < p; }

    // Number of failures before the next success of a Bernoulli(p) sequence;
    // used to skip over absent edges in one draw.
    std::uint64_t geometric_skip(double p) {
        if (p >= 1.0) return 0;
        if (p <= 0.0) return ~std::uint64_t(0);
        double u = 1.0 - next_double(); // (0,1]
        double g = std::floor(std::log(u) / std::log1p(-p));
        if (g > 9.0e18) return ~std::uint64_t(0);
        return std::uint64_t(g);
    }

private:
    std::uint64_t key_;
    std::uint64_t ctr_ = 0;
};

} // namespace walkcensus
