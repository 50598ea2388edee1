#pragma once

#include <cmath>
#include <cstdint>

namespace spde::rng {

// Streams are keyed by (master seed, path index, tag) through SplitMix64 so
// that Brownian and jump draws are independent and reproducible no matter how
// paths are scheduled across workers.

enum class StreamTag : std::uint64_t {
    brownian = 0x9e3779b97f4a7c15ull,
    jumps    = 0xd1b54a32d192ed03ull,
    generic  = 0x8cb92ba72f3d8dd7ull,
};

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t path_index,
                                        StreamTag tag) {
    std::uint64_t s = master;
    std::uint64_t a = splitmix64(s);
    s ^= path_index * 0xff51afd7ed558ccdull;
    std::uint64_t b = splitmix64(s);
    s ^= static_cast<std::uint64_t>(tag);
    std::uint64_t c = splitmix64(s);
    return a ^ (b << 1) ^ (c >> 1);
}

/// xoshiro256++ with fully specified output; samplers below avoid
/// std::*_distribution so draws are identical across standard libraries.
class Engine {
public:
    explicit Engine(std::uint64_t seed) {
        std::uint64_t s = seed;
        for (auto& w : state_) w = splitmix64(s);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1] (safe for log()).
    double uniform_pos() { return 1.0 - uniform(); }

    /// Standard normal via Box-Muller; caches the second draw.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform_pos();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    /// Poisson by sequential inversion; fine for the small means used here.
    int poisson(double mean) {
        if (mean <= 0.0) return 0;
        const double target = uniform();
        double p = std::exp(-mean);
        double cdf = p;
        int k = 0;
        while (target > cdf && k < 10000) {
            ++k;
            p *= mean / static_cast<double>(k);
            cdf += p;
        }
        return k;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4]{};
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace spde::rng
