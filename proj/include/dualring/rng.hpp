#pragma once

#include <cmath>
#include <cstdint>

namespace dualring {

// SplitMix64 (Steele, Lea, Flood 2014). Used for seeding and for deriving
// independent substreams from a master seed.
struct SplitMix64 {
    std::uint64_t state = 0;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
};

// xoshiro256++ (Blackman, Vigna 2019), seeded via SplitMix64. Substreams are
// derived by mixing a stream id into the master seed, which gives fixed,
// order-independent per-channel streams.
class Rng {
public:
    Rng(std::uint64_t master_seed, std::uint64_t stream_id) {
        SplitMix64 sm(master_seed ^ (0x9e3779b97f4a7c15ULL * (stream_id + 1)));
        for (auto& s : state_) s = sm.next();
    }

    std::uint64_t next_u64() {
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

    // Uniform in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    // Exponential with the given mean; inversion on (0, 1].
    double exponential(double mean) { return -mean * std::log1p(-uniform()); }

    // Standard normal via Marsaglia polar; second value cached.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        have_spare_ = true;
        return u * m;
    }

    double gaussian(double mean, double sigma) { return mean + sigma * gaussian(); }

    // Poisson counts: exponential-gap counting for small means, normal
    // approximation above (adequate for sampled scan noise).
    std::uint64_t poisson(double mean) {
        if (mean <= 0.0) return 0;
        if (mean < 64.0) {
            const double limit = std::exp(-mean);
            std::uint64_t n = 0;
            double product = uniform();
            while (product > limit) {
                ++n;
                product *= uniform();
            }
            return n;
        }
        const double draw = std::round(gaussian(mean, std::sqrt(mean)));
        return draw < 0.0 ? 0 : static_cast<std::uint64_t>(draw);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4] = {};
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace dualring
