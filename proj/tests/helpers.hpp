#pragma once

#include <cstdint>
#include <vector>

#include "dualring/config.hpp"
#include "dualring/rng.hpp"
#include "dualring/timetags.hpp"

namespace testing {

// Defaults of ExperimentConfig are the reference calibration used throughout
// the suites.
inline dualring::ExperimentConfig reference_config() { return {}; }

inline dualring::TimeTagStream random_stream(std::uint64_t seed, std::uint64_t stream_id,
                                             std::size_t n, std::uint64_t duration_ps,
                                             std::uint32_t channel = 0) {
    dualring::Rng rng(seed, stream_id);
    dualring::TimeTagStream s;
    s.channel = channel;
    s.duration_ps = duration_ps;
    s.tags.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        s.tags.push_back(static_cast<std::uint64_t>(rng.uniform() * double(duration_ps)));
    std::sort(s.tags.begin(), s.tags.end());
    return s;
}

// O(n*m) oracle for the pair histogram.
inline std::vector<std::uint64_t> brute_force_pair_histogram(
    const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b,
    std::int64_t bin, std::int64_t lo, std::int64_t hi) {
    std::vector<std::uint64_t> counts(static_cast<std::size_t>((hi - lo) / bin), 0);
    for (std::uint64_t ta : a)
        for (std::uint64_t tb : b) {
            const std::int64_t d =
                static_cast<std::int64_t>(tb) - static_cast<std::int64_t>(ta);
            if (d >= lo && d < hi) ++counts[static_cast<std::size_t>((d - lo) / bin)];
        }
    return counts;
}

inline std::uint64_t brute_force_pair_count(const std::vector<std::uint64_t>& a,
                                            const std::vector<std::uint64_t>& b,
                                            std::int64_t lo, std::int64_t hi) {
    std::uint64_t n = 0;
    for (std::uint64_t ta : a)
        for (std::uint64_t tb : b) {
            const std::int64_t d =
                static_cast<std::int64_t>(tb) - static_cast<std::int64_t>(ta);
            if (d >= lo && d < hi) ++n;
        }
    return n;
}

// Windowed triple oracle: herald-arm2 pairs inside the pair window, binned by
// t3 - t2.
inline std::vector<std::uint64_t> brute_force_triple_histogram(
    const std::vector<std::uint64_t>& h, const std::vector<std::uint64_t>& a2,
    const std::vector<std::uint64_t>& a3, std::int64_t bin, std::int64_t lo,
    std::int64_t hi, std::int64_t pair_window) {
    const std::int64_t wlo = -(pair_window / 2);
    const std::int64_t whi = wlo + pair_window;
    std::vector<std::uint64_t> counts(static_cast<std::size_t>((hi - lo) / bin), 0);
    for (std::uint64_t t1 : h)
        for (std::uint64_t t2 : a2) {
            const std::int64_t d12 =
                static_cast<std::int64_t>(t2) - static_cast<std::int64_t>(t1);
            if (d12 < wlo || d12 >= whi) continue;
            for (std::uint64_t t3 : a3) {
                const std::int64_t d =
                    static_cast<std::int64_t>(t3) - static_cast<std::int64_t>(t2);
                if (d >= lo && d < hi)
                    ++counts[static_cast<std::size_t>((d - lo) / bin)];
            }
        }
    return counts;
}

// Direct evaluation of the heralded-g2 counts at one t3.
struct BruteG2Point {
    std::uint64_t n1 = 0, n12 = 0, n13 = 0, n123 = 0;
};

inline BruteG2Point brute_force_g2_counts(const std::vector<std::uint64_t>& h,
                                          const std::vector<std::uint64_t>& a2,
                                          const std::vector<std::uint64_t>& a3,
                                          std::int64_t pair_window, std::int64_t t3) {
    const std::int64_t wlo = -(pair_window / 2);
    const std::int64_t whi = wlo + pair_window;
    BruteG2Point p;
    p.n1 = h.size();
    for (std::uint64_t t1 : h) {
        std::uint64_t c2 = 0, c3 = 0;
        for (std::uint64_t t2 : a2) {
            const std::int64_t d =
                static_cast<std::int64_t>(t2) - static_cast<std::int64_t>(t1);
            if (d >= wlo && d < whi) ++c2;
        }
        for (std::uint64_t t3_tag : a3) {
            const std::int64_t d =
                static_cast<std::int64_t>(t3_tag) - static_cast<std::int64_t>(t1) - t3;
            if (d >= wlo && d < whi) ++c3;
        }
        p.n12 += c2;
        p.n13 += c3;
        p.n123 += c2 * c3;
    }
    return p;
}

}  // namespace testing
