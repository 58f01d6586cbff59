#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dualring/timetags.hpp"

namespace dualring {

using TagSpan = std::span<const std::uint64_t>;

// Delay convention throughout: delay = t_b - t_a, binned into half-open
// intervals [low, high) with the bin low edge inclusive.
struct CorrelationHistogram {
    std::int64_t bin_width_ps = 1;
    std::int64_t delay_min_ps = 0;
    std::int64_t delay_max_ps = 0;
    std::vector<std::uint64_t> counts;

    std::size_t n_bins() const { return counts.size(); }
    double bin_center_ps(std::size_t i) const {
        return static_cast<double>(delay_min_ps) +
               (static_cast<double>(i) + 0.5) * static_cast<double>(bin_width_ps);
    }
    std::uint64_t total() const;
};

// Number of (t_a, t_b) pairs with t_b - t_a in [delay_lo, delay_hi). Linear
// two-pointer sweep, O(|a| + |b| + pairs). Both spans must be sorted
// (asserted in debug builds; documented contract in release).
std::uint64_t count_pairs_in_range(TagSpan a, TagSpan b, std::int64_t delay_lo_ps,
                                   std::int64_t delay_hi_ps);

// All-pairs delay histogram. (delay_max - delay_min) must be a positive
// multiple of bin_width. shards > 1 splits stream a into contiguous time
// slices processed concurrently; the result is bit-identical for any shard
// count.
CorrelationHistogram cross_correlation_histogram(const TimeTagStream& a,
                                                 const TimeTagStream& b,
                                                 std::int64_t bin_width_ps,
                                                 std::int64_t delay_min_ps,
                                                 std::int64_t delay_max_ps,
                                                 unsigned shards = 1);

struct CoincidenceResult {
    std::uint64_t raw = 0;
    std::uint64_t accidentals = 0;
    std::int64_t net = 0;
    double car = 0.0;  // raw/accidentals; NaN when accidentals = 0
    std::int64_t window_ps = 0;
    std::int64_t accidental_offset_ps = 0;
    double integration_s = 0.0;
    std::uint64_t singles_a = 0;
    std::uint64_t singles_b = 0;

    double raw_rate_hz() const;
    double net_rate_hz() const;
};

// Derived fields (net, CAR) from raw and accidental counts.
CoincidenceResult make_coincidence_result(std::uint64_t raw, std::uint64_t accidentals);

// Windowed coincidences: raw in [-window/2, -window/2 + window), accidentals
// in the same-width window displaced by accidental_offset (must not overlap
// the signal window). Net = raw - accidentals, CAR = raw/accidentals.
CoincidenceResult coincidences(const TimeTagStream& a, const TimeTagStream& b,
                               std::int64_t window_ps = 448,
                               std::int64_t accidental_offset_ps = 10000);

// eta_K = N_si / N_s. Throws std::domain_error when n_heralds is zero.
double klyshko_efficiency(std::uint64_t n_coincidences, std::uint64_t n_heralds);

// g2 = N123 * N1 / (N12 * N13); NaN when a denominator count is zero.
double g2_from_counts(std::uint64_t n1, std::uint64_t n12, std::uint64_t n13,
                      std::uint64_t n123);

// Heralded second-order coherence on a uniform t3 grid with t1 = t2 = 0:
// g2(t3) = N123(t3) N1 / (N12 N13(t3)). Points with a zero denominator are
// NaN (undefined), never coerced; sigma = g2/sqrt(N123).
struct GTwoResult {
    std::vector<double> t3_ps;
    std::vector<double> g2;
    std::vector<double> sigma;
    std::vector<std::uint64_t> n13;
    std::vector<std::uint64_t> n123;
    std::uint64_t n1 = 0;
    std::uint64_t n12 = 0;
    std::int64_t pair_window_ps = 0;

    // Undefined points carry NaN.
    double g2_at_zero() const;
};

// Streaming accumulator: N1/N12/N13/N123 are sums over heralds, so blocks of
// heralds can be processed independently and merged exactly. Arm spans passed
// to add_block must cover the herald block's full window envelope.
class GTwoAccumulator {
public:
    GTwoAccumulator(std::int64_t pair_window_ps, std::int64_t t3_min_ps,
                    std::int64_t t3_step_ps, std::size_t n_points);

    void add_block(TagSpan heralds, TagSpan arm2, TagSpan arm3);
    GTwoResult finalize() const;

    // Envelope of arm delays relative to a herald that can influence counts.
    std::int64_t arm2_reach_lo_ps() const { return window_lo_; }
    std::int64_t arm2_reach_hi_ps() const { return window_lo_ + pair_window_; }
    std::int64_t arm3_reach_lo_ps() const { return t3_min_ + window_lo_; }
    std::int64_t arm3_reach_hi_ps() const {
        return t3_min_ + t3_step_ * static_cast<std::int64_t>(n_points_ - 1) +
               window_lo_ + pair_window_;
    }

private:
    std::int64_t pair_window_;
    std::int64_t window_lo_;
    std::int64_t t3_min_;
    std::int64_t t3_step_;
    std::size_t n_points_;
    std::uint64_t n1_ = 0;
    std::uint64_t n12_ = 0;
    std::vector<std::int64_t> n13_diff_;
    std::vector<std::int64_t> n123_diff_;
};

GTwoResult heralded_g2(const TimeTagStream& herald, const TimeTagStream& arm2,
                       const TimeTagStream& arm3, std::int64_t pair_window_ps,
                       std::int64_t t3_min_ps, std::int64_t t3_step_ps,
                       std::size_t n_points);

// Triples (t1, t2, t3) with t2 - t1 inside the pair window, binned by the
// inter-arm delay t3 - t2 over [delay_min, delay_max).
CorrelationHistogram triple_coincidence_histogram(const TimeTagStream& herald,
                                                  const TimeTagStream& arm2,
                                                  const TimeTagStream& arm3,
                                                  std::int64_t bin_width_ps,
                                                  std::int64_t delay_min_ps,
                                                  std::int64_t delay_max_ps,
                                                  std::int64_t pair_window_ps = 448);

// Block accumulation into an existing histogram (counts are per-herald sums,
// so disjoint herald blocks merge exactly).
void accumulate_triple_coincidences(TagSpan heralds, TagSpan arm2, TagSpan arm3,
                                    std::int64_t pair_window_ps,
                                    CorrelationHistogram& hist);

// CSV exports: delay_ps,counts and t3_ps,g2,sigma,n123.
void write_histogram_csv(const CorrelationHistogram& hist, const std::string& path);
void write_g2_csv(const GTwoResult& g2, const std::string& path);

}  // namespace dualring
