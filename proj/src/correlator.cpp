#include "dualring/correlator.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <future>
#include <limits>
#include <stdexcept>

#include "dualring/csv.hpp"

namespace dualring {

namespace {

std::int64_t as_i64(std::uint64_t t) { return static_cast<std::int64_t>(t); }

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

void check_sorted(TagSpan s) {
    assert(std::is_sorted(s.begin(), s.end()) && "time tags must be sorted");
    (void)s;
}

// Calls fn(t_a, index range in b) for every a-tag; the b range holds all tags
// with t_b - t_a in [lo, hi).
template <typename Fn>
void sweep_windows(TagSpan a, TagSpan b, std::int64_t lo, std::int64_t hi, Fn&& fn) {
    std::size_t j0 = 0, j1 = 0;
    for (std::uint64_t ta : a) {
        const std::int64_t wlo = as_i64(ta) + lo;
        const std::int64_t whi = as_i64(ta) + hi;
        while (j0 < b.size() && as_i64(b[j0]) < wlo) ++j0;
        if (j1 < j0) j1 = j0;
        while (j1 < b.size() && as_i64(b[j1]) < whi) ++j1;
        fn(ta, j0, j1);
    }
}

TagSpan clip_to_window(TagSpan s, std::int64_t lo, std::int64_t hi) {
    const std::uint64_t lo_u = lo < 0 ? 0 : static_cast<std::uint64_t>(lo);
    auto first = std::lower_bound(s.begin(), s.end(), lo_u);
    auto last = hi <= 0 ? first
                        : std::lower_bound(first, s.end(), static_cast<std::uint64_t>(hi));
    return s.subspan(static_cast<std::size_t>(first - s.begin()),
                     static_cast<std::size_t>(last - first));
}

}  // namespace

std::uint64_t CorrelationHistogram::total() const {
    std::uint64_t sum = 0;
    for (std::uint64_t c : counts) sum += c;
    return sum;
}

std::uint64_t count_pairs_in_range(TagSpan a, TagSpan b, std::int64_t delay_lo_ps,
                                   std::int64_t delay_hi_ps) {
    if (delay_lo_ps >= delay_hi_ps)
        throw std::invalid_argument("delay range must be non-empty");
    check_sorted(a);
    check_sorted(b);
    std::uint64_t count = 0;
    sweep_windows(a, b, delay_lo_ps, delay_hi_ps,
                  [&](std::uint64_t, std::size_t j0, std::size_t j1) {
                      count += j1 - j0;
                  });
    return count;
}

namespace {

void accumulate_histogram(TagSpan a, TagSpan b, std::int64_t bin, std::int64_t lo,
                          std::int64_t hi, std::vector<std::uint64_t>& counts) {
    sweep_windows(a, b, lo, hi,
                  [&](std::uint64_t ta, std::size_t j0, std::size_t j1) {
                      for (std::size_t j = j0; j < j1; ++j) {
                          const std::int64_t d = as_i64(b[j]) - as_i64(ta);
                          ++counts[static_cast<std::size_t>((d - lo) / bin)];
                      }
                  });
}

}  // namespace

CorrelationHistogram cross_correlation_histogram(const TimeTagStream& a,
                                                 const TimeTagStream& b,
                                                 std::int64_t bin_width_ps,
                                                 std::int64_t delay_min_ps,
                                                 std::int64_t delay_max_ps,
                                                 unsigned shards) {
    if (bin_width_ps <= 0) throw std::invalid_argument("bin width must be > 0");
    if (delay_max_ps <= delay_min_ps)
        throw std::invalid_argument("delay range must be non-empty");
    if ((delay_max_ps - delay_min_ps) % bin_width_ps != 0)
        throw std::invalid_argument("delay range must be a multiple of the bin width");
    check_sorted(a.tags);
    check_sorted(b.tags);

    CorrelationHistogram hist;
    hist.bin_width_ps = bin_width_ps;
    hist.delay_min_ps = delay_min_ps;
    hist.delay_max_ps = delay_max_ps;
    hist.counts.assign(
        static_cast<std::size_t>((delay_max_ps - delay_min_ps) / bin_width_ps), 0);

    const TagSpan sa(a.tags);
    const TagSpan sb(b.tags);
    if (shards <= 1 || sa.size() < 2 * shards) {
        accumulate_histogram(sa, sb, bin_width_ps, delay_min_ps, delay_max_ps,
                             hist.counts);
        return hist;
    }

    // Contiguous slices of a; each sees only the b range it can pair with, so
    // the merged result is exactly the single-pass histogram.
    std::vector<std::future<std::vector<std::uint64_t>>> parts;
    const std::size_t n_bins = hist.counts.size();
    const std::size_t per = (sa.size() + shards - 1) / shards;
    for (unsigned s = 0; s < shards; ++s) {
        const std::size_t i0 = std::min(sa.size(), s * per);
        const std::size_t i1 = std::min(sa.size(), i0 + per);
        if (i0 >= i1) break;
        parts.push_back(std::async(std::launch::async, [&, i0, i1, n_bins] {
            std::vector<std::uint64_t> counts(n_bins, 0);
            const TagSpan slice = sa.subspan(i0, i1 - i0);
            const TagSpan bsub = clip_to_window(sb, as_i64(slice.front()) + delay_min_ps,
                                                as_i64(slice.back()) + delay_max_ps);
            accumulate_histogram(slice, bsub, bin_width_ps, delay_min_ps, delay_max_ps,
                                 counts);
            return counts;
        }));
    }
    for (auto& part : parts) {
        const auto counts = part.get();
        for (std::size_t i = 0; i < counts.size(); ++i) hist.counts[i] += counts[i];
    }
    return hist;
}

double CoincidenceResult::raw_rate_hz() const {
    return integration_s > 0.0 ? static_cast<double>(raw) / integration_s : 0.0;
}

double CoincidenceResult::net_rate_hz() const {
    return integration_s > 0.0 ? static_cast<double>(net) / integration_s : 0.0;
}

CoincidenceResult make_coincidence_result(std::uint64_t raw, std::uint64_t accidentals) {
    CoincidenceResult r;
    r.raw = raw;
    r.accidentals = accidentals;
    r.net = static_cast<std::int64_t>(raw) - static_cast<std::int64_t>(accidentals);
    r.car = accidentals > 0
                ? static_cast<double>(raw) / static_cast<double>(accidentals)
                : std::numeric_limits<double>::quiet_NaN();
    return r;
}

CoincidenceResult coincidences(const TimeTagStream& a, const TimeTagStream& b,
                               std::int64_t window_ps,
                               std::int64_t accidental_offset_ps) {
    if (window_ps <= 0) throw std::invalid_argument("window must be > 0");
    if (std::abs(accidental_offset_ps) < window_ps)
        throw std::invalid_argument("accidental window overlaps the signal window");
    if (a.duration_ps != b.duration_ps)
        throw std::invalid_argument("streams must share a duration");
    const std::int64_t lo = -(window_ps / 2);
    const std::int64_t hi = lo + window_ps;
    const std::uint64_t raw = count_pairs_in_range(a.tags, b.tags, lo, hi);
    const std::uint64_t acc = count_pairs_in_range(
        a.tags, b.tags, accidental_offset_ps + lo, accidental_offset_ps + hi);

    CoincidenceResult r = make_coincidence_result(raw, acc);
    r.window_ps = window_ps;
    r.accidental_offset_ps = accidental_offset_ps;
    r.integration_s = a.duration_s();
    r.singles_a = a.count();
    r.singles_b = b.count();
    return r;
}

double klyshko_efficiency(std::uint64_t n_coincidences, std::uint64_t n_heralds) {
    if (n_heralds == 0) throw std::domain_error("Klyshko efficiency needs heralds");
    return static_cast<double>(n_coincidences) / static_cast<double>(n_heralds);
}

double g2_from_counts(std::uint64_t n1, std::uint64_t n12, std::uint64_t n13,
                      std::uint64_t n123) {
    if (n1 == 0 || n12 == 0 || n13 == 0)
        return std::numeric_limits<double>::quiet_NaN();
    return static_cast<double>(n123) * static_cast<double>(n1) /
           (static_cast<double>(n12) * static_cast<double>(n13));
}

double GTwoResult::g2_at_zero() const {
    double best = std::numeric_limits<double>::quiet_NaN();
    double best_abs = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < t3_ps.size(); ++i) {
        if (std::abs(t3_ps[i]) < best_abs) {
            best_abs = std::abs(t3_ps[i]);
            best = g2[i];
        }
    }
    return best;
}

GTwoAccumulator::GTwoAccumulator(std::int64_t pair_window_ps, std::int64_t t3_min_ps,
                                 std::int64_t t3_step_ps, std::size_t n_points)
    : pair_window_(pair_window_ps),
      window_lo_(-(pair_window_ps / 2)),
      t3_min_(t3_min_ps),
      t3_step_(t3_step_ps),
      n_points_(n_points) {
    if (pair_window_ps <= 0) throw std::invalid_argument("pair window must be > 0");
    if (t3_step_ps <= 0) throw std::invalid_argument("t3 step must be > 0");
    if (n_points == 0) throw std::invalid_argument("t3 grid must be non-empty");
    n13_diff_.assign(n_points + 1, 0);
    n123_diff_.assign(n_points + 1, 0);
}

void GTwoAccumulator::add_block(TagSpan heralds, TagSpan arm2, TagSpan arm3) {
    check_sorted(heralds);
    check_sorted(arm2);
    check_sorted(arm3);
    n1_ += heralds.size();

    // Pair counts per herald, needed to weight the triple accumulation.
    std::vector<std::uint32_t> c2(heralds.size(), 0);
    sweep_windows(heralds, arm2, window_lo_, window_lo_ + pair_window_,
                  [&, k = std::size_t(0)](std::uint64_t, std::size_t j0,
                                          std::size_t j1) mutable {
                      c2[k++] = static_cast<std::uint32_t>(j1 - j0);
                  });
    for (std::uint32_t c : c2) n12_ += c;

    // Each (herald, arm3 tag) pair covers a contiguous run of t3 grid points;
    // accumulate run boundaries and prefix-sum in finalize().
    const std::int64_t lo = t3_min_ + window_lo_;
    const std::int64_t hi = t3_min_ + t3_step_ * static_cast<std::int64_t>(n_points_ - 1) +
                            window_lo_ + pair_window_;
    std::size_t k = 0;
    sweep_windows(heralds, arm3, lo, hi,
                  [&](std::uint64_t th, std::size_t j0, std::size_t j1) {
                      const std::uint32_t weight = c2[k++];
                      for (std::size_t j = j0; j < j1; ++j) {
                          const std::int64_t d = as_i64(arm3[j]) - as_i64(th);
                          // grid points with d - t3 in [window_lo, window_lo + w)
                          std::int64_t g_min =
                              floor_div(d - window_lo_ - pair_window_ - t3_min_,
                                        t3_step_) + 1;
                          std::int64_t g_max =
                              floor_div(d - window_lo_ - t3_min_, t3_step_);
                          g_min = std::max<std::int64_t>(g_min, 0);
                          g_max = std::min<std::int64_t>(
                              g_max, static_cast<std::int64_t>(n_points_) - 1);
                          if (g_min > g_max) continue;
                          n13_diff_[static_cast<std::size_t>(g_min)] += 1;
                          n13_diff_[static_cast<std::size_t>(g_max) + 1] -= 1;
                          n123_diff_[static_cast<std::size_t>(g_min)] += weight;
                          n123_diff_[static_cast<std::size_t>(g_max) + 1] -= weight;
                      }
                  });
}

GTwoResult GTwoAccumulator::finalize() const {
    GTwoResult out;
    out.n1 = n1_;
    out.n12 = n12_;
    out.pair_window_ps = pair_window_;
    out.t3_ps.resize(n_points_);
    out.g2.resize(n_points_);
    out.sigma.resize(n_points_);
    out.n13.resize(n_points_);
    out.n123.resize(n_points_);

    std::int64_t acc13 = 0, acc123 = 0;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < n_points_; ++i) {
        acc13 += n13_diff_[i];
        acc123 += n123_diff_[i];
        out.t3_ps[i] = static_cast<double>(t3_min_ + t3_step_ * as_i64(i));
        out.n13[i] = static_cast<std::uint64_t>(acc13);
        out.n123[i] = static_cast<std::uint64_t>(acc123);
        const double g2 = g2_from_counts(n1_, n12_, static_cast<std::uint64_t>(acc13),
                                         static_cast<std::uint64_t>(acc123));
        out.g2[i] = g2;
        if (std::isnan(g2)) {
            out.sigma[i] = nan;
            continue;
        }
        out.sigma[i] = acc123 > 0 ? g2 / std::sqrt(static_cast<double>(acc123)) : 0.0;
    }
    return out;
}

GTwoResult heralded_g2(const TimeTagStream& herald, const TimeTagStream& arm2,
                       const TimeTagStream& arm3, std::int64_t pair_window_ps,
                       std::int64_t t3_min_ps, std::int64_t t3_step_ps,
                       std::size_t n_points) {
    if (herald.duration_ps != arm2.duration_ps || herald.duration_ps != arm3.duration_ps)
        throw std::invalid_argument("streams must share a time base");
    GTwoAccumulator acc(pair_window_ps, t3_min_ps, t3_step_ps, n_points);
    acc.add_block(herald.tags, arm2.tags, arm3.tags);
    return acc.finalize();
}

void accumulate_triple_coincidences(TagSpan heralds, TagSpan arm2, TagSpan arm3,
                                    std::int64_t pair_window_ps,
                                    CorrelationHistogram& hist) {
    if (pair_window_ps <= 0) throw std::invalid_argument("pair window must be > 0");
    const std::int64_t wlo = -(pair_window_ps / 2);
    const std::int64_t dmin = hist.delay_min_ps;
    const std::int64_t dmax = hist.delay_max_ps;
    const std::int64_t bin = hist.bin_width_ps;
    sweep_windows(heralds, arm2, wlo, wlo + pair_window_ps,
                  [&](std::uint64_t, std::size_t j0, std::size_t j1) {
                      for (std::size_t j = j0; j < j1; ++j) {
                          const std::int64_t t2 = as_i64(arm2[j]);
                          auto first = std::lower_bound(
                              arm3.begin(), arm3.end(),
                              static_cast<std::uint64_t>(
                                  std::max<std::int64_t>(0, t2 + dmin)));
                          for (auto it = first; it != arm3.end(); ++it) {
                              const std::int64_t d = as_i64(*it) - t2;
                              if (d >= dmax) break;
                              if (d < dmin) continue;
                              ++hist.counts[static_cast<std::size_t>((d - dmin) / bin)];
                          }
                      }
                  });
}

CorrelationHistogram triple_coincidence_histogram(const TimeTagStream& herald,
                                                  const TimeTagStream& arm2,
                                                  const TimeTagStream& arm3,
                                                  std::int64_t bin_width_ps,
                                                  std::int64_t delay_min_ps,
                                                  std::int64_t delay_max_ps,
                                                  std::int64_t pair_window_ps) {
    if (bin_width_ps <= 0) throw std::invalid_argument("bin width must be > 0");
    if (delay_max_ps <= delay_min_ps)
        throw std::invalid_argument("delay range must be non-empty");
    if ((delay_max_ps - delay_min_ps) % bin_width_ps != 0)
        throw std::invalid_argument("delay range must be a multiple of the bin width");

    CorrelationHistogram hist;
    hist.bin_width_ps = bin_width_ps;
    hist.delay_min_ps = delay_min_ps;
    hist.delay_max_ps = delay_max_ps;
    hist.counts.assign(
        static_cast<std::size_t>((delay_max_ps - delay_min_ps) / bin_width_ps), 0);
    accumulate_triple_coincidences(herald.tags, arm2.tags, arm3.tags, pair_window_ps,
                                   hist);
    return hist;
}

void write_histogram_csv(const CorrelationHistogram& hist, const std::string& path) {
    CsvWriter csv(path, "delay_ps,counts");
    for (std::size_t i = 0; i < hist.n_bins(); ++i)
        csv.row({hist.bin_center_ps(i), static_cast<double>(hist.counts[i])});
}

void write_g2_csv(const GTwoResult& g2, const std::string& path) {
    CsvWriter csv(path, "t3_ps,g2,sigma,n123");
    for (std::size_t i = 0; i < g2.t3_ps.size(); ++i)
        csv.row({g2.t3_ps[i], g2.g2[i], g2.sigma[i], static_cast<double>(g2.n123[i])});
}

}  // namespace dualring
