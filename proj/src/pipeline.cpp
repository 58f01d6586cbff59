#include "dualring/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dualring/rng.hpp"

namespace dualring {

namespace {

std::vector<ScanSample> sample_scan(std::vector<ScanSample> points, bool with_noise,
                                    double integration_s, std::uint64_t seed) {
    Rng rng(seed, 0x7363616eULL);
    for (auto& p : points) {
        p.sampled_rate_hz =
            with_noise && integration_s > 0.0
                ? static_cast<double>(rng.poisson(p.rate_hz * integration_s)) /
                      integration_s
                : p.rate_hz;
    }
    return points;
}

}  // namespace

std::vector<ScanSample> run_heater_scan(const ExperimentConfig& config,
                                        const std::vector<double>& shifts_ghz,
                                        bool with_noise, double integration_s,
                                        std::uint64_t seed) {
    const SfwmEngine engine = config.engine();
    const auto scan = heater_scan(engine, config.pump(), shifts_ghz, config.line_offset,
                                  config.signal_loss_db, config.idler_loss_db);
    std::vector<ScanSample> points;
    points.reserve(scan.size());
    for (const auto& s : scan) points.push_back({s.shift_ghz, s.coincidence_rate_hz, 0.0});
    return sample_scan(std::move(points), with_noise, integration_s, seed);
}

std::vector<ScanSample> run_power_scan(const ExperimentConfig& config,
                                       const std::vector<double>& powers_mw,
                                       bool with_noise, double integration_s,
                                       std::uint64_t seed) {
    const SfwmEngine engine = config.engine();
    const auto scan = power_scan(engine, config.pump(), powers_mw, config.line_offset,
                                 config.signal_loss_db, config.idler_loss_db);
    std::vector<ScanSample> points;
    points.reserve(scan.size());
    for (const auto& s : scan) points.push_back({s.power_mw, s.coincidence_rate_hz, 0.0});
    return sample_scan(std::move(points), with_noise, integration_s, seed);
}

std::vector<PowerScanCounts> simulate_power_scan(const ExperimentConfig& config,
                                                 const std::vector<double>& powers_mw,
                                                 double duration_s, std::uint64_t seed) {
    const SfwmEngine engine = config.engine();
    std::vector<PowerScanCounts> out;
    out.reserve(powers_mw.size());
    std::uint64_t point_index = 0;
    for (double p_mw : powers_mw) {
        PumpConfig pump = config.pump();
        pump.power_mw = p_mw;
        const auto prediction =
            engine.pair_generation_rate(pump, config.line_offset, -config.line_offset);

        SimConfig sim = config.sim_config(false);
        sim.pair_rate_hz = prediction.generation_rate_hz;
        sim.duration_s = duration_s;
        sim.seed = seed ^ (0x9e3779b97f4a7c15ULL * ++point_index);
        const auto streams = simulate_pair_streams(sim);
        const auto result =
            coincidences(streams.at(kChannelSignal), streams.at(kChannelIdler),
                         config.window_ps, config.accidental_offset_ps);

        const double eta = loss_db_to_efficiency(config.signal_loss_db) *
                           loss_db_to_efficiency(config.idler_loss_db);
        out.push_back({p_mw, prediction.generation_rate_hz * eta, result.net});
    }
    return out;
}

CoincidenceAnalysis analyze_coincidences(const TimeTagStream& a, const TimeTagStream& b,
                                         std::int64_t window_ps,
                                         std::int64_t accidental_offset_ps,
                                         std::int64_t bin_width_ps,
                                         std::int64_t hist_span_ps) {
    CoincidenceAnalysis out;
    out.result = coincidences(a, b, window_ps, accidental_offset_ps);

    // Symmetric histogram range snapped to a whole number of bins.
    const std::int64_t half =
        (hist_span_ps + bin_width_ps - 1) / bin_width_ps * bin_width_ps;
    out.histogram = cross_correlation_histogram(a, b, bin_width_ps, -half, half, 4);

    Curve curve;
    curve.x.reserve(out.histogram.n_bins());
    curve.y.reserve(out.histogram.n_bins());
    for (std::size_t i = 0; i < out.histogram.n_bins(); ++i) {
        curve.x.push_back(out.histogram.bin_center_ps(i));
        curve.y.push_back(static_cast<double>(out.histogram.counts[i]));
    }
    out.peak_fit = fit_gaussian(curve);

    const std::uint64_t net = out.result.net > 0 ? out.result.net : 0;
    out.klyshko_from_signal = a.count() ? klyshko_efficiency(net, a.count()) : 0.0;
    out.klyshko_from_idler = b.count() ? klyshko_efficiency(net, b.count()) : 0.0;
    return out;
}

G2Analysis analyze_g2(const TimeTagStream& herald, const TimeTagStream& arm2,
                      const TimeTagStream& arm3, const G2Params& params) {
    G2Analysis out;
    const std::size_t n_points =
        static_cast<std::size_t>(2 * (params.t3_span_ps / params.t3_step_ps)) + 1;
    const std::int64_t t3_min =
        -(params.t3_span_ps / params.t3_step_ps) * params.t3_step_ps;
    out.g2 = heralded_g2(herald, arm2, arm3, params.pair_window_ps, t3_min,
                         params.t3_step_ps, n_points);
    const std::int64_t half =
        (params.hist_span_ps + params.hist_bin_ps - 1) / params.hist_bin_ps *
        params.hist_bin_ps;
    out.triple_histogram =
        triple_coincidence_histogram(herald, arm2, arm3, params.hist_bin_ps, -half,
                                     half, params.pair_window_ps);
    return out;
}

G2Analysis simulate_g2_streaming(const SimConfig& sim_config, const G2Params& params,
                                 std::uint64_t chunk_ps) {
    if (!sim_config.splitter_ratio)
        throw std::invalid_argument("g2 simulation needs a splitter configuration");
    if (chunk_ps == 0) throw std::invalid_argument("chunk size must be > 0");

    const std::size_t n_points =
        static_cast<std::size_t>(2 * (params.t3_span_ps / params.t3_step_ps)) + 1;
    const std::int64_t t3_min =
        -(params.t3_span_ps / params.t3_step_ps) * params.t3_step_ps;
    GTwoAccumulator acc(params.pair_window_ps, t3_min, params.t3_step_ps, n_points);

    const std::int64_t hist_half =
        (params.hist_span_ps + params.hist_bin_ps - 1) / params.hist_bin_ps *
        params.hist_bin_ps;
    CorrelationHistogram hist;
    hist.bin_width_ps = params.hist_bin_ps;
    hist.delay_min_ps = -hist_half;
    hist.delay_max_ps = hist_half;
    hist.counts.assign(static_cast<std::size_t>(2 * hist_half / params.hist_bin_ps), 0);

    const std::int64_t wlo = -(params.pair_window_ps / 2);
    const std::int64_t whi = wlo + params.pair_window_ps;
    // Widest forward/backward reach from a herald into the arm streams.
    const std::int64_t reach_hi =
        std::max({acc.arm2_reach_hi_ps(), acc.arm3_reach_hi_ps(), whi + hist_half}) + 1;
    const std::int64_t reach_lo =
        std::min({acc.arm2_reach_lo_ps(), acc.arm3_reach_lo_ps(), wlo - hist_half}) - 1;

    StreamingSimulator sim(sim_config);
    std::vector<std::uint64_t> heralds, arm2, arm3;
    std::uint64_t t = 0;
    const std::uint64_t duration = sim_config.duration_ps();
    while (!sim.finished()) {
        t = std::min(t + chunk_ps, duration);
        auto chunk = sim.next_chunk(t);
        auto append = [&chunk](std::uint32_t ch, std::vector<std::uint64_t>& dst) {
            auto& src = chunk[ch];
            dst.insert(dst.end(), src.begin(), src.end());
        };
        append(kChannelHerald, heralds);
        append(kChannelArmA, arm2);
        append(kChannelArmB, arm3);

        const bool final_chunk = sim.finished();
        std::uint64_t herald_cut = 0;
        if (final_chunk)
            herald_cut = duration;
        else if (t > static_cast<std::uint64_t>(reach_hi))
            herald_cut = t - static_cast<std::uint64_t>(reach_hi);

        const auto h_end =
            std::lower_bound(heralds.begin(), heralds.end(), herald_cut);
        const std::size_t n_ready = static_cast<std::size_t>(h_end - heralds.begin());
        if (n_ready > 0) {
            const TagSpan block(heralds.data(), n_ready);
            acc.add_block(block, TagSpan(arm2), TagSpan(arm3));
            accumulate_triple_coincidences(block, TagSpan(arm2), TagSpan(arm3),
                                           params.pair_window_ps, hist);
            heralds.erase(heralds.begin(), h_end);
        }

        // Drop arm tags no future herald can reach.
        const std::int64_t prune_before =
            static_cast<std::int64_t>(herald_cut) + reach_lo;
        if (prune_before > 0) {
            const auto prune = [&](std::vector<std::uint64_t>& v) {
                const auto cut = std::lower_bound(
                    v.begin(), v.end(), static_cast<std::uint64_t>(prune_before));
                v.erase(v.begin(), cut);
            };
            prune(arm2);
            prune(arm3);
        }
    }

    G2Analysis out;
    out.g2 = acc.finalize();
    out.triple_histogram = std::move(hist);
    return out;
}

}  // namespace dualring
