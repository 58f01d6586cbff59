// Acceptance suite: runs every verification criterion end to end and prints
// one PASS/FAIL line each. Exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <vector>

#include "dualring/config.hpp"
#include "dualring/correlator.hpp"
#include "dualring/pipeline.hpp"
#include "dualring/rng.hpp"
#include "dualring/sfwm.hpp"
#include "dualring/sim.hpp"
#include "dualring/spectrum.hpp"
#include "helpers.hpp"

using namespace dualring;

namespace {

int g_failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
    std::printf("[%s] %2d. %-28s %s\n", ok ? "PASS" : "FAIL", id, name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

std::string fmt(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof(buf), format, args);
    va_end(args);
    return buf;
}

bool within(double value, double target, double rel) {
    return std::abs(value - target) <= rel * std::abs(target);
}

// 1. dispersion-parameter conversion
void criterion_dispersion() {
    const double gvd = gvd_magnitude(-32000.0, 1550.0);
    report(1, "dispersion conversion", within(gvd, 40.4, 0.02),
           fmt("|beta2| = %.3f ps^2/m vs 40.4 (2%%)", gvd));
}

// 2. group-index round trip over 1500-1600 nm
void criterion_group_index_round_trip() {
    const auto config = testing::reference_config();
    const auto spectrum = generate_spectrum(config.device(), 1500.0, 1600.0, 200001);
    const auto curve = extract_group_index_curve(spectrum, config.ring_one_length_um, 3);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& p : curve) {
        sx += p.lambda_nm;
        sy += p.ng;
        sxx += p.lambda_nm * p.lambda_nm;
        sxy += p.lambda_nm * p.ng;
    }
    const double n = static_cast<double>(curve.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double d_rec = slope / (kSpeedOfLight * 1e-15);
    report(2, "group-index round trip", within(d_rec, -32000.0, 0.05),
           fmt("recovered D = %.0f ps/nm-km vs -32000 (5%%), %zu comb intervals",
               d_rec, curve.size()));
}

// 3. phase matching under large dispersion
void criterion_phase_matching() {
    // independent oracle, spelled out in SI units
    const double d_si = -32000.0 * 1e-12 / (1e-9 * 1e3);
    const double omega = 2.0 * kPi * 1.553e12;
    const double oracle = -d_si * 1550e-9 * 1550e-9 * omega * omega /
                          (2.0 * kPi * 299792458.0);

    const double delta = phase_mismatch(-32000.0, 1550.0, omega);
    const double eff = phase_matching_efficiency(delta, 18.0);
    const double ratio = te_tm_detuning_ratio(-32000.0, -1064.0);

    const bool ok = within(delta, oracle, 1e-12) && within(delta, 3.9e3, 0.03) &&
                    eff >= 0.999 && within(ratio, 5.48, 0.02);
    report(3, "phase matching", ok,
           fmt("delta = %.0f rad/m (oracle %.0f), sinc^2 = %.5f, range ratio = %.3f",
               delta, oracle, eff, ratio));
}

// 4. rate bookkeeping at the calibrated operating point
void criterion_rates() {
    const auto config = testing::reference_config();
    const auto engine = config.engine();
    const auto p = engine.pair_generation_rate(config.pump(), 3, -3);
    const auto single = engine.single_ring_counterfactual(config.pump(), 3, -3);

    const bool ok = within(p.generation_rate_hz, 1.3e5, 1e-9) &&
                    within(single.generation_rate_hz, 4.0e6, 0.05) &&
                    p.reduction_factor == 18.0 / 552.0;
    report(4, "rate bookkeeping", ok,
           fmt("calibrated %.3e Hz, single ring %.3e Hz (4.0e6 +- 5%%), L/4L1 = %.4f",
               p.generation_rate_hz, single.generation_rate_hz, p.reduction_factor));
}

// 5. quadratic power law from the simulated full chain
void criterion_power_law() {
    const auto config = testing::reference_config();
    std::vector<double> powers;
    for (double p = 0.0625; p <= 0.5 + 1e-9; p += 0.0625) powers.push_back(p);

    std::vector<double> exponents;
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const auto scan = simulate_power_scan(config, powers, 20.0, seed);
        Curve c;
        for (const auto& pt : scan) {
            if (pt.net_counts <= 0) continue;
            c.x.push_back(pt.power_mw);
            c.y.push_back(static_cast<double>(pt.net_counts));
        }
        exponents.push_back(fit_power_law(c).exponent());
    }
    std::sort(exponents.begin(), exponents.end());
    const double median = exponents[exponents.size() / 2];
    report(5, "quadratic power law", std::abs(median - 2.0) <= 0.1,
           fmt("median exponent over 30 seeds = %.3f (2.0 +- 0.1)", median));
}

// 6. heater alignment curve
void criterion_heater_curve() {
    const auto config = testing::reference_config();
    std::vector<double> shifts;
    for (double s = -6.0; s <= 6.0 + 1e-9; s += 0.2) shifts.push_back(s);
    const auto scan = run_heater_scan(config, shifts, false, 0.0, config.seed);
    Curve c;
    for (const auto& pt : scan) {
        c.x.push_back(pt.x);
        c.y.push_back(pt.rate_hz);
    }
    const auto fit = fit_lorentzian(c);
    const bool ok = fit.converged && fit.fwhm >= 1.5 && fit.fwhm <= 6.0;
    report(6, "heater alignment curve", ok,
           fmt("Lorentzian FWHM = %.2f GHz, inside [1.5, 6.0] bracketing 2.98", fit.fwhm));
}

// 7. coincidence pipeline at the reference rate and losses
void criterion_coincidence_pipeline() {
    ExperimentConfig config = testing::reference_config();
    config.pair_rate_hz = 8.4e4;
    config.duration_s = 60.0;
    config.seed = 20260810;
    const auto streams = simulate_pair_streams(config.sim_config(false));
    const auto analysis = analyze_coincidences(
        streams.at(kChannelSignal), streams.at(kChannelIdler), config.window_ps,
        config.accidental_offset_ps, config.bin_width_ps, config.hist_span_ps);

    const double net_rate = analysis.result.net_rate_hz();
    const double fwhm = analysis.peak_fit.fwhm;
    const bool ok = within(net_rate, 2855.0, 0.05) && within(fwhm, 227.0, 0.10);
    report(7, "coincidence pipeline", ok,
           fmt("net = %.0f Hz (2855 +- 5%%), peak FWHM = %.1f ps (227 +- 10%%)",
               net_rate, fwhm));
}

// 8. CAR and conditioned-coherence behavior
void criterion_car_and_g2() {
    bool ok = true;
    std::string detail;

    {  // CAR with the background-calibrated chain
        ExperimentConfig config = testing::reference_config();
        config.pair_rate_hz = 8.4e4;
        config.duration_s = 60.0;
        config.seed = 31;
        config.signal_background_hz = 145586.0;
        config.idler_background_hz = 145586.0;
        const auto streams = simulate_pair_streams(config.sim_config(false));
        const auto r = coincidences(streams.at(0), streams.at(1), config.window_ps,
                                    config.accidental_offset_ps);
        ok = ok && within(r.car, 237.0, 0.15);
        detail += fmt("CAR = %.0f (237 +- 15%%); ", r.car);
    }

    GTwoResult g2_ref;
    {  // 10 simulated minutes, streamed
        ExperimentConfig config = testing::reference_config();
        config.pair_rate_hz = 8.4e4;
        config.g2_duration_s = 600.0;
        config.seed = 32;
        config.signal_background_hz = 20000.0;
        config.idler_background_hz = 20000.0;

        G2Params params;
        params.pair_window_ps = 448;
        params.t3_span_ps = 8960;  // 20 disjoint windows per side
        params.t3_step_ps = 448;
        const auto analysis =
            simulate_g2_streaming(config.sim_config(true), params, 60000000000000ULL);
        g2_ref = analysis.g2;

        const double zero = g2_ref.g2_at_zero();
        ok = ok && !std::isnan(zero) && zero < 0.1;
        detail += fmt("g2(0) = %.2e (< 0.1); ", zero);

        // pooled sidebands beyond |t3| >= 4 windows
        double n123 = 0.0, expected = 0.0;
        for (std::size_t i = 0; i < g2_ref.t3_ps.size(); ++i) {
            if (std::abs(g2_ref.t3_ps[i]) < 4.0 * 448.0) continue;
            n123 += static_cast<double>(g2_ref.n123[i]);
            expected += static_cast<double>(g2_ref.n12) *
                        static_cast<double>(g2_ref.n13[i]) /
                        static_cast<double>(g2_ref.n1);
        }
        const double far = n123 / expected;
        const double sigma = far / std::sqrt(n123);
        ok = ok && std::abs(far - 1.0) <= 3.0 * sigma;
        detail += fmt("g2(far) = %.3f +- %.3f (1 within 3 sigma); ", far, sigma);
    }

    {  // monotonic growth with pump power (multi-pair statistics)
        const auto engine = testing::reference_config().engine();
        std::vector<double> zeros;
        for (double power_mw : {2.9, 4.1, 5.8}) {
            PumpConfig pump = testing::reference_config().pump();
            pump.power_mw = power_mw;
            SimConfig sim;
            sim.pair_rate_hz =
                engine.pair_generation_rate(pump, 3, -3).generation_rate_hz;
            sim.duration_s = 40.0;
            sim.seed = 33;
            sim.signal_chain = {0.0, 68.2, 0.0, 0.0};
            sim.idler_chain = {0.0, 68.2, 0.0, 0.0};
            sim.splitter_ratio = 0.5;
            G2Params params;
            params.t3_span_ps = 448;
            params.t3_step_ps = 448;
            const auto analysis =
                simulate_g2_streaming(sim, params, 40000000000000ULL);
            zeros.push_back(analysis.g2.g2_at_zero());
        }
        ok = ok && zeros[0] < zeros[1] && zeros[1] < zeros[2] && zeros[2] < 0.1;
        detail += fmt("g2(0) vs power: %.1e < %.1e < %.1e; ", zeros[0], zeros[1],
                      zeros[2]);
    }

    {  // count-quadruple arithmetic
        const double g2 = g2_from_counts(100000000ULL, 7900000ULL, 7900000ULL, 27600ULL);
        ok = ok && std::abs(g2 - 0.0442) <= 5e-5;
        detail += fmt("quadruple arithmetic = %.5f (0.0442)", g2);
    }

    report(8, "CAR and heralded g2", ok, detail);
}

// 9. correlator exactness against brute force
void criterion_correlator_exactness() {
    bool ok = true;
    for (std::uint64_t seed = 1; seed <= 100 && ok; ++seed) {
        const auto a = testing::random_stream(seed, 0, 1000, 10000000);
        const auto b = testing::random_stream(seed, 1, 1000, 10000000);
        const auto c = testing::random_stream(seed, 2, 1000, 10000000);

        const auto hist = cross_correlation_histogram(a, b, 64, -4096, 4096);
        ok = ok && hist.counts ==
                       testing::brute_force_pair_histogram(a.tags, b.tags, 64, -4096, 4096);

        const auto triple = triple_coincidence_histogram(a, b, c, 64, -2048, 2048, 448);
        ok = ok && triple.counts == testing::brute_force_triple_histogram(
                                        a.tags, b.tags, c.tags, 64, -2048, 2048, 448);

        for (unsigned shards : {2u, 3u, 5u}) {
            const auto sharded =
                cross_correlation_histogram(a, b, 64, -4096, 4096, shards);
            ok = ok && sharded.counts == hist.counts;
        }
    }
    report(9, "correlator exactness", ok,
           "pair + triple histograms integer-equal to brute force, 100 seeds; "
           "shard-and-merge exact");
}

// 10. invariant suites standing in for hardware-specific absolutes
void criterion_invariants() {
    bool ok = true;
    std::string detail;

    {  // Poisson goodness of fit across seeds
        const double rate = 5e4, duration = 2.0;
        const double mu = rate * duration * std::pow(10.0, -0.57) + 200.0 * duration;
        double chi = 0.0;
        for (std::uint64_t seed = 1; seed <= 30; ++seed) {
            ExperimentConfig config = testing::reference_config();
            config.pair_rate_hz = rate;
            config.duration_s = duration;
            config.seed = seed;
            const auto streams = simulate_pair_streams(config.sim_config(false));
            const double n = static_cast<double>(streams.at(kChannelIdler).count());
            chi += (n - mu) * (n - mu) / mu;
        }
        ok = ok && chi > 13.787 && chi < 53.672;
        detail += fmt("Poisson chi2(30) = %.1f in [13.8, 53.7]; ", chi);
    }

    {  // determinism
        ExperimentConfig config = testing::reference_config();
        config.pair_rate_hz = 8.4e4;
        config.duration_s = 5.0;
        const auto s1 = simulate_pair_streams(config.sim_config(false));
        const auto s2 = simulate_pair_streams(config.sim_config(false));
        ok = ok && s1.at(0).tags == s2.at(0).tags && s1.at(1).tags == s2.at(1).tags;
        detail += "seeded reruns bit-identical; ";
    }

    {  // time-shift invariance
        auto a = testing::random_stream(5, 0, 5000, 100000000);
        auto b = testing::random_stream(5, 1, 5000, 100000000);
        const auto h0 = cross_correlation_histogram(a, b, 32, -1024, 1024);
        for (auto& t : a.tags) t += 987654321;
        for (auto& t : b.tags) t += 987654321;
        a.duration_ps += 987654321;
        b.duration_ps += 987654321;
        const auto h1 = cross_correlation_histogram(a, b, 32, -1024, 1024);
        ok = ok && h0.counts == h1.counts;
        detail += "time-shift invariant";
    }

    report(10, "invariant suites", ok, detail);
    std::printf(
        "     note: absolute hardware figures (7%% Klyshko, singles rates, 10 h\n"
        "     integrations) depend on unreported efficiencies and are covered by\n"
        "     the invariants above, not reproduced.\n");
}

}  // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    criterion_dispersion();
    criterion_group_index_round_trip();
    criterion_phase_matching();
    criterion_rates();
    criterion_power_law();
    criterion_heater_curve();
    criterion_coincidence_pipeline();
    criterion_car_and_g2();
    criterion_correlator_exactness();
    criterion_invariants();
    const auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0);
    std::printf("%d/10 criteria passed in %.1f s\n", 10 - g_failures, dt.count());
    return g_failures == 0 ? 0 : 1;
}
