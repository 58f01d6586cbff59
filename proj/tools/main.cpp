// dualring - dual-racetrack photon-pair simulation and time-tag analysis.
//
// Exit codes: 0 success, 2 usage/config error, 3 runtime/data error.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dualring/config.hpp"
#include "dualring/correlator.hpp"
#include "dualring/csv.hpp"
#include "dualring/manifest.hpp"
#include "dualring/pipeline.hpp"
#include "dualring/units.hpp"

using nlohmann::json;
namespace fs = std::filesystem;
using namespace dualring;

namespace {

struct CommonOptions {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

ExperimentConfig load_or_default(const CommonOptions& opts) {
    ExperimentConfig config;
    if (!opts.config_path.empty()) {
        if (!fs::exists(opts.config_path))
            throw ConfigError("config file not found: " + opts.config_path);
        config = load_config(opts.config_path);
    }
    if (opts.seed_set) config.seed = opts.seed;
    return config;
}

fs::path ensure_out_dir(const std::string& dir) {
    if (dir.empty()) throw ConfigError("--out is required");
    fs::create_directories(dir);
    return fs::path(dir);
}

void add_common(CLI::App* cmd, CommonOptions& opts, bool with_out = true) {
    cmd->add_option("--config", opts.config_path, "experiment config file (INI)");
    if (with_out) cmd->add_option("--out", opts.out_dir, "output directory")->required();
    cmd->add_option("--seed", opts.seed, "override the config seed")
        ->each([&opts](const std::string&) { opts.seed_set = true; });
}

void write_json(const json& j, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

std::map<std::uint32_t, TimeTagStream> load_tag_streams(const std::string& path) {
    if (!fs::exists(path)) throw ConfigError("time-tag file not found: " + path);
    if (fs::path(path).extension() == ".csv") return read_timetag_csv(path);
    return read_timetag_file(path);
}

const TimeTagStream& pick_channel(const std::map<std::uint32_t, TimeTagStream>& streams,
                                  std::uint32_t channel) {
    const auto it = streams.find(channel);
    if (it == streams.end())
        throw std::runtime_error("channel " + std::to_string(channel) +
                                 " missing from the time-tag file");
    return it->second;
}

std::vector<double> arange(double lo, double hi, double step) {
    std::vector<double> out;
    for (double x = lo; x <= hi + 1e-12; x += step) out.push_back(x);
    return out;
}

// ---- subcommand bodies ----------------------------------------------------

int cmd_spectrum(const CommonOptions& opts, double band_min, double band_max,
                 std::size_t points) {
    const auto config = load_or_default(opts);
    const auto out = ensure_out_dir(opts.out_dir);
    const auto spectrum =
        generate_spectrum(config.device(), band_min, band_max, band_min < band_max ? points : 0);
    write_spectrum_csv(spectrum, (out / "transmission_spectrum.csv").string());

    auto manifest = make_manifest("spectrum", config);
    manifest.add_output("transmission_spectrum.csv");
    manifest.write((out / "manifest.json").string());
    return 0;
}

int cmd_ng_curve(const CommonOptions& opts, double band_min, double band_max,
                 std::size_t points, int window) {
    const auto config = load_or_default(opts);
    const auto out = ensure_out_dir(opts.out_dir);
    const auto spectrum = generate_spectrum(config.device(), band_min, band_max, points);
    const auto curve =
        extract_group_index_curve(spectrum, config.ring_one_length_um, window);

    CsvWriter csv((out / "group_index.csv").string(), "wavelength_nm,group_index");
    for (const auto& p : curve) csv.row({p.lambda_nm, p.ng});

    // weighted-free linear slope -> dispersion parameter
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& p : curve) {
        sx += p.lambda_nm;
        sy += p.ng;
        sxx += p.lambda_nm * p.lambda_nm;
        sxy += p.lambda_nm * p.ng;
    }
    const double n = static_cast<double>(curve.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double d_recovered = slope / (kSpeedOfLight * 1e-15);

    json j;
    j["points"] = curve.size();
    j["smoothing_window"] = window;
    j["recovered_d_ps_nm_km"] = d_recovered;
    j["configured_d_ps_nm_km"] = config.d_ps_nm_km;
    write_json(j, out / "group_index_fit.json");

    auto manifest = make_manifest("ng-curve", config);
    manifest.add_output("group_index.csv");
    manifest.add_output("group_index_fit.json");
    manifest.write((out / "manifest.json").string());
    return 0;
}

int cmd_heater_scan(const CommonOptions& opts, double lo, double hi, double step,
                    bool noise, double integration_s) {
    const auto config = load_or_default(opts);
    const auto out = ensure_out_dir(opts.out_dir);
    const auto scan =
        run_heater_scan(config, arange(lo, hi, step), noise, integration_s, config.seed);

    CsvWriter csv((out / "heater_scan.csv").string(), "shift_ghz,rate_hz");
    Curve curve;
    for (const auto& p : scan) {
        const double y = noise ? p.sampled_rate_hz : p.rate_hz;
        csv.row({p.x, y});
        curve.x.push_back(p.x);
        curve.y.push_back(y);
    }
    const FitResult fit = fit_lorentzian(curve);

    json j;
    j["fwhm_ghz"] = fit.fwhm;
    j["center_ghz"] = fit.center();
    j["peak_rate_hz"] = fit.amplitude() + fit.offset();
    j["converged"] = fit.converged;
    j["integration_s"] = integration_s;
    j["poisson_noise"] = noise;
    write_json(j, out / "heater_fit.json");

    auto manifest = make_manifest("heater-scan", config);
    manifest.add_output("heater_scan.csv");
    manifest.add_output("heater_fit.json");
    manifest.write((out / "manifest.json").string());
    return 0;
}

int cmd_power_scan(const CommonOptions& opts, double lo, double hi, double step,
                   bool noise, double integration_s) {
    const auto config = load_or_default(opts);
    const auto out = ensure_out_dir(opts.out_dir);
    const auto scan =
        run_power_scan(config, arange(lo, hi, step), noise, integration_s, config.seed);

    CsvWriter csv((out / "power_scan.csv").string(), "power_mw,coincidences_hz");
    Curve curve;
    for (const auto& p : scan) {
        const double y = noise ? p.sampled_rate_hz : p.rate_hz;
        csv.row({p.x, y});
        curve.x.push_back(p.x);
        curve.y.push_back(y);
    }
    const FitResult fit = fit_power_law(curve);

    json j;
    j["exponent"] = fit.exponent();
    j["scale"] = fit.scale();
    j["excluded_points"] = fit.excluded_points;
    j["integration_s"] = integration_s;
    j["poisson_noise"] = noise;
    write_json(j, out / "power_fit.json");

    auto manifest = make_manifest("power-scan", config);
    manifest.add_output("power_scan.csv");
    manifest.add_output("power_fit.json");
    manifest.write((out / "manifest.json").string());
    return 0;
}

int cmd_simulate(const CommonOptions& opts, const std::string& out_file, bool split,
                 double duration_s) {
    auto config = load_or_default(opts);
    if (duration_s > 0.0) {
        config.duration_s = duration_s;
        config.g2_duration_s = duration_s;
    }
    const auto streams = simulate_pair_streams(config.sim_config(split));
    write_timetag_file(out_file, streams);

    std::uint64_t total = 0;
    for (const auto& [ch, s] : streams) total += s.count();
    std::cerr << "wrote " << total << " tags on " << streams.size() << " channels to "
              << out_file << "\n";
    return 0;
}

int cmd_correlate(const CommonOptions& opts, const std::string& tag_file,
                  std::uint32_t ch_a, std::uint32_t ch_b) {
    const auto config = load_or_default(opts);
    const auto out = ensure_out_dir(opts.out_dir);
    const auto streams = load_tag_streams(tag_file);
    const auto& a = pick_channel(streams, ch_a);
    const auto& b = pick_channel(streams, ch_b);

    const auto analysis =
        analyze_coincidences(a, b, config.window_ps, config.accidental_offset_ps,
                             config.bin_width_ps, config.hist_span_ps);
    write_histogram_csv(analysis.histogram, (out / "correlation_histogram.csv").string());

    json j;
    j["raw"] = analysis.result.raw;
    j["accidentals"] = analysis.result.accidentals;
    j["net"] = analysis.result.net;
    j["net_rate_hz"] = analysis.result.net_rate_hz();
    if (std::isnan(analysis.result.car))
        j["car"] = nullptr;
    else
        j["car"] = analysis.result.car;
    j["window_ps"] = analysis.result.window_ps;
    j["accidental_offset_ps"] = analysis.result.accidental_offset_ps;
    j["integration_s"] = analysis.result.integration_s;
    j["singles"] = {{"a", analysis.result.singles_a}, {"b", analysis.result.singles_b}};
    j["klyshko_from_a"] = analysis.klyshko_from_signal;
    j["klyshko_from_b"] = analysis.klyshko_from_idler;
    j["peak_fit"] = {{"fwhm_ps", analysis.peak_fit.fwhm},
                     {"center_ps", analysis.peak_fit.center()},
                     {"converged", analysis.peak_fit.converged}};
    write_json(j, out / "coincidences.json");

    auto manifest = make_manifest("correlate", config);
    manifest.add_output("correlation_histogram.csv");
    manifest.add_output("coincidences.json");
    manifest.write((out / "manifest.json").string());
    return 0;
}

json g2_summary(const G2Analysis& analysis) {
    const auto& g2 = analysis.g2;
    json j;
    j["n1"] = g2.n1;
    j["n12"] = g2.n12;
    j["pair_window_ps"] = g2.pair_window_ps;

    double best_abs = 1e300;
    std::size_t zero_idx = 0;
    for (std::size_t i = 0; i < g2.t3_ps.size(); ++i)
        if (std::abs(g2.t3_ps[i]) < best_abs) {
            best_abs = std::abs(g2.t3_ps[i]);
            zero_idx = i;
        }
    if (std::isnan(g2.g2[zero_idx])) {
        j["g2_zero"] = nullptr;
    } else {
        j["g2_zero"] = g2.g2[zero_idx];
        j["g2_zero_sigma"] = g2.sigma[zero_idx];
        j["g2_zero_n123"] = g2.n123[zero_idx];
    }

    // pooled sideband estimate beyond |t3| >= 4 pair windows
    double n123 = 0.0, expected = 0.0;
    for (std::size_t i = 0; i < g2.t3_ps.size(); ++i) {
        if (std::abs(g2.t3_ps[i]) < 4.0 * double(g2.pair_window_ps)) continue;
        n123 += static_cast<double>(g2.n123[i]);
        expected += static_cast<double>(g2.n12) * static_cast<double>(g2.n13[i]) /
                    static_cast<double>(g2.n1);
    }
    if (expected > 0.0) {
        j["g2_far_pooled"] = n123 / expected;
        j["g2_far_sigma"] = n123 > 0.0 ? (n123 / expected) / std::sqrt(n123) : 0.0;
    }
    return j;
}

int cmd_g2(const CommonOptions& opts, const std::string& tag_file) {
    const auto config = load_or_default(opts);
    const auto out = ensure_out_dir(opts.out_dir);
    const auto streams = load_tag_streams(tag_file);

    G2Params params;
    params.pair_window_ps = config.window_ps;
    params.t3_span_ps = config.t3_span_ps;
    params.t3_step_ps = config.t3_step_ps;
    params.hist_bin_ps = config.bin_width_ps;
    params.hist_span_ps = config.t3_span_ps;

    const auto analysis =
        analyze_g2(pick_channel(streams, kChannelHerald),
                   pick_channel(streams, kChannelArmA),
                   pick_channel(streams, kChannelArmB), params);
    write_g2_csv(analysis.g2, (out / "g2_curve.csv").string());
    write_histogram_csv(analysis.triple_histogram,
                        (out / "triple_histogram.csv").string());
    write_json(g2_summary(analysis), out / "g2.json");

    auto manifest = make_manifest("g2", config);
    manifest.add_output("g2_curve.csv");
    manifest.add_output("triple_histogram.csv");
    manifest.add_output("g2.json");
    manifest.write((out / "manifest.json").string());
    return 0;
}

// Background rates used for the reproduction datasets: uncorrelated counts
// calibrated so the windowed coincidence statistics land on the reference
// operating point (the device model itself reports no singles background).
constexpr double kCoincidenceBackgroundHz = 145586.0;
constexpr double kG2BackgroundHz = 20000.0;
constexpr double kReferencePairRateHz = 8.4e4;

int cmd_reproduce(const CommonOptions& opts, bool paper_scale, bool quick) {
    const auto base = load_or_default(opts);
    const auto out = ensure_out_dir(opts.out_dir);
    json summary;

    // 1. transmission spectrum
    const auto spectrum = generate_spectrum(base.device(), 1500.0, 1600.0, 200001);
    write_spectrum_csv(spectrum, (out / "transmission_spectrum.csv").string());

    // 2. group index curve from that spectrum
    const auto curve = extract_group_index_curve(spectrum, base.ring_one_length_um, 3);
    {
        CsvWriter csv((out / "group_index.csv").string(), "wavelength_nm,group_index");
        for (const auto& p : curve) csv.row({p.lambda_nm, p.ng});
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (const auto& p : curve) {
            sx += p.lambda_nm;
            sy += p.ng;
            sxx += p.lambda_nm * p.lambda_nm;
            sxy += p.lambda_nm * p.ng;
        }
        const double n = static_cast<double>(curve.size());
        const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        summary["dispersion"] = {
            {"recovered_d_ps_nm_km", slope / (kSpeedOfLight * 1e-15)},
            {"configured_d_ps_nm_km", base.d_ps_nm_km},
            {"gvd_magnitude_ps2_per_m", gvd_magnitude(base.d_ps_nm_km, 1550.0)}};
    }

    // 3. heater scan with sampling noise at 3 min per point
    {
        const auto scan =
            run_heater_scan(base, arange(-8.0, 8.0, 0.25), true, 180.0, base.seed);
        CsvWriter csv((out / "heater_scan.csv").string(), "shift_ghz,rate_hz");
        Curve c;
        for (const auto& p : scan) {
            csv.row({p.x, p.sampled_rate_hz});
            c.x.push_back(p.x);
            c.y.push_back(p.sampled_rate_hz);
        }
        const FitResult fit = fit_lorentzian(c);
        summary["heater_scan"] = {{"fwhm_ghz", fit.fwhm}, {"converged", fit.converged}};
    }

    // 4. power scan, full chain at 20 s per point
    {
        const auto scan =
            simulate_power_scan(base, arange(0.05, 0.5, 0.05), 20.0, base.seed);
        CsvWriter csv((out / "power_scan.csv").string(), "power_mw,coincidences_hz");
        Curve c;
        for (const auto& p : scan) {
            csv.row({p.power_mw, static_cast<double>(p.net_counts) / 20.0});
            if (p.net_counts > 0) {
                c.x.push_back(p.power_mw);
                c.y.push_back(static_cast<double>(p.net_counts));
            }
        }
        const FitResult fit = fit_power_law(c);
        summary["power_scan"] = {{"exponent", fit.exponent()},
                                 {"points", c.x.size()}};
    }

    // phase matching at the +-3 FSR operating detuning
    {
        const double omega = 2.0 * kPi * 1.553e12;
        const double delta = phase_mismatch(base.d_ps_nm_km, 1550.0, omega);
        summary["phase_matching"] = {
            {"mismatch_rad_m", delta},
            {"sinc2_over_dc", phase_matching_efficiency(delta, base.dc_length_um)},
            {"te_tm_range_ratio", te_tm_detuning_ratio(base.d_ps_nm_km, -1064.0)}};
    }

    // 5. rate bookkeeping at the calibrated reference point
    {
        const auto engine = base.engine();
        const auto p = engine.pair_generation_rate(base.pump(), base.line_offset,
                                                   -base.line_offset);
        const auto single = engine.single_ring_counterfactual(base.pump(),
                                                              base.line_offset,
                                                              -base.line_offset);
        const auto det = detected_rates(p, base.signal_loss_db, base.idler_loss_db);
        summary["rates"] = {{"generation_rate_hz", p.generation_rate_hz},
                            {"single_ring_rate_hz", single.generation_rate_hz},
                            {"reduction_factor", p.reduction_factor},
                            {"phase_matching_efficiency", p.phase_factor},
                            {"predicted_coincidences_hz", det.coincidences_hz},
                            {"predicted_klyshko_from_signal", det.klyshko_from_signal}};
    }

    // 6. coincidences with the background-calibrated chain, 60 s
    {
        ExperimentConfig cfg = base;
        cfg.pair_rate_hz = kReferencePairRateHz;
        cfg.signal_background_hz = kCoincidenceBackgroundHz;
        cfg.idler_background_hz = kCoincidenceBackgroundHz;
        const auto streams = simulate_pair_streams(cfg.sim_config(false));
        const auto analysis = analyze_coincidences(
            streams.at(kChannelSignal), streams.at(kChannelIdler), cfg.window_ps,
            cfg.accidental_offset_ps, cfg.bin_width_ps, cfg.hist_span_ps);
        summary["coincidences"] = {
            {"net_rate_hz", analysis.result.net_rate_hz()},
            {"car", analysis.result.car},
            {"peak_fwhm_ps", analysis.peak_fit.fwhm},
            {"klyshko_from_signal", analysis.klyshko_from_signal},
            {"integration_s", analysis.result.integration_s}};
    }

    // 7. heralded g2, streamed
    {
        ExperimentConfig cfg = base;
        cfg.pair_rate_hz = kReferencePairRateHz;
        cfg.signal_background_hz = kG2BackgroundHz;
        cfg.idler_background_hz = kG2BackgroundHz;
        if (paper_scale)
            cfg.g2_duration_s = 36000.0;
        else if (quick)
            cfg.g2_duration_s = 60.0;

        G2Params params;
        params.pair_window_ps = cfg.window_ps;
        params.t3_span_ps = cfg.t3_span_ps;
        params.t3_step_ps = cfg.t3_step_ps;
        params.hist_bin_ps = cfg.bin_width_ps;
        params.hist_span_ps = cfg.t3_span_ps;

        const auto chunk_ps =
            static_cast<std::uint64_t>(std::llround(cfg.chunk_s * 1e12));
        const auto analysis =
            simulate_g2_streaming(cfg.sim_config(true), params, chunk_ps);
        write_g2_csv(analysis.g2, (out / "g2_curve.csv").string());
        write_histogram_csv(analysis.triple_histogram,
                            (out / "triple_histogram.csv").string());
        summary["g2"] = g2_summary(analysis);
        summary["g2"]["simulated_s"] = cfg.g2_duration_s;
        summary["g2"]["count_quadruple_check"] =
            g2_from_counts(100000000ULL, 7900000ULL, 7900000ULL, 27600ULL);
    }

    write_json(summary, out / "summary.json");

    auto manifest = make_manifest("reproduce", base);
    for (const char* f :
         {"transmission_spectrum.csv", "group_index.csv", "heater_scan.csv",
          "power_scan.csv", "triple_histogram.csv", "g2_curve.csv", "summary.json"})
        manifest.add_output(f);
    manifest.write((out / "manifest.json").string());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dual-racetrack photon-pair source simulator and correlator"};
    app.require_subcommand(1);

    CommonOptions opts;

    // spectrum
    double band_min = 1500.0, band_max = 1600.0;
    std::size_t points = 100001;
    auto* spectrum_cmd = app.add_subcommand("spectrum", "transmission spectra (CSV)");
    add_common(spectrum_cmd, opts);
    spectrum_cmd->add_option("--band-min", band_min, "band start (nm)");
    spectrum_cmd->add_option("--band-max", band_max, "band end (nm)");
    spectrum_cmd->add_option("--points", points, "grid points");

    // ng-curve
    int smoothing = 3;
    auto* ng_cmd = app.add_subcommand("ng-curve", "group-index curve from the spectrum");
    add_common(ng_cmd, opts);
    ng_cmd->add_option("--band-min", band_min, "band start (nm)");
    ng_cmd->add_option("--band-max", band_max, "band end (nm)");
    ng_cmd->add_option("--points", points, "grid points");
    ng_cmd->add_option("--window", smoothing, "moving-average window");

    // heater-scan
    double scan_lo = -8.0, scan_hi = 8.0, scan_step = 0.25;
    bool noise = false;
    double integration = 180.0;
    auto* heater_cmd = app.add_subcommand("heater-scan", "coincidence rate vs detuning");
    add_common(heater_cmd, opts);
    heater_cmd->add_option("--min", scan_lo, "first shift (GHz)");
    heater_cmd->add_option("--max", scan_hi, "last shift (GHz)");
    heater_cmd->add_option("--step", scan_step, "shift step (GHz)");
    heater_cmd->add_flag("--noise", noise, "sample Poisson counts");
    heater_cmd->add_option("--integration-s", integration, "integration per point (s)");

    // power-scan
    double p_lo = 0.05, p_hi = 0.5, p_step = 0.05;
    bool p_noise = false;
    double p_integration = 20.0;
    auto* power_cmd = app.add_subcommand("power-scan", "coincidence rate vs pump power");
    add_common(power_cmd, opts);
    power_cmd->add_option("--min", p_lo, "first power (mW)");
    power_cmd->add_option("--max", p_hi, "last power (mW)");
    power_cmd->add_option("--step", p_step, "power step (mW)");
    power_cmd->add_flag("--noise", p_noise, "sample Poisson counts");
    power_cmd->add_option("--integration-s", p_integration, "integration per point (s)");

    // simulate
    std::string out_file = "tags.ttb";
    bool split = false;
    double duration = 0.0;
    auto* sim_cmd = app.add_subcommand("simulate", "generate a binary time-tag file");
    sim_cmd->add_option("--config", opts.config_path, "experiment config file (INI)");
    sim_cmd->add_option("--out", out_file, "output time-tag file")->required();
    sim_cmd->add_option("--seed", opts.seed, "override the config seed")
        ->each([&opts](const std::string&) { opts.seed_set = true; });
    sim_cmd->add_flag("--split", split, "route the signal through the 50:50 splitter");
    sim_cmd->add_option("--duration-s", duration, "override the configured duration");

    // correlate
    std::string tag_file;
    std::uint32_t ch_a = kChannelSignal, ch_b = kChannelIdler;
    auto* corr_cmd = app.add_subcommand("correlate", "windowed coincidences and CAR");
    add_common(corr_cmd, opts);
    corr_cmd->add_option("--tags", tag_file, "time-tag file (.ttb or .csv)")->required();
    corr_cmd->add_option("--channel-a", ch_a, "first channel id");
    corr_cmd->add_option("--channel-b", ch_b, "second channel id");

    // g2
    auto* g2_cmd = app.add_subcommand("g2", "heralded second-order coherence");
    add_common(g2_cmd, opts);
    g2_cmd->add_option("--tags", tag_file, "time-tag file with channels 1,2,3")
        ->required();

    // reproduce
    bool paper_scale = false, quick = false;
    auto* repro_cmd =
        app.add_subcommand("reproduce", "all study datasets plus a summary JSON");
    add_common(repro_cmd, opts);
    repro_cmd->add_flag("--paper-scale", paper_scale,
                        "full 10-hour conditioned-coherence run (streamed)");
    repro_cmd->add_flag("--quick", quick, "shorten the g2 run to 60 simulated seconds");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (spectrum_cmd->parsed())
            return cmd_spectrum(opts, band_min, band_max, points);
        if (ng_cmd->parsed())
            return cmd_ng_curve(opts, band_min, band_max, points, smoothing);
        if (heater_cmd->parsed())
            return cmd_heater_scan(opts, scan_lo, scan_hi, scan_step, noise, integration);
        if (power_cmd->parsed())
            return cmd_power_scan(opts, p_lo, p_hi, p_step, p_noise, p_integration);
        if (sim_cmd->parsed()) return cmd_simulate(opts, out_file, split, duration);
        if (corr_cmd->parsed()) return cmd_correlate(opts, tag_file, ch_a, ch_b);
        if (g2_cmd->parsed()) return cmd_g2(opts, tag_file);
        if (repro_cmd->parsed()) return cmd_reproduce(opts, paper_scale, quick);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
