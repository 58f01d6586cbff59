#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dualring/config.hpp"
#include "dualring/correlator.hpp"
#include "dualring/fitting.hpp"
#include "dualring/sim.hpp"
#include "dualring/spectrum.hpp"

namespace dualring {

// End-to-end analyses shared by the CLI and the verification suites.

struct ScanSample {
    double x = 0.0;               // heater shift (GHz) or pump power (mW)
    double rate_hz = 0.0;         // expected detected coincidence rate
    double sampled_rate_hz = 0.0; // Poisson draw at the integration time
};

std::vector<ScanSample> run_heater_scan(const ExperimentConfig& config,
                                        const std::vector<double>& shifts_ghz,
                                        bool with_noise, double integration_s,
                                        std::uint64_t seed);

std::vector<ScanSample> run_power_scan(const ExperimentConfig& config,
                                       const std::vector<double>& powers_mw,
                                       bool with_noise, double integration_s,
                                       std::uint64_t seed);

// Full-chain power scan: per power, simulate pair streams for duration_s and
// count net coincidences with the configured window.
struct PowerScanCounts {
    double power_mw = 0.0;
    double expected_rate_hz = 0.0;
    std::int64_t net_counts = 0;
};

std::vector<PowerScanCounts> simulate_power_scan(const ExperimentConfig& config,
                                                 const std::vector<double>& powers_mw,
                                                 double duration_s, std::uint64_t seed);

struct CoincidenceAnalysis {
    CoincidenceResult result;
    CorrelationHistogram histogram;
    FitResult peak_fit;             // Gaussian fit of the coincidence peak
    double klyshko_from_signal = 0.0;
    double klyshko_from_idler = 0.0;
};

CoincidenceAnalysis analyze_coincidences(const TimeTagStream& a, const TimeTagStream& b,
                                         std::int64_t window_ps,
                                         std::int64_t accidental_offset_ps,
                                         std::int64_t bin_width_ps,
                                         std::int64_t hist_span_ps);

struct G2Params {
    std::int64_t pair_window_ps = 448;
    std::int64_t t3_span_ps = 4928;
    std::int64_t t3_step_ps = 64;
    std::int64_t hist_bin_ps = 32;
    std::int64_t hist_span_ps = 2048;
};

struct G2Analysis {
    GTwoResult g2;
    CorrelationHistogram triple_histogram;  // over t3 - t2
};

// Heralded-g2 analysis of fully materialized streams.
G2Analysis analyze_g2(const TimeTagStream& herald, const TimeTagStream& arm2,
                      const TimeTagStream& arm3, const G2Params& params);

// Simulates the splitter configuration and correlates it chunk by chunk, so
// arbitrarily long acquisitions run in bounded memory. Identical counts to
// materializing the whole run.
G2Analysis simulate_g2_streaming(const SimConfig& sim_config, const G2Params& params,
                                 std::uint64_t chunk_ps);

}  // namespace dualring
