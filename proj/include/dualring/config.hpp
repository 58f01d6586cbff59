#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "dualring/device.hpp"
#include "dualring/sfwm.hpp"
#include "dualring/sim.hpp"

namespace dualring {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flat key-value configuration with sections mirroring the module split.
// Defaults are the reference calibration of the modeled device; unknown keys
// are rejected at parse time.
struct ExperimentConfig {
    // [device]
    double ring_one_length_um = 138.0;
    double ring_two_length_um = 130.0;
    double ring_one_q_loaded = 4.1e5;
    double ring_two_q_loaded = 3.7e5;
    double dc_length_um = 18.0;
    double crosstalk = 0.0;
    double drop_peak_db = -16.0;
    double ring_one_anchor_ghz = 0.0;
    double ring_two_anchor_ghz = 0.0;

    // [dispersion]
    double lambda_ref_nm = 1550.0;
    double ng_ref = 4.3;
    double d_ps_nm_km = -32000.0;
    double dd_dlambda_ps_nm2_km = 0.0;
    double band_min_nm = 1450.0;
    double band_max_nm = 1650.0;

    // [pump]
    double pump_wavelength_nm = 1550.0;
    double pump_power_mw = 2.1;
    double pump_linewidth_ghz = 0.0;

    // [rates]
    double calibration_rate_hz = 1.3e5;
    double calibration_power_mw = 2.1;
    int line_offset = 3;

    // [detectors] dark rates are uncalibrated placeholders; background_hz adds
    // uncorrelated broadband counts per channel (0 = clean source).
    double signal_loss_db = 9.0;
    double idler_loss_db = 5.7;
    double signal_jitter_ps = 68.2;
    double idler_jitter_ps = 68.2;
    double signal_dark_hz = 200.0;
    double idler_dark_hz = 200.0;
    double signal_background_hz = 0.0;
    double idler_background_hz = 0.0;
    double signal_dead_time_ps = 0.0;
    double idler_dead_time_ps = 0.0;

    // [simulation] pair_rate_hz < 0 means "derive from the device model".
    double pair_rate_hz = -1.0;
    double duration_s = 60.0;
    double g2_duration_s = 600.0;
    double chunk_s = 60.0;
    std::uint64_t seed = 12345;
    double splitter_ratio = 0.5;

    // [analysis]
    std::int64_t bin_width_ps = 32;
    std::int64_t window_ps = 448;
    std::int64_t accidental_offset_ps = 10000;
    std::int64_t hist_span_ps = 512;
    std::int64_t t3_span_ps = 4928;
    std::int64_t t3_step_ps = 64;

    void validate() const;

    DispersionModel dispersion() const;
    DualRingDevice device() const;
    PumpConfig pump() const;

    // Engine with ring two aligned for the +/-line_offset pair and kappa
    // calibrated so the reference power reproduces calibration_rate_hz.
    SfwmEngine engine() const;

    // On-chip pair rate: the explicit override when set, otherwise the engine
    // prediction at the configured pump power.
    double effective_pair_rate_hz() const;

    SimConfig sim_config(bool with_splitter) const;
};

// Parses the INI-style file; throws ConfigError with a line reference on
// unknown sections/keys or malformed values.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& text, const std::string& origin);

// Canonical serialization (every key, current values).
std::string config_to_string(const ExperimentConfig& config);

// FNV-1a 64 of the canonical serialization.
std::string config_hash(const ExperimentConfig& config);

}  // namespace dualring
