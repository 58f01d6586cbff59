#pragma once

#include <vector>

#include "dualring/device.hpp"

namespace dualring {

struct PumpConfig {
    double wavelength_nm = 1550.0;
    double power_mw = 2.1;        // in-waveguide
    double linewidth_ghz = 0.0;   // narrow-band laser

    void validate() const;
};

struct PhaseMatchResult {
    double detuning_rad_s = 0.0;   // Omega
    double delta_rad_m = 0.0;      // phase mismatch
    double efficiency = 0.0;       // sinc^2(delta L/2)
};

struct PairRatePrediction {
    double generation_rate_hz = 0.0;   // on-chip pairs
    double signal_frequency_thz = 0.0;
    double idler_frequency_thz = 0.0;
    double pump_frequency_thz = 0.0;
    double enhancement_pump = 0.0;
    double enhancement_signal = 0.0;
    double enhancement_idler = 0.0;
    double phase_factor = 0.0;         // sinc^2 term
    double energy_factor = 0.0;        // comb-alignment Lorentzian
    double energy_mismatch_ghz = 0.0;
    double reduction_factor = 0.0;     // L / (4 * ring-one round trip)
};

// delta = -D lambda^2 Omega^2 / (2 pi c), in rad/m. Quadratic in Omega.
double phase_mismatch(double d_ps_nm_km, double lambda_nm, double omega_rad_s);

// sinc^2(delta*L/2); 1 at delta = 0.
double phase_matching_efficiency(double delta_rad_m, double interaction_length_um);

// sqrt(|D_a| / |D_b|): ratio of phase-matchable detuning ranges.
double te_tm_detuning_ratio(double d_a_ps_nm_km, double d_b_ps_nm_km);

// f_signal + f_idler - 2 f_pump, in GHz (inputs THz), signed.
double energy_mismatch_ghz(double f_signal_thz, double f_idler_thz, double f_pump_thz);

// Intracavity power enhancement: Lorentzian around the nearest comb line,
// FWHM = f/Q_loaded, peak from the coupling/loss balance.
double resonant_enhancement(const RingResonator& res, const DispersionModel& dispersion,
                            double f_thz);

// Pair-rate engine. kappa_cal absorbs the nonlinear parameter, mode volumes
// and field normalizations; calibrate_kappa() pins it so that the reference
// operating point (calibration_power_mw, aligned combs, +/-3 FSR lines)
// produces calibration_rate_hz.
class SfwmEngine {
public:
    SfwmEngine(DualRingDevice device, double kappa_cal = 1.0, bool strict = false);

    const DualRingDevice& device() const { return device_; }
    double kappa_cal() const { return kappa_cal_; }

    // Comb-alignment penalty linewidth: Lorentzian-convolution FWHM with the
    // pump line doubled, 2*dv_pump + dv_signal + dv_idler, applied to the
    // per-line misalignment (half the energy mismatch).
    double energy_penalty_fwhm_ghz(double f_pump_thz, double f_signal_thz,
                                   double f_idler_thz) const;

    PairRatePrediction pair_generation_rate(const PumpConfig& pump, int signal_line,
                                            int idler_line) const;

    // Single-resonator counterfactual: reduction factor 1 and the phase-match
    // length set to the ring-one round trip.
    PairRatePrediction single_ring_counterfactual(const PumpConfig& pump,
                                                  int signal_line, int idler_line) const;

    // Ring-two heater offset that zeroes the energy mismatch for the
    // +/-line_offset pair.
    double alignment_shift_ghz(const PumpConfig& pump, int line_offset) const;

    // Engine with that offset applied.
    SfwmEngine aligned(const PumpConfig& pump, int line_offset) const;

    // Fixes kappa_cal so pair_generation_rate at the aligned reference point
    // equals rate_hz. Returns the engine for chaining.
    SfwmEngine& calibrate_kappa(const PumpConfig& pump, int line_offset, double rate_hz);

private:
    DualRingDevice device_;
    double kappa_cal_;
    bool strict_;
};

struct HeaterScanPoint {
    double shift_ghz = 0.0;
    double pair_rate_hz = 0.0;         // on-chip
    double coincidence_rate_hz = 0.0;  // after detection losses
};

struct PowerScanPoint {
    double power_mw = 0.0;
    double pair_rate_hz = 0.0;
    double coincidence_rate_hz = 0.0;
};

struct DetectedRates {
    double singles_signal_hz = 0.0;
    double singles_idler_hz = 0.0;
    double coincidences_hz = 0.0;
    double klyshko_from_signal = 0.0;  // coincidences / signal singles
    double klyshko_from_idler = 0.0;
};

DetectedRates detected_rates(const PairRatePrediction& prediction,
                             double signal_loss_db, double idler_loss_db,
                             double signal_dark_hz = 0.0, double idler_dark_hz = 0.0);

// Scan of additional ring-two heater shifts around the current alignment.
// shifts must be sorted ascending.
std::vector<HeaterScanPoint> heater_scan(const SfwmEngine& engine, const PumpConfig& pump,
                                         const std::vector<double>& shifts_ghz,
                                         int line_offset, double signal_loss_db,
                                         double idler_loss_db);

std::vector<PowerScanPoint> power_scan(const SfwmEngine& engine, const PumpConfig& pump,
                                       const std::vector<double>& powers_mw,
                                       int line_offset, double signal_loss_db,
                                       double idler_loss_db);

}  // namespace dualring
