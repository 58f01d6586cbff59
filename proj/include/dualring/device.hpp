#pragma once

#include <vector>

#include "dualring/dispersion.hpp"

namespace dualring {

// Racetrack resonator coupled to a single bus waveguide. Heater tuning is
// modeled post-calibration as a direct frequency shift of the whole comb.
struct RingResonator {
    double round_trip_length_um = 138.0;
    double intrinsic_loss_db_per_cm = 0.0;
    double bus_power_coupling = 0.0;       // kappa^2, in [0,1); 0 = decoupled
    double resonance_anchor_ghz = 0.0;     // offset fixing the comb position
    double heater_shift_ghz = 0.0;

    void validate() const;

    // Amplitude self-coupling and round-trip transmission.
    double self_coupling() const;
    double round_trip_amplitude() const;
    double finesse() const;

    // On-resonance power transmission of the bus (all-pass extinction).
    double resonance_extinction() const;

    // Intracavity power enhancement at a resonance peak.
    double peak_enhancement() const;

    // Loss and coupling chosen for critical coupling with the requested
    // loaded Q at lambda_ref.
    static RingResonator calibrated(double round_trip_length_um, double q_loaded,
                                    double lambda_ref_nm, double ng_at_ref);
};

// One comb line. center includes the heater shift; the linewidth is pinned to
// the unshifted position so heater tuning moves lines without reshaping them.
struct CombLine {
    double center_thz = 0.0;
    double linewidth_ghz = 0.0;
    double extinction = 0.0;     // through-port floor at line center
    double enhancement = 0.0;    // intracavity peak enhancement
};

std::vector<CombLine> resonator_comb(const RingResonator& res,
                                     const DispersionModel& dispersion,
                                     double band_min_nm, double band_max_nm);

// Comb line centers in THz, strictly increasing.
std::vector<double> resonance_frequencies(const RingResonator& res,
                                          const DispersionModel& dispersion,
                                          double band_min_nm, double band_max_nm);

// Local FSR in THz at frequency f.
double local_fsr_thz(const RingResonator& res, const DispersionModel& dispersion,
                     double f_thz);

// Spacing to the next comb line above (or below) a line at f: the FSR
// evaluated self-consistently at the interval midpoint.
double march_step(const RingResonator& res, const DispersionModel& dispersion,
                  double f_thz, bool upward);

// Loaded quality factor and linewidth at frequency f.
double loaded_q(const RingResonator& res, const DispersionModel& dispersion,
                double f_thz);
double linewidth_ghz(const RingResonator& res, const DispersionModel& dispersion,
                     double f_thz);

// Two linearly-uncoupled racetracks joined by the nonlinear directional
// coupler. The drop-port transfer never depends on resonator one; the only
// cross coupling is the heater crosstalk fraction (resonator two's heater
// leaking onto resonator one).
struct DualRingDevice {
    RingResonator resonator_one;
    RingResonator resonator_two;
    double dc_length_um = 18.0;     // nonlinear interaction length L
    double crosstalk = 0.0;
    double drop_peak_db = -16.0;    // add->drop coupling at a ring-two resonance
    DispersionModel dispersion;

    void validate() const;
};

// Returns a copy with the heater of the chosen resonator (1 or 2) advanced by
// shift_ghz; resonator two's heater leaks crosstalk*shift onto resonator one.
DualRingDevice apply_heater(const DualRingDevice& device, int resonator_id,
                            double shift_ghz);

// input -> through power transmission in dB (<= 0). Lorentzian dips on the
// resonator-one comb.
double through_transmission(const DualRingDevice& device, double lambda_nm);

// add -> drop power transmission in dB. Lorentzian peaks of height
// drop_peak_db on the resonator-two comb.
double drop_transmission(const DualRingDevice& device, double lambda_nm);

}  // namespace dualring
