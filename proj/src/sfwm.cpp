#include "dualring/sfwm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dualring {

namespace {

double sinc(double x) {
    if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

std::size_t nearest_line_index(const std::vector<CombLine>& comb, double f_thz) {
    if (comb.empty()) throw std::runtime_error("no resonances inside the model band");
    std::size_t best = 0;
    double best_d = std::abs(comb[0].center_thz - f_thz);
    for (std::size_t i = 1; i < comb.size(); ++i) {
        const double d = std::abs(comb[i].center_thz - f_thz);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

}  // namespace

void PumpConfig::validate() const {
    if (wavelength_nm <= 0.0) throw std::invalid_argument("pump wavelength must be > 0");
    if (power_mw < 0.0) throw std::invalid_argument("pump power must be >= 0");
    if (linewidth_ghz < 0.0) throw std::invalid_argument("pump linewidth must be >= 0");
}

double phase_mismatch(double d_ps_nm_km, double lambda_nm, double omega_rad_s) {
    if (lambda_nm <= 0.0) throw std::domain_error("phase_mismatch requires lambda > 0");
    const double d_si = d_ps_nm_km * 1e-6;  // s/m^2
    const double lam_m = lambda_nm * 1e-9;
    return -d_si * lam_m * lam_m * omega_rad_s * omega_rad_s /
           (2.0 * kPi * kSpeedOfLight);
}

double phase_matching_efficiency(double delta_rad_m, double interaction_length_um) {
    if (interaction_length_um <= 0.0)
        throw std::domain_error("interaction length must be > 0");
    const double s = sinc(delta_rad_m * interaction_length_um * 1e-6 / 2.0);
    return s * s;
}

double te_tm_detuning_ratio(double d_a_ps_nm_km, double d_b_ps_nm_km) {
    if (d_a_ps_nm_km == 0.0 || d_b_ps_nm_km == 0.0)
        throw std::domain_error("dispersion parameters must be nonzero");
    return std::sqrt(std::abs(d_a_ps_nm_km) / std::abs(d_b_ps_nm_km));
}

double energy_mismatch_ghz(double f_signal_thz, double f_idler_thz, double f_pump_thz) {
    if (f_signal_thz <= 0.0 || f_idler_thz <= 0.0 || f_pump_thz <= 0.0)
        throw std::domain_error("frequencies must be positive");
    return (f_signal_thz + f_idler_thz - 2.0 * f_pump_thz) * 1e3;
}

double resonant_enhancement(const RingResonator& res, const DispersionModel& dispersion,
                            double f_thz) {
    const auto comb = resonator_comb(res, dispersion, dispersion.band_min_nm,
                                     dispersion.band_max_nm);
    const CombLine& line = comb[nearest_line_index(comb, f_thz)];
    if (line.linewidth_ghz <= 0.0) return 0.0;
    const double x = 2.0 * (f_thz - line.center_thz) * 1e3 / line.linewidth_ghz;
    return line.enhancement / (1.0 + x * x);
}

SfwmEngine::SfwmEngine(DualRingDevice device, double kappa_cal, bool strict)
    : device_(std::move(device)), kappa_cal_(kappa_cal), strict_(strict) {
    device_.validate();
}

double SfwmEngine::energy_penalty_fwhm_ghz(double f_pump_thz, double f_signal_thz,
                                           double f_idler_thz) const {
    return 2.0 * linewidth_ghz(device_.resonator_one, device_.dispersion, f_pump_thz) +
           linewidth_ghz(device_.resonator_two, device_.dispersion, f_signal_thz) +
           linewidth_ghz(device_.resonator_two, device_.dispersion, f_idler_thz);
}

PairRatePrediction SfwmEngine::pair_generation_rate(const PumpConfig& pump,
                                                    int signal_line,
                                                    int idler_line) const {
    pump.validate();
    const auto& disp = device_.dispersion;
    const double f_p = frequency_thz(pump.wavelength_nm);

    const auto comb2 = resonator_comb(device_.resonator_two, disp, disp.band_min_nm,
                                      disp.band_max_nm);
    const std::size_t center = nearest_line_index(comb2, f_p);
    const long is = static_cast<long>(center) + signal_line;
    const long ii = static_cast<long>(center) + idler_line;
    if (is < 0 || ii < 0 || is >= static_cast<long>(comb2.size()) ||
        ii >= static_cast<long>(comb2.size()))
        throw std::invalid_argument("signal/idler line index outside the model band");
    const CombLine& sig = comb2[static_cast<std::size_t>(is)];
    const CombLine& idl = comb2[static_cast<std::size_t>(ii)];

    const auto comb1 = resonator_comb(device_.resonator_one, disp, disp.band_min_nm,
                                      disp.band_max_nm);
    const CombLine& pump_line = comb1[nearest_line_index(comb1, f_p)];

    PairRatePrediction out;
    out.pump_frequency_thz = f_p;
    out.signal_frequency_thz = sig.center_thz;
    out.idler_frequency_thz = idl.center_thz;
    out.energy_mismatch_ghz = energy_mismatch_ghz(sig.center_thz, idl.center_thz, f_p);
    out.reduction_factor =
        device_.dc_length_um / (4.0 * device_.resonator_one.round_trip_length_um);

    // Detuning from the energy-conserving center, symmetric under a
    // signal/idler swap.
    const double omega =
        kPi * std::abs(sig.center_thz - idl.center_thz) * 1e12;  // 2*pi*|fs-fi|/2
    const double dl = pump.wavelength_nm - disp.lambda_ref_nm;
    const double d_local = disp.d_ps_nm_km + disp.dd_dlambda_ps_nm2_km * dl;
    const double delta = phase_mismatch(d_local, pump.wavelength_nm, omega);
    out.phase_factor = phase_matching_efficiency(delta, device_.dc_length_um);

    if (pump_line.linewidth_ghz > 0.0) {
        const double x =
            2.0 * (f_p - pump_line.center_thz) * 1e3 / pump_line.linewidth_ghz;
        out.enhancement_pump = pump_line.enhancement / (1.0 + x * x);
    }
    // Photons are generated into the (possibly heater-shifted) ring-two
    // lines, so their enhancement sits at the line peaks.
    out.enhancement_signal = sig.enhancement;
    out.enhancement_idler = idl.enhancement;

    // Comb-alignment penalty: Lorentzian in the per-line misalignment (half
    // the energy mismatch) with the convolution FWHM, pump line doubled. The
    // widths are the comb-line widths, which heater shifts never change.
    const double fwhm =
        2.0 * pump_line.linewidth_ghz + sig.linewidth_ghz + idl.linewidth_ghz;
    if (strict_ && std::abs(out.energy_mismatch_ghz) > fwhm)
        throw std::invalid_argument("signal/idler lines not symmetric about the pump");
    const double m = out.energy_mismatch_ghz / fwhm;
    out.energy_factor = 1.0 / (1.0 + m * m);

    out.generation_rate_hz = kappa_cal_ * pump.power_mw * pump.power_mw *
                             out.enhancement_pump * out.enhancement_pump *
                             out.enhancement_signal * out.enhancement_idler *
                             out.phase_factor * out.energy_factor *
                             out.reduction_factor;
    return out;
}

PairRatePrediction SfwmEngine::single_ring_counterfactual(const PumpConfig& pump,
                                                          int signal_line,
                                                          int idler_line) const {
    PairRatePrediction p = pair_generation_rate(pump, signal_line, idler_line);
    // Undo the dual-ring factors: full reduction factor and the sinc^2 over
    // the coupler length; re-evaluate phase matching over the ring-one round
    // trip.
    const double omega =
        kPi * std::abs(p.signal_frequency_thz - p.idler_frequency_thz) * 1e12;
    const auto& disp = device_.dispersion;
    const double dl = pump.wavelength_nm - disp.lambda_ref_nm;
    const double d_local = disp.d_ps_nm_km + disp.dd_dlambda_ps_nm2_km * dl;
    const double delta = phase_mismatch(d_local, pump.wavelength_nm, omega);
    const double phase_single =
        phase_matching_efficiency(delta, device_.resonator_one.round_trip_length_um);

    p.generation_rate_hz *= phase_single / (p.phase_factor * p.reduction_factor);
    p.phase_factor = phase_single;
    p.reduction_factor = 1.0;
    return p;
}

double SfwmEngine::alignment_shift_ghz(const PumpConfig& pump, int line_offset) const {
    SfwmEngine relaxed(device_, kappa_cal_, false);
    const PairRatePrediction p =
        relaxed.pair_generation_rate(pump, line_offset, -line_offset);
    // Both lines move with the ring-two heater, so the mismatch changes by
    // twice the shift.
    return -p.energy_mismatch_ghz / 2.0;
}

SfwmEngine SfwmEngine::aligned(const PumpConfig& pump, int line_offset) const {
    return SfwmEngine(apply_heater(device_, 2, alignment_shift_ghz(pump, line_offset)),
                      kappa_cal_, strict_);
}

SfwmEngine& SfwmEngine::calibrate_kappa(const PumpConfig& pump, int line_offset,
                                        double rate_hz) {
    if (rate_hz < 0.0) throw std::invalid_argument("calibration rate must be >= 0");
    kappa_cal_ = 1.0;
    const PairRatePrediction p = pair_generation_rate(pump, line_offset, -line_offset);
    if (p.generation_rate_hz <= 0.0)
        throw std::runtime_error("reference operating point produces zero rate");
    kappa_cal_ = rate_hz / p.generation_rate_hz;
    return *this;
}

DetectedRates detected_rates(const PairRatePrediction& prediction,
                             double signal_loss_db, double idler_loss_db,
                             double signal_dark_hz, double idler_dark_hz) {
    if (signal_loss_db < 0.0 || idler_loss_db < 0.0)
        throw std::invalid_argument("losses must be >= 0 dB");
    const double eta_s = loss_db_to_efficiency(signal_loss_db);
    const double eta_i = loss_db_to_efficiency(idler_loss_db);
    const double r = prediction.generation_rate_hz;

    DetectedRates out;
    out.singles_signal_hz = r * eta_s + signal_dark_hz;
    out.singles_idler_hz = r * eta_i + idler_dark_hz;
    out.coincidences_hz = r * eta_s * eta_i;
    out.klyshko_from_signal =
        out.singles_signal_hz > 0.0 ? out.coincidences_hz / out.singles_signal_hz : 0.0;
    out.klyshko_from_idler =
        out.singles_idler_hz > 0.0 ? out.coincidences_hz / out.singles_idler_hz : 0.0;
    return out;
}

std::vector<HeaterScanPoint> heater_scan(const SfwmEngine& engine, const PumpConfig& pump,
                                         const std::vector<double>& shifts_ghz,
                                         int line_offset, double signal_loss_db,
                                         double idler_loss_db) {
    if (!std::is_sorted(shifts_ghz.begin(), shifts_ghz.end()))
        throw std::invalid_argument("heater shifts must be sorted");
    std::vector<HeaterScanPoint> out;
    out.reserve(shifts_ghz.size());
    for (double s : shifts_ghz) {
        SfwmEngine shifted(apply_heater(engine.device(), 2, s), engine.kappa_cal());
        const auto p = shifted.pair_generation_rate(pump, line_offset, -line_offset);
        const auto det = detected_rates(p, signal_loss_db, idler_loss_db);
        out.push_back({s, p.generation_rate_hz, det.coincidences_hz});
    }
    return out;
}

std::vector<PowerScanPoint> power_scan(const SfwmEngine& engine, const PumpConfig& pump,
                                       const std::vector<double>& powers_mw,
                                       int line_offset, double signal_loss_db,
                                       double idler_loss_db) {
    std::vector<PowerScanPoint> out;
    out.reserve(powers_mw.size());
    for (double p_mw : powers_mw) {
        if (p_mw < 0.0) throw std::invalid_argument("pump power must be >= 0");
        PumpConfig pc = pump;
        pc.power_mw = p_mw;
        const auto p = engine.pair_generation_rate(pc, line_offset, -line_offset);
        const auto det = detected_rates(p, signal_loss_db, idler_loss_db);
        out.push_back({p_mw, p.generation_rate_hz, det.coincidences_hz});
    }
    return out;
}

}  // namespace dualring
