#include "dualring/device.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dualring {

namespace {

constexpr double kDbFloor = -300.0;

// Unit-height Lorentzian.
double lorentzian(double f_thz, double center_thz, double fwhm_ghz) {
    const double x = 2.0 * (f_thz - center_thz) * 1e3 / fwhm_ghz;
    return 1.0 / (1.0 + x * x);
}

}  // namespace

void RingResonator::validate() const {
    if (round_trip_length_um <= 0.0)
        throw std::invalid_argument("round_trip_length_um must be > 0");
    if (bus_power_coupling < 0.0 || bus_power_coupling >= 1.0)
        throw std::invalid_argument("bus_power_coupling must be in [0,1)");
    if (intrinsic_loss_db_per_cm < 0.0)
        throw std::invalid_argument("intrinsic_loss_db_per_cm must be >= 0");
}

double RingResonator::self_coupling() const {
    return std::sqrt(1.0 - bus_power_coupling);
}

double RingResonator::round_trip_amplitude() const {
    const double length_cm = round_trip_length_um * 1e-4;
    return std::pow(10.0, -intrinsic_loss_db_per_cm * length_cm / 20.0);
}

double RingResonator::finesse() const {
    const double ta = self_coupling() * round_trip_amplitude();
    if (ta >= 1.0) return std::numeric_limits<double>::infinity();
    return kPi * std::sqrt(ta) / (1.0 - ta);
}

double RingResonator::resonance_extinction() const {
    const double t = self_coupling();
    const double a = round_trip_amplitude();
    const double ta = t * a;
    if (ta >= 1.0) return 1.0;  // decoupled lossless ring: featureless bus
    const double num = (t - a) / (1.0 - ta);
    return num * num;
}

double RingResonator::peak_enhancement() const {
    const double ta = self_coupling() * round_trip_amplitude();
    if (ta >= 1.0) return 0.0;
    const double denom = (1.0 - ta) * (1.0 - ta);
    return bus_power_coupling * round_trip_amplitude() / denom;
}

RingResonator RingResonator::calibrated(double round_trip_length_um, double q_loaded,
                                        double lambda_ref_nm, double ng_at_ref) {
    if (q_loaded <= 0.0) throw std::invalid_argument("q_loaded must be > 0");
    const double f_ref = frequency_thz(lambda_ref_nm);
    const double fsr_thz = kSpeedOfLight / (ng_at_ref * round_trip_length_um * 1e-6) * 1e-12;
    const double linewidth_thz = f_ref / q_loaded;
    const double target_finesse = fsr_thz / linewidth_thz;
    // Critical coupling: t = a, so solve u + (pi/F) sqrt(u) = 1 for u = t*a.
    const double r = kPi / target_finesse;
    const double sqrt_u = (-r + std::sqrt(r * r + 4.0)) / 2.0;
    const double u = sqrt_u * sqrt_u;

    RingResonator res;
    res.round_trip_length_um = round_trip_length_um;
    res.bus_power_coupling = 1.0 - u;
    const double length_cm = round_trip_length_um * 1e-4;
    res.intrinsic_loss_db_per_cm = -10.0 * std::log10(u) / length_cm;
    return res;
}

std::vector<CombLine> resonator_comb(const RingResonator& res,
                                     const DispersionModel& dispersion,
                                     double band_min_nm, double band_max_nm) {
    res.validate();
    std::vector<CombLine> lines;
    if (band_min_nm >= band_max_nm) return lines;
    band_min_nm = std::max(band_min_nm, dispersion.band_min_nm);
    band_max_nm = std::min(band_max_nm, dispersion.band_max_nm);
    if (band_min_nm >= band_max_nm) return lines;

    const double f_lo = frequency_thz(band_max_nm);
    const double f_hi = frequency_thz(band_min_nm);
    const double f_anchor = frequency_thz(dispersion.lambda_ref_nm) +
                            res.resonance_anchor_ghz * 1e-3;

    const double extinction = res.resonance_extinction();
    const double enhancement = res.peak_enhancement();
    const double finesse = res.finesse();
    const bool featureless = res.bus_power_coupling <= 0.0;

    auto push_line = [&](double f_base) {
        CombLine line;
        line.center_thz = f_base + res.heater_shift_ghz * 1e-3;
        line.linewidth_ghz = std::isfinite(finesse)
                                 ? local_fsr_thz(res, dispersion, f_base) / finesse * 1e3
                                 : 0.0;
        line.extinction = featureless ? 1.0 : extinction;
        line.enhancement = enhancement;
        lines.push_back(line);
    };

    // March down from the anchor, then up, on the unshifted comb. Heater
    // shifts displace line centers only.
    double f = f_anchor;
    while (f >= f_lo) {
        if (f <= f_hi) push_line(f);
        f -= march_step(res, dispersion, f, /*upward=*/false);
    }
    std::reverse(lines.begin(), lines.end());
    f = f_anchor;
    f += march_step(res, dispersion, f, /*upward=*/true);
    while (f <= f_hi) {
        if (f >= f_lo) push_line(f);
        f += march_step(res, dispersion, f, /*upward=*/true);
    }
    return lines;
}

double local_fsr_thz(const RingResonator& res, const DispersionModel& dispersion,
                     double f_thz) {
    // Clamped at the band edges so the comb march can take its final step out
    // of the band.
    const double lam = std::clamp(wavelength_nm(f_thz), dispersion.band_min_nm,
                                  dispersion.band_max_nm);
    const double ng = dispersion.group_index_at(lam);
    return kSpeedOfLight / (ng * res.round_trip_length_um * 1e-6) * 1e-12;
}

// Adjacent-line spacing: fixed-point solve of step = FSR at the interval
// midpoint, so generated combs satisfy the local-FSR relation to machine
// precision in either direction.
double march_step(const RingResonator& res, const DispersionModel& dispersion,
                  double f_thz, bool upward) {
    const double sign = upward ? 1.0 : -1.0;
    double step = local_fsr_thz(res, dispersion, f_thz);
    for (int i = 0; i < 6; ++i)
        step = local_fsr_thz(res, dispersion, f_thz + sign * step / 2.0);
    return step;
}

std::vector<double> resonance_frequencies(const RingResonator& res,
                                          const DispersionModel& dispersion,
                                          double band_min_nm, double band_max_nm) {
    std::vector<double> freqs;
    for (const CombLine& line : resonator_comb(res, dispersion, band_min_nm, band_max_nm))
        freqs.push_back(line.center_thz);
    return freqs;
}

double linewidth_ghz(const RingResonator& res, const DispersionModel& dispersion,
                     double f_thz) {
    return local_fsr_thz(res, dispersion, f_thz) / res.finesse() * 1e3;
}

double loaded_q(const RingResonator& res, const DispersionModel& dispersion,
                double f_thz) {
    return f_thz / (linewidth_ghz(res, dispersion, f_thz) * 1e-3);
}

void DualRingDevice::validate() const {
    resonator_one.validate();
    resonator_two.validate();
    dispersion.validate();
    if (dc_length_um <= 0.0) throw std::invalid_argument("dc_length_um must be > 0");
    if (dc_length_um >= std::min(resonator_one.round_trip_length_um,
                                 resonator_two.round_trip_length_um))
        throw std::invalid_argument("dc_length_um must be shorter than both round trips");
    if (crosstalk < 0.0 || crosstalk > 1.0)
        throw std::invalid_argument("crosstalk must be in [0,1]");
    if (drop_peak_db > 0.0)
        throw std::invalid_argument("drop_peak_db must be <= 0 (passive device)");
}

DualRingDevice apply_heater(const DualRingDevice& device, int resonator_id,
                            double shift_ghz) {
    if (resonator_id != 1 && resonator_id != 2)
        throw std::invalid_argument("resonator_id must be 1 or 2");
    DualRingDevice out = device;
    if (resonator_id == 1) {
        out.resonator_one.heater_shift_ghz += shift_ghz;
    } else {
        out.resonator_two.heater_shift_ghz += shift_ghz;
        out.resonator_one.heater_shift_ghz += device.crosstalk * shift_ghz;
    }
    return out;
}

double through_transmission(const DualRingDevice& device, double lambda_nm) {
    if (!device.dispersion.in_band(lambda_nm))
        throw std::out_of_range("wavelength outside dispersion model band");
    const double f = frequency_thz(lambda_nm);
    const auto lines = resonator_comb(device.resonator_one, device.dispersion,
                                      device.dispersion.band_min_nm,
                                      device.dispersion.band_max_nm);
    double t_lin = 1.0;
    for (const CombLine& line : lines) {
        if (line.linewidth_ghz <= 0.0) continue;
        const double depth = 1.0 - line.extinction;
        t_lin *= 1.0 - depth * lorentzian(f, line.center_thz, line.linewidth_ghz);
    }
    return std::max(kDbFloor, linear_to_db(std::max(t_lin, 0.0)));
}

double drop_transmission(const DualRingDevice& device, double lambda_nm) {
    if (!device.dispersion.in_band(lambda_nm))
        throw std::out_of_range("wavelength outside dispersion model band");
    const double f = frequency_thz(lambda_nm);
    const auto lines = resonator_comb(device.resonator_two, device.dispersion,
                                      device.dispersion.band_min_nm,
                                      device.dispersion.band_max_nm);
    double shape = 0.0;
    for (const CombLine& line : lines) {
        if (line.linewidth_ghz <= 0.0) continue;
        shape += lorentzian(f, line.center_thz, line.linewidth_ghz);
    }
    const double t_lin = std::min(1.0, db_to_linear(device.drop_peak_db) * shape);
    return std::max(kDbFloor, linear_to_db(t_lin));
}

}  // namespace dualring
