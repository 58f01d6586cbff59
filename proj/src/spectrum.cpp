#include "dualring/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dualring/csv.hpp"

namespace dualring {

void TransmissionSpectrum::validate() const {
    if (wavelengths_nm.size() != through_db.size() ||
        wavelengths_nm.size() != drop_db.size())
        throw std::invalid_argument("spectrum grids must have equal length");
    if (!std::is_sorted(wavelengths_nm.begin(), wavelengths_nm.end()))
        throw std::invalid_argument("spectrum wavelengths must be sorted");
    for (std::size_t i = 0; i < size(); ++i)
        if (through_db[i] > 1e-12 || drop_db[i] > 1e-12)
            throw std::invalid_argument("transmission above 0 dB in a passive device");
}

TransmissionSpectrum generate_spectrum(const DualRingDevice& device,
                                       double band_min_nm, double band_max_nm,
                                       std::size_t n_points) {
    device.validate();
    TransmissionSpectrum spec;
    if (band_min_nm >= band_max_nm || n_points == 0) return spec;

    const auto comb1 = resonator_comb(device.resonator_one, device.dispersion,
                                      device.dispersion.band_min_nm,
                                      device.dispersion.band_max_nm);
    const auto comb2 = resonator_comb(device.resonator_two, device.dispersion,
                                      device.dispersion.band_min_nm,
                                      device.dispersion.band_max_nm);
    const double drop_peak = db_to_linear(device.drop_peak_db);

    spec.wavelengths_nm.reserve(n_points);
    spec.through_db.reserve(n_points);
    spec.drop_db.reserve(n_points);
    const double step =
        n_points > 1 ? (band_max_nm - band_min_nm) / double(n_points - 1) : 0.0;
    for (std::size_t i = 0; i < n_points; ++i) {
        const double lam = band_min_nm + step * double(i);
        const double f = frequency_thz(lam);
        double through = 1.0;
        for (const CombLine& line : comb1) {
            if (line.linewidth_ghz <= 0.0) continue;
            const double x = 2.0 * (f - line.center_thz) * 1e3 / line.linewidth_ghz;
            through *= 1.0 - (1.0 - line.extinction) / (1.0 + x * x);
        }
        double drop_shape = 0.0;
        for (const CombLine& line : comb2) {
            if (line.linewidth_ghz <= 0.0) continue;
            const double x = 2.0 * (f - line.center_thz) * 1e3 / line.linewidth_ghz;
            drop_shape += 1.0 / (1.0 + x * x);
        }
        spec.wavelengths_nm.push_back(lam);
        spec.through_db.push_back(
            std::max(-300.0, linear_to_db(std::max(through, 0.0))));
        spec.drop_db.push_back(
            std::max(-300.0, linear_to_db(std::min(1.0, drop_peak * drop_shape))));
    }
    return spec;
}

std::vector<double> find_dip_centers_nm(const TransmissionSpectrum& spectrum,
                                        double threshold_db) {
    spectrum.validate();
    std::vector<double> centers;
    const auto& lam = spectrum.wavelengths_nm;
    const auto& y = spectrum.through_db;
    for (std::size_t i = 1; i + 1 < y.size(); ++i) {
        if (!(y[i] < y[i - 1] && y[i] <= y[i + 1] && y[i] <= threshold_db)) continue;
        // Vertex of the parabola through the three points in linear power.
        const double x0 = lam[i - 1], x1 = lam[i], x2 = lam[i + 1];
        const double y0 = db_to_linear(y[i - 1]);
        const double y1 = db_to_linear(y[i]);
        const double y2 = db_to_linear(y[i + 1]);
        const double d01 = (y1 - y0) / (x1 - x0);
        const double d12 = (y2 - y1) / (x2 - x1);
        const double curvature = (d12 - d01) / (x2 - x0);
        double center = x1;
        if (curvature > 0.0)
            center = std::clamp(0.5 * (x0 + x1) - d01 / (2.0 * curvature), x0, x2);
        centers.push_back(center);
    }
    return centers;
}

std::vector<GroupIndexPoint> extract_group_index_curve(
    const TransmissionSpectrum& spectrum, double length_um, int smoothing_window,
    double threshold_db) {
    if (length_um <= 0.0) throw std::domain_error("length_um must be > 0");
    if (smoothing_window < 1) throw std::invalid_argument("smoothing_window must be >= 1");
    const auto dips = find_dip_centers_nm(spectrum, threshold_db);
    if (dips.size() < 3)
        throw std::runtime_error("need at least 3 resolvable resonance dips, found " +
                                 std::to_string(dips.size()));

    std::vector<GroupIndexPoint> raw;
    raw.reserve(dips.size() - 1);
    for (std::size_t i = 0; i + 1 < dips.size(); ++i) {
        const double fsr = dips[i + 1] - dips[i];
        const double mid = 0.5 * (dips[i] + dips[i + 1]);
        raw.push_back({mid, group_index(mid, fsr, length_um)});
    }

    if (smoothing_window == 1) return raw;
    std::vector<GroupIndexPoint> smoothed(raw.size());
    const int half = smoothing_window / 2;
    const int n = static_cast<int>(raw.size());
    for (int i = 0; i < n; ++i) {
        const int lo = std::max(0, i - half);
        const int hi = std::min(n - 1, i + half);
        double sum = 0.0;
        for (int j = lo; j <= hi; ++j) sum += raw[j].ng;
        smoothed[i] = {raw[i].lambda_nm, sum / double(hi - lo + 1)};
    }
    return smoothed;
}

void write_spectrum_csv(const TransmissionSpectrum& spectrum, const std::string& path) {
    CsvWriter csv(path, "wavelength_nm,through_db,drop_db");
    for (std::size_t i = 0; i < spectrum.size(); ++i)
        csv.row({spectrum.wavelengths_nm[i], spectrum.through_db[i], spectrum.drop_db[i]});
}

TransmissionSpectrum read_spectrum_csv(const std::string& path) {
    TransmissionSpectrum spec;
    for (const auto& fields : read_csv(path, "wavelength_nm,through_db,drop_db", 3)) {
        spec.wavelengths_nm.push_back(fields[0]);
        spec.through_db.push_back(fields[1]);
        spec.drop_db.push_back(fields[2]);
    }
    spec.validate();
    return spec;
}

}  // namespace dualring
