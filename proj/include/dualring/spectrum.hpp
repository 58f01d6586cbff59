#pragma once

#include <string>
#include <vector>

#include "dualring/device.hpp"

namespace dualring {

struct TransmissionSpectrum {
    std::vector<double> wavelengths_nm;  // sorted grid
    std::vector<double> through_db;
    std::vector<double> drop_db;

    void validate() const;
    std::size_t size() const { return wavelengths_nm.size(); }
};

// Uniform-grid spectrum over [band_min, band_max] with n_points samples.
TransmissionSpectrum generate_spectrum(const DualRingDevice& device,
                                       double band_min_nm, double band_max_nm,
                                       std::size_t n_points);

struct GroupIndexPoint {
    double lambda_nm = 0.0;
    double ng = 0.0;
};

// Resonance dip centers of the through spectrum, refined to sub-grid accuracy
// by a parabola through the three samples around each local minimum (vertex
// taken in linear power, where the lineshape is locally quadratic).
std::vector<double> find_dip_centers_nm(const TransmissionSpectrum& spectrum,
                                        double threshold_db = -3.0);

// FSR-based group index curve: pairwise dip spacings evaluated at interval
// midpoints, then a centered moving average of width smoothing_window
// (window 1 = no smoothing; edges use the available points).
// Throws std::runtime_error when fewer than 3 dips are resolvable.
std::vector<GroupIndexPoint> extract_group_index_curve(
    const TransmissionSpectrum& spectrum, double length_um,
    int smoothing_window = 3, double threshold_db = -3.0);

// CSV with header wavelength_nm,through_db,drop_db.
void write_spectrum_csv(const TransmissionSpectrum& spectrum, const std::string& path);
TransmissionSpectrum read_spectrum_csv(const std::string& path);

}  // namespace dualring
