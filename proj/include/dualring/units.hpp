#pragma once

#include <cmath>

// Unit conventions used throughout:
//   wavelengths nm, frequencies THz (linewidths GHz), lengths um,
//   times ps (streams) or s (rates/durations), powers mW, rates Hz.
namespace dualring {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr double kPi = 3.14159265358979323846;

// c expressed as nm*THz (lambda_nm * f_THz = this on conversion).
inline constexpr double kCNmThz = kSpeedOfLight * 1e-3;

inline double frequency_thz(double lambda_nm) { return kCNmThz / lambda_nm; }
inline double wavelength_nm(double f_thz) { return kCNmThz / f_thz; }

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

// Transmittance of a lossy path specified as a positive dB figure.
inline double loss_db_to_efficiency(double loss_db) {
    return std::pow(10.0, -loss_db / 10.0);
}

inline constexpr double kGaussianFwhmPerSigma = 2.354820045030949;  // 2*sqrt(2 ln 2)

}  // namespace dualring
