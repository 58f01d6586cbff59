#pragma once

#include <string>
#include <vector>

namespace dualring {

struct Curve {
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> sigma_y;  // optional per-point uncertainties

    void validate(std::size_t n_params) const;
    double weight(std::size_t i) const {
        return sigma_y.empty() ? 1.0 : 1.0 / sigma_y[i];
    }
};

enum class FitModel { kLorentzian, kGaussian, kPowerLaw };

// Peak models carry params {amplitude, center, width, offset} where width is
// gamma (Lorentzian FWHM) or sigma (Gaussian). Power law y = k*x^p carries
// {k, p}. Negative-amplitude (dip) data is handled by the initializer.
struct FitResult {
    FitModel model = FitModel::kLorentzian;
    std::vector<double> params;
    double fwhm = 0.0;           // derived width; 0 for power law
    double residual_norm = 0.0;  // weighted RMS
    bool converged = false;
    int iterations = 0;
    int excluded_points = 0;     // zero/negative y dropped by the power-law fit

    double amplitude() const { return params.at(0); }
    double center() const { return params.at(1); }
    double width() const { return params.at(2); }
    double offset() const { return params.at(3); }
    double exponent() const { return params.at(1); }
    double scale() const { return params.at(0); }
};

// Damped Gauss-Newton (Levenberg damping: raised on a rejected step, lowered
// on acceptance), max 200 iterations, relative step tolerance 1e-10.
// Non-convergence is flagged in the result, not thrown.
FitResult fit_lorentzian(const Curve& curve);
FitResult fit_gaussian(const Curve& curve);

// Linear least squares in log-log space; points with y <= 0 are excluded and
// counted. Throws std::runtime_error with fewer than 3 usable points.
FitResult fit_power_law(const Curve& curve);

double evaluate_fit(const FitResult& fit, double x);

}  // namespace dualring
