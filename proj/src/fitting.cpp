#include "dualring/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dualring/units.hpp"

namespace dualring {

namespace {

constexpr int kMaxIterations = 200;
constexpr double kStepTolerance = 1e-10;

struct PeakModel {
    bool lorentzian = true;

    double eval(const double* p, double x) const {
        const double dx = x - p[1];
        if (lorentzian) {
            const double h = p[2] / 2.0;
            return p[0] * h * h / (dx * dx + h * h) + p[3];
        }
        const double s = p[2];
        return p[0] * std::exp(-dx * dx / (2.0 * s * s)) + p[3];
    }

    void jacobian(const double* p, double x, double* j) const {
        const double dx = x - p[1];
        if (lorentzian) {
            const double h = p[2] / 2.0;
            const double denom = dx * dx + h * h;
            const double shape = h * h / denom;
            j[0] = shape;
            j[1] = p[0] * shape * 2.0 * dx / denom;
            j[2] = p[0] * h * dx * dx / (denom * denom);  // d/dgamma, dh/dgamma=1/2
            j[3] = 1.0;
        } else {
            const double s = p[2];
            const double e = std::exp(-dx * dx / (2.0 * s * s));
            j[0] = e;
            j[1] = p[0] * e * dx / (s * s);
            j[2] = p[0] * e * dx * dx / (s * s * s);
            j[3] = 1.0;
        }
    }
};

// Solves the 4x4 system m*delta = v in place; partial pivoting.
bool solve4(double m[4][4], double v[4], double delta[4]) {
    int idx[4] = {0, 1, 2, 3};
    for (int col = 0; col < 4; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 4; ++r)
            if (std::abs(m[idx[r]][col]) > std::abs(m[idx[pivot]][col])) pivot = r;
        std::swap(idx[col], idx[pivot]);
        const double diag = m[idx[col]][col];
        if (std::abs(diag) < 1e-300) return false;
        for (int r = col + 1; r < 4; ++r) {
            const double f = m[idx[r]][col] / diag;
            for (int c = col; c < 4; ++c) m[idx[r]][c] -= f * m[idx[col]][c];
            v[idx[r]] -= f * v[idx[col]];
        }
    }
    for (int row = 3; row >= 0; --row) {
        double sum = v[idx[row]];
        for (int c = row + 1; c < 4; ++c) sum -= m[idx[row]][c] * delta[c];
        delta[row] = sum / m[idx[row]][row];
    }
    return true;
}

double cost_of(const Curve& curve, const PeakModel& model, const double* p) {
    double cost = 0.0;
    for (std::size_t i = 0; i < curve.x.size(); ++i) {
        const double r = (curve.y[i] - model.eval(p, curve.x[i])) * curve.weight(i);
        cost += r * r;
    }
    return cost;
}

// Starting point per the deterministic recipe: extremum position, amplitude
// from the data range, width from the half-extremum crossing span. Handles
// both peaks (A > 0) and dips (A < 0).
void initialize_peak(const Curve& curve, bool lorentzian, double* p) {
    const auto [min_it, max_it] = std::minmax_element(curve.y.begin(), curve.y.end());
    const double y_min = *min_it;
    const double y_max = *max_it;
    std::vector<double> sorted_y = curve.y;
    std::sort(sorted_y.begin(), sorted_y.end());
    const double median = sorted_y[sorted_y.size() / 2];
    const bool dip = (y_max - median) < (median - y_min);

    std::size_t i_ext = 0;
    if (dip) {
        for (std::size_t i = 0; i < curve.y.size(); ++i)
            if (curve.y[i] < curve.y[i_ext]) i_ext = i;  // lowest index wins ties
        p[0] = y_min - y_max;
        p[3] = y_max;
    } else {
        for (std::size_t i = 0; i < curve.y.size(); ++i)
            if (curve.y[i] > curve.y[i_ext]) i_ext = i;
        p[0] = y_max - y_min;
        p[3] = y_min;
    }
    p[1] = curve.x[i_ext];

    const double half_level = p[3] + p[0] / 2.0;
    auto crossed = [&](std::size_t i) {
        return dip ? curve.y[i] >= half_level : curve.y[i] <= half_level;
    };
    double left = curve.x.front(), right = curve.x.back();
    bool found_left = false, found_right = false;
    for (std::size_t i = i_ext; i-- > 0;) {
        if (crossed(i)) {
            const double f = (half_level - curve.y[i + 1]) / (curve.y[i] - curve.y[i + 1]);
            left = curve.x[i + 1] + f * (curve.x[i] - curve.x[i + 1]);
            found_left = true;
            break;
        }
    }
    for (std::size_t i = i_ext + 1; i < curve.y.size(); ++i) {
        if (crossed(i)) {
            const double f = (half_level - curve.y[i - 1]) / (curve.y[i] - curve.y[i - 1]);
            right = curve.x[i - 1] + f * (curve.x[i] - curve.x[i - 1]);
            found_right = true;
            break;
        }
    }
    double span;
    if (found_left && found_right)
        span = right - left;
    else if (found_left)
        span = 2.0 * (p[1] - left);
    else if (found_right)
        span = 2.0 * (right - p[1]);
    else
        span = (curve.x.back() - curve.x.front()) / 4.0;
    if (span <= 0.0) span = (curve.x.back() - curve.x.front()) / 4.0;
    p[2] = lorentzian ? span : span / kGaussianFwhmPerSigma;
}

FitResult fit_peak(const Curve& curve, bool lorentzian) {
    curve.validate(4);
    PeakModel model{lorentzian};
    double p[4];
    initialize_peak(curve, lorentzian, p);

    FitResult result;
    result.model = lorentzian ? FitModel::kLorentzian : FitModel::kGaussian;
    double cost = cost_of(curve, model, p);
    double lambda = 1e-3;

    int iter = 0;
    for (; iter < kMaxIterations; ++iter) {
        double jtj[4][4] = {};
        double jtr[4] = {};
        double j[4];
        for (std::size_t i = 0; i < curve.x.size(); ++i) {
            const double w = curve.weight(i);
            model.jacobian(p, curve.x[i], j);
            const double r = (curve.y[i] - model.eval(p, curve.x[i])) * w;
            for (int a = 0; a < 4; ++a) {
                jtr[a] += j[a] * w * r;
                for (int b = 0; b < 4; ++b) jtj[a][b] += j[a] * w * j[b] * w;
            }
        }
        double m[4][4];
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
                m[a][b] = jtj[a][b] + (a == b ? lambda * jtj[a][a] : 0.0);
        double v[4] = {jtr[0], jtr[1], jtr[2], jtr[3]};
        double delta[4];
        if (!solve4(m, v, delta)) {
            lambda = std::min(lambda * 4.0, 1e12);
            continue;
        }

        double trial[4] = {p[0] + delta[0], p[1] + delta[1], p[2] + delta[2],
                           p[3] + delta[3]};
        const double trial_cost =
            trial[2] > 0.0 ? cost_of(curve, model, trial)
                           : std::numeric_limits<double>::infinity();
        if (trial_cost <= cost) {
            double max_rel = 0.0;
            for (int a = 0; a < 4; ++a)
                max_rel = std::max(max_rel,
                                   std::abs(delta[a]) / (std::abs(p[a]) + 1e-30));
            std::copy(trial, trial + 4, p);
            cost = trial_cost;
            lambda = std::max(lambda / 3.0, 1e-12);
            if (max_rel < kStepTolerance) {
                result.converged = true;
                ++iter;
                break;
            }
        } else {
            lambda = std::min(lambda * 4.0, 1e12);
        }
    }

    result.iterations = iter;
    result.params.assign(p, p + 4);
    result.fwhm = lorentzian ? std::abs(p[2]) : kGaussianFwhmPerSigma * std::abs(p[2]);
    result.residual_norm = std::sqrt(cost / static_cast<double>(curve.x.size()));
    return result;
}

}  // namespace

void Curve::validate(std::size_t n_params) const {
    if (x.size() != y.size())
        throw std::invalid_argument("curve x and y must have equal length");
    if (!sigma_y.empty() && sigma_y.size() != x.size())
        throw std::invalid_argument("sigma_y must be empty or match x");
    if (x.size() < n_params + 1)
        throw std::invalid_argument("need more points than model parameters");
    if (!std::is_sorted(x.begin(), x.end()))
        throw std::invalid_argument("curve x must be sorted");
}

FitResult fit_lorentzian(const Curve& curve) { return fit_peak(curve, true); }

FitResult fit_gaussian(const Curve& curve) { return fit_peak(curve, false); }

FitResult fit_power_law(const Curve& curve) {
    curve.validate(2);
    std::vector<double> lx, ly, w;
    int excluded = 0;
    for (std::size_t i = 0; i < curve.x.size(); ++i) {
        if (curve.x[i] <= 0.0)
            throw std::invalid_argument("power-law fit requires x > 0");
        if (curve.y[i] <= 0.0) {
            ++excluded;
            continue;
        }
        lx.push_back(std::log(curve.x[i]));
        ly.push_back(std::log(curve.y[i]));
        // d(ln y) = dy/y: translate absolute uncertainties into log space.
        w.push_back(curve.sigma_y.empty() ? 1.0 : curve.y[i] / curve.sigma_y[i]);
    }
    if (lx.size() < 3)
        throw std::runtime_error("power-law fit needs at least 3 usable points");

    double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double wi = w[i] * w[i];
        sw += wi;
        sx += wi * lx[i];
        sy += wi * ly[i];
        sxx += wi * lx[i] * lx[i];
        sxy += wi * lx[i] * ly[i];
    }
    const double denom = sw * sxx - sx * sx;
    if (std::abs(denom) < 1e-300)
        throw std::runtime_error("degenerate abscissa in power-law fit");
    const double slope = (sw * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / sw;

    FitResult result;
    result.model = FitModel::kPowerLaw;
    result.params = {std::exp(intercept), slope};
    result.excluded_points = excluded;
    result.converged = true;
    result.iterations = 1;
    double cost = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double r = (ly[i] - intercept - slope * lx[i]) * w[i];
        cost += r * r;
    }
    result.residual_norm = std::sqrt(cost / static_cast<double>(lx.size()));
    return result;
}

double evaluate_fit(const FitResult& fit, double x) {
    switch (fit.model) {
        case FitModel::kLorentzian: {
            const double h = fit.width() / 2.0;
            const double dx = x - fit.center();
            return fit.amplitude() * h * h / (dx * dx + h * h) + fit.offset();
        }
        case FitModel::kGaussian: {
            const double s = fit.width();
            const double dx = x - fit.center();
            return fit.amplitude() * std::exp(-dx * dx / (2.0 * s * s)) + fit.offset();
        }
        case FitModel::kPowerLaw:
            return fit.scale() * std::pow(x, fit.exponent());
    }
    return 0.0;
}

}  // namespace dualring
