#include "dualring/dispersion.hpp"

#include <string>

namespace dualring {

void DispersionModel::validate() const {
    if (lambda_ref_nm <= 0.0) throw std::invalid_argument("lambda_ref_nm must be > 0");
    if (ng_ref <= 1.0) throw std::invalid_argument("ng_ref must be > 1 for a guided mode");
    if (band_min_nm >= band_max_nm) throw std::invalid_argument("empty dispersion band");
    // The model must stay evaluable (n_g > 1) across the whole band.
    for (double lam : {band_min_nm, band_max_nm}) {
        const double dl = lam - lambda_ref_nm;
        const double ng = ng_ref + kSpeedOfLight * 1e-15 *
                          (d_ps_nm_km * dl + 0.5 * dd_dlambda_ps_nm2_km * dl * dl);
        if (ng <= 1.0)
            throw std::invalid_argument("group index falls below 1 inside the band");
    }
}

double DispersionModel::group_index_at(double lambda_nm) const {
    if (!in_band(lambda_nm))
        throw std::out_of_range("wavelength " + std::to_string(lambda_nm) +
                                " nm outside dispersion model band");
    const double dl = lambda_nm - lambda_ref_nm;
    // integral of c*D(lambda) dlambda; 1e-15 folds the ps/(nm km) and nm -> m
    // conversions into one factor.
    return ng_ref + kSpeedOfLight * 1e-15 *
           (d_ps_nm_km * dl + 0.5 * dd_dlambda_ps_nm2_km * dl * dl);
}

double group_index(double lambda_nm, double fsr_nm, double length_um) {
    if (lambda_nm <= 0.0 || fsr_nm <= 0.0 || length_um <= 0.0)
        throw std::domain_error("group_index requires positive arguments");
    // nm^2 / (nm * um) carries a 1e-3 scale.
    return lambda_nm * lambda_nm / (fsr_nm * length_um) * 1e-3;
}

double gvd_magnitude(double d_ps_nm_km, double lambda_nm) {
    if (lambda_nm <= 0.0) throw std::domain_error("gvd_magnitude requires lambda > 0");
    const double d_si = std::abs(d_ps_nm_km) * 1e-6;  // s/m^2
    const double lam_m = lambda_nm * 1e-9;
    const double beta2_si = d_si * lam_m * lam_m / (2.0 * kPi * kSpeedOfLight);
    return beta2_si * 1e24;  // s^2/m -> ps^2/m
}

}  // namespace dualring
