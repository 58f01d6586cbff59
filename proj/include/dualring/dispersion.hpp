#pragma once

#include <stdexcept>

#include "dualring/units.hpp"

namespace dualring {

// Sign convention note: the dispersion parameter D and the group velocity
// dispersion beta2 carry opposite signs under the textbook relation
// D = -2*pi*c*beta2/lambda^2. gvd_magnitude() therefore reports |beta2| and
// leaves the convention to GvdSignConvention metadata instead of guessing.
enum class GvdSignConvention {
    kTextbook,     // sign(beta2) = -sign(D)
    kSameAsD,      // beta2 reported with the sign of D
};

// Wavelength-dependent group index around a reference wavelength. First-order
// in lambda by default; the optional D slope adds a quadratic term.
struct DispersionModel {
    double lambda_ref_nm = 1550.0;
    double ng_ref = 4.3;                   // group index at lambda_ref
    double d_ps_nm_km = 0.0;               // dispersion parameter D
    double dd_dlambda_ps_nm2_km = 0.0;     // dD/dlambda, default off
    double band_min_nm = 1450.0;           // validity band
    double band_max_nm = 1650.0;

    void validate() const;
    bool in_band(double lambda_nm) const {
        return lambda_nm >= band_min_nm && lambda_nm <= band_max_nm;
    }

    // dn_g/dlambda = c * D(lambda), in 1/nm.
    double dng_dlambda(double lambda_nm) const {
        const double d_local =
            d_ps_nm_km + dd_dlambda_ps_nm2_km * (lambda_nm - lambda_ref_nm);
        return kSpeedOfLight * d_local * 1e-6 * 1e-9;
    }

    // Throws std::out_of_range outside the validity band.
    double group_index_at(double lambda_nm) const;
};

// n_g = lambda^2 / (fsr * length), lambda and fsr in nm, length in um.
double group_index(double lambda_nm, double fsr_nm, double length_um);

// |beta2| = |D| * lambda^2 / (2 pi c), returned in ps^2/m.
double gvd_magnitude(double d_ps_nm_km, double lambda_nm);

}  // namespace dualring
