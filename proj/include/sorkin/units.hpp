#ifndef SORKIN_UNITS_HPP
#define SORKIN_UNITS_HPP

#include <cmath>
#include <stdexcept>

// Internal unit system: energies in eV, times in attoseconds, angular
// frequencies stored as energies (omega == E, phases computed as E*t/hbar).

namespace sorkin {

struct Constants {
    double hc_ev_nm;      // photon energy * wavelength
    double hbar_ev_as;    // reduced Planck constant
    double fwhm_to_sigma; // 1 / (2 sqrt(2 ln 2))
};

inline constexpr Constants constants{
    1239.84,
    658.2119569,
    0.42466090014400953,
};

inline double photon_energy_from_wavelength(double lambda_nm) {
    if (!(lambda_nm > 0.0))
        throw std::domain_error("photon_energy_from_wavelength: wavelength must be > 0");
    return constants.hc_ev_nm / lambda_nm;
}

// Also maps an energy back to a wavelength: E = hc/lambda is an involution
// in these units.
inline double wavelength_from_photon_energy(double energy_ev) {
    return photon_energy_from_wavelength(energy_ev);
}

inline double sigma_from_fwhm(double fwhm) {
    if (!(fwhm > 0.0))
        throw std::domain_error("sigma_from_fwhm: fwhm must be > 0");
    return fwhm * constants.fwhm_to_sigma;
}

// First-order conversion of a wavelength-domain width to the energy domain,
// dE = hc * dlambda / lambda^2. Valid for dlambda << lambda.
inline double spectral_width_wavelength_to_energy(double delta_lambda_nm, double lambda0_nm) {
    if (!(lambda0_nm > 0.0))
        throw std::domain_error("spectral_width_wavelength_to_energy: lambda0 must be > 0");
    if (!(delta_lambda_nm > 0.0))
        throw std::domain_error("spectral_width_wavelength_to_energy: delta_lambda must be > 0");
    return constants.hc_ev_nm * delta_lambda_nm / (lambda0_nm * lambda0_nm);
}

} // namespace sorkin

#endif
