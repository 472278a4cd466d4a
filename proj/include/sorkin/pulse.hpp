#ifndef SORKIN_PULSE_HPP
#define SORKIN_PULSE_HPP

#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "sorkin/errors.hpp"
#include "sorkin/units.hpp"

namespace sorkin {

// Quoted FWHM values may describe the spectral intensity profile (the usual
// laser-lab convention, our default) or the field amplitude directly. The
// field-amplitude Gaussian carries sigma_field = sqrt(2) * sigma_intensity.
enum class FwhmConvention { intensity, field };

inline double field_sigma_from_fwhm(double fwhm, FwhmConvention conv) {
    const double s = sigma_from_fwhm(fwhm);
    return conv == FwhmConvention::intensity ? std::sqrt(2.0) * s : s;
}

enum class Path : int { a = 0, b = 1, c = 2 };

// One Gaussian spectral field component. Frequency-domain only.
struct PulseSpec {
    double amplitude = 1.0; // field strength, arbitrary units, >= 0
    double center = 0.0;    // central photon energy, eV
    double sigma = 0.0;     // field-amplitude spectral std deviation, eV
    double delay = 0.0;     // time delay tau, as

    void validate() const {
        if (!(amplitude >= 0.0)) throw ConfigError("PulseSpec: amplitude must be >= 0");
        if (!(sigma > 0.0)) throw ConfigError("PulseSpec: sigma must be > 0");
        if (!(center > 0.0)) throw ConfigError("PulseSpec: center must be > 0");
    }
};

// E(omega) = A exp(-(omega-omega0)^2 / 2 sigma^2) exp(i omega tau / hbar)
inline std::complex<double> spectral_field(const PulseSpec& p, double omega_ev) {
    const double d = omega_ev - p.center;
    const double mag = p.amplitude * std::exp(-d * d / (2.0 * p.sigma * p.sigma));
    const double phase = omega_ev * p.delay / constants.hbar_ev_as;
    return std::polar(mag, phase);
}

inline double effective_ir_delay(double common_delay_as, double component_offset_as) {
    return common_delay_as + component_offset_as;
}

// XUV pump plus three IR probe components a, b, c (decreasing wavelength).
struct LaserConfig {
    PulseSpec xuv;
    std::array<PulseSpec, 3> ir;
    double common_delay = 0.0; // as, applied to all three IR components

    const PulseSpec& component(Path j) const { return ir[static_cast<int>(j)]; }
    double ir_delay(Path j) const {
        return effective_ir_delay(common_delay, ir[static_cast<int>(j)].delay);
    }

    // Throws ConfigError on hard violations; soft conditions come back as
    // warning strings (IR spacing beyond the XUV bandwidth is legal but
    // kills the path overlap).
    std::vector<std::string> validate() const {
        xuv.validate();
        for (const auto& p : ir) p.validate();
        std::vector<std::string> warnings;
        const double fwhm_xuv_intensity =
            xuv.sigma / std::sqrt(2.0) / constants.fwhm_to_sigma;
        for (int j = 0; j < 3; ++j) {
            for (int k = j + 1; k < 3; ++k) {
                const double sep = std::abs(ir[j].center - ir[k].center);
                if (sep > fwhm_xuv_intensity) {
                    warnings.push_back("IR components " + std::to_string(j) + "," +
                                       std::to_string(k) + " separated by " +
                                       std::to_string(sep) + " eV, beyond FWHM_XUV " +
                                       std::to_string(fwhm_xuv_intensity) + " eV");
                }
            }
        }
        return warnings;
    }
};

// Reference experiment: 40 eV / 150 meV XUV, 820/800/780 nm IR components
// with a common 5 nm width (converted to the energy domain at the middle
// component so all three paths carry equal spectral widths), zero delays.
inline LaserConfig default_experiment(FwhmConvention conv = FwhmConvention::intensity) {
    LaserConfig cfg;
    cfg.xuv = PulseSpec{1.0, 40.0, field_sigma_from_fwhm(0.150, conv), 0.0};
    const std::array<double, 3> lambdas{820.0, 800.0, 780.0};
    const double fwhm_ir_ev = spectral_width_wavelength_to_energy(5.0, 800.0);
    for (int j = 0; j < 3; ++j) {
        cfg.ir[j] = PulseSpec{1.0, photon_energy_from_wavelength(lambdas[j]),
                              field_sigma_from_fwhm(fwhm_ir_ev, conv), 0.0};
    }
    cfg.common_delay = 0.0;
    return cfg;
}

} // namespace sorkin

#endif
