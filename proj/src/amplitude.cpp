#include "sorkin/amplitude.hpp"

#include <algorithm>
#include <cmath>

#include "sorkin/quadrature.hpp"
#include "sorkin/units.hpp"

namespace sorkin {

namespace {

struct PathGeometry {
    double sigma2_sum;  // sigma_x^2 + sigma_j^2
    double s_conv;      // sigma_x sigma_j / sqrt(sigma2_sum)
    double s_conv2;
};

PathGeometry geometry(const PulseSpec& xuv, const PulseSpec& ir) {
    const double sx2 = xuv.sigma * xuv.sigma;
    const double sj2 = ir.sigma * ir.sigma;
    const double sum = sx2 + sj2;
    const double sc = xuv.sigma * ir.sigma / std::sqrt(sum);
    return {sum, sc, sc * sc};
}

} // namespace

std::complex<double> two_photon_amplitude(const LaserConfig& laser, const EnergyGrid& grid,
                                          double epsilon_f, Path j,
                                          double rel_tol, int max_levels) {
    if (!grid.contains(epsilon_f))
        throw ConfigError("two_photon_amplitude: epsilon_f outside the energy window");

    const PulseSpec& xuv = laser.xuv;
    const PulseSpec ir = [&] {
        PulseSpec p = laser.component(j);
        p.delay = laser.ir_delay(j);
        return p;
    }();

    const double efg = grid.energy_above_ground(epsilon_f);
    const double lo = xuv.center - 8.0 * xuv.sigma;
    const double hi = xuv.center + 8.0 * xuv.sigma;

    // The IR factor is much narrower than the XUV window; make sure the
    // initial panels resolve it.
    std::vector<double> pts{lo};
    const double peak = efg - ir.center; // E where the IR Gaussian is centered
    for (double p : {peak - 8.0 * ir.sigma, peak + 8.0 * ir.sigma})
        if (p > lo && p < hi) pts.push_back(p);
    pts.push_back(hi);
    std::sort(pts.begin(), pts.end());

    const auto integrand = [&](double e) {
        return spectral_field(ir, efg - e) * spectral_field(xuv, e);
    };
    const QuadratureResult q =
        integrate_adaptive(integrand, std::span<const double>(pts), rel_tol, max_levels);
    return on_shell_constant * q.value;
}

std::complex<double> closed_form_amplitude(const LaserConfig& laser, const EnergyGrid& grid,
                                           double epsilon_f, Path j) {
    const PulseSpec& xuv = laser.xuv;
    const PulseSpec& ir = laser.component(j);
    const double tau_j = laser.ir_delay(j);
    const double dtau = tau_j - xuv.delay;
    const double hbar = constants.hbar_ev_as;

    const PathGeometry g = geometry(xuv, ir);
    const double efg = grid.energy_above_ground(epsilon_f);
    const double m = efg - ir.center;
    const double detune = xuv.center - m;

    const double envelope = std::sqrt(2.0 * std::numbers::pi) * g.s_conv *
                            std::exp(-detune * detune / (2.0 * g.sigma2_sum));
    const double damping = std::exp(-g.s_conv2 * dtau * dtau / (2.0 * hbar * hbar));
    const double mu = (xuv.center * ir.sigma * ir.sigma + m * xuv.sigma * xuv.sigma) /
                      g.sigma2_sum;
    const double phase = (efg * tau_j - mu * dtau) / hbar;

    const double mag = xuv.amplitude * ir.amplitude * envelope * damping;
    return on_shell_constant * std::polar(mag, phase);
}

AmplitudeSet compute_amplitudes(const LaserConfig& laser, const EnergyGrid& grid,
                                AmplitudeMethod method) {
    grid.validate();
    AmplitudeSet out;
    for (int j = 0; j < 3; ++j) {
        out.a[j].resize(grid.n_bins);
        for (int f = 0; f < grid.n_bins; ++f) {
            const double eps = grid.bin_center(f);
            out.a[j][f] = method == AmplitudeMethod::closed_form
                              ? closed_form_amplitude(laser, grid, eps, Path{j})
                              : two_photon_amplitude(laser, grid, eps, Path{j});
        }
    }
    return out;
}

ProbabilityTable table_from_amplitudes(const AmplitudeSet& amps, const EnergyGrid& grid,
                                       const ChannelWeights* channels) {
    ProbabilityTable tab;
    tab.grid = grid;
    const int n = amps.n_bins();
    for (const PathConfiguration s : PathConfiguration::all()) {
        auto& row = tab.row(s);
        row.assign(n, 0.0);
        for (int f = 0; f < n; ++f) {
            if (channels) {
                std::complex<double> sum_s{0.0, 0.0}, sum_d{0.0, 0.0};
                for (int j = 0; j < 3; ++j) {
                    if (!s.contains(Path{j})) continue;
                    sum_s += channels->s[j] * amps.a[j][f];
                    sum_d += channels->d[j] * amps.a[j][f];
                }
                row[f] = std::norm(sum_s) + std::norm(sum_d);
            } else {
                std::complex<double> sum{0.0, 0.0};
                for (int j = 0; j < 3; ++j)
                    if (s.contains(Path{j})) sum += amps.a[j][f];
                row[f] = std::norm(sum);
            }
        }
    }
    return tab;
}

ProbabilityTable probability_table(const LaserConfig& laser, const EnergyGrid& grid,
                                   const ChannelWeights* channels, AmplitudeMethod method) {
    return table_from_amplitudes(compute_amplitudes(laser, grid, method), grid, channels);
}

RowKernel::RowKernel(const LaserConfig& base, const EnergyGrid& grid,
                     const ChannelWeights* channels)
    : grid_(grid) {
    grid.validate();
    base.xuv.validate();
    if (channels) {
        two_channel_ = true;
        channels_ = *channels;
        if (!channels_.any_nonzero())
            throw ConfigError("RowKernel: all channel weights are zero");
    }

    const int n = grid.n_bins;
    efg0_ = grid.energy_above_ground(grid.bin_center(0));
    defg_ = grid.width / grid.n_bins;

    for (int j = 0; j < 3; ++j) {
        const PulseSpec& ir = base.ir[j];
        ir.validate();
        const PathGeometry g = geometry(base.xuv, ir);
        s2_[j] = g.s_conv2;

        const double sx2 = base.xuv.sigma * base.xuv.sigma;
        const double sj2 = ir.sigma * ir.sigma;
        // mu_j(f) = (E_x sj^2 + (E_fg(f) - E_j) sx^2) / (sx^2 + sj^2), linear in f
        mu0_[j] = (base.xuv.center * sj2 + (efg0_ - ir.center) * sx2) / g.sigma2_sum;
        dmu_[j] = defg_ * sx2 / g.sigma2_sum;

        envelope_[j].resize(n);
        const double pref = std::sqrt(2.0 * std::numbers::pi) * g.s_conv;
        for (int f = 0; f < n; ++f) {
            const double m = (efg0_ + f * defg_) - ir.center;
            const double detune = base.xuv.center - m;
            envelope_[j][f] = pref * std::exp(-detune * detune / (2.0 * g.sigma2_sum));
        }
    }
}

void RowKernel::fill_row(const LaserConfig& noisy, PathConfiguration s,
                         std::span<double> out) const {
    const int n = grid_.n_bins;

    if (s.empty()) {
        std::fill(out.begin(), out.end(), 0.0);
        return;
    }

    const double hbar = constants.hbar_ev_as;

    // Per-pulse scalars and phase ramps; phases are linear in the bin index.
    std::array<std::complex<double>, 3> coeff;
    std::array<std::complex<double>, 3> rot;
    std::array<std::complex<double>, 3> step;
    std::array<bool, 3> active{false, false, false};

    for (int j = 0; j < 3; ++j) {
        if (!s.contains(Path{j})) continue;
        active[j] = true;
        const double tau_j = noisy.ir_delay(Path{j});
        const double dtau = tau_j - noisy.xuv.delay;
        const double damping = std::exp(-s2_[j] * dtau * dtau / (2.0 * hbar * hbar));
        coeff[j] = on_shell_constant *
                   (noisy.xuv.amplitude * noisy.ir[j].amplitude * damping);
        const double theta0 = (efg0_ * tau_j - mu0_[j] * dtau) / hbar;
        const double dtheta = (defg_ * tau_j - dmu_[j] * dtau) / hbar;
        rot[j] = std::polar(1.0, theta0);
        step[j] = std::polar(1.0, dtheta);
    }

    for (int f = 0; f < n; ++f) {
        if (two_channel_) {
            std::complex<double> sum_s{0.0, 0.0}, sum_d{0.0, 0.0};
            for (int j = 0; j < 3; ++j) {
                if (!active[j]) continue;
                const std::complex<double> a = coeff[j] * envelope_[j][f] * rot[j];
                sum_s += channels_.s[j] * a;
                sum_d += channels_.d[j] * a;
                rot[j] *= step[j];
            }
            out[f] = std::norm(sum_s) + std::norm(sum_d);
        } else {
            std::complex<double> sum{0.0, 0.0};
            for (int j = 0; j < 3; ++j) {
                if (!active[j]) continue;
                sum += coeff[j] * envelope_[j][f] * rot[j];
                rot[j] *= step[j];
            }
            out[f] = std::norm(sum);
        }
    }
}

} // namespace sorkin
