#ifndef SORKIN_AMPLITUDE_HPP
#define SORKIN_AMPLITUDE_HPP

#include <array>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include "sorkin/grid.hpp"
#include "sorkin/paths.hpp"
#include "sorkin/pulse.hpp"

namespace sorkin {

// Two-photon transition amplitudes under the on-shell approximation:
//   A_j(eps_f) = C * integral dE  E_j(E_fg - E; tau_j) E_xuv(E)
// with E_fg = eps_f - eps_g and the resolvent matrix element replaced by the
// fixed constant C = -i*pi (flat couplings, flat density of states; the
// overall normalization cancels in kappa and F).
inline constexpr std::complex<double> on_shell_constant{0.0, -std::numbers::pi};

// Complex weights of the two final angular-momentum channels per path.
struct ChannelWeights {
    std::array<std::complex<double>, 3> s;
    std::array<std::complex<double>, 3> d;

    static ChannelWeights defaults() {
        ChannelWeights w;
        const std::complex<double> wd = std::polar(0.5, std::numbers::pi / 4.0);
        for (int j = 0; j < 3; ++j) {
            w.s[j] = {1.0, 0.0};
            w.d[j] = wd;
        }
        return w;
    }
    bool any_nonzero() const {
        for (int j = 0; j < 3; ++j)
            if (std::abs(s[j]) > 0 || std::abs(d[j]) > 0) return true;
        return false;
    }
};

struct AmplitudeSet {
    std::array<std::vector<std::complex<double>>, 3> a; // [path][bin]
    int n_bins() const { return static_cast<int>(a[0].size()); }
};

// P_S(eps_f) for all eight path configurations, canonical order.
struct ProbabilityTable {
    EnergyGrid grid;
    std::array<std::vector<double>, PathConfiguration::count> p;

    const std::vector<double>& row(PathConfiguration s) const { return p[s.index()]; }
    std::vector<double>& row(PathConfiguration s) { return p[s.index()]; }
    double sum(PathConfiguration s) const {
        double q = 0.0;
        for (double v : row(s)) q += v;
        return q;
    }
};

enum class AmplitudeMethod { closed_form, quadrature };

// Numerical evaluation of the amplitude integral on [E_xuv - 8 sigma,
// E_xuv + 8 sigma] (breakpoints added around the narrow IR feature).
std::complex<double> two_photon_amplitude(const LaserConfig& laser, const EnergyGrid& grid,
                                          double epsilon_f, Path j,
                                          double rel_tol = 1e-10, int max_levels = 20);

// Analytic Gaussian-times-Gaussian form of the same integral.
std::complex<double> closed_form_amplitude(const LaserConfig& laser, const EnergyGrid& grid,
                                           double epsilon_f, Path j);

AmplitudeSet compute_amplitudes(const LaserConfig& laser, const EnergyGrid& grid,
                                AmplitudeMethod method = AmplitudeMethod::closed_form);

ProbabilityTable table_from_amplitudes(const AmplitudeSet& amps, const EnergyGrid& grid,
                                       const ChannelWeights* channels = nullptr);

ProbabilityTable probability_table(const LaserConfig& laser, const EnergyGrid& grid,
                                   const ChannelWeights* channels = nullptr,
                                   AmplitudeMethod method = AmplitudeMethod::closed_form);

// Hot-loop row builder. Precomputes everything that does not change under
// amplitude/delay noise (envelopes, phase ramps); per pulse only scalars and
// one complex rotation per bin remain. Centers and widths of `noisy` must
// match the base configuration the kernel was built from.
class RowKernel {
public:
    RowKernel(const LaserConfig& base, const EnergyGrid& grid,
              const ChannelWeights* channels = nullptr);

    int n_bins() const { return grid_.n_bins; }
    const EnergyGrid& grid() const { return grid_; }

    // Writes P_S(eps_f) for every bin into out (size n_bins).
    void fill_row(const LaserConfig& noisy, PathConfiguration s,
                  std::span<double> out) const;

private:
    EnergyGrid grid_;
    bool two_channel_ = false;
    ChannelWeights channels_{};
    std::array<std::vector<double>, 3> envelope_; // C-free magnitude per bin
    std::array<double, 3> s2_;                    // convolved width squared
    std::array<double, 3> mu0_, dmu_;             // mu_j(f) = mu0 + f*dmu
    double efg0_ = 0.0, defg_ = 0.0;              // E_fg(f) = efg0 + f*defg
};

} // namespace sorkin

#endif
