#ifndef SORKIN_GRID_HPP
#define SORKIN_GRID_HPP

#include <cstddef>

#include "sorkin/errors.hpp"

namespace sorkin {

// Final-energy window of n equal bins around epsilon_c.
// Bin centers: eps_f = center - width/2 + width*(f+1/2)/n, f = 0..n-1.
struct EnergyGrid {
    double center = 0.0;        // eps_c, eV
    double width = 0.2;         // window width, eV
    int n_bins = 40;
    double ground_energy = 0.0; // eps_g, eV

    void validate() const {
        if (n_bins < 1) throw ConfigError("EnergyGrid: n_bins must be >= 1");
        if (!(width > 0.0)) throw ConfigError("EnergyGrid: width must be > 0");
    }

    double bin_center(int f) const {
        return center - width / 2.0 + width * (f + 0.5) / n_bins;
    }
    // Lower edge of bin f; bin_edge(n_bins) is the window's upper edge.
    double bin_edge(int f) const {
        return center - width / 2.0 + width * f / n_bins;
    }
    bool contains(double epsilon_f) const {
        return epsilon_f >= bin_edge(0) && epsilon_f <= bin_edge(n_bins);
    }
    // Energy above the ground state, the omega_fg of the transition (in eV).
    double energy_above_ground(double epsilon_f) const {
        return epsilon_f - ground_energy;
    }
};

} // namespace sorkin

#endif
