#ifndef SORKIN_NOISE_HPP
#define SORKIN_NOISE_HPP

#include <cstdint>
#include <optional>

#include "sorkin/pulse.hpp"
#include "sorkin/rng.hpp"

namespace sorkin {

struct NoiseSpec {
    double relative_field_sigma = 0.1;    // dE/E per field amplitude
    double common_delay_sigma = 50.0;     // as, XUV-IR delay jitter
    double component_delay_sigma = 200.0; // as, per IR component

    void validate() const {
        if (relative_field_sigma < 0 || common_delay_sigma < 0 || component_delay_sigma < 0)
            throw ConfigError("NoiseSpec: sigmas must be >= 0");
    }
};

// Draws one perturbed laser configuration. Exactly eight normal draws, in
// the fixed order: XUV field, a field, b field, c field, common delay,
// tau'_a, tau'_b, tau'_c. Negative amplitudes are clamped to zero (a 10-sigma
// event at the default settings); clamp_counter records occurrences.
//
// fixed_common_delay, when set, replaces the common-delay value while still
// consuming its draw, keeping stream positions identical between per-pulse
// and per-run delay modes.
inline LaserConfig sample_noisy_laser(const LaserConfig& base, const NoiseSpec& spec,
                                      RandomStream& rng,
                                      std::uint64_t* clamp_counter = nullptr,
                                      std::optional<double> fixed_common_delay = {}) {
    LaserConfig out = base;

    auto perturb_amplitude = [&](double amp) {
        double factor = 1.0 + spec.relative_field_sigma * rng.next_normal();
        if (factor < 0.0) {
            factor = 0.0;
            if (clamp_counter) ++*clamp_counter;
        }
        return amp * factor;
    };

    out.xuv.amplitude = perturb_amplitude(base.xuv.amplitude);
    for (int j = 0; j < 3; ++j)
        out.ir[j].amplitude = perturb_amplitude(base.ir[j].amplitude);

    const double common_draw = spec.common_delay_sigma * rng.next_normal();
    out.common_delay = base.common_delay +
                       (fixed_common_delay ? *fixed_common_delay : common_draw);

    for (int j = 0; j < 3; ++j)
        out.ir[j].delay = base.ir[j].delay + spec.component_delay_sigma * rng.next_normal();

    return out;
}

} // namespace sorkin

#endif
