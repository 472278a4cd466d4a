#ifndef SORKIN_MONTECARLO_HPP
#define SORKIN_MONTECARLO_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "sorkin/amplitude.hpp"
#include "sorkin/noise.hpp"
#include "sorkin/rng.hpp"

namespace sorkin {

struct DetectionSpec {
    double target_yield = 0.02;          // expected S=abc electrons per pulse in the window
    double background_per_pulse = 2e-4;  // expected background clicks per pulse in the window

    void validate() const {
        if (!(target_yield >= 0.0 && target_yield < 1.0))
            throw ConfigError("DetectionSpec: target_yield must be in [0,1)");
        if (!(background_per_pulse >= 0.0 && background_per_pulse < 1.0))
            throw ConfigError("DetectionSpec: background_per_pulse must be in [0,1)");
    }
};

// eta = target_yield / Q_abc with Q_abc the noise-free window sum of P_abc.
double calibrate_efficiency(const ProbabilityTable& ideal, const DetectionSpec& spec);

struct ClickHistogram {
    PathConfiguration config;
    std::vector<std::uint64_t> counts; // per grid bin
    std::uint64_t n_pulses = 0;
    std::uint64_t no_click = 0;

    std::uint64_t total_clicks() const {
        std::uint64_t t = 0;
        for (auto c : counts) t += c;
        return t;
    }
};

struct ExperimentRecord {
    EnergyGrid grid;
    DetectionSpec detection;
    NoiseSpec noise;
    std::uint64_t master_seed = 0;
    std::uint32_t run_index = 0;
    double efficiency = 0.0;
    std::array<ClickHistogram, PathConfiguration::count> histograms;
    std::uint64_t clamp_events = 0;

    const ClickHistogram& histogram(PathConfiguration s) const {
        return histograms[s.index()];
    }
};

// Everything a full experiment needs besides pulse/run counts and the seed.
struct ExperimentSetup {
    LaserConfig laser;
    EnergyGrid grid;
    DetectionSpec detection;
    NoiseSpec noise;
    std::optional<ChannelWeights> channels; // set = two-channel mode
    bool common_delay_per_run = false;      // redraw the common delay per run, not per pulse

    const ChannelWeights* channels_ptr() const {
        return channels ? &*channels : nullptr;
    }
};

// One categorical draw from {P0 + eta P_S(eps_1), ..., 1 - sum}; returns the
// bin index or -1 for no click. `row` is scratch of size n_bins.
int simulate_pulse(PathConfiguration s, const LaserConfig& noisy, const RowKernel& kernel,
                   double eta, const DetectionSpec& spec, RandomStream& rng,
                   std::span<double> row);

// Simulates pulses [pulse_offset, pulse_offset + n_pulses) of one
// configuration. Streams are keyed by (master_seed, run_index, s, pulse), so
// splitting a range across calls reproduces the unsplit result exactly.
ClickHistogram run_configuration(PathConfiguration s, const ExperimentSetup& setup,
                                 double eta, std::uint64_t n_pulses,
                                 std::uint64_t master_seed, std::uint32_t run_index = 0,
                                 std::uint64_t pulse_offset = 0,
                                 std::uint64_t* clamp_events = nullptr,
                                 const RowKernel* kernel = nullptr);

// n_runs records of 8 configurations x n_pulses pulses, distributed over a
// worker pool. Results are identical for any worker count.
std::vector<ExperimentRecord> run_experiment(const ExperimentSetup& setup,
                                             std::uint64_t n_pulses, std::uint32_t n_runs,
                                             std::uint64_t master_seed, int workers = 0);

} // namespace sorkin

#endif
