#include "sorkin/montecarlo.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <string>
#include <thread>

namespace sorkin {

double calibrate_efficiency(const ProbabilityTable& ideal, const DetectionSpec& spec) {
    spec.validate();
    const double q_abc = ideal.sum(config_abc);
    if (!(q_abc > 0.0))
        throw ConfigError("calibrate_efficiency: Q_abc = 0, no spectral overlap between "
                          "XUV and IR components in the energy window");
    return spec.target_yield / q_abc;
}

int simulate_pulse(PathConfiguration s, const LaserConfig& noisy, const RowKernel& kernel,
                   double eta, const DetectionSpec& spec, RandomStream& rng,
                   std::span<double> row) {
    const int n = kernel.n_bins();
    const double p0_bin = spec.background_per_pulse / n;

    kernel.fill_row(noisy, s, row);

    const double u = rng.next_uniform();
    double acc = 0.0;
    int hit = -1;
    for (int f = 0; f < n; ++f) {
        acc += p0_bin + eta * row[f];
        if (hit < 0 && u < acc) hit = f;
    }
    if (acc > 1.0)
        throw CalibrationError("simulate_pulse: per-pulse click probability " +
                               std::to_string(acc) + " exceeds 1 (overshoot " +
                               std::to_string(acc - 1.0) + ") for configuration " +
                               std::string(s.name()));
    return hit;
}

namespace {

void check_headroom(PathConfiguration s, const ExperimentSetup& setup, double eta) {
    // Noise-free probabilities with 20% headroom for amplitude fluctuations.
    const ProbabilityTable ideal =
        probability_table(setup.laser, setup.grid, setup.channels_ptr());
    const double total = setup.detection.background_per_pulse + eta * ideal.sum(s);
    if (total * 1.2 > 1.0)
        throw CalibrationError("run_configuration: expected click probability " +
                               std::to_string(total) + " for configuration " +
                               std::string(s.name()) + " leaves no headroom");
}

std::optional<double> run_level_common_delay(const ExperimentSetup& setup,
                                             std::uint64_t master_seed,
                                             std::uint32_t run_index,
                                             PathConfiguration s) {
    if (!setup.common_delay_per_run) return {};
    RandomStream rng{master_seed, run_level_stream_id(run_index, s.index()), 0};
    return setup.noise.common_delay_sigma * rng.next_normal();
}

} // namespace

ClickHistogram run_configuration(PathConfiguration s, const ExperimentSetup& setup,
                                 double eta, std::uint64_t n_pulses,
                                 std::uint64_t master_seed, std::uint32_t run_index,
                                 std::uint64_t pulse_offset,
                                 std::uint64_t* clamp_events, const RowKernel* kernel) {
    setup.noise.validate();
    setup.detection.validate();
    check_headroom(s, setup, eta);

    std::optional<RowKernel> local_kernel;
    if (!kernel) local_kernel.emplace(setup.laser, setup.grid, setup.channels_ptr());
    const RowKernel& k = kernel ? *kernel : *local_kernel;

    ClickHistogram hist;
    hist.config = s;
    hist.counts.assign(k.n_bins(), 0);
    hist.n_pulses = n_pulses;

    std::vector<double> row(k.n_bins());
    const std::optional<double> fixed_common =
        run_level_common_delay(setup, master_seed, run_index, s);

    std::uint64_t clamps = 0;
    for (std::uint64_t p = 0; p < n_pulses; ++p) {
        RandomStream rng{master_seed,
                         compose_stream_id(run_index, s.index(), pulse_offset + p), 0};
        const LaserConfig noisy =
            sample_noisy_laser(setup.laser, setup.noise, rng, &clamps, fixed_common);
        const int outcome = simulate_pulse(s, noisy, k, eta, setup.detection, rng, row);
        if (outcome < 0)
            ++hist.no_click;
        else
            ++hist.counts[outcome];
    }
    if (clamp_events) *clamp_events += clamps;
    return hist;
}

std::vector<ExperimentRecord> run_experiment(const ExperimentSetup& setup,
                                             std::uint64_t n_pulses, std::uint32_t n_runs,
                                             std::uint64_t master_seed, int workers) {
    if (n_pulses >= max_pulses_per_stream)
        throw ConfigError("run_experiment: n_pulses exceeds the stream id space");
    setup.grid.validate();
    setup.laser.validate();

    const ProbabilityTable ideal =
        probability_table(setup.laser, setup.grid, setup.channels_ptr());
    const double eta = calibrate_efficiency(ideal, setup.detection);
    for (const PathConfiguration s : PathConfiguration::all()) {
        const double total = setup.detection.background_per_pulse + eta * ideal.sum(s);
        if (total * 1.2 > 1.0)
            throw CalibrationError("run_experiment: configuration " + std::string(s.name()) +
                                   " expected click probability " + std::to_string(total) +
                                   " leaves no headroom");
    }

    const RowKernel kernel(setup.laser, setup.grid, setup.channels_ptr());

    std::vector<ExperimentRecord> records(n_runs);
    for (std::uint32_t r = 0; r < n_runs; ++r) {
        auto& rec = records[r];
        rec.grid = setup.grid;
        rec.detection = setup.detection;
        rec.noise = setup.noise;
        rec.master_seed = master_seed;
        rec.run_index = r;
        rec.efficiency = eta;
        for (const PathConfiguration s : PathConfiguration::all()) {
            rec.histograms[s.index()].config = s;
            rec.histograms[s.index()].counts.assign(setup.grid.n_bins, 0);
            rec.histograms[s.index()].n_pulses = n_pulses;
        }
    }

    // Work items are pulse batches of one (run, configuration); integer merge
    // makes accumulation order irrelevant.
    struct WorkItem {
        std::uint32_t run;
        PathConfiguration config;
        std::uint64_t begin;
        std::uint64_t end;
    };
    const std::uint64_t batch =
        std::max<std::uint64_t>(1, std::min<std::uint64_t>(n_pulses, 1u << 14));
    std::vector<WorkItem> items;
    for (std::uint32_t r = 0; r < n_runs; ++r)
        for (const PathConfiguration s : PathConfiguration::all())
            for (std::uint64_t b = 0; b < n_pulses; b += batch)
                items.push_back({r, s, b, std::min(n_pulses, b + batch)});

    int n_workers = workers > 0 ? workers
                                : static_cast<int>(std::thread::hardware_concurrency());
    if (n_workers < 1) n_workers = 1;

    std::atomic<std::size_t> next{0};
    std::mutex merge_mutex;
    std::exception_ptr failure;

    auto worker_loop = [&] {
        std::vector<double> row(setup.grid.n_bins);
        try {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= items.size()) break;
                const WorkItem& it = items[i];

                const std::optional<double> fixed_common =
                    run_level_common_delay(setup, master_seed, it.run, it.config);

                std::vector<std::uint64_t> counts(setup.grid.n_bins, 0);
                std::uint64_t no_click = 0, clamps = 0;
                for (std::uint64_t p = it.begin; p < it.end; ++p) {
                    RandomStream rng{master_seed,
                                     compose_stream_id(it.run, it.config.index(), p), 0};
                    const LaserConfig noisy =
                        sample_noisy_laser(setup.laser, setup.noise, rng, &clamps,
                                           fixed_common);
                    const int outcome =
                        simulate_pulse(it.config, noisy, kernel, eta, setup.detection,
                                       rng, row);
                    if (outcome < 0)
                        ++no_click;
                    else
                        ++counts[outcome];
                }

                std::lock_guard<std::mutex> lock(merge_mutex);
                ClickHistogram& h = records[it.run].histograms[it.config.index()];
                for (int f = 0; f < setup.grid.n_bins; ++f) h.counts[f] += counts[f];
                h.no_click += no_click;
                records[it.run].clamp_events += clamps;
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(merge_mutex);
            if (!failure) failure = std::current_exception();
            next.store(items.size());
        }
    };

    if (n_workers == 1) {
        worker_loop();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker_loop);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    return records;
}

} // namespace sorkin
