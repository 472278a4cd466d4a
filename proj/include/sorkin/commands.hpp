#ifndef SORKIN_COMMANDS_HPP
#define SORKIN_COMMANDS_HPP

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "sorkin/io.hpp"

namespace sorkin {

struct SimulateResult {
    std::vector<ExperimentRecord> records;
    AnalysisResult analysis;
    double efficiency = 0.0;
    double q_abc = 0.0;
};

// Full experiment + statistics pass, no file output. on_run, when given, is
// invoked once per completed record in run order.
SimulateResult simulate_experiment(
    const RunConfig& cfg,
    const std::function<void(const ExperimentRecord&)>& on_run = {});

// simulate: writes config.json, records.jsonl (streamed, optional),
// histograms_total.csv, sorkin_bins.csv and summary.json into out_dir.
SimulateResult cmd_simulate(const RunConfig& cfg, const std::string& out_dir,
                            std::ostream& log);

enum class SweepAxis { time, efficiency };

struct SweepPoint {
    double axis_value = 0;  // pulses per run, or target yield
    double abscissa = 0;    // total pulses per configuration, or eta
    SorkinMean mean;
};
struct SweepResult {
    std::vector<SweepPoint> points;
    PowerLawFit fit;
};

// One full statistics pass per axis value. Time axis: values are pulses per
// run (abscissa records n_runs * n_pulses). Efficiency axis: values are
// target yields per pulse (abscissa records eta).
SweepResult run_sweep(const RunConfig& cfg, SweepAxis axis,
                      std::span<const double> values);

SweepResult cmd_sweep(const RunConfig& cfg, SweepAxis axis,
                      std::span<const double> values, const std::string& out_dir,
                      std::ostream& log);

// ideal: noise-free probability table plus |A_j|^2 columns.
void cmd_ideal(const RunConfig& cfg, const std::string& out_dir, std::ostream& log);

// validate: oracle suite (quadrature vs closed form, noise-free kappa/F,
// sampler statistics, channel additivity). Returns true when all checks pass.
bool run_validation(const RunConfig& cfg, std::ostream& report);

} // namespace sorkin

#endif
