#ifndef SORKIN_STATS_HPP
#define SORKIN_STATS_HPP

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "sorkin/montecarlo.hpp"

namespace sorkin {

struct ProbabilityEstimate {
    double value = 0.0;    // clicks per pulse
    double variance = 0.0; // Poisson, max(counts,1)/n^2
    std::uint64_t n_pulses = 0;
};

// One bin's estimates for all eight configurations (canonical order).
struct BinEstimates {
    std::array<ProbabilityEstimate, PathConfiguration::count> p;

    const ProbabilityEstimate& at(PathConfiguration s) const { return p[s.index()]; }
    ProbabilityEstimate& at(PathConfiguration s) { return p[s.index()]; }
};

std::vector<BinEstimates> estimate_probabilities(const ExperimentRecord& rec);

// Exact-probability path: turns a noise-free table into zero-variance
// estimates (uniform background added to every configuration when given).
std::vector<BinEstimates> estimates_from_table(const ProbabilityTable& table,
                                               double background_per_bin = 0.0);

// Background-corrected interference terms,
//   I'_jk  = P_jk - P_j - P_k + P0
//   I'_abc = P_abc - P_ab - P_ac - P_bc + P_a + P_b + P_c - P0
// with P0 estimated from the empty configuration of the same record.
struct CorrectedTerms {
    double i_ab = 0, i_ac = 0, i_bc = 0, i_abc = 0;
    double var_ab = 0, var_ac = 0, var_bc = 0, var_abc = 0;
};
CorrectedTerms corrected_interference(const BinEstimates& bin);

struct SorkinBin {
    double numerator = 0, numerator_var = 0;     // I'_abc
    double denominator = 0, denominator_var = 0; // |I'_ab|+|I'_ac|+|I'_bc|
    double kappa = 0, kappa_var = 0;
    bool defined = false; // denominator > 0
    bool flagged = false; // some |I'_jk| within 1 sigma of 0; linearized error unreliable
};
SorkinBin sorkin_per_bin(const BinEstimates& bin);

// Bias-free average over runs and/or bins: inverse-variance weighted means of
// numerator and denominator taken separately, then divided.
struct SorkinMean {
    double numerator = 0, numerator_err = 0;
    double denominator = 0, denominator_err = 0;
    double kappa = 0, std_error = 0;
    std::size_t n_used = 0;
};
SorkinMean weighted_mean_sorkin(std::span<const SorkinBin> entries);

struct PeresBin {
    double alpha = 0, beta = 0, gamma = 0;
    double f = 0, f_var = 0;
    bool defined = false; // all three background-subtracted single paths > 0
};
// F = alpha^2 + beta^2 + gamma^2 - 2 alpha beta gamma from background-
// subtracted probabilities P'_S = P_S - P0.
PeresBin peres_per_bin(const BinEstimates& bin);

struct PeresMean {
    double f = 0, std_error = 0;
    std::size_t n_used = 0;
};
PeresMean weighted_mean_peres(std::span<const PeresBin> entries);

struct ScalingPoint {
    double abscissa = 0;  // pulses t or efficiency eta
    double std_error = 0; // s_kbar at that point
};
struct PowerLawFit {
    double exponent = 0;
    double exponent_err = 0;
    double log_prefactor = 0; // natural log
};
PowerLawFit power_law_fit(std::span<const ScalingPoint> points);

double acquisition_time_seconds(double n_pulses, double rep_rate_hz);

// Counts summed across records (per configuration, per bin).
ExperimentRecord pool_records(std::span<const ExperimentRecord> records);

// Convenience: per-bin Sorkin entries for every record, outer index = run.
std::vector<std::vector<SorkinBin>> sorkin_bins_per_record(
    std::span<const ExperimentRecord> records);

// Full statistics pass over a set of records: spectrally resolved and overall
// Sorkin parameter (ratio-of-means over runs, then bins), Peres parameter
// from the pooled counts.
struct PerBinSorkin {
    SorkinMean mean;
    bool defined = false;
};
struct AnalysisResult {
    SorkinMean overall;                  // over all (run, bin) entries
    std::vector<PerBinSorkin> per_bin;   // over runs, per bin
    std::vector<PeresBin> peres_bins;    // from pooled counts
    PeresMean peres;                     // weighted over defined bins
    bool peres_defined = false;
    double median_kappa_sigma = 0.0;     // per-bin sigma_kappa, first record
    std::uint64_t clamp_events = 0;
};
AnalysisResult analyze_records(std::span<const ExperimentRecord> records);

} // namespace sorkin

#endif
