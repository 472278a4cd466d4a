#ifndef SORKIN_IO_HPP
#define SORKIN_IO_HPP

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "sorkin/montecarlo.hpp"
#include "sorkin/stats.hpp"

namespace sorkin {

// Complete description of one experiment, loadable from a JSON config file.
// Defaults reproduce the reference settings: 40 eV / 150 meV XUV,
// 820/800/780 nm IR at 5 nm width, 0.2 eV window with 40 bins, 10% field
// noise, 50 as / 200 as delay jitter, 0.02 yield, 2e-4 background,
// 1e5 pulses x 100 runs.
struct RunConfig {
    // laser
    double xuv_energy_ev = 40.0;
    double xuv_fwhm_ev = 0.150;
    double xuv_amplitude = 1.0;
    std::array<double, 3> ir_wavelength_nm{820.0, 800.0, 780.0};
    double ir_fwhm_nm = 5.0;
    std::array<double, 3> ir_amplitude{1.0, 1.0, 1.0};
    std::array<double, 3> ir_delay_as{0.0, 0.0, 0.0};
    double common_delay_as = 0.0;
    FwhmConvention fwhm_convention = FwhmConvention::intensity;

    // grid
    double ground_energy_ev = -24.587; // helium single-ionization threshold
    std::optional<double> center_ev;   // default: eps_g + E_xuv + E_b
    double width_ev = 0.2;
    int n_bins = 40;

    // noise
    NoiseSpec noise{};
    bool common_delay_per_run = false;

    // detection
    DetectionSpec detection{};
    bool eta_scales_background = false; // couple background to eta in sweeps

    // run
    std::uint64_t n_pulses = 100000;
    std::uint32_t n_runs = 100;
    std::uint64_t master_seed = 1;
    int workers = 0;          // 0 = hardware concurrency
    bool save_records = true;

    // modes
    bool two_channel = false;
    std::array<std::complex<double>, 3> channel_weight_s{
        std::complex<double>{1, 0}, std::complex<double>{1, 0}, std::complex<double>{1, 0}};
    std::array<std::complex<double>, 3> channel_weight_d{
        std::polar(0.5, std::numbers::pi / 4), std::polar(0.5, std::numbers::pi / 4),
        std::polar(0.5, std::numbers::pi / 4)};

    bool operator==(const RunConfig&) const = default;

    void validate() const;
};

nlohmann::json config_to_json(const RunConfig& cfg);
RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config(const std::string& path);
void save_config(const RunConfig& cfg, const std::string& path);

// The physics portion of the configuration, embedded in every output file.
// Runtime-only fields (workers, save_records) are excluded so outputs are
// byte-identical across worker counts.
nlohmann::json config_echo(const RunConfig& cfg);

// Derived objects.
LaserConfig make_laser(const RunConfig& cfg);
EnergyGrid make_grid(const RunConfig& cfg);
ExperimentSetup make_setup(const RunConfig& cfg);

// 17 significant digits, '.' separator; bit-stable for regression tests.
std::string format_double(double v);

// CSV / JSON writers. Every file starts with comment lines carrying the
// config echo and master seed.
void write_table_csv(const std::string& path, const RunConfig& cfg,
                     const ProbabilityTable& table, const AmplitudeSet* amps = nullptr);
void write_histograms_csv(const std::string& path, const RunConfig& cfg,
                          const ExperimentRecord& pooled);
void write_sorkin_csv(const std::string& path, const RunConfig& cfg,
                      const EnergyGrid& grid, const AnalysisResult& analysis);
nlohmann::json record_to_json(const ExperimentRecord& rec);
nlohmann::json summary_to_json(const RunConfig& cfg, const AnalysisResult& analysis,
                               double efficiency, double q_abc);
void write_text_file(const std::string& path, const std::string& content);

} // namespace sorkin

#endif
