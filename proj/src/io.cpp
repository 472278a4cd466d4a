#include "sorkin/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sorkin/version.hpp"

namespace sorkin {

using nlohmann::json;

namespace {

void require_known_keys(const json& j, std::initializer_list<const char*> known,
                        const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : known)
            if (it.key() == k) { ok = true; break; }
        if (!ok)
            throw ConfigError("config: unknown key \"" + it.key() + "\" in " + where);
    }
}

json complex_to_json(const std::complex<double>& z) {
    return json::array({z.real(), z.imag()});
}

std::complex<double> complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2)
        throw ConfigError("config: complex values are [re, im] pairs");
    return {j[0].get<double>(), j[1].get<double>()};
}

template <class T, std::size_t N>
json array_to_json(const std::array<T, N>& a) {
    json out = json::array();
    for (const T& v : a) {
        if constexpr (std::is_same_v<T, std::complex<double>>)
            out.push_back(complex_to_json(v));
        else
            out.push_back(v);
    }
    return out;
}

template <class T, std::size_t N>
void array_from_json(const json& j, std::array<T, N>& a, const std::string& where) {
    if (!j.is_array() || j.size() != N)
        throw ConfigError("config: " + where + " must be an array of " +
                          std::to_string(N) + " entries");
    for (std::size_t i = 0; i < N; ++i) {
        if constexpr (std::is_same_v<T, std::complex<double>>)
            a[i] = complex_from_json(j[i]);
        else
            a[i] = j[i].get<T>();
    }
}

template <class T>
void get_if_present(const json& j, const char* key, T& out) {
    if (auto it = j.find(key); it != j.end()) out = it->get<T>();
}

} // namespace

void RunConfig::validate() const {
    make_laser(*this).validate();
    make_grid(*this).validate();
    noise.validate();
    detection.validate();
    if (n_pulses == 0) throw ConfigError("config: n_pulses must be > 0");
    if (n_runs == 0) throw ConfigError("config: n_runs must be > 0");
    if (workers < 0) throw ConfigError("config: workers must be >= 0");
    if (two_channel) {
        bool any = false;
        for (int j = 0; j < 3; ++j)
            any = any || std::abs(channel_weight_s[j]) > 0 || std::abs(channel_weight_d[j]) > 0;
        if (!any) throw ConfigError("config: all channel weights are zero");
    }
}

json config_to_json(const RunConfig& c) {
    json j;
    j["laser"] = {
        {"xuv_energy_ev", c.xuv_energy_ev},
        {"xuv_fwhm_ev", c.xuv_fwhm_ev},
        {"xuv_amplitude", c.xuv_amplitude},
        {"ir_wavelength_nm", array_to_json(c.ir_wavelength_nm)},
        {"ir_fwhm_nm", c.ir_fwhm_nm},
        {"ir_amplitude", array_to_json(c.ir_amplitude)},
        {"ir_delay_as", array_to_json(c.ir_delay_as)},
        {"common_delay_as", c.common_delay_as},
        {"fwhm_convention",
         c.fwhm_convention == FwhmConvention::intensity ? "intensity" : "field"},
    };
    j["grid"] = {
        {"ground_energy_ev", c.ground_energy_ev},
        {"width_ev", c.width_ev},
        {"n_bins", c.n_bins},
    };
    if (c.center_ev) j["grid"]["center_ev"] = *c.center_ev;
    j["noise"] = {
        {"relative_field_sigma", c.noise.relative_field_sigma},
        {"common_delay_sigma_as", c.noise.common_delay_sigma},
        {"component_delay_sigma_as", c.noise.component_delay_sigma},
        {"common_delay_per_run", c.common_delay_per_run},
    };
    j["detection"] = {
        {"target_yield_per_pulse", c.detection.target_yield},
        {"background_per_pulse", c.detection.background_per_pulse},
        {"eta_scales_background", c.eta_scales_background},
    };
    j["run"] = {
        {"n_pulses", c.n_pulses},
        {"n_runs", c.n_runs},
        {"master_seed", c.master_seed},
        {"workers", c.workers},
        {"save_records", c.save_records},
    };
    j["modes"] = {
        {"two_channel", c.two_channel},
        {"channel_weights_s", array_to_json(c.channel_weight_s)},
        {"channel_weights_d", array_to_json(c.channel_weight_d)},
    };
    return j;
}

RunConfig config_from_json(const json& j) {
    RunConfig c;
    require_known_keys(j, {"laser", "grid", "noise", "detection", "run", "modes"}, "root");

    if (auto it = j.find("laser"); it != j.end()) {
        const json& l = *it;
        require_known_keys(l,
                           {"xuv_energy_ev", "xuv_fwhm_ev", "xuv_amplitude",
                            "ir_wavelength_nm", "ir_fwhm_nm", "ir_amplitude", "ir_delay_as",
                            "common_delay_as", "fwhm_convention"},
                           "laser");
        get_if_present(l, "xuv_energy_ev", c.xuv_energy_ev);
        get_if_present(l, "xuv_fwhm_ev", c.xuv_fwhm_ev);
        get_if_present(l, "xuv_amplitude", c.xuv_amplitude);
        if (auto f = l.find("ir_wavelength_nm"); f != l.end())
            array_from_json(*f, c.ir_wavelength_nm, "ir_wavelength_nm");
        get_if_present(l, "ir_fwhm_nm", c.ir_fwhm_nm);
        if (auto f = l.find("ir_amplitude"); f != l.end())
            array_from_json(*f, c.ir_amplitude, "ir_amplitude");
        if (auto f = l.find("ir_delay_as"); f != l.end())
            array_from_json(*f, c.ir_delay_as, "ir_delay_as");
        get_if_present(l, "common_delay_as", c.common_delay_as);
        if (auto f = l.find("fwhm_convention"); f != l.end()) {
            const std::string v = f->get<std::string>();
            if (v == "intensity")
                c.fwhm_convention = FwhmConvention::intensity;
            else if (v == "field")
                c.fwhm_convention = FwhmConvention::field;
            else
                throw ConfigError("config: fwhm_convention must be intensity or field");
        }
    }
    if (auto it = j.find("grid"); it != j.end()) {
        const json& g = *it;
        require_known_keys(g, {"ground_energy_ev", "center_ev", "width_ev", "n_bins"},
                           "grid");
        get_if_present(g, "ground_energy_ev", c.ground_energy_ev);
        if (auto f = g.find("center_ev"); f != g.end() && !f->is_null())
            c.center_ev = f->get<double>();
        get_if_present(g, "width_ev", c.width_ev);
        get_if_present(g, "n_bins", c.n_bins);
    }
    if (auto it = j.find("noise"); it != j.end()) {
        const json& n = *it;
        require_known_keys(n,
                           {"relative_field_sigma", "common_delay_sigma_as",
                            "component_delay_sigma_as", "common_delay_per_run"},
                           "noise");
        get_if_present(n, "relative_field_sigma", c.noise.relative_field_sigma);
        get_if_present(n, "common_delay_sigma_as", c.noise.common_delay_sigma);
        get_if_present(n, "component_delay_sigma_as", c.noise.component_delay_sigma);
        get_if_present(n, "common_delay_per_run", c.common_delay_per_run);
    }
    if (auto it = j.find("detection"); it != j.end()) {
        const json& d = *it;
        require_known_keys(
            d, {"target_yield_per_pulse", "background_per_pulse", "eta_scales_background"},
            "detection");
        get_if_present(d, "target_yield_per_pulse", c.detection.target_yield);
        get_if_present(d, "background_per_pulse", c.detection.background_per_pulse);
        get_if_present(d, "eta_scales_background", c.eta_scales_background);
    }
    if (auto it = j.find("run"); it != j.end()) {
        const json& r = *it;
        require_known_keys(r, {"n_pulses", "n_runs", "master_seed", "workers", "save_records"},
                           "run");
        get_if_present(r, "n_pulses", c.n_pulses);
        get_if_present(r, "n_runs", c.n_runs);
        get_if_present(r, "master_seed", c.master_seed);
        get_if_present(r, "workers", c.workers);
        get_if_present(r, "save_records", c.save_records);
    }
    if (auto it = j.find("modes"); it != j.end()) {
        const json& m = *it;
        require_known_keys(m, {"two_channel", "channel_weights_s", "channel_weights_d"},
                           "modes");
        get_if_present(m, "two_channel", c.two_channel);
        if (auto f = m.find("channel_weights_s"); f != m.end())
            array_from_json(*f, c.channel_weight_s, "channel_weights_s");
        if (auto f = m.find("channel_weights_d"); f != m.end())
            array_from_json(*f, c.channel_weight_d, "channel_weights_d");
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config parse error in " + path + ": " + e.what());
    }
    return config_from_json(j);
}

void save_config(const RunConfig& cfg, const std::string& path) {
    write_text_file(path, config_to_json(cfg).dump(2) + "\n");
}

json config_echo(const RunConfig& cfg) {
    json j = config_to_json(cfg);
    j["run"].erase("workers");
    j["run"].erase("save_records");
    return j;
}

LaserConfig make_laser(const RunConfig& c) {
    LaserConfig laser;
    laser.xuv = PulseSpec{c.xuv_amplitude, c.xuv_energy_ev,
                          field_sigma_from_fwhm(c.xuv_fwhm_ev, c.fwhm_convention), 0.0};
    // One common energy-domain width, converted at the middle component, so
    // all three paths carry equal spectral widths.
    const double fwhm_ev =
        spectral_width_wavelength_to_energy(c.ir_fwhm_nm, c.ir_wavelength_nm[1]);
    for (int j = 0; j < 3; ++j) {
        laser.ir[j] = PulseSpec{c.ir_amplitude[j],
                                photon_energy_from_wavelength(c.ir_wavelength_nm[j]),
                                field_sigma_from_fwhm(fwhm_ev, c.fwhm_convention),
                                c.ir_delay_as[j]};
    }
    laser.common_delay = c.common_delay_as;
    return laser;
}

EnergyGrid make_grid(const RunConfig& c) {
    EnergyGrid g;
    g.ground_energy = c.ground_energy_ev;
    g.width = c.width_ev;
    g.n_bins = c.n_bins;
    g.center = c.center_ev ? *c.center_ev
                           : c.ground_energy_ev + c.xuv_energy_ev +
                                 photon_energy_from_wavelength(c.ir_wavelength_nm[1]);
    return g;
}

ExperimentSetup make_setup(const RunConfig& c) {
    ExperimentSetup s;
    s.laser = make_laser(c);
    s.grid = make_grid(c);
    s.detection = c.detection;
    s.noise = c.noise;
    s.common_delay_per_run = c.common_delay_per_run;
    if (c.two_channel) {
        ChannelWeights w;
        w.s = c.channel_weight_s;
        w.d = c.channel_weight_d;
        s.channels = w;
    }
    return s;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(p.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file: " + path);
    out << content;
    if (!out) throw ConfigError("write failed: " + path);
}

namespace {

std::string csv_preamble(const RunConfig& cfg) {
    std::ostringstream os;
    os << "# tool: sorkinsim " << version << "\n";
    os << "# master_seed: " << cfg.master_seed << "\n";
    os << "# config: " << config_echo(cfg).dump() << "\n";
    return os.str();
}

} // namespace

void write_table_csv(const std::string& path, const RunConfig& cfg,
                     const ProbabilityTable& table, const AmplitudeSet* amps) {
    std::ostringstream os;
    os << csv_preamble(cfg);
    os << "bin_center_ev";
    for (const PathConfiguration s : PathConfiguration::all()) os << ",p_" << s.name();
    if (amps) os << ",abs2_a,abs2_b,abs2_c";
    os << "\n";
    for (int f = 0; f < table.grid.n_bins; ++f) {
        os << format_double(table.grid.bin_center(f));
        for (const PathConfiguration s : PathConfiguration::all())
            os << "," << format_double(table.row(s)[f]);
        if (amps)
            for (int j = 0; j < 3; ++j)
                os << "," << format_double(std::norm(amps->a[j][f]));
        os << "\n";
    }
    write_text_file(path, os.str());
}

void write_histograms_csv(const std::string& path, const RunConfig& cfg,
                          const ExperimentRecord& pooled) {
    std::ostringstream os;
    os << csv_preamble(cfg);
    os << "# n_pulses_per_configuration: " << pooled.histograms[0].n_pulses << "\n";
    os << "bin_center_ev";
    for (const PathConfiguration s : PathConfiguration::all()) os << ",counts_" << s.name();
    os << "\n";
    for (int f = 0; f < pooled.grid.n_bins; ++f) {
        os << format_double(pooled.grid.bin_center(f));
        for (const PathConfiguration s : PathConfiguration::all())
            os << "," << pooled.histogram(s).counts[f];
        os << "\n";
    }
    write_text_file(path, os.str());
}

void write_sorkin_csv(const std::string& path, const RunConfig& cfg,
                      const EnergyGrid& grid, const AnalysisResult& analysis) {
    std::ostringstream os;
    os << csv_preamble(cfg);
    os << "bin_center_ev,kappa,kappa_err,kappa_defined,peres_f,peres_f_err,peres_defined\n";
    for (int f = 0; f < grid.n_bins; ++f) {
        const PerBinSorkin& k = analysis.per_bin[f];
        const PeresBin& p = analysis.peres_bins[f];
        os << format_double(grid.bin_center(f)) << ","
           << format_double(k.defined ? k.mean.kappa : 0.0) << ","
           << format_double(k.defined ? k.mean.std_error : 0.0) << ","
           << (k.defined ? 1 : 0) << ","
           << format_double(p.defined ? p.f : 0.0) << ","
           << format_double(p.defined ? std::sqrt(p.f_var) : 0.0) << ","
           << (p.defined ? 1 : 0) << "\n";
    }
    write_text_file(path, os.str());
}

json record_to_json(const ExperimentRecord& rec) {
    json j;
    j["run_index"] = rec.run_index;
    j["master_seed"] = rec.master_seed;
    j["efficiency"] = rec.efficiency;
    j["clamp_events"] = rec.clamp_events;
    j["grid"] = {{"center_ev", rec.grid.center},
                 {"width_ev", rec.grid.width},
                 {"n_bins", rec.grid.n_bins},
                 {"ground_energy_ev", rec.grid.ground_energy}};
    json edges = json::array();
    for (int f = 0; f <= rec.grid.n_bins; ++f) edges.push_back(rec.grid.bin_edge(f));
    j["grid"]["bin_edges_ev"] = edges;
    j["detection"] = {{"target_yield_per_pulse", rec.detection.target_yield},
                      {"background_per_pulse", rec.detection.background_per_pulse}};
    j["noise"] = {{"relative_field_sigma", rec.noise.relative_field_sigma},
                  {"common_delay_sigma_as", rec.noise.common_delay_sigma},
                  {"component_delay_sigma_as", rec.noise.component_delay_sigma}};
    json hists;
    for (const PathConfiguration s : PathConfiguration::all()) {
        const ClickHistogram& h = rec.histogram(s);
        hists[std::string(s.name())] = {
            {"counts", h.counts}, {"n_pulses", h.n_pulses}, {"no_click", h.no_click}};
    }
    j["histograms"] = hists;
    return j;
}

json summary_to_json(const RunConfig& cfg, const AnalysisResult& analysis,
                     double efficiency, double q_abc) {
    json j;
    j["tool_version"] = version;
    j["master_seed"] = cfg.master_seed;
    j["config"] = config_echo(cfg);
    j["efficiency"] = efficiency;
    j["q_abc"] = q_abc;
    j["clamp_events"] = analysis.clamp_events;
    j["sorkin"] = {
        {"kappa", analysis.overall.kappa},
        {"std_error", analysis.overall.std_error},
        {"numerator", analysis.overall.numerator},
        {"numerator_err", analysis.overall.numerator_err},
        {"denominator", analysis.overall.denominator},
        {"denominator_err", analysis.overall.denominator_err},
        {"entries_used", analysis.overall.n_used},
        {"median_per_bin_sigma", analysis.median_kappa_sigma},
    };
    json kappa_bins = json::array(), kappa_errs = json::array(), defined = json::array();
    for (const PerBinSorkin& b : analysis.per_bin) {
        kappa_bins.push_back(b.defined ? b.mean.kappa : 0.0);
        kappa_errs.push_back(b.defined ? b.mean.std_error : 0.0);
        defined.push_back(b.defined);
    }
    j["sorkin"]["per_bin_kappa"] = kappa_bins;
    j["sorkin"]["per_bin_std_error"] = kappa_errs;
    j["sorkin"]["per_bin_defined"] = defined;
    if (analysis.peres_defined) {
        j["peres"] = {{"f", analysis.peres.f},
                      {"std_error", analysis.peres.std_error},
                      {"bins_used", analysis.peres.n_used}};
    } else {
        j["peres"] = nullptr;
    }
    return j;
}

} // namespace sorkin
