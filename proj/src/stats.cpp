#include "sorkin/stats.hpp"

#include <algorithm>
#include <cmath>

namespace sorkin {

namespace {

inline double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// Canonical-order indices.
constexpr int i0 = 0, ia = 1, ib = 2, ic = 3, iab = 4, iac = 5, ibc = 6, iabc = 7;

// dN/dP_S for N = I'_abc.
constexpr std::array<double, 8> kNumCoef{-1, +1, +1, +1, -1, -1, -1, +1};

} // namespace

std::vector<BinEstimates> estimate_probabilities(const ExperimentRecord& rec) {
    const int n = rec.grid.n_bins;
    std::vector<BinEstimates> out(n);
    for (const PathConfiguration s : PathConfiguration::all()) {
        const ClickHistogram& h = rec.histogram(s);
        if (h.n_pulses == 0)
            throw ConfigError("estimate_probabilities: histogram with zero pulses");
        const double np = double(h.n_pulses);
        for (int f = 0; f < n; ++f) {
            const double counts = double(h.counts[f]);
            out[f].at(s) = {counts / np, std::max(counts, 1.0) / (np * np), h.n_pulses};
        }
    }
    return out;
}

std::vector<BinEstimates> estimates_from_table(const ProbabilityTable& table,
                                               double background_per_bin) {
    const int n = table.grid.n_bins;
    std::vector<BinEstimates> out(n);
    for (const PathConfiguration s : PathConfiguration::all()) {
        const auto& row = table.row(s);
        for (int f = 0; f < n; ++f)
            out[f].at(s) = {background_per_bin + row[f], 0.0, 0};
    }
    return out;
}

CorrectedTerms corrected_interference(const BinEstimates& bin) {
    const auto& p = bin.p;
    CorrectedTerms t;
    t.i_ab = p[iab].value - p[ia].value - p[ib].value + p[i0].value;
    t.i_ac = p[iac].value - p[ia].value - p[ic].value + p[i0].value;
    t.i_bc = p[ibc].value - p[ib].value - p[ic].value + p[i0].value;
    t.var_ab = p[iab].variance + p[ia].variance + p[ib].variance + p[i0].variance;
    t.var_ac = p[iac].variance + p[ia].variance + p[ic].variance + p[i0].variance;
    t.var_bc = p[ibc].variance + p[ib].variance + p[ic].variance + p[i0].variance;
    t.i_abc = p[iabc].value - p[iab].value - p[iac].value - p[ibc].value + p[ia].value +
              p[ib].value + p[ic].value - p[i0].value;
    t.var_abc = 0.0;
    for (const auto& e : p) t.var_abc += e.variance;
    return t;
}

SorkinBin sorkin_per_bin(const BinEstimates& bin) {
    const CorrectedTerms t = corrected_interference(bin);
    SorkinBin out;
    out.numerator = t.i_abc;
    out.numerator_var = t.var_abc;
    out.denominator = std::abs(t.i_ab) + std::abs(t.i_ac) + std::abs(t.i_bc);

    const double s_ab = sgn(t.i_ab), s_ac = sgn(t.i_ac), s_bc = sgn(t.i_bc);
    // dD/dP_S with |.| linearized as sign(I').
    std::array<double, 8> den_coef{};
    den_coef[iab] = s_ab;
    den_coef[iac] = s_ac;
    den_coef[ibc] = s_bc;
    den_coef[ia] = -(s_ab + s_ac);
    den_coef[ib] = -(s_ab + s_bc);
    den_coef[ic] = -(s_ac + s_bc);
    den_coef[i0] = s_ab + s_ac + s_bc;
    den_coef[iabc] = 0.0;

    for (int s = 0; s < 8; ++s)
        out.denominator_var += den_coef[s] * den_coef[s] * bin.p[s].variance;

    out.defined = out.denominator > 0.0;
    if (!out.defined) return out;

    out.kappa = out.numerator / out.denominator;
    const double d2 = out.denominator * out.denominator;
    for (int s = 0; s < 8; ++s) {
        const double dk = (kNumCoef[s] * out.denominator - out.numerator * den_coef[s]) / d2;
        out.kappa_var += dk * dk * bin.p[s].variance;
    }

    out.flagged = std::abs(t.i_ab) < std::sqrt(t.var_ab) ||
                  std::abs(t.i_ac) < std::sqrt(t.var_ac) ||
                  std::abs(t.i_bc) < std::sqrt(t.var_bc);
    return out;
}

SorkinMean weighted_mean_sorkin(std::span<const SorkinBin> entries) {
    double wn_sum = 0, wn_val = 0, wd_sum = 0, wd_val = 0;
    std::size_t used = 0;
    for (const SorkinBin& e : entries) {
        if (!e.defined) continue;
        if (!(e.numerator_var > 0.0) || !(e.denominator_var > 0.0))
            throw NumericError("weighted_mean_sorkin: zero-variance entry");
        const double wn = 1.0 / e.numerator_var;
        const double wd = 1.0 / e.denominator_var;
        wn_sum += wn;
        wn_val += wn * e.numerator;
        wd_sum += wd;
        wd_val += wd * e.denominator;
        ++used;
    }
    if (used == 0)
        throw NumericError("weighted_mean_sorkin: no defined entries");

    SorkinMean m;
    m.n_used = used;
    m.numerator = wn_val / wn_sum;
    m.numerator_err = std::sqrt(1.0 / wn_sum);
    m.denominator = wd_val / wd_sum;
    m.denominator_err = std::sqrt(1.0 / wd_sum);
    if (!(m.denominator > 0.0))
        throw NumericError("weighted_mean_sorkin: nonpositive mean denominator");
    m.kappa = m.numerator / m.denominator;
    const double d2 = m.denominator * m.denominator;
    m.std_error = std::sqrt(m.numerator_err * m.numerator_err / d2 +
                            m.numerator * m.numerator * m.denominator_err *
                                m.denominator_err / (d2 * d2));
    return m;
}

PeresBin peres_per_bin(const BinEstimates& bin) {
    const auto& p = bin.p;
    const double p0 = p[i0].value;
    const double pa = p[ia].value - p0, pb = p[ib].value - p0, pc = p[ic].value - p0;
    const double pab = p[iab].value - p0, pac = p[iac].value - p0, pbc = p[ibc].value - p0;

    PeresBin out;
    out.defined = pa > 0.0 && pb > 0.0 && pc > 0.0;
    if (!out.defined) return out;

    const double rbc = 2.0 * std::sqrt(pb * pc);
    const double rac = 2.0 * std::sqrt(pa * pc);
    const double rab = 2.0 * std::sqrt(pa * pb);
    const double alpha = (pbc - pb - pc) / rbc;
    const double beta = (pac - pa - pc) / rac;
    const double gamma = (pab - pa - pb) / rab;
    out.alpha = alpha;
    out.beta = beta;
    out.gamma = gamma;
    out.f = alpha * alpha + beta * beta + gamma * gamma - 2.0 * alpha * beta * gamma;

    // First-order propagation over the seven independent estimates. For
    // x = (X - u - v) / (2 sqrt(u v)):
    //   dx/dX = 1/(2 sqrt(uv)),  dx/du = -1/(2 sqrt(uv)) - x/(2u),  dv likewise.
    const double dF_da = 2.0 * (alpha - beta * gamma);
    const double dF_db = 2.0 * (beta - alpha * gamma);
    const double dF_dg = 2.0 * (gamma - alpha * beta);

    const double da_dbc = 1.0 / rbc;
    const double da_db = -1.0 / rbc - alpha / (2.0 * pb);
    const double da_dc = -1.0 / rbc - alpha / (2.0 * pc);
    const double db_dac = 1.0 / rac;
    const double db_da = -1.0 / rac - beta / (2.0 * pa);
    const double db_dc = -1.0 / rac - beta / (2.0 * pc);
    const double dg_dab = 1.0 / rab;
    const double dg_da = -1.0 / rab - gamma / (2.0 * pa);
    const double dg_db = -1.0 / rab - gamma / (2.0 * pb);

    std::array<double, 8> dF{};
    dF[ibc] = dF_da * da_dbc;
    dF[iac] = dF_db * db_dac;
    dF[iab] = dF_dg * dg_dab;
    dF[ia] = dF_db * db_da + dF_dg * dg_da;
    dF[ib] = dF_da * da_db + dF_dg * dg_db;
    dF[ic] = dF_da * da_dc + dF_db * db_dc;
    // P0 shifts every subtracted probability at once.
    dF[i0] = -(dF[ia] + dF[ib] + dF[ic] + dF[iab] + dF[iac] + dF[ibc]);
    dF[iabc] = 0.0;

    for (int s = 0; s < 8; ++s)
        out.f_var += dF[s] * dF[s] * p[s].variance;
    return out;
}

PeresMean weighted_mean_peres(std::span<const PeresBin> entries) {
    double w_sum = 0, w_val = 0;
    std::size_t used = 0;
    for (const PeresBin& e : entries) {
        if (!e.defined) continue;
        if (!(e.f_var > 0.0))
            throw NumericError("weighted_mean_peres: zero-variance entry");
        const double w = 1.0 / e.f_var;
        w_sum += w;
        w_val += w * e.f;
        ++used;
    }
    if (used == 0)
        throw NumericError("weighted_mean_peres: no defined entries");
    return {w_val / w_sum, std::sqrt(1.0 / w_sum), used};
}

PowerLawFit power_law_fit(std::span<const ScalingPoint> points) {
    const std::size_t n = points.size();
    if (n < 3)
        throw ConfigError("power_law_fit: need at least three points");
    double sx = 0, sy = 0;
    for (const auto& p : points) {
        if (!(p.abscissa > 0.0) || !(p.std_error > 0.0))
            throw ConfigError("power_law_fit: points must be positive");
        sx += std::log(p.abscissa);
        sy += std::log(p.std_error);
    }
    const double mx = sx / double(n), my = sy / double(n);
    double sxx = 0, sxy = 0;
    for (const auto& p : points) {
        const double dx = std::log(p.abscissa) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(p.std_error) - my);
    }
    if (!(sxx > 0.0))
        throw NumericError("power_law_fit: degenerate abscissas");

    PowerLawFit fit;
    fit.exponent = sxy / sxx;
    fit.log_prefactor = my - fit.exponent * mx;
    double ssr = 0;
    for (const auto& p : points) {
        const double r = std::log(p.std_error) -
                         (fit.log_prefactor + fit.exponent * std::log(p.abscissa));
        ssr += r * r;
    }
    fit.exponent_err = n > 2 ? std::sqrt(ssr / double(n - 2) / sxx) : 0.0;
    return fit;
}

double acquisition_time_seconds(double n_pulses, double rep_rate_hz) {
    if (!(rep_rate_hz > 0.0))
        throw std::domain_error("acquisition_time_seconds: repetition rate must be > 0");
    return n_pulses / rep_rate_hz;
}

ExperimentRecord pool_records(std::span<const ExperimentRecord> records) {
    if (records.empty())
        throw ConfigError("pool_records: no records");
    ExperimentRecord out = records[0];
    for (std::size_t r = 1; r < records.size(); ++r) {
        const ExperimentRecord& rec = records[r];
        if (rec.grid.n_bins != out.grid.n_bins)
            throw ConfigError("pool_records: mismatched grids");
        for (int s = 0; s < PathConfiguration::count; ++s) {
            ClickHistogram& h = out.histograms[s];
            const ClickHistogram& g = rec.histograms[s];
            for (int f = 0; f < out.grid.n_bins; ++f) h.counts[f] += g.counts[f];
            h.n_pulses += g.n_pulses;
            h.no_click += g.no_click;
        }
        out.clamp_events += rec.clamp_events;
    }
    return out;
}

std::vector<std::vector<SorkinBin>> sorkin_bins_per_record(
    std::span<const ExperimentRecord> records) {
    std::vector<std::vector<SorkinBin>> out;
    out.reserve(records.size());
    for (const ExperimentRecord& rec : records) {
        const std::vector<BinEstimates> est = estimate_probabilities(rec);
        std::vector<SorkinBin> bins;
        bins.reserve(est.size());
        for (const BinEstimates& b : est) bins.push_back(sorkin_per_bin(b));
        out.push_back(std::move(bins));
    }
    return out;
}

AnalysisResult analyze_records(std::span<const ExperimentRecord> records) {
    if (records.empty())
        throw ConfigError("analyze_records: no records");
    const int n_bins = records[0].grid.n_bins;
    const auto per_record = sorkin_bins_per_record(records);

    AnalysisResult res;

    std::vector<SorkinBin> flat;
    flat.reserve(per_record.size() * n_bins);
    for (const auto& run : per_record)
        for (const SorkinBin& b : run) flat.push_back(b);
    res.overall = weighted_mean_sorkin(flat);

    res.per_bin.resize(n_bins);
    std::vector<SorkinBin> column;
    for (int f = 0; f < n_bins; ++f) {
        column.clear();
        bool any = false;
        for (const auto& run : per_record) {
            column.push_back(run[f]);
            any = any || run[f].defined;
        }
        if (any) {
            res.per_bin[f].mean = weighted_mean_sorkin(column);
            res.per_bin[f].defined = true;
        }
    }

    const ExperimentRecord pooled = pool_records(records);
    const std::vector<BinEstimates> pooled_est = estimate_probabilities(pooled);
    res.peres_bins.reserve(pooled_est.size());
    bool any_peres = false;
    for (const BinEstimates& b : pooled_est) {
        res.peres_bins.push_back(peres_per_bin(b));
        any_peres = any_peres || res.peres_bins.back().defined;
    }
    if (any_peres) {
        res.peres = weighted_mean_peres(res.peres_bins);
        res.peres_defined = true;
    }

    std::vector<double> sigmas;
    for (const SorkinBin& b : per_record[0])
        if (b.defined) sigmas.push_back(std::sqrt(b.kappa_var));
    if (!sigmas.empty()) {
        std::sort(sigmas.begin(), sigmas.end());
        res.median_kappa_sigma = sigmas[sigmas.size() / 2];
    }

    for (const ExperimentRecord& rec : records) res.clamp_events += rec.clamp_events;
    return res;
}

} // namespace sorkin
