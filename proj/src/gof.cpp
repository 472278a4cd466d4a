#include "sorkin/gof.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace sorkin {

namespace {

// Series expansion of P(a,x), good for x < a+1.
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a,x) (modified Lentz), good for x >= a+1.
double gamma_q_cf(double a, double x) {
    const double tiny = std::numeric_limits<double>::min() / 1e-30;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -double(i) * (double(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

} // namespace

double regularized_gamma_p(double a, double x) {
    if (!(a > 0.0) || x < 0.0)
        throw std::domain_error("regularized_gamma_p: need a > 0, x >= 0");
    if (x == 0.0) return 0.0;
    return x < a + 1.0 ? gamma_p_series(a, x) : 1.0 - gamma_q_cf(a, x);
}

double chi_square_pvalue(double chi2, int dof) {
    if (dof < 1) throw std::domain_error("chi_square_pvalue: dof must be >= 1");
    if (chi2 <= 0.0) return 1.0;
    return 1.0 - regularized_gamma_p(0.5 * dof, 0.5 * chi2);
}

double uniform_chi_square_pvalue(std::span<const std::uint64_t> counts) {
    const std::size_t k = counts.size();
    if (k < 2) throw std::domain_error("uniform_chi_square_pvalue: need >= 2 bins");
    std::uint64_t total = 0;
    for (auto c : counts) total += c;
    if (total == 0) return 1.0;
    const double expect = double(total) / double(k);
    double chi2 = 0.0;
    for (auto c : counts) {
        const double d = double(c) - expect;
        chi2 += d * d / expect;
    }
    return chi_square_pvalue(chi2, int(k) - 1);
}

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double ks_pvalue(double d, std::size_t n) {
    if (n == 0) throw std::domain_error("ks_pvalue: empty sample");
    const double sn = std::sqrt(double(n));
    const double lambda = (sn + 0.12 + 0.11 / sn) * d;
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += (k % 2 == 1 ? 2.0 : -2.0) * term;
        if (term < 1e-12) break;
    }
    return std::min(1.0, std::max(0.0, sum));
}

double ks_statistic_standard_normal(std::span<const double> sorted_samples) {
    const std::size_t n = sorted_samples.size();
    if (n == 0) throw std::domain_error("ks_statistic_standard_normal: empty sample");
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double cdf = normal_cdf(sorted_samples[i]);
        d = std::max(d, std::abs(cdf - double(i) / double(n)));
        d = std::max(d, std::abs(double(i + 1) / double(n) - cdf));
    }
    return d;
}

} // namespace sorkin
