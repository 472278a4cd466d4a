#ifndef SORKIN_GOF_HPP
#define SORKIN_GOF_HPP

#include <cstddef>
#include <cstdint>
#include <span>

namespace sorkin {

// Goodness-of-fit helpers used by the validation command and the test suites.

// Regularized lower incomplete gamma P(a, x).
double regularized_gamma_p(double a, double x);

// Upper-tail p-value of a chi-square statistic with `dof` degrees of freedom.
double chi_square_pvalue(double chi2, int dof);

// Pearson chi-square against uniform expectation; returns the p-value.
double uniform_chi_square_pvalue(std::span<const std::uint64_t> counts);

double normal_cdf(double x);

// Asymptotic Kolmogorov-Smirnov p-value for statistic d with n samples.
double ks_pvalue(double d, std::size_t n);

// One-sample KS statistic of sorted samples against the standard normal.
double ks_statistic_standard_normal(std::span<const double> sorted_samples);

} // namespace sorkin

#endif
