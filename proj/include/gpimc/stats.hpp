#pragma once

// Small statistics helpers: ensemble means with standard errors, and a
// one-sample Kolmogorov-Smirnov test against an arbitrary CDF.

#include <functional>
#include <span>

namespace gpimc {

struct MeanErr {
    double value = 0.0;
    double error = 0.0;  // standard error of the mean; 0 for n < 2
};

double mean(std::span<const double> xs);
double sample_variance(std::span<const double> xs);  // unbiased, 0 for n < 2
MeanErr mean_and_error(std::span<const double> xs);

// KS distance between the empirical CDF of xs and cdf; xs need not be sorted.
double ks_statistic(std::span<const double> xs, const std::function<double(double)>& cdf);

// Asymptotic two-sided p-value for KS distance d at sample size n
// (Kolmogorov distribution with the standard finite-n correction).
double ks_pvalue(double d, std::size_t n);

}  // namespace gpimc
