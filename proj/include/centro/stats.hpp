#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace centro::stats {

struct SampleMoments {
  double mean = 0;
  double variance = 0;  // unbiased (n - 1)
  double skewness = 0;
  double excess_kurtosis = 0;
};

/// Plain moment estimators: skewness m3/m2^1.5 and kurtosis m4/m2² - 3 from
/// central moments with divisor n.
SampleMoments sample_moments(std::span<const double> x);

double normal_cdf(double x, double mean = 0.0, double variance = 1.0);

/// Two-sided one-sample KS distance sup|F_n - F|.
double ks_statistic(std::span<const double> samples, const std::function<double(double)>& cdf);

/// Asymptotic Kolmogorov survival function with Stephens' small-sample
/// correction, P(D_n > d).
double ks_pvalue(double d, std::size_t n);

/// Upper tail of the chi-square distribution.
double chi_square_pvalue(double statistic, double dof);

struct Histogram {
  std::vector<double> edges;  // bins + 1 values, edges.front() == min, edges.back() == max
  std::vector<std::size_t> counts;
};

/// Equal-width bins spanning [min, max] of the samples; the max lands in the
/// last bin.
Histogram histogram(std::span<const double> samples, std::size_t bins);

}  // namespace centro::stats
