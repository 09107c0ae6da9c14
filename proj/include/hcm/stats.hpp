#pragma once

#include <cstdint>
#include <vector>

namespace hcm {

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::int64_t n_first = 0;
  std::int64_t n_second = 0;
};

// Two-sample Kolmogorov-Smirnov. Ties are handled by advancing both empirical
// CDFs through equal values before comparing. p-value from the asymptotic
// Kolmogorov distribution with the small-sample correction of Stephens.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

// Survival function of the Kolmogorov distribution, Q(x) = 2 sum (-1)^{j-1} exp(-2 j^2 x^2).
double kolmogorov_q(double x);

double mean(const std::vector<double>& v);
double median(std::vector<double> v);

// Interpolated quantile (linear between order statistics), q in [0,1].
double quantile(std::vector<double> v, double q);

// Least-squares slope of y against x.
double regression_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace hcm
