#pragma once

#include <functional>
#include <vector>

namespace cksvar {

double normal_cdf(double x);

// Two-sample Kolmogorov-Smirnov distance; ties handled by stepping past equal values.
double ks_two_sample(std::vector<double> a, std::vector<double> b);
double ks_one_sample(std::vector<double> a, const std::function<double(double)>& cdf);

// Asymptotic critical value c(alpha) * sqrt((n+m)/(n m)).
double ks_critical(double alpha, std::size_t n, std::size_t m);

double median(std::vector<double> v);
double quantile(std::vector<double> v, double q);

}  // namespace cksvar
