#include "stats.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace cksvar {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw DimensionError("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  return d;
}

double ks_one_sample(std::vector<double> a, const std::function<double(double)>& cdf) {
  if (a.empty()) throw DimensionError("ks_one_sample: empty sample");
  std::sort(a.begin(), a.end());
  const double n = static_cast<double>(a.size());
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double F = cdf(a[i]);
    d = std::max({d, (i + 1) / n - F, F - i / n});
  }
  return d;
}

double ks_critical(double alpha, std::size_t n, std::size_t m) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DimensionError("ks_critical: alpha must be in (0,1)");
  double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
  return c * std::sqrt(static_cast<double>(n + m) / (static_cast<double>(n) * m));
}

double quantile(std::vector<double> v, double q) {
  if (v.empty()) throw DimensionError("quantile: empty sample");
  std::sort(v.begin(), v.end());
  double pos = q * (v.size() - 1);
  auto lo = static_cast<std::size_t>(std::floor(pos));
  std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - lo) * (v[hi] - v[lo]);
}

double median(std::vector<double> v) { return quantile(std::move(v), 0.5); }

}  // namespace cksvar
