#include "rggu/special.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/erf.hpp>

#include "rggu/core.hpp"

namespace rggu {

double normal_cdf(double x) noexcept {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "normal quantile needs p in (0,1)");
  }
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

double chi2_1_survival(double t) {
  if (!(t >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "chi-squared statistic must be non-negative");
  }
  return std::erfc(std::sqrt(0.5 * t));
}

double noncentral_chi2_1_cdf(double t, double mu) noexcept {
  if (t <= 0.0) return 0.0;
  const double s = std::sqrt(t);
  return normal_cdf(s - mu) - normal_cdf(-s - mu);
}

double ks_distance_sorted(std::span<const double> sorted,
                          const std::function<double(double)>& cdf) {
  const double m = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / m - f, f - static_cast<double>(i) / m});
  }
  return d;
}

}  // namespace rggu
