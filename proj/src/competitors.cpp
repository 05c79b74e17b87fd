#include "rggu/competitors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "rggu/special.hpp"
#include "rggu/uniformity.hpp"

namespace rggu {

double toroidal_distance(std::span<const double> x, std::span<const double> y) {
  double d2 = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    double diff = std::abs(x[k] - y[k]);
    diff = std::min(diff, 1.0 - diff);
    d2 += diff * diff;
  }
  return std::sqrt(d2);
}

double nn_statistic(const PointCloud& cloud, const NNConfig& cfg) {
  const std::size_t n = cloud.size();
  if (cfg.J < 1) throw Error(ErrorCode::InvalidArgument, "J must be at least 1");
  if (cfg.J >= n) {
    throw Error(ErrorCode::TooFewPoints, "J must be smaller than the number of points");
  }
  if (!(cfg.beta > 0.0)) throw Error(ErrorCode::InvalidArgument, "NN exponent must be positive");
  const int d = static_cast<int>(cloud.dim());
  const double factor = unit_ball_volume(d) * static_cast<double>(n);

  // (distance, index) ordered lexicographically gives the index tie-break.
  std::vector<std::pair<double, std::size_t>> nearest;
  nearest.reserve(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    nearest.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) nearest.emplace_back(toroidal_distance(cloud.point(i), cloud.point(j)), j);
    }
    const auto kth = nearest.begin() + static_cast<std::ptrdiff_t>(cfg.J);
    std::partial_sort(nearest.begin(), kth, nearest.end());
    for (auto it = nearest.begin(); it != kth; ++it) {
      const double base = factor * std::pow(it->first, d);
      total += base > 0.0 ? std::pow(base, cfg.beta) : 0.0;
    }
  }
  return total;
}

NnCriticalValues nn_critical_values(std::span<const double> null_draws, double alpha,
                                    NnRejection mode) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, 1)");
  }
  constexpr double inf = std::numeric_limits<double>::infinity();
  switch (mode) {
    case NnRejection::Lower:
      return {empirical_quantile(null_draws, alpha), inf};
    case NnRejection::Upper:
      return {-inf, empirical_quantile(null_draws, 1.0 - alpha)};
    case NnRejection::TwoSided:
      break;
  }
  return {empirical_quantile(null_draws, 0.5 * alpha),
          empirical_quantile(null_draws, 1.0 - 0.5 * alpha)};
}

bool nn_rejects(double statistic, const NnCriticalValues& crit) {
  return statistic < crit.lower || statistic > crit.upper;
}

BRTerms br_terms(const PointCloud& cloud, const BRConfig& cfg) {
  if (cloud.dim() != 2) {
    throw Error(ErrorCode::InvalidDimension, "the BR statistic is implemented for d = 2 only");
  }
  const std::size_t n = cloud.size();
  if (n < 2) throw Error(ErrorCode::TooFewPoints, "n >= 2 required");
  const double h = cfg.h;
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw Error(ErrorCode::InvalidArgument, "bandwidth must be positive");
  }
  constexpr double pi = std::numbers::pi;
  const double nn = static_cast<double>(n);
  const double sh = std::numbers::sqrt2 * h;
  const double h2 = h * h;
  const double h4 = h2 * h2;

  BRTerms t{};
  for (std::size_t i = 0; i < n; ++i) {
    const double x1 = cloud.coord(i, 0);
    const double x2 = cloud.coord(i, 1);
    t.i21 += (normal_cdf((x1 - 1.0) / sh) - normal_cdf(x1 / sh)) *
             (normal_cdf((x2 - 1.0) / sh) - normal_cdf(x2 / sh));
  }
  t.i21 *= 2.0;

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d1 = cloud.coord(i, 0) - cloud.coord(j, 0);
      const double d2 = cloud.coord(i, 1) - cloud.coord(j, 1);
      t.i22 += std::exp(-d1 * d1 / (4.0 * h2)) * std::exp(-d2 * d2 / (4.0 * h2));
    }
  }
  t.i22 *= 1.0 / (2.0 * pi * nn * h4);

  t.v0 = 1.0 / (4.0 * pi * h4);

  const double bracket = std::sqrt(pi) * (normal_cdf(1.0 / sh) - 0.5) +
                         h * (std::exp(-1.0 / (4.0 * h2)) - 1.0);
  t.convolution = 4.0 * nn / (pi * h2) * bracket * bracket;
  return t;
}

double br_statistic(const PointCloud& cloud, const BRConfig& cfg) {
  return br_terms(cloud, cfg).total();
}

}  // namespace rggu
