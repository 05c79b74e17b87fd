#pragma once

#include <functional>
#include <span>

namespace rggu {

/// Standard normal CDF, 0.5*erfc(-x/sqrt 2); relative error near machine
/// precision over the whole real line (max abs error well below 1e-12).
double normal_cdf(double x) noexcept;

/// Inverse of normal_cdf on (0, 1).
double normal_quantile(double p);

/// Survival function of chi-squared with one degree of freedom,
/// erfc(sqrt(t/2)).
double chi2_1_survival(double t);

/// CDF of (Z + mu)^2 with Z ~ N(0,1) (noncentral chi-squared, 1 d.o.f.).
double noncentral_chi2_1_cdf(double t, double mu) noexcept;

/// Kolmogorov-Smirnov distance sup|F_m - F| between the empirical CDF of
/// `sorted` (ascending) and a continuous CDF.
double ks_distance_sorted(std::span<const double> sorted,
                          const std::function<double(double)>& cdf);

}  // namespace rggu
