#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "rggu/core.hpp"
#include "rggu/edge_stats.hpp"

namespace rggu {

struct TestOutcome {
  double statistic = 0.0;     // T_e or T_a, always >= 0
  double p_asymptotic = 1.0;  // chi-squared(1) survival at `statistic`
  std::optional<double> p_empirical;
  // Significance level -> decision from p_asymptotic, at 0.01, 0.05, 0.10.
  std::map<double, bool> reject_at;
  double radius = 0.0;
  Variant variant = Variant::Exact;
  double edge_sum = 0.0;  // L_n(beta)
  double center = 0.0;    // null mean used for centering
  double scale = 0.0;     // asymptotic null standard deviation
};

/// Squared standardized edge sum, centred by the exact null mean of the
/// window. The cloud must lie in `window`.
TestOutcome t_exact(const PointCloud& cloud, const TestConfig& cfg, const Window& window);

/// Squared standardized edge sum, centred by the asymptotic mean. Does not
/// look at the window beyond assuming unit volume.
TestOutcome t_asym(const PointCloud& cloud, const TestConfig& cfg);

/// Dispatches on cfg.variant.
TestOutcome run_test(const PointCloud& cloud, const TestConfig& cfg, const Window& window);

/// erfc(sqrt(t/2)); throws for t < 0.
double chi2_1_pvalue(double t);

/// (1 + #{draws >= observed}) / (1 + #draws).
double empirical_pvalue(double observed, std::span<const double> null_draws);

/// Order statistic number ceil(level * m) (1-based) of the sample.
double empirical_quantile(std::span<const double> samples, double level);
/// Same, for a sample already sorted ascending.
double empirical_quantile_sorted(std::span<const double> sorted, double level);

/// Precomputes radius, centre and scale for a fixed (cfg, window, n) so that
/// Monte Carlo loops only pay for the edge sum. Holds a reusable CellList, so
/// one instance per thread.
class StatisticEvaluator {
 public:
  StatisticEvaluator(const TestConfig& cfg, const Window& window, std::size_t n);

  /// (L - centre) / scale.
  double standardized(const PointCloud& cloud);
  /// standardized(cloud)^2.
  double statistic(const PointCloud& cloud) {
    const double z = standardized(cloud);
    return z * z;
  }

  double radius() const noexcept { return radius_; }
  double center() const noexcept { return center_; }
  double scale() const noexcept { return scale_; }

 private:
  double beta_;
  double radius_;
  double center_;
  double scale_;
  std::size_t n_;
  CellList grid_;
};

}  // namespace rggu
