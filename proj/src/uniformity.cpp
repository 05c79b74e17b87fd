#include "rggu/uniformity.hpp"

#include <algorithm>
#include <cmath>

#include "rggu/moments.hpp"
#include "rggu/special.hpp"

namespace rggu {

namespace {

struct Standardization {
  double radius;
  double center;
  double scale;
};

Standardization standardization(const TestConfig& cfg, const Window* window, std::size_t n) {
  cfg.validate();
  if (n < 2) throw Error(ErrorCode::TooFewPoints, "n >= 2 required");
  const double r = cfg.radius.resolve(n, cfg.dim);
  Standardization s{r, 0.0, null_std(n, r, cfg.beta, cfg.dim)};
  if (cfg.variant == Variant::Exact) {
    if (window == nullptr) {
      throw Error(ErrorCode::InvalidArgument, "the exact variant needs a window");
    }
    if (window->dim() != static_cast<std::size_t>(cfg.dim)) {
      throw Error(ErrorCode::DimensionMismatch, "window and configuration disagree on d");
    }
    if (r > window->min_side() * (1.0 + 1e-12)) {
      throw Error(ErrorCode::RadiusTooLarge, "radius exceeds the shortest window side");
    }
    s.center = exact_mean(*window, n, r, cfg.beta);
  } else {
    s.center = asymptotic_mean(n, r, cfg.beta, cfg.dim);
  }
  return s;
}

void check_cloud(const PointCloud& cloud, const TestConfig& cfg) {
  if (cloud.dim() != static_cast<std::size_t>(cfg.dim)) {
    throw Error(ErrorCode::DimensionMismatch,
                "points have dimension " + std::to_string(cloud.dim()) +
                    " but the test is configured for d = " + std::to_string(cfg.dim));
  }
  if (cloud.size() < 2) throw Error(ErrorCode::TooFewPoints, "n >= 2 required");
}

TestOutcome finish(const PointCloud& cloud, const TestConfig& cfg, const Standardization& s) {
  TestOutcome out;
  out.radius = s.radius;
  out.variant = cfg.variant;
  out.center = s.center;
  out.scale = s.scale;
  out.edge_sum = edge_power_sum(cloud, s.radius, cfg.beta);
  const double z = (out.edge_sum - s.center) / s.scale;
  out.statistic = z * z;
  out.p_asymptotic = chi2_1_survival(out.statistic);
  for (double level : {0.01, 0.05, 0.10}) out.reject_at[level] = out.p_asymptotic < level;
  return out;
}

}  // namespace

TestOutcome t_exact(const PointCloud& cloud, const TestConfig& cfg, const Window& window) {
  TestConfig exact = cfg;
  exact.variant = Variant::Exact;
  check_cloud(cloud, exact);
  window.check_contains(cloud);
  return finish(cloud, exact, standardization(exact, &window, cloud.size()));
}

TestOutcome t_asym(const PointCloud& cloud, const TestConfig& cfg) {
  TestConfig asym = cfg;
  asym.variant = Variant::Asymptotic;
  check_cloud(cloud, asym);
  return finish(cloud, asym, standardization(asym, nullptr, cloud.size()));
}

TestOutcome run_test(const PointCloud& cloud, const TestConfig& cfg, const Window& window) {
  if (cfg.variant == Variant::Exact) return t_exact(cloud, cfg, window);
  window.check_contains(cloud);
  return t_asym(cloud, cfg);
}

double chi2_1_pvalue(double t) { return chi2_1_survival(t); }

double empirical_pvalue(double observed, std::span<const double> null_draws) {
  if (null_draws.empty()) {
    throw Error(ErrorCode::InvalidArgument, "empirical p-value needs at least one null draw");
  }
  const auto exceed = std::count_if(null_draws.begin(), null_draws.end(),
                                    [&](double v) { return v >= observed; });
  return (1.0 + static_cast<double>(exceed)) / (1.0 + static_cast<double>(null_draws.size()));
}

double empirical_quantile_sorted(std::span<const double> sorted, double level) {
  if (sorted.empty()) throw Error(ErrorCode::InvalidArgument, "quantile of an empty sample");
  if (!(level > 0.0 && level < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "quantile level must lie in (0, 1)");
  }
  const double m = static_cast<double>(sorted.size());
  // Guard against level*m landing a hair above an integer.
  auto rank = static_cast<std::size_t>(std::ceil(level * m - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

double empirical_quantile(std::span<const double> samples, double level) {
  std::vector<double> copy(samples.begin(), samples.end());
  std::sort(copy.begin(), copy.end());
  return empirical_quantile_sorted(copy, level);
}

StatisticEvaluator::StatisticEvaluator(const TestConfig& cfg, const Window& window, std::size_t n)
    : beta_(cfg.beta), n_(n) {
  const Standardization s = standardization(cfg, &window, n);
  radius_ = s.radius;
  center_ = s.center;
  scale_ = s.scale;
}

double StatisticEvaluator::standardized(const PointCloud& cloud) {
  if (cloud.size() != n_) {
    throw Error(ErrorCode::InvalidArgument, "cloud size differs from the evaluator's n");
  }
  return (edge_power_sum(cloud, radius_, beta_, grid_) - center_) / scale_;
}

}  // namespace rggu
