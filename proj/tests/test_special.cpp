#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "rggu/rng.hpp"
#include "rggu/special.hpp"
#include "test_support.hpp"

namespace rggu {
namespace {

TEST(NormalCdf, MatchesHighPrecisionValues) {
  // mpmath ncdf at 20 digits
  EXPECT_NEAR(normal_cdf(1.3), 0.90319951541438966685, 1e-15);
  EXPECT_NEAR(normal_cdf(-7.0) / 1.2798125438858350044e-12, 1.0, 1e-13);
  EXPECT_NEAR(normal_cdf(-20.0) / 2.7536241186062336951e-89, 1.0, 1e-13);
  EXPECT_DOUBLE_EQ(normal_cdf(0.0), 0.5);
}

TEST(NormalCdf, SymmetricAndMonotone) {
  testing::Gen gen(21);
  for (int i = 0; i < 1000; ++i) {
    const double x = gen.uniform(-10.0, 10.0);
    const double y = x + gen.uniform(1e-3, 1.0);
    EXPECT_NEAR(normal_cdf(x) + normal_cdf(-x), 1.0, 1e-15);
    EXPECT_LE(normal_cdf(x), normal_cdf(y));
  }
}

TEST(NormalQuantile, InvertsTheCdf) {
  // mpmath: Phi^{-1}(sqrt 0.9) and Phi^{-1}(0.9^{1/3})
  EXPECT_NEAR(normal_quantile(std::sqrt(0.9)), 1.6322187896168660836, 1e-13);
  EXPECT_NEAR(normal_quantile(std::cbrt(0.9)), 1.8182807674634991023, 1e-13);
  testing::Gen gen(22);
  for (int i = 0; i < 500; ++i) {
    const double p = gen.uniform(1e-10, 1.0 - 1e-10);
    EXPECT_NEAR(normal_cdf(normal_quantile(p)), p, 1e-13 * std::max(1.0, p / (1.0 - p)));
  }
  EXPECT_RGGU_ERROR(normal_quantile(0.0), ErrorCode::InvalidArgument);
  EXPECT_RGGU_ERROR(normal_quantile(1.0), ErrorCode::InvalidArgument);
}

TEST(Chi2Survival, ReferenceValues) {
  EXPECT_DOUBLE_EQ(chi2_1_survival(0.0), 1.0);
  EXPECT_NEAR(chi2_1_survival(3.8415), 0.049998772071222269855, 1e-15);
  EXPECT_NEAR(chi2_1_survival(6.6349), 0.0099999809194220838814, 1e-15);
  EXPECT_NEAR(chi2_1_survival(3.8414588206941259584), 0.05, 1e-15);
  EXPECT_RGGU_ERROR(chi2_1_survival(-1e-9), ErrorCode::InvalidArgument);
}

TEST(NoncentralChi2, ReducesToCentralAndMatchesSimulation) {
  for (double t : {0.1, 1.0, 3.8415, 10.0}) {
    EXPECT_NEAR(noncentral_chi2_1_cdf(t, 0.0), 1.0 - chi2_1_survival(t), 1e-15);
  }
  EXPECT_DOUBLE_EQ(noncentral_chi2_1_cdf(0.0, 0.7), 0.0);
  RngStream rng(23, 0);
  const double mu = 0.6266570686577501256;
  const int m = 100000;
  int below = 0;
  for (int i = 0; i < m; ++i) {
    const double z = rng.normal() + mu;
    below += z * z <= 2.0;
  }
  const double p = noncentral_chi2_1_cdf(2.0, mu);
  EXPECT_NEAR(static_cast<double>(below) / m, p, 4.0 * std::sqrt(p * (1 - p) / m));
}

TEST(KsDistance, SmallForMatchingLawLargeOtherwise) {
  RngStream rng(24, 0);
  std::vector<double> u(20000);
  for (double& x : u) x = rng.uniform();
  std::sort(u.begin(), u.end());
  auto uniform_cdf = [](double x) { return std::clamp(x, 0.0, 1.0); };
  EXPECT_LT(ks_distance_sorted(u, uniform_cdf), 1.36 / std::sqrt(20000.0));
  auto shifted = [](double x) { return std::clamp(x - 0.1, 0.0, 1.0); };
  EXPECT_NEAR(ks_distance_sorted(u, shifted), 0.1, 0.02);
  const std::vector<double> single{0.5};
  EXPECT_DOUBLE_EQ(ks_distance_sorted(single, uniform_cdf), 0.5);
}

TEST(Chi2Survival, UniformUnderItsOwnLaw) {
  RngStream rng(25, 0);
  const int m = 100000;
  std::vector<double> p(m);
  for (double& x : p) {
    const double z = rng.normal();
    x = chi2_1_survival(z * z);
  }
  std::sort(p.begin(), p.end());
  EXPECT_LT(ks_distance_sorted(p, [](double x) { return std::clamp(x, 0.0, 1.0); }), 0.01);
}

}  // namespace
}  // namespace rggu
