#pragma once

#include <span>
#include <vector>

#include "rggu/core.hpp"

namespace rggu {

/// Euclidean norm of the coordinate differences wrapped onto the unit torus,
/// min(|dx|, 1 - |dx|) per axis.
double toroidal_distance(std::span<const double> x, std::span<const double> y);

struct NNConfig {
  std::size_t J = 1;
  double beta = 1.0;
};

/// Sum over points x and their J nearest toroidal neighbours x^(k) of
/// (kappa_d * n * |x - x^(k)|^d)^beta. Brute force O(n^2 log J); ties go to
/// the smaller index.
double nn_statistic(const PointCloud& cloud, const NNConfig& cfg);

/// Small NN values mean too-regular spacing, large ones clustering; which
/// tail carries power depends on beta, so the caller picks.
enum class NnRejection { TwoSided, Lower, Upper };

/// Critical values for an NN rejection region at level alpha from null
/// draws. TwoSided splits alpha equally between the tails.
struct NnCriticalValues {
  double lower;  // reject when statistic < lower (or -inf if unused)
  double upper;  // reject when statistic > upper (or +inf if unused)
};
NnCriticalValues nn_critical_values(std::span<const double> null_draws, double alpha,
                                    NnRejection mode = NnRejection::TwoSided);
bool nn_rejects(double statistic, const NnCriticalValues& crit);

struct BRConfig {
  double h = 0.1;
};

/// The four pieces of the fixed-bandwidth Bickel-Rosenblatt statistic for
/// d = 2 with a Gaussian product kernel.
struct BRTerms {
  double i21;
  double i22;
  double v0;
  double convolution;  // n (V_h * U-bar * U)(0)

  double total() const noexcept { return -i21 + i22 + v0 + convolution; }
};

BRTerms br_terms(const PointCloud& cloud, const BRConfig& cfg);
double br_statistic(const PointCloud& cloud, const BRConfig& cfg);

}  // namespace rggu
