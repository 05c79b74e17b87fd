#pragma once

#include <cstdint>
#include <optional>

#include "rggu/core.hpp"

namespace rggu {

/// E L_n(beta) under uniform points on [0,1]^d, d in {2, 3}, r <= 1.
double exact_mean_unit_cube(std::size_t n, double r, double beta, int d);

/// E L_n(beta) under uniform points on a unit-volume box, d in {1, 2, 3}.
/// Uses the covariogram prod_j (L_j - |y_j|) of the box: the radial part of
/// the integral is done in closed form for every direction and the angular
/// part by Gauss-Legendre, doubled until two passes agree to 1e-6.
/// Requires r <= shortest side.
double exact_mean_box(const Window& window, std::size_t n, double r, double beta);

/// Exact null mean for any supported window: the closed form on the unit
/// cube (d = 2, 3), quadrature otherwise.
double exact_mean(const Window& window, std::size_t n, double r, double beta);

/// d kappa_d / (2 (beta + d)) * n (n - 1) * r^(beta + d).
double asymptotic_mean(std::size_t n, double r, double beta, int d);

/// sqrt(d kappa_d / (2 (2 beta + d))) * n * r^(beta + d/2); beta > -d/2.
double null_std(std::size_t n, double r, double beta, int d);

struct VarianceCoeffs {
  double sigma1;
  double sigma2;
};

/// Coefficients of the asymptotic variance for a density f, given the
/// integrals of f^2 and f^3 over the window. Needs int_f3 >= int_f2^2 >= 1
/// (up to 1e-12 relative slack).
VarianceCoeffs asymptotic_variance_coeffs(double int_f2, double int_f3, double beta, int d);

/// sigma1 n^2 r^(2 beta + d) + sigma2 n^3 r^(2 beta + 2d).
double asymptotic_variance(const VarianceCoeffs& c, std::size_t n, double r, double beta, int d);

struct McEstimate {
  double value;
  double std_error;
};

/// Monte Carlo estimate of the integral over W of h(x)^2 where
/// h(x) = int_W |x - y|^beta 1{|x - y| <= r} dy and W = [0,1]^d.
/// `budget` is the number of outer sample points (>= 10^4).
McEstimate integral_h_squared_mc(double r, double beta, int d, std::size_t budget,
                                 std::uint64_t seed);

/// Var L_n(beta) for uniform points on [0,1]^d, d in {1, 2, 3}. Only the
/// integral of h^2 is stochastic; the other two terms are closed forms.
McEstimate exact_variance_mc(std::size_t n, double r, double beta, int d, std::size_t budget,
                             std::uint64_t seed);

enum class MomentSource { ExactClosedForm, ExactQuadrature, ExactIntegralMc, Asymptotic };

std::string_view to_string(MomentSource source) noexcept;

struct MomentReport {
  double mean = 0.0;
  MomentSource mean_source = MomentSource::ExactClosedForm;
  std::optional<double> variance;
  std::optional<double> variance_std_error;
  std::optional<MomentSource> variance_source;
};

/// Null mean plus, when `variance_budget` > 0 and the window is the unit
/// cube, the Monte Carlo exact variance; otherwise the asymptotic variance.
MomentReport null_moments(const Window& window, std::size_t n, double r, double beta,
                          std::size_t variance_budget = 0, std::uint64_t seed = 0);

}  // namespace rggu
