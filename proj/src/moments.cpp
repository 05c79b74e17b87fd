#include "rggu/moments.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>

#include "rggu/rng.hpp"

namespace rggu {

namespace {

constexpr double kPi = std::numbers::pi;

double pairs(std::size_t n) {
  const double nn = static_cast<double>(n);
  return 0.5 * nn * (nn - 1.0);
}

void check_mean_args(double r, double beta, int d) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw Error(ErrorCode::InvalidArgument, "radius must be positive");
  }
  if (!std::isfinite(beta) || !(beta > -d)) {
    throw Error(ErrorCode::InvalidArgument, "beta must exceed -d for the mean to exist");
  }
}

// Integral over B(0,r) of |y|^beta prod_j (1 - |y_j|), the unit-cube pair
// integral. Valid for r <= 1.
double pair_integral_unit_cube(double r, double beta, int d) {
  const auto p = [&](double e) { return std::pow(r, beta + e) / (beta + e); };
  switch (d) {
    case 1:
      return 2.0 * p(1) - 2.0 * p(2);
    case 2:
      return 2.0 * kPi * p(2) - 8.0 * p(3) + 2.0 * p(4);
    case 3:
      return 4.0 * kPi * p(3) - 6.0 * kPi * p(4) + 8.0 * p(5) - p(6);
    default:
      throw Error(ErrorCode::InvalidDimension, "closed-form mean needs d in {1, 2, 3}");
  }
}

// Radial integral int_0^r rho^(beta+d-1) prod_j (L_j - rho u_j) d rho for a
// fixed direction u in the positive orthant, done exactly by expanding the
// product into a polynomial in rho.
double radial_integral(std::span<const double> sides, std::span<const double> u, double r,
                       double beta) {
  const std::size_t d = sides.size();
  std::array<double, 4> coef{1.0, 0.0, 0.0, 0.0};
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t m = j + 2; m-- > 0;) {
      coef[m] = coef[m] * sides[j] - (m > 0 ? coef[m - 1] * u[j] : 0.0);
    }
  }
  double total = 0.0;
  const double base = beta + static_cast<double>(d);
  for (std::size_t m = 0; m <= d; ++m) {
    total += coef[m] * std::pow(r, base + static_cast<double>(m)) / (base + static_cast<double>(m));
  }
  return total;
}

// Composite 15-point Gauss-Legendre on [a, b] with `panels` equal pieces.
template <class F>
double composite_gauss(F&& f, double a, double b, int panels) {
  using Rule = boost::math::quadrature::gauss<double, 15>;
  const double h = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) total += Rule::integrate(f, a + p * h, a + (p + 1) * h);
  return total;
}

double pair_integral_box(std::span<const double> sides, double r, double beta, int panels) {
  const int d = static_cast<int>(sides.size());
  const double half_pi = 0.5 * kPi;
  if (d == 1) {
    const std::array<double, 1> u{1.0};
    return 2.0 * radial_integral(sides, u, r, beta);
  }
  if (d == 2) {
    const auto f = [&](double theta) {
      const std::array<double, 2> u{std::cos(theta), std::sin(theta)};
      return radial_integral(sides, u, r, beta);
    };
    return 4.0 * composite_gauss(f, 0.0, half_pi, panels);
  }
  const auto outer = [&](double phi) {
    const double s = std::sin(phi);
    const double c = std::cos(phi);
    const auto inner = [&](double theta) {
      const std::array<double, 3> u{s * std::cos(theta), s * std::sin(theta), c};
      return radial_integral(sides, u, r, beta);
    };
    return s * composite_gauss(inner, 0.0, half_pi, panels);
  };
  return 8.0 * composite_gauss(outer, 0.0, half_pi, panels);
}

}  // namespace

double exact_mean_unit_cube(std::size_t n, double r, double beta, int d) {
  if (d != 2 && d != 3) {
    throw Error(ErrorCode::InvalidDimension, "unit-cube closed form is available for d = 2, 3");
  }
  check_mean_args(r, beta, d);
  if (r > 1.0) throw Error(ErrorCode::RadiusTooLarge, "closed-form mean needs r <= 1");
  return pairs(n) * pair_integral_unit_cube(r, beta, d);
}

double exact_mean_box(const Window& window, std::size_t n, double r, double beta) {
  const int d = static_cast<int>(window.dim());
  if (d < 1 || d > 3) {
    throw Error(ErrorCode::InvalidDimension, "box mean is implemented for d = 1, 2, 3");
  }
  check_mean_args(r, beta, d);
  if (r > window.min_side() * (1.0 + 1e-12)) {
    throw Error(ErrorCode::RadiusTooLarge, "radius exceeds the shortest side of the window");
  }
  const auto sides = window.sides();
  double previous = pair_integral_box(sides, r, beta, 1);
  // 64 panels of 15 nodes per angle is the refinement ceiling.
  for (int panels = 2; panels <= 64; panels *= 2) {
    const double current = pair_integral_box(sides, r, beta, panels);
    if (std::abs(current - previous) <= 1e-6 * std::abs(current)) {
      return pairs(n) * current;
    }
    previous = current;
  }
  return pairs(n) * previous;
}

double exact_mean(const Window& window, std::size_t n, double r, double beta) {
  const int d = static_cast<int>(window.dim());
  if (window.is_unit_cube() && (d == 2 || d == 3)) return exact_mean_unit_cube(n, r, beta, d);
  return exact_mean_box(window, n, r, beta);
}

double asymptotic_mean(std::size_t n, double r, double beta, int d) {
  check_mean_args(r, beta, d);
  const double nn = static_cast<double>(n);
  return d * unit_ball_volume(d) / (2.0 * (beta + d)) * nn * (nn - 1.0) * std::pow(r, beta + d);
}

double null_std(std::size_t n, double r, double beta, int d) {
  if (!std::isfinite(beta) || !(2.0 * beta + d > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "beta must exceed -d/2 for the null variance");
  }
  if (!(r > 0.0)) throw Error(ErrorCode::InvalidArgument, "radius must be positive");
  return std::sqrt(d * unit_ball_volume(d) / (2.0 * (2.0 * beta + d))) * static_cast<double>(n) *
         std::pow(r, beta + 0.5 * d);
}

VarianceCoeffs asymptotic_variance_coeffs(double int_f2, double int_f3, double beta, int d) {
  constexpr double slack = 1e-12;
  if (!(int_f2 >= 1.0 - slack) || !(int_f3 >= int_f2 * int_f2 * (1.0 - slack))) {
    throw Error(ErrorCode::InvalidMoments,
                "density moments must satisfy int f^3 >= (int f^2)^2 >= 1");
  }
  if (!(2.0 * beta + d > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "beta must exceed -d/2");
  }
  const double kappa = unit_ball_volume(d);
  const double sigma1 = d * kappa / (2.0 * (2.0 * beta + d)) * int_f2;
  const double lead = d * kappa / (beta + d);
  const double sigma2 = std::max(0.0, lead * lead * (int_f3 - int_f2 * int_f2));
  return {sigma1, sigma2};
}

double asymptotic_variance(const VarianceCoeffs& c, std::size_t n, double r, double beta, int d) {
  const double nn = static_cast<double>(n);
  return c.sigma1 * nn * nn * std::pow(r, 2.0 * beta + d) +
         c.sigma2 * nn * nn * nn * std::pow(r, 2.0 * beta + 2.0 * d);
}

namespace {

// E[D(X)^2] for X uniform on [0,1]^d, where D(x) is the part of the ball
// integral around x cut off by the cube:
//   D(x) = int_{B(0,r)} |u|^beta 1{x + u outside} du = C * P(x + U outside)
// with U having density proportional to |u|^beta on the ball. Points farther
// than r from every face have D = 0, so X is drawn from the boundary shell
// only. Each X gets m inner draws; c(c-1)/(m(m-1)) is unbiased for P^2.
McEstimate deficit_second_moment(double r, double beta, int d, std::size_t budget,
                                 std::uint64_t seed) {
  constexpr std::size_t kInner = 32;
  constexpr std::size_t kChunk = 1024;
  const double big_c = d * unit_ball_volume(d) * std::pow(r, beta + d) / (beta + d);
  const double interior = std::pow(std::max(0.0, 1.0 - 2.0 * r), d);
  const double shell = 1.0 - interior;

  double sum = 0.0;
  double sum_sq = 0.0;
  std::array<double, 3> x{};
  std::array<double, 3> u{};
  for (std::size_t start = 0; start < budget; start += kChunk) {
    RngStream rng(seed, start / kChunk);
    const std::size_t stop = std::min(budget, start + kChunk);
    for (std::size_t s = start; s < stop; ++s) {
      bool in_shell = false;
      while (!in_shell) {
        for (int k = 0; k < d; ++k) {
          x[k] = rng.uniform();
          if (x[k] < r || x[k] > 1.0 - r) in_shell = true;
        }
      }
      std::size_t outside = 0;
      for (std::size_t t = 0; t < kInner; ++t) {
        double norm2 = 0.0;
        for (int k = 0; k < d; ++k) {
          u[k] = rng.normal();
          norm2 += u[k] * u[k];
        }
        const double rho = r * std::pow(rng.uniform_open(), 1.0 / (beta + d));
        const double scale = rho / std::sqrt(norm2);
        bool out = false;
        for (int k = 0; k < d; ++k) {
          const double y = x[k] + scale * u[k];
          if (y < 0.0 || y > 1.0) out = true;
        }
        outside += out ? 1 : 0;
      }
      const double p2 = static_cast<double>(outside * (outside - (outside > 0 ? 1 : 0))) /
                        static_cast<double>(kInner * (kInner - 1));
      const double value = shell * big_c * big_c * p2;
      sum += value;
      sum_sq += value * value;
    }
  }
  const double m = static_cast<double>(budget);
  const double mean = sum / m;
  const double var = std::max(0.0, (sum_sq / m - mean * mean) * m / (m - 1.0));
  return {mean, std::sqrt(var / m)};
}

void check_variance_args(double r, double beta, int d, std::size_t budget) {
  if (d < 1 || d > 3) throw Error(ErrorCode::InvalidDimension, "exact variance supports d <= 3");
  if (!(r > 0.0) || r > 1.0) throw Error(ErrorCode::RadiusTooLarge, "exact variance needs 0 < r <= 1");
  if (!(2.0 * beta + d > 0.0)) throw Error(ErrorCode::InvalidArgument, "beta must exceed -d/2");
  if (budget < 10000) throw Error(ErrorCode::InvalidArgument, "Monte Carlo budget must be >= 1e4");
}

}  // namespace

McEstimate integral_h_squared_mc(double r, double beta, int d, std::size_t budget,
                                 std::uint64_t seed) {
  check_variance_args(r, beta, d, budget);
  const double big_c = d * unit_ball_volume(d) * std::pow(r, beta + d) / (beta + d);
  const double mean_d = big_c - pair_integral_unit_cube(r, beta, d);
  const McEstimate d2 = deficit_second_moment(r, beta, d, budget, seed);
  return {big_c * big_c - 2.0 * big_c * mean_d + d2.value, d2.std_error};
}

McEstimate exact_variance_mc(std::size_t n, double r, double beta, int d, std::size_t budget,
                             std::uint64_t seed) {
  check_variance_args(r, beta, d, budget);
  const double nn = static_cast<double>(n);
  const double m1 = pair_integral_unit_cube(r, beta, d);
  const double m2 = pair_integral_unit_cube(r, 2.0 * beta, d);
  const double big_c = d * unit_ball_volume(d) * std::pow(r, beta + d) / (beta + d);
  const double mean_d = big_c - m1;
  const McEstimate d2 = deficit_second_moment(r, beta, d, budget, seed);
  // Var h(X) = Var D(X), with E D known exactly.
  const double var_h = d2.value - mean_d * mean_d;
  const double triple = nn * (nn - 1.0) * (nn - 2.0);
  const double estimate = pairs(n) * (m2 - m1 * m1) + triple * var_h;
  return {std::max(0.0, estimate), triple * d2.std_error};
}

std::string_view to_string(MomentSource source) noexcept {
  switch (source) {
    case MomentSource::ExactClosedForm: return "exact-closed-form";
    case MomentSource::ExactQuadrature: return "exact-quadrature";
    case MomentSource::ExactIntegralMc: return "exact-integral-mc";
    case MomentSource::Asymptotic: return "asymptotic";
  }
  return "unknown";
}

MomentReport null_moments(const Window& window, std::size_t n, double r, double beta,
                          std::size_t variance_budget, std::uint64_t seed) {
  const int d = static_cast<int>(window.dim());
  MomentReport report;
  report.mean = exact_mean(window, n, r, beta);
  report.mean_source = window.is_unit_cube() && (d == 2 || d == 3)
                           ? MomentSource::ExactClosedForm
                           : MomentSource::ExactQuadrature;
  if (variance_budget > 0 && window.is_unit_cube() && d <= 3) {
    const McEstimate v = exact_variance_mc(n, r, beta, d, variance_budget, seed);
    report.variance = v.value;
    report.variance_std_error = v.std_error;
    report.variance_source = MomentSource::ExactIntegralMc;
  } else if (2.0 * beta + d > 0.0) {
    const double s = null_std(n, r, beta, d);
    report.variance = s * s;
    report.variance_source = MomentSource::Asymptotic;
  }
  return report;
}

}  // namespace rggu
