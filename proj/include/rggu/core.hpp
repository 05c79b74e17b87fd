#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rggu {

/// Failure categories shared by every module. The C API maps these onto
/// status codes and the CLI onto exit codes.
enum class ErrorCode {
  InvalidArgument,
  InvalidDimension,
  DimensionMismatch,
  TooFewPoints,
  PointOutsideWindow,
  DuplicatePoints,
  RadiusTooLarge,
  InvalidMoments,
  DegenerateParameters,
  MissingCriticalValue,
  Parse,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Ordered list of points in window coordinates, stored row-major.
class PointCloud {
 public:
  PointCloud() = default;
  /// `coords` holds size()*dim values; every value must be finite.
  PointCloud(std::size_t dim, std::vector<double> coords);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  bool empty() const noexcept { return coords_.empty(); }

  std::span<const double> point(std::size_t i) const noexcept {
    return {coords_.data() + i * dim_, dim_};
  }
  double coord(std::size_t i, std::size_t axis) const noexcept {
    return coords_[i * dim_ + axis];
  }
  std::span<const double> coords() const noexcept { return coords_; }

  /// Multiplies every coordinate by `s`.
  PointCloud scaled(double s) const;

  bool operator==(const PointCloud&) const = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> coords_;
};

/// Observation region: the unit cube, or an axis-aligned box isotropically
/// rescaled to unit volume. The box's lower corner is the origin.
class Window {
 public:
  static Window unit_cube(std::size_t dim);
  /// Box with the given (original) side lengths; normalized by a single
  /// scale factor s = Vol^{-1/d}.
  static Window box(std::vector<double> original_sides);

  std::size_t dim() const noexcept { return sides_.size(); }
  bool is_unit_cube() const noexcept { return unit_cube_; }
  /// Side lengths after normalization (product is 1).
  std::span<const double> sides() const noexcept { return sides_; }
  std::span<const double> original_sides() const noexcept { return original_sides_; }
  double scale() const noexcept { return scale_; }
  double min_side() const noexcept;
  double volume() const noexcept;

  /// Closed containment test in normalized coordinates.
  bool contains(std::span<const double> point) const noexcept;
  /// Throws PointOutsideWindow / DimensionMismatch.
  void check_contains(const PointCloud& cloud) const;

  std::string describe() const;

 private:
  Window() = default;
  bool unit_cube_ = true;
  std::vector<double> sides_;
  std::vector<double> original_sides_;
  double scale_ = 1.0;
};

/// Box normalization: returns the unit-volume window; apply
/// `cloud.scaled(window.scale())` to move data into it.
Window normalize_window(std::span<const double> side_lengths);

/// "unit:d" or "box:L1,L2[,L3,...]"; boxes are normalized.
Window parse_window_spec(std::string_view spec);

/// Volume of the d-dimensional unit ball, pi^{d/2} / Gamma(d/2 + 1).
double unit_ball_volume(int d);

/// r = (k / (n kappa_d))^{1/d}; the expected average degree tends to k.
double radius_exact_regime(std::size_t n, int d, double k);
/// r = (k / (n^{3/2} kappa_d))^{1/d}; also drives n^2 r^{d+2} to 0 for d <= 3.
double radius_asymptotic_regime(std::size_t n, int d, double k);

enum class Regime { Exact, Asymptotic };
enum class Variant { Exact, Asymptotic };

std::string_view to_string(Regime regime) noexcept;
std::string_view to_string(Variant variant) noexcept;
Regime parse_regime(std::string_view text);
Variant parse_variant(std::string_view text);

/// Either a (regime, k) schedule or an explicit radius.
struct RadiusRule {
  Regime regime = Regime::Exact;
  double k = 5.0;
  std::optional<double> explicit_radius;

  static RadiusRule schedule(Regime regime, double k) { return {regime, k, std::nullopt}; }
  static RadiusRule fixed(double r) { return {Regime::Exact, 0.0, r}; }

  /// Resolved radius in (0, 1]; throws RadiusTooLarge otherwise.
  double resolve(std::size_t n, int d) const;
};

struct TestConfig {
  double beta = 0.0;
  RadiusRule radius;
  Variant variant = Variant::Exact;
  int dim = 2;

  /// beta > -d/2, positive k or radius, d >= 1.
  void validate() const;
};

}  // namespace rggu
