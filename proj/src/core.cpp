#include "rggu/core.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

namespace rggu {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid argument";
    case ErrorCode::InvalidDimension: return "invalid dimension";
    case ErrorCode::DimensionMismatch: return "dimension mismatch";
    case ErrorCode::TooFewPoints: return "too few points";
    case ErrorCode::PointOutsideWindow: return "point outside window";
    case ErrorCode::DuplicatePoints: return "duplicate points";
    case ErrorCode::RadiusTooLarge: return "radius too large";
    case ErrorCode::InvalidMoments: return "invalid moments";
    case ErrorCode::DegenerateParameters: return "degenerate parameters";
    case ErrorCode::MissingCriticalValue: return "missing critical value";
    case ErrorCode::Parse: return "parse error";
    case ErrorCode::Io: return "i/o error";
  }
  return "unknown error";
}

PointCloud::PointCloud(std::size_t dim, std::vector<double> coords)
    : dim_(dim), coords_(std::move(coords)) {
  if (dim_ == 0) {
    throw Error(ErrorCode::InvalidDimension, "point dimension must be positive");
  }
  if (coords_.size() % dim_ != 0) {
    throw Error(ErrorCode::DimensionMismatch,
                "coordinate count is not a multiple of the dimension");
  }
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (!std::isfinite(coords_[i])) {
      throw Error(ErrorCode::InvalidArgument,
                  "non-finite coordinate at point " + std::to_string(i / dim_));
    }
  }
}

PointCloud PointCloud::scaled(double s) const {
  std::vector<double> out(coords_.begin(), coords_.end());
  for (double& v : out) v *= s;
  return PointCloud(dim_, std::move(out));
}

Window Window::unit_cube(std::size_t dim) {
  if (dim == 0) throw Error(ErrorCode::InvalidDimension, "window dimension must be positive");
  Window w;
  w.unit_cube_ = true;
  w.sides_.assign(dim, 1.0);
  w.original_sides_.assign(dim, 1.0);
  w.scale_ = 1.0;
  return w;
}

Window Window::box(std::vector<double> original_sides) {
  if (original_sides.empty()) {
    throw Error(ErrorCode::InvalidDimension, "box needs at least one side length");
  }
  for (double L : original_sides) {
    if (!(L > 0.0) || !std::isfinite(L)) {
      throw Error(ErrorCode::InvalidArgument, "box side lengths must be positive and finite");
    }
  }
  const double d = static_cast<double>(original_sides.size());
  double volume = 1.0;
  for (double L : original_sides) volume *= L;
  const double scale = volume == 1.0 ? 1.0 : std::pow(volume, -1.0 / d);

  Window w;
  w.original_sides_ = std::move(original_sides);
  w.scale_ = scale;
  w.sides_.reserve(w.original_sides_.size());
  for (double L : w.original_sides_) w.sides_.push_back(L * scale);
  w.unit_cube_ = std::all_of(w.sides_.begin(), w.sides_.end(),
                             [](double s) { return std::abs(s - 1.0) <= 1e-12; });
  if (w.unit_cube_) std::fill(w.sides_.begin(), w.sides_.end(), 1.0);
  return w;
}

double Window::min_side() const noexcept {
  return *std::min_element(sides_.begin(), sides_.end());
}

double Window::volume() const noexcept {
  double v = 1.0;
  for (double s : sides_) v *= s;
  return v;
}

bool Window::contains(std::span<const double> point) const noexcept {
  if (point.size() != sides_.size()) return false;
  for (std::size_t j = 0; j < point.size(); ++j) {
    if (point[j] < 0.0 || point[j] > sides_[j]) return false;
  }
  return true;
}

void Window::check_contains(const PointCloud& cloud) const {
  if (cloud.dim() != dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "cloud has dimension " + std::to_string(cloud.dim()) + " but window has " +
                    std::to_string(dim()));
  }
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    if (!contains(cloud.point(i))) {
      throw Error(ErrorCode::PointOutsideWindow,
                  "point " + std::to_string(i) + " lies outside " + describe());
    }
  }
}

std::string Window::describe() const {
  std::ostringstream os;
  if (unit_cube_ && scale_ == 1.0) {
    os << "unit cube [0,1]^" << dim();
    return os.str();
  }
  os << "box ";
  for (std::size_t j = 0; j < sides_.size(); ++j) os << (j ? "x" : "") << sides_[j];
  os << " (scale " << scale_ << ")";
  return os.str();
}

Window normalize_window(std::span<const double> side_lengths) {
  return Window::box(std::vector<double>(side_lengths.begin(), side_lengths.end()));
}

Window parse_window_spec(std::string_view spec) {
  const auto colon = spec.find(':');
  const std::string_view kind = spec.substr(0, colon);
  const std::string_view rest =
      colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
  const auto bad = [&]() {
    return Error(ErrorCode::Parse,
                 "window spec '" + std::string(spec) + "' is not unit:d or box:L1,L2[,...]");
  };
  if (rest.empty()) throw bad();
  if (kind == "unit") {
    std::size_t d = 0;
    const auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), d);
    if (ec != std::errc{} || ptr != rest.data() + rest.size() || d == 0) throw bad();
    return Window::unit_cube(d);
  }
  if (kind == "box") {
    std::vector<double> sides;
    std::string_view tail = rest;
    while (true) {
      const auto comma = tail.find(',');
      const std::string_view field = tail.substr(0, comma);
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
      if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size()) throw bad();
      sides.push_back(v);
      if (comma == std::string_view::npos) break;
      tail = tail.substr(comma + 1);
    }
    return Window::box(std::move(sides));
  }
  throw bad();
}

double unit_ball_volume(int d) {
  if (d < 1) throw Error(ErrorCode::InvalidDimension, "dimension must be at least 1");
  const double half = 0.5 * d;
  return std::exp(half * std::log(std::numbers::pi) - std::lgamma(half + 1.0));
}

namespace {

double schedule_radius(std::size_t n, int d, double k, double n_power) {
  if (n < 2) throw Error(ErrorCode::TooFewPoints, "radius schedules need n >= 2");
  if (!(k > 0.0) || !std::isfinite(k)) {
    throw Error(ErrorCode::InvalidArgument, "k must be positive and finite");
  }
  const double kappa = unit_ball_volume(d);
  const double r =
      std::pow(k / (std::pow(static_cast<double>(n), n_power) * kappa), 1.0 / d);
  if (r > 1.0) {
    throw Error(ErrorCode::RadiusTooLarge,
                "resolved radius " + std::to_string(r) + " exceeds 1");
  }
  return r;
}

}  // namespace

double radius_exact_regime(std::size_t n, int d, double k) {
  return schedule_radius(n, d, k, 1.0);
}

double radius_asymptotic_regime(std::size_t n, int d, double k) {
  return schedule_radius(n, d, k, 1.5);
}

std::string_view to_string(Regime regime) noexcept {
  return regime == Regime::Exact ? "exact" : "asym";
}

std::string_view to_string(Variant variant) noexcept {
  return variant == Variant::Exact ? "te" : "ta";
}

Regime parse_regime(std::string_view text) {
  if (text == "exact" || text == "e") return Regime::Exact;
  if (text == "asym" || text == "asymptotic" || text == "a") return Regime::Asymptotic;
  throw Error(ErrorCode::InvalidArgument, "unknown radius regime '" + std::string(text) + "'");
}

Variant parse_variant(std::string_view text) {
  if (text == "e" || text == "te" || text == "exact") return Variant::Exact;
  if (text == "a" || text == "ta" || text == "asym" || text == "asymptotic") {
    return Variant::Asymptotic;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown test variant '" + std::string(text) + "'");
}

double RadiusRule::resolve(std::size_t n, int d) const {
  if (explicit_radius) {
    const double r = *explicit_radius;
    if (!(r > 0.0) || !std::isfinite(r)) {
      throw Error(ErrorCode::InvalidArgument, "radius must be positive");
    }
    if (r > 1.0) throw Error(ErrorCode::RadiusTooLarge, "radius exceeds 1");
    return r;
  }
  return regime == Regime::Exact ? radius_exact_regime(n, d, k)
                                 : radius_asymptotic_regime(n, d, k);
}

void TestConfig::validate() const {
  if (dim < 1) throw Error(ErrorCode::InvalidDimension, "dimension must be at least 1");
  if (!std::isfinite(beta) || !(beta > -0.5 * dim)) {
    throw Error(ErrorCode::InvalidArgument, "beta must exceed -d/2");
  }
  if (radius.explicit_radius) {
    if (!(*radius.explicit_radius > 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "radius must be positive");
    }
  } else if (!(radius.k > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "k must be positive");
  }
}

}  // namespace rggu
