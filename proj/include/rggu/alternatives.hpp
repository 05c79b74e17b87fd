#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rggu/core.hpp"
#include "rggu/rng.hpp"

namespace rggu {

/// n i.i.d. uniform points on [0,1]^d.
PointCloud sample_uniform(std::size_t n, std::size_t d, RngStream& rng);
/// n i.i.d. uniform points on the (normalized) window.
PointCloud sample_uniform(std::size_t n, const Window& window, RngStream& rng);

/// Mixture (1 - q1 - q2) U([0,1]^d) + q1 N(c1, s1^2 I) + q2 N(c2, s2^2 I),
/// Gaussian parts conditioned on landing in the cube.
struct ConParams {
  double q1 = 0.135;
  double q2 = 0.24;
  std::vector<double> c1;
  std::vector<double> c2;
  double sigma1 = 0.0;
  double sigma2 = 0.0;

  /// Reference configuration: c1 = 0.25, c2 = 0.7 on every axis and
  /// sigma_i = s_i / Phi^{-1}(0.9^{1/d}) with s = (0.15, 0.2), so that
  /// Phi(s_i / sigma_i)^d = 0.9.
  static ConParams defaults(std::size_t d);
  void validate(std::size_t d) const;
};

struct SpsParams {
  std::vector<double> center;  // empty means (0.5, ..., 0.5)
  double sigma = 0.01;
  double p = 0.05;
};

/// Density 1 + a_n g on [0,1]^d. `bound` must dominate sup |g|.
struct ContiguousSpec {
  std::function<double(std::span<const double>)> g;
  double a_n = 0.0;
  double bound = 1.0;
  double int_g2 = 0.0;  // informational; used by diagnostics

  /// g(x) = cos(2 pi x_1), sup |g| = 1, int g^2 = 1/2.
  static ContiguousSpec cosine(double a_n);
  void validate() const;
};

/// Sampled cloud plus the mixture component of each point
/// (0 = uniform, 1 and 2 = Gaussian components).
struct LabeledCloud {
  PointCloud cloud;
  std::vector<std::uint8_t> labels;
};

/// Maximum number of proposals for a single truncated Gaussian point.
inline constexpr std::size_t kMaxRejections = 1'000'000;

LabeledCloud sample_con_labeled(std::size_t n, std::size_t d, RngStream& rng,
                                const ConParams& params);
PointCloud sample_con(std::size_t n, std::size_t d, RngStream& rng, const ConParams& params);
PointCloud sample_con(std::size_t n, std::size_t d, RngStream& rng);

/// n/5 parents uniform on [-r_clu, 1 + r_clu]^d, five children uniform in
/// the ball of radius r_clu around each parent. A child outside the cube is
/// replaced once by a uniform point. n must be a multiple of 5.
PointCloud sample_clu(std::size_t n, std::size_t d, RngStream& rng, double r_clu = 0.1);

LabeledCloud sample_sps_labeled(std::size_t n, std::size_t d, RngStream& rng,
                                const SpsParams& params = {});
PointCloud sample_sps(std::size_t n, std::size_t d, RngStream& rng, const SpsParams& params = {});

/// Rejection sampling against the envelope 1 + a_n * bound.
PointCloud sample_contiguous(std::size_t n, std::size_t d, RngStream& rng,
                             const ContiguousSpec& spec);

enum class ModelKind { H0, Con, Clu, Sps, Contiguous };

std::string_view to_string(ModelKind kind) noexcept;
ModelKind parse_model(std::string_view text);

/// Which sampler to use and its parameters. For Contiguous, `gamma` fixes the
/// amplitude through n r^{d/2} a_n^2 = gamma once n and r are known.
struct ModelSpec {
  ModelKind kind = ModelKind::H0;
  std::optional<ConParams> con;  // defaults for the dimension when empty
  double clu_radius = 0.1;
  SpsParams sps;
  double gamma = 0.0;

  static ModelSpec h0() { return {}; }
  static ModelSpec of(ModelKind kind) {
    ModelSpec m;
    m.kind = kind;
    return m;
  }
};

/// a_n = sqrt(gamma / (n r^{d/2})).
double contiguous_amplitude(double gamma, std::size_t n, double r, int d);

/// Draws from the model on the unit cube. `r` is only used by Contiguous.
PointCloud sample_model(const ModelSpec& model, std::size_t n, std::size_t d, RngStream& rng,
                        double r = 0.0);

}  // namespace rggu
