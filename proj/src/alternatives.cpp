#include "rggu/alternatives.hpp"

#include <cmath>
#include <numbers>

#include "rggu/special.hpp"

namespace rggu {

namespace {

bool in_unit_cube(std::span<const double> p) {
  for (double v : p) {
    if (v < 0.0 || v > 1.0) return false;
  }
  return true;
}

void fill_uniform(std::span<double> p, RngStream& rng) {
  for (double& v : p) v = rng.uniform();
}

// N(center, sigma^2 I) conditioned on the unit cube, by resampling the whole
// vector. Clamping would put atoms on the faces.
void fill_truncated_normal(std::span<double> p, std::span<const double> center, double sigma,
                           RngStream& rng) {
  for (std::size_t attempt = 0; attempt < kMaxRejections; ++attempt) {
    for (std::size_t k = 0; k < p.size(); ++k) p[k] = center[k] + sigma * rng.normal();
    if (in_unit_cube(p)) return;
  }
  throw Error(ErrorCode::DegenerateParameters,
              "truncated Gaussian rejected 1e6 proposals; the component barely meets the cube");
}

void check_n(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "sample size must be positive");
}

}  // namespace

PointCloud sample_uniform(std::size_t n, std::size_t d, RngStream& rng) {
  check_n(n);
  if (d == 0) throw Error(ErrorCode::InvalidDimension, "dimension must be positive");
  std::vector<double> coords(n * d);
  fill_uniform(coords, rng);
  return PointCloud(d, std::move(coords));
}

PointCloud sample_uniform(std::size_t n, const Window& window, RngStream& rng) {
  check_n(n);
  const std::size_t d = window.dim();
  const auto sides = window.sides();
  std::vector<double> coords(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < d; ++k) coords[i * d + k] = sides[k] * rng.uniform();
  }
  return PointCloud(d, std::move(coords));
}

ConParams ConParams::defaults(std::size_t d) {
  ConParams p;
  p.c1.assign(d, 0.25);
  p.c2.assign(d, 0.7);
  const double q = normal_quantile(std::pow(0.9, 1.0 / static_cast<double>(d)));
  // The printed configuration reads s * Phi^{-1}(0.9^{1/d}); the published
  // rejection rates are only reproduced with the quotient (see README).
  p.sigma1 = 0.15 / q;
  p.sigma2 = 0.2 / q;
  return p;
}

void ConParams::validate(std::size_t d) const {
  if (!(q1 >= 0.0) || !(q2 >= 0.0) || q1 + q2 > 1.0) {
    throw Error(ErrorCode::InvalidArgument, "mixture weights must be >= 0 and sum to <= 1");
  }
  if (c1.size() != d || c2.size() != d) {
    throw Error(ErrorCode::DimensionMismatch, "mixture centres must have d coordinates");
  }
  if (!in_unit_cube(c1) || !in_unit_cube(c2)) {
    throw Error(ErrorCode::InvalidArgument, "mixture centres must lie in the unit cube");
  }
  if (!(sigma1 > 0.0) || !(sigma2 > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "mixture standard deviations must be positive");
  }
}

LabeledCloud sample_con_labeled(std::size_t n, std::size_t d, RngStream& rng,
                                const ConParams& params) {
  check_n(n);
  params.validate(d);
  LabeledCloud out;
  std::vector<double> coords(n * d);
  out.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::span<double> p(coords.data() + i * d, d);
    const double u = rng.uniform();
    if (u < params.q1) {
      out.labels[i] = 1;
      fill_truncated_normal(p, params.c1, params.sigma1, rng);
    } else if (u < params.q1 + params.q2) {
      out.labels[i] = 2;
      fill_truncated_normal(p, params.c2, params.sigma2, rng);
    } else {
      out.labels[i] = 0;
      fill_uniform(p, rng);
    }
  }
  out.cloud = PointCloud(d, std::move(coords));
  return out;
}

PointCloud sample_con(std::size_t n, std::size_t d, RngStream& rng, const ConParams& params) {
  return sample_con_labeled(n, d, rng, params).cloud;
}

PointCloud sample_con(std::size_t n, std::size_t d, RngStream& rng) {
  return sample_con(n, d, rng, ConParams::defaults(d));
}

PointCloud sample_clu(std::size_t n, std::size_t d, RngStream& rng, double r_clu) {
  check_n(n);
  if (n % 5 != 0) {
    throw Error(ErrorCode::InvalidArgument,
                "the cluster model places 5 points per parent; n = " + std::to_string(n) +
                    " is not a multiple of 5");
  }
  if (!(r_clu > 0.0)) throw Error(ErrorCode::InvalidArgument, "cluster radius must be positive");
  std::vector<double> coords(n * d);
  std::vector<double> parent(d);
  std::vector<double> dir(d);
  for (std::size_t c = 0; c < n / 5; ++c) {
    for (double& v : parent) v = rng.uniform(-r_clu, 1.0 + r_clu);
    for (std::size_t child = 0; child < 5; ++child) {
      std::span<double> p(coords.data() + (c * 5 + child) * d, d);
      double norm2 = 0.0;
      do {
        norm2 = 0.0;
        for (double& v : dir) {
          v = rng.normal();
          norm2 += v * v;
        }
      } while (norm2 == 0.0);
      const double rho = r_clu * std::pow(rng.uniform(), 1.0 / static_cast<double>(d));
      const double scale = rho / std::sqrt(norm2);
      for (std::size_t k = 0; k < d; ++k) p[k] = parent[k] + scale * dir[k];
      if (!in_unit_cube(p)) fill_uniform(p, rng);
    }
  }
  return PointCloud(d, std::move(coords));
}

LabeledCloud sample_sps_labeled(std::size_t n, std::size_t d, RngStream& rng,
                                const SpsParams& params) {
  check_n(n);
  if (!(params.p >= 0.0 && params.p <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "contamination probability must lie in [0, 1]");
  }
  if (!(params.sigma > 0.0)) throw Error(ErrorCode::InvalidArgument, "sigma must be positive");
  std::vector<double> center = params.center.empty() ? std::vector<double>(d, 0.5) : params.center;
  if (center.size() != d) throw Error(ErrorCode::DimensionMismatch, "centre must have d coordinates");
  LabeledCloud out;
  std::vector<double> coords(n * d);
  out.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::span<double> p(coords.data() + i * d, d);
    if (rng.bernoulli(params.p)) {
      out.labels[i] = 1;
      fill_truncated_normal(p, center, params.sigma, rng);
    } else {
      out.labels[i] = 0;
      fill_uniform(p, rng);
    }
  }
  out.cloud = PointCloud(d, std::move(coords));
  return out;
}

PointCloud sample_sps(std::size_t n, std::size_t d, RngStream& rng, const SpsParams& params) {
  return sample_sps_labeled(n, d, rng, params).cloud;
}

ContiguousSpec ContiguousSpec::cosine(double a_n) {
  ContiguousSpec spec;
  spec.g = [](std::span<const double> x) { return std::cos(2.0 * std::numbers::pi * x[0]); };
  spec.a_n = a_n;
  spec.bound = 1.0;
  spec.int_g2 = 0.5;
  return spec;
}

void ContiguousSpec::validate() const {
  if (!g) throw Error(ErrorCode::InvalidArgument, "perturbation function is missing");
  if (!(a_n >= 0.0) || !(bound > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "amplitude must be >= 0 and bound > 0");
  }
  if (a_n * bound > 1.0) {
    throw Error(ErrorCode::DegenerateParameters,
                "1 + a_n g can turn negative: a_n * sup|g| exceeds 1");
  }
}

PointCloud sample_contiguous(std::size_t n, std::size_t d, RngStream& rng,
                             const ContiguousSpec& spec) {
  check_n(n);
  spec.validate();
  const double envelope = 1.0 + spec.a_n * spec.bound;
  std::vector<double> coords(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    std::span<double> p(coords.data() + i * d, d);
    for (std::size_t attempt = 0;; ++attempt) {
      if (attempt == kMaxRejections) {
        throw Error(ErrorCode::DegenerateParameters, "contiguous sampler failed to accept");
      }
      fill_uniform(p, rng);
      const double gx = spec.g(p);
      if (std::abs(gx) > spec.bound * (1.0 + 1e-12)) {
        throw Error(ErrorCode::DegenerateParameters,
                    "perturbation exceeds its declared bound at a sampled point");
      }
      if (rng.uniform() * envelope <= 1.0 + spec.a_n * gx) break;
    }
  }
  return PointCloud(d, std::move(coords));
}

std::string_view to_string(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::H0: return "h0";
    case ModelKind::Con: return "con";
    case ModelKind::Clu: return "clu";
    case ModelKind::Sps: return "sps";
    case ModelKind::Contiguous: return "contiguous";
  }
  return "unknown";
}

ModelKind parse_model(std::string_view text) {
  for (ModelKind k : {ModelKind::H0, ModelKind::Con, ModelKind::Clu, ModelKind::Sps,
                      ModelKind::Contiguous}) {
    if (text == to_string(k)) return k;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown model '" + std::string(text) + "'");
}

double contiguous_amplitude(double gamma, std::size_t n, double r, int d) {
  if (!(gamma >= 0.0)) throw Error(ErrorCode::InvalidArgument, "gamma must be >= 0");
  return std::sqrt(gamma / (static_cast<double>(n) * std::pow(r, 0.5 * d)));
}

PointCloud sample_model(const ModelSpec& model, std::size_t n, std::size_t d, RngStream& rng,
                        double r) {
  switch (model.kind) {
    case ModelKind::H0: return sample_uniform(n, d, rng);
    case ModelKind::Con: return sample_con(n, d, rng, model.con ? *model.con : ConParams::defaults(d));
    case ModelKind::Clu: return sample_clu(n, d, rng, model.clu_radius);
    case ModelKind::Sps: return sample_sps(n, d, rng, model.sps);
    case ModelKind::Contiguous: {
      if (!(r > 0.0)) throw Error(ErrorCode::InvalidArgument, "contiguous model needs the radius");
      const double a_n = contiguous_amplitude(model.gamma, n, r, static_cast<int>(d));
      return sample_contiguous(n, d, rng, ContiguousSpec::cosine(a_n));
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown model");
}

}  // namespace rggu
