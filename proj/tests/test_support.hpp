#pragma once

// Hand-rolled generators and brute-force oracles shared by the unit tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "rggu/core.hpp"
#include "rggu/edge_stats.hpp"
#include "rggu/rng.hpp"

// Expects `stmt` to throw rggu::Error carrying `expected_code`.
#define EXPECT_RGGU_ERROR(stmt, expected_code)                                      \
  do {                                                                              \
    try {                                                                           \
      stmt;                                                                         \
      ADD_FAILURE() << "expected " << ::rggu::to_string(expected_code) << " from " #stmt; \
    } catch (const ::rggu::Error& e) {                                              \
      EXPECT_EQ(e.code(), expected_code) << e.what();                               \
    }                                                                               \
  } while (false)

namespace rggu::testing {

// Random inputs for property tests. Each test seeds its own generator so a
// failure is reproducible from the test name alone.
class Gen {
 public:
  explicit Gen(std::uint64_t seed, std::uint64_t stream = 0) : rng_(seed, stream) {}

  double uniform(double lo = 0.0, double hi = 1.0) { return rng_.uniform(lo, hi); }
  double normal() { return rng_.normal(); }

  std::size_t size(std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>(rng_.uniform() * static_cast<double>(hi - lo + 1));
  }

  template <class T>
  const T& pick(const std::vector<T>& options) {
    return options[size(0, options.size() - 1)];
  }

  PointCloud cloud(std::size_t n, std::size_t d, double lo = 0.0, double hi = 1.0) {
    std::vector<double> coords(n * d);
    for (double& c : coords) c = uniform(lo, hi);
    return PointCloud(d, std::move(coords));
  }

  // Points on a coarse lattice, so exact ties and distances equal to r occur.
  PointCloud lattice_cloud(std::size_t n, std::size_t d, double step) {
    std::vector<double> coords(n * d);
    const auto slots = static_cast<std::size_t>(1.0 / step);
    for (double& c : coords) c = step * static_cast<double>(size(0, slots));
    return PointCloud(d, std::move(coords));
  }

  std::vector<std::size_t> permutation(std::size_t n) {
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), std::size_t{0});
    for (std::size_t i = n; i > 1; --i) std::swap(p[i - 1], p[size(0, i - 1)]);
    return p;
  }

  // Random rotation matrix (row-major d x d) from Gram-Schmidt on Gaussians.
  std::vector<double> rotation(std::size_t d) {
    std::vector<double> q(d * d);
    for (double& v : q) v = normal();
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        double dot = 0.0;
        for (std::size_t k = 0; k < d; ++k) dot += q[i * d + k] * q[j * d + k];
        for (std::size_t k = 0; k < d; ++k) q[i * d + k] -= dot * q[j * d + k];
      }
      double norm = 0.0;
      for (std::size_t k = 0; k < d; ++k) norm += q[i * d + k] * q[i * d + k];
      norm = std::sqrt(norm);
      for (std::size_t k = 0; k < d; ++k) q[i * d + k] /= norm;
    }
    return q;
  }

  RngStream& rng() { return rng_; }

 private:
  RngStream rng_;
};

inline PointCloud permuted(const PointCloud& cloud, const std::vector<std::size_t>& perm) {
  const std::size_t d = cloud.dim();
  std::vector<double> coords(cloud.size() * d);
  for (std::size_t i = 0; i < perm.size(); ++i) {
    for (std::size_t k = 0; k < d; ++k) coords[i * d + k] = cloud.coord(perm[i], k);
  }
  return PointCloud(d, std::move(coords));
}

// x -> R x + t for every point.
inline PointCloud moved(const PointCloud& cloud, const std::vector<double>& rot,
                        const std::vector<double>& shift) {
  const std::size_t d = cloud.dim();
  std::vector<double> coords(cloud.size() * d);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    for (std::size_t a = 0; a < d; ++a) {
      double v = shift[a];
      for (std::size_t b = 0; b < d; ++b) v += rot[a * d + b] * cloud.coord(i, b);
      coords[i * d + a] = v;
    }
  }
  return PointCloud(d, std::move(coords));
}

inline double squared_distance(const PointCloud& cloud, std::size_t i, std::size_t j) {
  double s = 0.0;
  for (std::size_t k = 0; k < cloud.dim(); ++k) {
    const double diff = cloud.coord(i, k) - cloud.coord(j, k);
    s += diff * diff;
  }
  return s;
}

// O(n^2) reference for the pair set.
inline PairList brute_force_pairs(const PointCloud& cloud, double r) {
  PairList out;
  const double r2 = r * r;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    for (std::size_t j = i + 1; j < cloud.size(); ++j) {
      const double d2 = squared_distance(cloud, i, j);
      if (d2 <= r2) {
        out.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), std::sqrt(d2)});
      }
    }
  }
  return out;
}

// O(n^2) reference for L_n(beta), using std::pow throughout.
inline double brute_force_sum(const PointCloud& cloud, double r, double beta) {
  double s = 0.0;
  for (const ClosePair& p : brute_force_pairs(cloud, r)) s += beta == 0.0 ? 1.0 : std::pow(p.dist, beta);
  return s;
}

inline double relative_error(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace rggu::testing
