#include "rggu/edge_stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rggu {

void CellList::rebuild(const PointCloud& cloud, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw Error(ErrorCode::InvalidArgument, "radius must be positive and finite");
  }
  if (cloud.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorCode::InvalidArgument, "too many points for the cell list");
  }
  const std::size_t d = cloud.dim();
  const std::size_t n = cloud.size();
  dim_ = d;
  r2_ = r * r;

  std::vector<double> lo(d, 0.0);
  std::vector<double> side(d, 1.0);
  dims_.assign(d, 1);
  strides_.assign(d, 1);

  if (n > 0) {
    std::vector<double> hi(d);
    for (std::size_t k = 0; k < d; ++k) lo[k] = hi[k] = cloud.coord(0, k);
    for (std::size_t i = 1; i < n; ++i) {
      for (std::size_t k = 0; k < d; ++k) {
        lo[k] = std::min(lo[k], cloud.coord(i, k));
        hi[k] = std::max(hi[k], cloud.coord(i, k));
      }
    }
    // Cap the per-axis count so the total stays near 2n cells.
    const double cap = std::max(1.0, std::floor(std::pow(2.0 * static_cast<double>(n) + 8.0,
                                                         1.0 / static_cast<double>(d))));
    for (std::size_t k = 0; k < d; ++k) {
      const double extent = hi[k] - lo[k];
      // The margin keeps cells strictly wider than r, so rounding in the
      // index computation cannot push a pair at distance exactly r two
      // cells apart.
      const double fit = std::floor(extent / (r * (1.0 + 1e-9)));
      dims_[k] = static_cast<std::int64_t>(std::clamp(fit, 1.0, cap));
      side[k] = extent > 0.0 ? extent / static_cast<double>(dims_[k]) : 1.0;
    }
  }
  std::int64_t total = 1;
  for (std::size_t k = 0; k < d; ++k) {
    strides_[k] = total;
    total *= dims_[k];
  }

  std::vector<std::uint32_t> cell_of(n);
  cell_start_.assign(static_cast<std::size_t>(total) + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::int64_t lin = 0;
    for (std::size_t k = 0; k < d; ++k) {
      auto idx = static_cast<std::int64_t>((cloud.coord(i, k) - lo[k]) / side[k]);
      idx = std::clamp<std::int64_t>(idx, 0, dims_[k] - 1);
      lin += idx * strides_[k];
    }
    cell_of[i] = static_cast<std::uint32_t>(lin);
    ++cell_start_[static_cast<std::size_t>(lin) + 1];
  }
  for (std::size_t c = 1; c < cell_start_.size(); ++c) cell_start_[c] += cell_start_[c - 1];

  // Stable counting sort keeps original order within each cell.
  order_.resize(n);
  packed_.resize(n * d);
  std::vector<std::uint32_t> fill(cell_start_.begin(), cell_start_.end() - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint32_t slot = fill[cell_of[i]]++;
    order_[slot] = static_cast<std::uint32_t>(i);
    const auto p = cloud.point(i);
    std::copy(p.begin(), p.end(), packed_.begin() + static_cast<std::ptrdiff_t>(slot * d));
  }

  // Forward half of the 3^d block: the highest non-zero offset is +1.
  stencil_.clear();
  stencil_steps_.clear();
  std::vector<std::int64_t> step(d, -1);
  while (true) {
    std::size_t top = d;
    for (std::size_t k = d; k-- > 0;) {
      if (step[k] != 0) {
        top = k;
        break;
      }
    }
    if (top < d && step[top] == 1) {
      std::int64_t lin = 0;
      for (std::size_t k = 0; k < d; ++k) lin += step[k] * strides_[k];
      stencil_.push_back(lin);
      stencil_steps_.push_back(step);
    }
    std::size_t k = 0;
    while (k < d && step[k] == 1) step[k++] = -1;
    if (k == d) break;
    ++step[k];
  }
}

double edge_weight(double dist2, double beta) {
  if (beta == 0.0) return 1.0;
  if (dist2 == 0.0) {
    if (beta > 0.0) return 0.0;
    throw Error(ErrorCode::DuplicatePoints,
                "coincident points with negative beta give an infinite edge weight");
  }
  // Even integers need no square root at all.
  const double half = 0.5 * beta;
  if (half == std::floor(half) && std::abs(half) <= 8.0) {
    double base = half > 0 ? dist2 : 1.0 / dist2;
    double w = 1.0;
    for (int e = static_cast<int>(std::abs(half)); e > 0; --e) w *= base;
    return w;
  }
  const double dist = std::sqrt(dist2);
  if (beta == std::floor(beta) && std::abs(beta) <= 8.0) {
    double base = beta > 0 ? dist : 1.0 / dist;
    double w = 1.0;
    for (int e = static_cast<int>(std::abs(beta)); e > 0; --e) w *= base;
    return w;
  }
  return std::exp(beta * std::log(dist));
}

namespace {

void check_beta(const PointCloud& cloud, double beta) {
  if (!std::isfinite(beta) || !(beta > -static_cast<double>(cloud.dim()))) {
    throw Error(ErrorCode::InvalidArgument, "beta must exceed -d");
  }
}

}  // namespace

PairList enumerate_close_pairs(const PointCloud& cloud, double r) {
  CellList grid;
  grid.rebuild(cloud, r);
  PairList pairs;
  grid.for_each_pair([&](std::uint32_t i, std::uint32_t j, double d2) {
    if (i > j) std::swap(i, j);
    pairs.push_back({i, j, std::sqrt(d2)});
  });
  std::sort(pairs.begin(), pairs.end(), [](const ClosePair& a, const ClosePair& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
  return pairs;
}

double edge_power_sum(const PointCloud& cloud, double r, double beta, CellList& grid) {
  check_beta(cloud, beta);
  grid.rebuild(cloud, r);
  double sum = 0.0;
  grid.for_each_pair([&](std::uint32_t, std::uint32_t, double d2) { sum += edge_weight(d2, beta); });
  return sum;
}

double edge_power_sum(const PointCloud& cloud, double r, double beta) {
  CellList grid;
  return edge_power_sum(cloud, r, beta, grid);
}

double average_degree(const PointCloud& cloud, double r) {
  if (cloud.size() == 0) throw Error(ErrorCode::TooFewPoints, "average degree needs n >= 1");
  return 2.0 * edge_power_sum(cloud, r, 0.0) / static_cast<double>(cloud.size());
}

}  // namespace rggu
