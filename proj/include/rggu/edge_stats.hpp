#pragma once

#include <cstdint>
#include <vector>

#include "rggu/core.hpp"

namespace rggu {

struct ClosePair {
  std::uint32_t i;
  std::uint32_t j;
  double dist;

  bool operator==(const ClosePair&) const = default;
};

/// Pairs with i < j, sorted by (i, j).
using PairList = std::vector<ClosePair>;

/// Uniform bucket grid for fixed-radius queries. Cells are at least r wide on
/// every axis, so all partners of a point lie in its 3^d block. The number of
/// cells per axis is capped so the table stays O(n) even for tiny radii.
///
/// Reusable: rebuild() keeps its allocations, which matters in Monte Carlo
/// loops that evaluate thousands of clouds of the same size.
class CellList {
 public:
  void rebuild(const PointCloud& cloud, double r);

  /// Calls f(i, j, dist2) once for every unordered pair with
  /// dist2 <= r*r. Order is deterministic: by cell, then by the fixed
  /// half-neighbourhood stencil, then by point order inside each cell.
  /// i and j are original indices, not necessarily ordered.
  template <class F>
  void for_each_pair(F&& f) const;

  std::size_t cell_count() const noexcept { return cell_start_.empty() ? 0 : cell_start_.size() - 1; }

 private:
  std::size_t dim_ = 0;
  double r2_ = 0.0;
  std::vector<std::int64_t> dims_;      // cells per axis
  std::vector<std::int64_t> strides_;   // linear index strides
  std::vector<std::uint32_t> cell_start_;  // CSR offsets, size cells+1
  std::vector<std::uint32_t> order_;    // original indices sorted by cell
  std::vector<double> packed_;          // coordinates in `order_` order
  std::vector<std::int64_t> stencil_;   // forward half of the 3^d offsets
  std::vector<std::vector<std::int64_t>> stencil_steps_;  // per-axis offsets
};

/// Every unordered pair at Euclidean distance <= r (inclusive).
PairList enumerate_close_pairs(const PointCloud& cloud, double r);

/// Sum over unordered pairs with dist <= r of dist^beta. beta = 0 counts
/// edges. Coincident points contribute 1 when beta = 0 and 0 when beta > 0;
/// with beta < 0 they raise DuplicatePoints. beta <= -d raises
/// InvalidArgument.
double edge_power_sum(const PointCloud& cloud, double r, double beta);

/// Same as edge_power_sum but reuses `grid` between calls.
double edge_power_sum(const PointCloud& cloud, double r, double beta, CellList& grid);

/// 2 * (number of edges) / n.
double average_degree(const PointCloud& cloud, double r);

/// dist^beta with the edge conventions above, given the squared distance.
/// Small integer exponents use repeated multiplication.
double edge_weight(double dist2, double beta);

// ---------------------------------------------------------------------------

template <class F>
void CellList::for_each_pair(F&& f) const {
  const std::size_t d = dim_;
  const std::size_t cells = cell_count();
  const double r2 = r2_;
  std::vector<std::int64_t> coord(d);
  for (std::size_t c = 0; c < cells; ++c) {
    const std::uint32_t a_begin = cell_start_[c];
    const std::uint32_t a_end = cell_start_[c + 1];
    if (a_begin == a_end) continue;

    // Pairs inside the cell.
    for (std::uint32_t a = a_begin; a < a_end; ++a) {
      const double* pa = &packed_[static_cast<std::size_t>(a) * d];
      for (std::uint32_t b = a + 1; b < a_end; ++b) {
        const double* pb = &packed_[static_cast<std::size_t>(b) * d];
        double d2 = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
          const double diff = pa[k] - pb[k];
          d2 += diff * diff;
        }
        if (d2 <= r2) f(order_[a], order_[b], d2);
      }
    }

    // Pairs with forward neighbours. The stencil only contains offsets that
    // are lexicographically positive, so each cell pair is visited once.
    std::int64_t rem = static_cast<std::int64_t>(c);
    for (std::size_t k = d; k-- > 0;) {
      coord[k] = rem / strides_[k];
      rem %= strides_[k];
    }
    for (std::size_t s = 0; s < stencil_.size(); ++s) {
      bool inside = true;
      for (std::size_t k = 0; k < d; ++k) {
        const std::int64_t nk = coord[k] + stencil_steps_[s][k];
        if (nk < 0 || nk >= dims_[k]) {
          inside = false;
          break;
        }
      }
      if (!inside) continue;
      const auto nc = static_cast<std::size_t>(static_cast<std::int64_t>(c) + stencil_[s]);
      const std::uint32_t b_begin = cell_start_[nc];
      const std::uint32_t b_end = cell_start_[nc + 1];
      for (std::uint32_t a = a_begin; a < a_end; ++a) {
        const double* pa = &packed_[static_cast<std::size_t>(a) * d];
        for (std::uint32_t b = b_begin; b < b_end; ++b) {
          const double* pb = &packed_[static_cast<std::size_t>(b) * d];
          double d2 = 0.0;
          for (std::size_t k = 0; k < d; ++k) {
            const double diff = pa[k] - pb[k];
            d2 += diff * diff;
          }
          if (d2 <= r2) f(order_[a], order_[b], d2);
        }
      }
    }
  }
}

}  // namespace rggu
