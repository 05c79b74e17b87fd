#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <mutex>
#include <optional>
#include <span>
#include <thread>
#include <vector>

#include "rggu/alternatives.hpp"
#include "rggu/core.hpp"
#include "rggu/result_table.hpp"

namespace rggu {

/// RGGU_THREADS if set to a positive integer, else hardware concurrency.
unsigned default_thread_count();

/// Runs f(index, worker) for index in [0, count) on `threads` workers.
/// Work is handed out in small blocks through an atomic counter; callers
/// write results into slot `index` so the outcome never depends on the
/// schedule. Exceptions are rethrown on the calling thread (first one wins).
template <class F>
void parallel_for(std::size_t count, unsigned threads, F&& f);

/// Disjoint stream spaces, one per kind of simulation.
enum class Purpose : std::uint8_t {
  CriticalValues = 1,
  Power = 2,
  Clt = 3,
  Contiguity = 4,
  PValues = 5,
  BrCritical = 6,
};

struct GridCell {
  double beta = 0.0;
  std::size_t n = 100;
  double k = 5.0;  // radius schedule parameter (BR tables: bandwidth h)
};

struct MCPlan {
  std::size_t reps = 10'000;
  std::uint64_t seed = 1;
  unsigned threads = 0;  // 0 means default_thread_count()

  Variant variant = Variant::Exact;
  /// Radius schedule; defaults to the one matching the variant
  /// (exact regime for T_e, asymptotic regime for T_a).
  std::optional<Regime> regime;
  int d = 2;
  std::vector<double> betas{0.0};
  std::vector<std::size_t> ns{100};
  std::vector<double> ks{5.0};

  ModelSpec model;
  std::vector<double> levels{0.95};  // quantile levels for critical values
  double alpha = 0.05;               // significance level for power

  /// Rows already in this file (same seed and reps) are reused and the
  /// file is rewritten after every finished cell.
  std::optional<std::filesystem::path> checkpoint;

  Regime effective_regime() const noexcept {
    return regime ? *regime : (variant == Variant::Exact ? Regime::Exact : Regime::Asymptotic);
  }
  unsigned effective_threads() const;
  std::vector<GridCell> cells() const;
  TestConfig test_config(const GridCell& cell) const;
};

/// Stream index (purpose << 56) | (24-bit hash of the cell << 32) | replicate.
/// The hash depends only on the cell's own parameters, so a cell gives the
/// same draws whichever grid it is run in.
std::uint64_t stream_index(Purpose purpose, std::uint64_t cell_hash, std::size_t replicate);
std::uint64_t cell_hash(const MCPlan& plan, const GridCell& cell);

/// Statistic values of `plan.reps` replicates of one cell under plan.model,
/// in replicate order.
std::vector<double> simulate_statistics(const MCPlan& plan, const GridCell& cell,
                                        Purpose purpose);

/// Half-width of the +-1 binomial band around the order statistic used for
/// the quantile; a standard-error proxy for Monte Carlo quantiles.
double quantile_std_error(std::span<const double> sorted, double level);

/// Empirical quantiles of the statistic under H0 for every cell and level.
ResultTable simulate_critical_values(const MCPlan& plan);

/// Fraction of replicates with statistic > critical value (level 1 - alpha)
/// for every cell, with binomial standard errors. Missing critical values
/// raise MissingCriticalValue.
ResultTable empirical_power(const MCPlan& plan, const ResultTable& critical_values);

struct CltReport {
  double ks_distance;
  double mean;
  double variance;
  double skewness;
  std::size_t reps;
  double radius;
};

/// Standardizes L_n by the exact null mean and the asymptotic null standard
/// deviation and compares with N(0,1). Uses the first grid cell.
CltReport clt_diagnostic(const MCPlan& plan);

struct ContiguityReport {
  double gamma;
  double a_n;
  double radius;
  double mu;             // limiting noncentrality
  double expected_mean;  // 1 + mu^2
  double mean;           // Monte Carlo mean of the statistic
  double mean_std_error;
  double ks_distance;  // against the noncentral chi-squared(1) limit
  std::size_t reps;
};

/// Runs the exact-variant statistic on points with density
/// 1 + a_n cos(2 pi x_1), a_n chosen so that n r^{d/2} a_n^2 = gamma.
/// Uses the first grid cell; plan.model is ignored.
ContiguityReport contiguity_diagnostic(const MCPlan& plan, double gamma);

/// Empirical p-values of `cloud` over the (beta, k) grid, with null draws
/// simulated on `window`. plan.ns is ignored (n comes from the cloud).
ResultTable batch_pvalues(const PointCloud& cloud, const Window& window, const MCPlan& plan);

/// Monte Carlo 95% quantiles of the BR statistic under H0 for every n in
/// plan.ns and bandwidth in `bandwidths`.
ResultTable br_critical_table(const MCPlan& plan, const std::vector<double>& bandwidths);

// ---------------------------------------------------------------------------

template <class F>
void parallel_for(std::size_t count, unsigned threads, F&& f) {
  if (count == 0) return;
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(
                                                         std::min<std::size_t>(count, 1u << 16))));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) f(i, 0u);
    return;
  }
  constexpr std::size_t kBlock = 64;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&](unsigned id) {
    try {
      while (!failed.load(std::memory_order_relaxed)) {
        const std::size_t start = next.fetch_add(kBlock);
        if (start >= count) break;
        const std::size_t stop = std::min(count, start + kBlock);
        for (std::size_t i = start; i < stop; ++i) f(i, id);
      }
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
      failed = true;
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads - 1);
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker, t);
  worker(0);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace rggu
