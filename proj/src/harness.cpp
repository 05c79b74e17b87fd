#include "rggu/harness.hpp"

#include <bit>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>

#include "rggu/competitors.hpp"
#include "rggu/special.hpp"
#include "rggu/uniformity.hpp"

namespace rggu {

unsigned default_thread_count() {
  if (const char* env = std::getenv("RGGU_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v <= 4096) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

unsigned MCPlan::effective_threads() const {
  return threads > 0 ? threads : default_thread_count();
}

std::vector<GridCell> MCPlan::cells() const {
  std::vector<GridCell> out;
  for (double beta : betas) {
    for (std::size_t n : ns) {
      for (double k : ks) out.push_back({beta, n, k});
    }
  }
  return out;
}

TestConfig MCPlan::test_config(const GridCell& cell) const {
  TestConfig cfg;
  cfg.beta = cell.beta;
  cfg.radius = RadiusRule::schedule(effective_regime(), cell.k);
  cfg.variant = variant;
  cfg.dim = d;
  return cfg;
}

std::uint64_t stream_index(Purpose purpose, std::uint64_t hash, std::size_t replicate) {
  if (replicate >= (std::size_t{1} << 32)) {
    throw Error(ErrorCode::InvalidArgument, "at most 2^32 replicates per cell");
  }
  return (static_cast<std::uint64_t>(purpose) << 56) | ((hash & 0xFFFFFFull) << 32) |
         static_cast<std::uint64_t>(replicate);
}

std::uint64_t cell_hash(const MCPlan& plan, const GridCell& cell) {
  std::uint64_t h = mix64(static_cast<std::uint64_t>(plan.model.kind));
  const auto fold = [&h](std::uint64_t v) { h = mix64(h ^ v); };
  fold(static_cast<std::uint64_t>(plan.variant));
  fold(static_cast<std::uint64_t>(plan.effective_regime()));
  fold(static_cast<std::uint64_t>(plan.d));
  fold(std::bit_cast<std::uint64_t>(cell.beta));
  fold(static_cast<std::uint64_t>(cell.n));
  fold(std::bit_cast<std::uint64_t>(cell.k));
  if (plan.model.kind == ModelKind::Contiguous) fold(std::bit_cast<std::uint64_t>(plan.model.gamma));
  return h;
}

namespace {

std::vector<double> simulate_with(const MCPlan& plan, const GridCell& cell, Purpose purpose,
                                  const ModelSpec& model) {
  if (plan.reps == 0) throw Error(ErrorCode::InvalidArgument, "reps must be at least 1");
  const TestConfig cfg = plan.test_config(cell);
  const Window window = Window::unit_cube(static_cast<std::size_t>(plan.d));
  const unsigned threads = plan.effective_threads();
  MCPlan hashed = plan;
  hashed.model = model;
  const std::uint64_t hash = cell_hash(hashed, cell);

  // One evaluator per worker: each owns a reusable cell list.
  std::vector<StatisticEvaluator> evaluators;
  evaluators.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) evaluators.emplace_back(cfg, window, cell.n);
  const double r = evaluators.front().radius();

  std::vector<double> values(plan.reps);
  parallel_for(plan.reps, threads, [&](std::size_t rep, unsigned worker) {
    RngStream rng(plan.seed, stream_index(purpose, hash, rep));
    const PointCloud cloud = sample_model(model, cell.n, static_cast<std::size_t>(plan.d), rng, r);
    values[rep] = evaluators[worker].statistic(cloud);
  });
  return values;
}

std::string version_string() {
#ifdef RGGU_VERSION_STRING
  return RGGU_VERSION_STRING;
#else
  return "dev";
#endif
}

void stamp(ResultTable& table, const MCPlan& plan, const std::string& quantity) {
  auto& m = table.metadata();
  m["quantity"] = quantity;
  m["seed"] = std::to_string(plan.seed);
  m["reps"] = std::to_string(plan.reps);
  m["version"] = version_string();
  m["regime"] = std::string(to_string(plan.effective_regime()));
}

// Reuses rows from the checkpoint file when they were produced with the same
// seed and replication count.
class Checkpoint {
 public:
  explicit Checkpoint(const MCPlan& plan) : plan_(plan) {
    if (plan.checkpoint && std::filesystem::exists(*plan.checkpoint)) {
      previous_ = ResultTable::load(*plan.checkpoint);
    }
  }

  const ResultRow* lookup(const ResultRow& key) const {
    const ResultRow* row = previous_.find(key);
    if (row && row->seed == plan_.seed && row->reps == plan_.reps) return row;
    return nullptr;
  }

  void save(const ResultTable& table) const {
    if (plan_.checkpoint) table.save(*plan_.checkpoint);
  }

 private:
  const MCPlan& plan_;
  ResultTable previous_;
};

ResultRow row_for(const MCPlan& plan, const GridCell& cell, std::string model, double level) {
  ResultRow row;
  row.model = std::move(model);
  row.variant = std::string(to_string(plan.variant));
  row.beta = cell.beta;
  row.d = plan.d;
  row.n = cell.n;
  row.k = cell.k;
  row.reps = plan.reps;
  row.seed = plan.seed;
  row.level = level;
  return row;
}

double binomial_se(double p, std::size_t reps) {
  return std::sqrt(p * (1.0 - p) / static_cast<double>(reps));
}

}  // namespace

std::vector<double> simulate_statistics(const MCPlan& plan, const GridCell& cell,
                                        Purpose purpose) {
  return simulate_with(plan, cell, purpose, plan.model);
}

double quantile_std_error(std::span<const double> sorted, double level) {
  const double m = static_cast<double>(sorted.size());
  if (sorted.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  const double band = std::sqrt(level * (1.0 - level) / m);
  const double lo = empirical_quantile_sorted(sorted, std::max(level - band, 0.5 / m));
  const double hi = empirical_quantile_sorted(sorted, std::min(level + band, 1.0 - 0.5 / m));
  return 0.5 * (hi - lo);
}

ResultTable simulate_critical_values(const MCPlan& plan) {
  for (double level : plan.levels) {
    if (!(level > 0.0 && level < 1.0)) {
      throw Error(ErrorCode::InvalidArgument, "quantile levels must lie in (0, 1)");
    }
  }
  ResultTable table;
  stamp(table, plan, "critical-value");
  const Checkpoint checkpoint(plan);
  const ModelSpec h0 = ModelSpec::h0();
  for (const GridCell& cell : plan.cells()) {
    std::vector<ResultRow> rows;
    bool all_cached = true;
    for (double level : plan.levels) {
      ResultRow key = row_for(plan, cell, "h0", level);
      if (const ResultRow* cached = checkpoint.lookup(key)) {
        rows.push_back(*cached);
      } else {
        all_cached = false;
        break;
      }
    }
    if (!all_cached) {
      rows.clear();
      std::vector<double> values = simulate_with(plan, cell, Purpose::CriticalValues, h0);
      std::sort(values.begin(), values.end());
      for (double level : plan.levels) {
        ResultRow row = row_for(plan, cell, "h0", level);
        row.value = empirical_quantile_sorted(values, level);
        row.se = quantile_std_error(values, level);
        rows.push_back(row);
      }
    }
    for (auto& row : rows) table.add(std::move(row));
    checkpoint.save(table);
  }
  return table;
}

ResultTable empirical_power(const MCPlan& plan, const ResultTable& critical_values) {
  if (!(plan.alpha > 0.0 && plan.alpha < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, 1)");
  }
  const std::string variant(to_string(plan.variant));
  const std::string model(to_string(plan.model.kind));
  // Look every critical value up front so a missing one fails before any
  // simulation time is spent.
  std::vector<std::pair<GridCell, double>> work;
  for (const GridCell& cell : plan.cells()) {
    const ResultRow* crit =
        critical_values.find_critical(variant, cell.beta, plan.d, cell.n, cell.k, 1.0 - plan.alpha);
    if (crit == nullptr) {
      throw Error(ErrorCode::MissingCriticalValue,
                  "no critical value for " + variant + " beta=" + format_double(cell.beta) +
                      " n=" + std::to_string(cell.n) + " k=" + format_double(cell.k) +
                      " level=" + format_double(1.0 - plan.alpha));
    }
    work.emplace_back(cell, crit->value);
  }

  ResultTable table;
  stamp(table, plan, "rejection-rate");
  table.metadata()["alpha"] = format_double(plan.alpha);
  const Checkpoint checkpoint(plan);
  for (const auto& [cell, crit] : work) {
    ResultRow row = row_for(plan, cell, model, plan.alpha);
    if (const ResultRow* cached = checkpoint.lookup(row)) {
      table.add(*cached);
      continue;
    }
    const std::vector<double> values = simulate_statistics(plan, cell, Purpose::Power);
    const auto rejected =
        std::count_if(values.begin(), values.end(), [&](double t) { return t > crit; });
    row.value = static_cast<double>(rejected) / static_cast<double>(plan.reps);
    row.se = binomial_se(row.value, plan.reps);
    table.add(row);
    checkpoint.save(table);
  }
  return table;
}

namespace {

struct SampleMoments {
  double mean;
  double variance;
  double skewness;
};

SampleMoments sample_moments(std::span<const double> v) {
  const double m = static_cast<double>(v.size());
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= m;
  double m2 = 0.0;
  double m3 = 0.0;
  for (double x : v) {
    const double c = x - mean;
    m2 += c * c;
    m3 += c * c * c;
  }
  const double variance = m2 / (m - 1.0);
  const double skew = (m3 / m) / std::pow(m2 / m, 1.5);
  return {mean, variance, skew};
}

GridCell first_cell(const MCPlan& plan) {
  if (plan.betas.empty() || plan.ns.empty() || plan.ks.empty()) {
    throw Error(ErrorCode::InvalidArgument, "the plan needs at least one grid cell");
  }
  return {plan.betas.front(), plan.ns.front(), plan.ks.front()};
}

}  // namespace

CltReport clt_diagnostic(const MCPlan& plan) {
  if (plan.reps < 2) throw Error(ErrorCode::InvalidArgument, "CLT diagnostic needs reps >= 2");
  MCPlan exact = plan;
  exact.variant = Variant::Exact;
  exact.regime = plan.effective_regime();
  const GridCell cell = first_cell(exact);
  const TestConfig cfg = exact.test_config(cell);
  const Window window = Window::unit_cube(static_cast<std::size_t>(plan.d));
  const unsigned threads = exact.effective_threads();
  std::vector<StatisticEvaluator> evaluators;
  for (unsigned t = 0; t < threads; ++t) evaluators.emplace_back(cfg, window, cell.n);
  const std::uint64_t hash = cell_hash(exact, cell);

  std::vector<double> z(plan.reps);
  parallel_for(plan.reps, threads, [&](std::size_t rep, unsigned worker) {
    RngStream rng(plan.seed, stream_index(Purpose::Clt, hash, rep));
    const PointCloud cloud = sample_uniform(cell.n, static_cast<std::size_t>(plan.d), rng);
    z[rep] = evaluators[worker].standardized(cloud);
  });

  const SampleMoments mom = sample_moments(z);
  std::sort(z.begin(), z.end());
  CltReport report{};
  report.ks_distance = ks_distance_sorted(z, [](double x) { return normal_cdf(x); });
  report.mean = mom.mean;
  report.variance = mom.variance;
  report.skewness = mom.skewness;
  report.reps = plan.reps;
  report.radius = evaluators.front().radius();
  return report;
}

ContiguityReport contiguity_diagnostic(const MCPlan& plan, double gamma) {
  if (plan.reps < 2) throw Error(ErrorCode::InvalidArgument, "diagnostic needs reps >= 2");
  MCPlan exact = plan;
  exact.variant = Variant::Exact;
  exact.regime = plan.effective_regime();
  exact.model = ModelSpec::of(ModelKind::Contiguous);
  exact.model.gamma = gamma;
  const GridCell cell = first_cell(exact);
  const int d = plan.d;
  const double beta = cell.beta;
  const double r = exact.test_config(cell).radius.resolve(cell.n, d);
  const double a_n = contiguous_amplitude(gamma, cell.n, r, d);
  ContiguousSpec::cosine(a_n).validate();

  std::vector<double> values = simulate_statistics(exact, cell, Purpose::Contiguity);

  const double int_g2 = 0.5;
  const double kappa = unit_ball_volume(d);
  const double mu = std::sqrt(d * kappa * (2.0 * beta + d)) / (std::numbers::sqrt2 * (beta + d)) *
                    int_g2 * gamma;
  const SampleMoments mom = sample_moments(values);
  std::sort(values.begin(), values.end());

  ContiguityReport report{};
  report.gamma = gamma;
  report.a_n = a_n;
  report.radius = r;
  report.mu = mu;
  report.expected_mean = 1.0 + mu * mu;
  report.mean = mom.mean;
  report.mean_std_error = std::sqrt(mom.variance / static_cast<double>(values.size()));
  report.ks_distance =
      ks_distance_sorted(values, [mu](double t) { return noncentral_chi2_1_cdf(t, mu); });
  report.reps = plan.reps;
  return report;
}

ResultTable batch_pvalues(const PointCloud& cloud, const Window& window, const MCPlan& plan) {
  if (plan.reps == 0) throw Error(ErrorCode::InvalidArgument, "reps must be at least 1");
  if (cloud.dim() != window.dim() || static_cast<int>(cloud.dim()) != plan.d) {
    throw Error(ErrorCode::DimensionMismatch, "cloud, window and plan disagree on d");
  }
  window.check_contains(cloud);
  const std::size_t n = cloud.size();
  const unsigned threads = plan.effective_threads();

  ResultTable table;
  stamp(table, plan, "empirical-p-value");
  table.metadata()["window"] = window.describe();
  for (double beta : plan.betas) {
    for (double k : plan.ks) {
      const GridCell cell{beta, n, k};
      const TestConfig cfg = plan.test_config(cell);
      const double observed = run_test(cloud, cfg, window).statistic;

      std::vector<StatisticEvaluator> evaluators;
      for (unsigned t = 0; t < threads; ++t) evaluators.emplace_back(cfg, window, n);
      const std::uint64_t hash = cell_hash(plan, cell);
      std::vector<double> draws(plan.reps);
      parallel_for(plan.reps, threads, [&](std::size_t rep, unsigned worker) {
        RngStream rng(plan.seed, stream_index(Purpose::PValues, hash, rep));
        draws[rep] = evaluators[worker].statistic(sample_uniform(n, window, rng));
      });

      ResultRow row = row_for(plan, cell, "data", plan.alpha);
      row.value = empirical_pvalue(observed, draws);
      row.se = binomial_se(row.value, plan.reps);
      table.add(row);
    }
  }
  return table;
}

ResultTable br_critical_table(const MCPlan& plan, const std::vector<double>& bandwidths) {
  if (plan.reps == 0) throw Error(ErrorCode::InvalidArgument, "reps must be at least 1");
  const unsigned threads = plan.effective_threads();
  ResultTable table;
  stamp(table, plan, "br-critical-value");
  table.metadata().erase("regime");
  table.metadata()["k_column"] = "bandwidth h";
  if (plan.reps < 10'000) table.metadata()["precision"] = "low: fewer than 1e4 replications";

  for (std::size_t n : plan.ns) {
    for (double h : bandwidths) {
      ResultRow row;
      row.model = "h0";
      row.variant = "br";
      row.beta = 0.0;
      row.d = 2;
      row.n = n;
      row.k = h;
      row.reps = plan.reps;
      row.seed = plan.seed;
      row.level = 0.95;

      std::uint64_t hash = mix64(0xB5ull);
      hash = mix64(hash ^ static_cast<std::uint64_t>(n));
      hash = mix64(hash ^ std::bit_cast<std::uint64_t>(h));
      std::vector<double> values(plan.reps);
      const BRConfig cfg{h};
      parallel_for(plan.reps, threads, [&](std::size_t rep, unsigned) {
        RngStream rng(plan.seed, stream_index(Purpose::BrCritical, hash, rep));
        values[rep] = br_statistic(sample_uniform(n, 2, rng), cfg);
      });
      std::sort(values.begin(), values.end());
      for (double level : plan.levels) {
        ResultRow out = row;
        out.level = level;
        out.value = empirical_quantile_sorted(values, level);
        out.se = quantile_std_error(values, level);
        table.add(out);
      }
    }
  }
  return table;
}

}  // namespace rggu
