// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Tolerances are pinned here and nowhere else.
//
// Thread count comes from RGGU_THREADS (or the machine); results do not
// depend on it.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "rggu/edge_stats.hpp"
#include "rggu/harness.hpp"
#include "rggu/moments.hpp"
#include "rggu/uniformity.hpp"

namespace {

using namespace rggu;

struct Verdict {
  bool pass;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

// ---- 1: grid equals brute force ------------------------------------------

Verdict grid_matches_brute_force() {
  RngStream gen(20240101, 0);
  const double betas[] = {-0.5, 0.0, 1.0, 5.0};
  double worst = 0.0;
  int failures = 0;
  for (int instance = 0; instance < 1000; ++instance) {
    const std::size_t n = 2 + static_cast<std::size_t>(gen.uniform() * 199.0);
    const int d = gen.uniform() < 0.5 ? 2 : 3;
    const double beta = betas[static_cast<std::size_t>(gen.uniform() * 4.0)];
    const Regime regime = gen.uniform() < 0.5 ? Regime::Exact : Regime::Asymptotic;
    // k <= n keeps r <= 1 in both regimes.
    const double k = gen.uniform(0.5, std::min(20.0, static_cast<double>(n)));
    const double r = RadiusRule::schedule(regime, k).resolve(n, d);
    const PointCloud cloud = sample_uniform(n, static_cast<std::size_t>(d), gen);

    const double r2 = r * r;
    double brute = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        double s = 0.0;
        for (int c = 0; c < d; ++c) {
          const double diff = cloud.point(i)[c] - cloud.point(j)[c];
          s += diff * diff;
        }
        if (s <= r2) brute += beta == 0.0 ? 1.0 : std::pow(std::sqrt(s), beta);
      }
    }
    const double grid = edge_power_sum(cloud, r, beta);
    const double rel = brute == 0.0 ? std::abs(grid) : std::abs(grid - brute) / std::abs(brute);
    worst = std::max(worst, rel);
    if (!(rel <= 1e-10)) ++failures;
  }
  return {failures == 0, fmt("1000 instances, worst relative error %.3g, %d above 1e-10", worst,
                             failures)};
}

// ---- 2: Monte Carlo mean of L_n(0) ---------------------------------------

Verdict mean_formula() {
  constexpr double kExpected = 142.5563;
  constexpr std::size_t kReps = 20'000;
  std::vector<double> sums(kReps);
  parallel_for(kReps, default_thread_count(), [&](std::size_t rep, unsigned) {
    RngStream rng(2, rep);
    sums[rep] = edge_power_sum(sample_uniform(100, 2, rng), 0.1, 0.0);
  });
  double mean = 0.0;
  for (double s : sums) mean += s;
  mean /= kReps;
  double var = 0.0;
  for (double s : sums) var += (s - mean) * (s - mean);
  var /= kReps - 1;
  const double se = std::sqrt(var / kReps);
  const double z = (mean - kExpected) / se;
  return {std::abs(z) <= 3.0, fmt("mean %.4f, SE %.4f, %.2f SE from %.4f", mean, se, z, kExpected)};
}

// ---- 3: critical values ---------------------------------------------------

struct CritCell {
  Variant variant;
  int d;
  double beta;
  std::size_t n;
  double k;
  double expected;
  double tol;
};

Verdict critical_values() {
  const CritCell cells[] = {
      {Variant::Exact, 2, -0.5, 50, 1.0, 3.5153, 0.08},
      {Variant::Asymptotic, 2, -0.5, 500, 5.0, 3.7536, 0.15},
      {Variant::Exact, 3, 0.0, 100, 3.0, 3.9569, 0.15},
  };
  bool pass = true;
  std::string detail;
  for (const CritCell& c : cells) {
    MCPlan plan;
    plan.reps = 100'000;
    plan.seed = 3;
    plan.variant = c.variant;
    plan.d = c.d;
    plan.betas = {c.beta};
    plan.ns = {c.n};
    plan.ks = {c.k};
    const ResultRow& row = simulate_critical_values(plan).rows().at(0);
    const bool ok = std::abs(row.value - c.expected) <= c.tol;
    pass = pass && ok;
    detail += fmt("%s d=%d n=%zu k=%g: %.4f (SE %.4f, want %.4f +- %.2f)%s; ",
                  std::string(to_string(c.variant)).c_str(), c.d, c.n, c.k, row.value, row.se,
                  c.expected, c.tol, ok ? "" : " MISS");
  }
  return {pass, detail};
}

// ---- 4, 5, 9 share the T_e, d = 2, beta = -0.5 critical values ------------

MCPlan te_grid_plan() {
  MCPlan plan;
  plan.reps = 100'000;
  plan.seed = 4;
  plan.variant = Variant::Exact;
  plan.betas = {-0.5};
  plan.ns = {50, 100, 200, 500};
  plan.ks = {1.0, 2.0, 5.0};
  return plan;
}

Verdict level_calibration(const ResultTable& crit) {
  MCPlan plan = te_grid_plan();
  plan.reps = 10'000;
  plan.seed = 44;
  plan.model = ModelSpec::h0();
  const ResultTable rates = empirical_power(plan, crit);
  int inside = 0;
  std::string detail;
  for (const ResultRow& row : rates.rows()) {
    const bool ok = std::abs(row.value - 0.05) <= 0.007;
    if (ok) ++inside;
    detail += fmt("n=%zu k=%g %.2f%%%s; ", row.n, row.k, 100.0 * row.value, ok ? "" : " MISS");
  }
  return {inside >= 12, fmt("%d of %zu cells within 5%% +- 0.7%%: ", inside, rates.rows().size()) +
                            detail};
}

double power_of(ModelKind kind, Variant variant, std::size_t n, double k,
                const ResultTable* crit_table) {
  MCPlan plan;
  plan.variant = variant;
  plan.betas = {-0.5};
  plan.ns = {n};
  plan.ks = {k};
  ResultTable own;
  if (crit_table == nullptr) {
    plan.reps = 100'000;
    plan.seed = 5;
    own = simulate_critical_values(plan);
    crit_table = &own;
  }
  plan.reps = 10'000;
  plan.seed = 55;
  plan.model = ModelSpec::of(kind);
  return empirical_power(plan, *crit_table).rows().at(0).value;
}

Verdict power_reproduction(const ResultTable& crit) {
  struct Cell {
    ModelKind kind;
    Variant variant;
    std::size_t n;
    double k;
    double expected;
  };
  const Cell cells[] = {
      {ModelKind::Con, Variant::Exact, 100, 5.0, 92.0},
      {ModelKind::Clu, Variant::Exact, 50, 2.0, 97.0},
      {ModelKind::Sps, Variant::Asymptotic, 100, 1.0, 56.0},
  };
  bool pass = true;
  std::string detail;
  for (const Cell& c : cells) {
    const ResultTable* table = c.variant == Variant::Exact ? &crit : nullptr;
    const double pct = 100.0 * power_of(c.kind, c.variant, c.n, c.k, table);
    const bool ok = std::abs(pct - c.expected) <= 2.0;
    pass = pass && ok;
    detail += fmt("%s %s n=%zu k=%g: %.2f (want %.0f +- 2)%s; ",
                  std::string(to_string(c.kind)).c_str(),
                  std::string(to_string(c.variant)).c_str(), c.n, c.k, pct, c.expected,
                  ok ? "" : " MISS");
  }
  return {pass, detail};
}

Verdict consistency(const ResultTable& crit) {
  double previous = -1.0;
  bool increasing = true;
  std::string detail = "CON power at n = 50, 100, 200:";
  for (std::size_t n : {50u, 100u, 200u}) {
    const double p = power_of(ModelKind::Con, Variant::Exact, n, 5.0, &crit);
    increasing = increasing && p > previous;
    previous = p;
    detail += fmt(" %.2f%%", 100.0 * p);
  }
  return {increasing, detail};
}

// ---- 6: BR critical values -------------------------------------------------

Verdict br_quantiles() {
  MCPlan plan;
  plan.reps = 100'000;
  plan.seed = 6;
  plan.ns = {50};
  const ResultTable t = br_critical_table(plan, {1.0, 0.1});
  const double expected[] = {0.01799183, 9113.028};
  bool pass = true;
  std::string detail;
  for (std::size_t i = 0; i < 2; ++i) {
    const ResultRow& row = t.rows().at(i);
    const double rel = std::abs(row.value - expected[i]) / expected[i];
    const bool ok = rel <= 0.02;
    pass = pass && ok;
    detail += fmt("h=%g: %.7g (SE %.3g, want %.7g, rel %.4f)%s; ", row.k, row.value, row.se,
                  expected[i], rel, ok ? "" : " MISS");
  }
  return {pass, detail};
}

// ---- 7: CLT diagnostic -----------------------------------------------------

Verdict clt() {
  MCPlan plan;
  plan.reps = 10'000;
  plan.seed = 7;
  plan.regime = Regime::Exact;
  plan.betas = {0.0};
  plan.ns = {500};
  plan.ks = {5.0};
  const CltReport rep = clt_diagnostic(plan);
  const bool ok = rep.ks_distance < 0.02 && std::abs(rep.variance - 1.0) <= 0.1;
  return {ok, fmt("KS %.4f (want < 0.02), variance %.4f (want 1 +- 0.1), mean %.4f, skewness %.3f",
                  rep.ks_distance, rep.variance, rep.mean, rep.skewness)};
}

// ---- 8: contiguous alternatives -------------------------------------------

Verdict contiguity() {
  MCPlan plan;
  plan.reps = 10'000;
  plan.seed = 8;
  plan.regime = Regime::Exact;
  plan.betas = {0.0};
  plan.ns = {1000};
  plan.ks = {1.0};
  const ContiguityReport alt = contiguity_diagnostic(plan, 1.0);
  const ContiguityReport null = contiguity_diagnostic(plan, 0.0);
  const bool mean_ok = std::abs(alt.mean - 1.3927) <= 0.06;
  const bool ks_ok = null.ks_distance < 0.03;
  return {mean_ok && ks_ok,
          fmt("gamma=1 mean %.4f (SE %.4f, want 1.3927 +- 0.06, limit 1 + mu^2 = %.4f)%s; "
              "gamma=0 KS %.4f (want < 0.03)%s",
              alt.mean, alt.mean_std_error, alt.expected_mean, mean_ok ? "" : " MISS",
              null.ks_distance, ks_ok ? "" : " MISS")};
}

// ---- 10: determinism across thread counts ----------------------------------

Verdict determinism() {
  MCPlan plan;
  plan.reps = 2000;
  plan.seed = 10;
  plan.betas = {-0.5, 1.0};
  plan.ns = {50, 200};
  plan.ks = {2.0, 5.0};
  plan.levels = {0.9, 0.95};
  std::vector<std::string> outputs;
  for (unsigned threads : {1u, 2u, 4u, 8u}) {
    plan.threads = threads;
    plan.model = ModelSpec::h0();
    const ResultTable crit = simulate_critical_values(plan);
    MCPlan alt = plan;
    alt.model = ModelSpec::of(ModelKind::Con);
    alt.levels = {0.95};
    MCPlan br = plan;
    br.ns = {30};
    outputs.push_back(crit.to_csv() + empirical_power(alt, crit).to_csv() +
                      br_critical_table(br, {0.25, 1.0}).to_csv());
  }
  bool same = true;
  for (const auto& o : outputs) same = same && o == outputs.front();
  return {same, fmt("critical values, power and BR tables at 1, 2, 4, 8 threads: %s",
                    same ? "byte-identical" : "differ")};
}

}  // namespace

int main() {
  using Clock = std::chrono::steady_clock;
  std::printf("acceptance run on %u thread(s)\n", default_thread_count());
  std::fflush(stdout);

  ResultTable te_crit;
  bool all_pass = true;
  const auto report = [&](int id, const std::function<Verdict()>& body) {
    const auto start = Clock::now();
    Verdict v;
    try {
      v = body();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    all_pass = all_pass && v.pass;
    std::printf("criterion %d: %s  [%.1fs] %s\n", id, v.pass ? "PASS" : "FAIL", secs,
                v.detail.c_str());
    std::fflush(stdout);
  };

  report(1, grid_matches_brute_force);
  report(2, mean_formula);
  report(3, critical_values);
  const auto start = Clock::now();
  te_crit = simulate_critical_values(te_grid_plan());
  std::printf("(shared T_e critical values, 12 cells x 1e5 reps: %.1fs)\n",
              std::chrono::duration<double>(Clock::now() - start).count());
  report(4, [&] { return level_calibration(te_crit); });
  report(5, [&] { return power_reproduction(te_crit); });
  report(6, br_quantiles);
  report(7, clt);
  report(8, contiguity);
  report(9, [&] { return consistency(te_crit); });
  report(10, determinism);
  std::printf("overall: %s\n", all_pass ? "PASS" : "FAIL");
  return all_pass ? 0 : 1;
}
