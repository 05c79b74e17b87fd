// Command-line front end. Talks to the library exclusively through rggu.h.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rggu/rggu.h"

namespace {

enum Exit { kOk = 0, kUsage = 2, kData = 3, kNumeric = 4 };

struct Failure {
  rggu_status status;
  std::string message;
};

void check(rggu_status s) {
  if (s != RGGU_OK) throw Failure{s, rggu_last_error()};
}

int exit_code(rggu_status s) {
  switch (s) {
    case RGGU_ERR_PARSE:
    case RGGU_ERR_IO:
    case RGGU_ERR_DIMENSION_MISMATCH:
    case RGGU_ERR_TOO_FEW_POINTS:
    case RGGU_ERR_DUPLICATE_POINTS:
    case RGGU_ERR_POINT_OUTSIDE_WINDOW:
      return kData;
    default:
      return kNumeric;
  }
}

struct CloudDel { void operator()(rggu_cloud* p) const { rggu_cloud_free(p); } };
struct WindowDel { void operator()(rggu_window* p) const { rggu_window_free(p); } };
struct TableDel { void operator()(rggu_table* p) const { rggu_table_free(p); } };
struct StringDel { void operator()(char* p) const { rggu_string_free(p); } };
using Cloud = std::unique_ptr<rggu_cloud, CloudDel>;
using WindowPtr = std::unique_ptr<rggu_window, WindowDel>;
using Table = std::unique_ptr<rggu_table, TableDel>;
using CString = std::unique_ptr<char, StringDel>;

int variant_code(const std::string& v) {
  if (v == "e" || v == "te" || v == "exact") return RGGU_VARIANT_EXACT;
  return RGGU_VARIANT_ASYMPTOTIC;
}

int regime_code(const std::string& r) {
  if (r.empty()) return RGGU_REGIME_DEFAULT;
  return r == "exact" ? RGGU_REGIME_EXACT : RGGU_REGIME_ASYMPTOTIC;
}

std::string fmt(double v, int digits = 6) {
  std::ostringstream os;
  os.precision(digits);
  os << v;
  return os.str();
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Failure{RGGU_ERR_IO, "cannot write '" + path + "'"};
  out << text;
}

void emit_table(const rggu_table* table, const std::string& out, const std::string& json) {
  char* raw = nullptr;
  check(rggu_table_to_csv(table, &raw));
  CString csv(raw);
  write_text(out, csv.get());
  if (!json.empty()) {
    check(rggu_table_to_json(table, &raw));
    CString js(raw);
    write_text(json, js.get());
  }
}

// Options shared by the simulation commands.
struct GridOptions {
  std::vector<double> betas{0.0};
  std::vector<std::size_t> ns{100};
  std::vector<double> ks{5.0};
  std::string variant = "e";
  std::string regime;
  int d = 2;
  std::size_t reps = 10000;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  std::vector<double> levels{0.95};
  double alpha = 0.05;
  std::string checkpoint;

  void add_to(CLI::App* cmd, bool grid = true) {
    if (grid) {
      cmd->add_option("--betas,--beta", betas, "Edge-length exponents")->delimiter(',');
      cmd->add_option("--ns,--n", ns, "Sample sizes")->delimiter(',');
      cmd->add_option("--ks,--k", ks, "Radius schedule parameters")->delimiter(',');
      cmd->add_option("--variant", variant, "e (T_e) or a (T_a)")
          ->check(CLI::IsMember({"e", "a", "te", "ta", "exact", "asym"}));
      cmd->add_option("--regime", regime, "Radius schedule: exact or asym (default follows variant)")
          ->check(CLI::IsMember({"exact", "asym"}));
      cmd->add_option("--d", d, "Dimension")->check(CLI::Range(1, 10));
    }
    cmd->add_option("--reps", reps, "Monte Carlo replications")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", seed, "Master seed");
    cmd->add_option("--threads", threads, "Worker threads (default: RGGU_THREADS or all cores)");
  }

  rggu_plan plan() const {
    rggu_plan p;
    rggu_plan_init(&p);
    p.reps = reps;
    p.seed = seed;
    p.threads = threads;
    p.variant = variant_code(variant);
    p.regime = regime_code(regime);
    p.dim = d;
    p.betas = betas.data();
    p.n_betas = betas.size();
    p.ns = ns.data();
    p.n_ns = ns.size();
    p.ks = ks.data();
    p.n_ks = ks.size();
    p.levels = levels.data();
    p.n_levels = levels.size();
    p.alpha = alpha;
    p.checkpoint = checkpoint.empty() ? nullptr : checkpoint.c_str();
    return p;
  }
};

struct ModelOptions {
  std::string name = "h0";
  double clu_radius = 0.1;
  double sps_sigma = 0.01;
  double sps_p = 0.05;
  double gamma = 0.0;
  std::optional<double> q1, q2, c1, c2, sigma1, sigma2;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--model", name, "h0, con, clu, sps or contiguous")
        ->check(CLI::IsMember({"h0", "con", "clu", "sps", "contiguous"}));
    cmd->add_option("--clu-radius", clu_radius, "Cluster radius");
    cmd->add_option("--sps-sigma", sps_sigma, "Point-source standard deviation");
    cmd->add_option("--sps-p", sps_p, "Point-source contamination probability");
    cmd->add_option("--gamma", gamma, "Contiguous alternative: n r^{d/2} a_n^2");
    cmd->add_option("--con-q1", q1, "CON weight of component 1");
    cmd->add_option("--con-q2", q2, "CON weight of component 2");
    cmd->add_option("--con-c1", c1, "CON centre 1 (same value on every axis)");
    cmd->add_option("--con-c2", c2, "CON centre 2 (same value on every axis)");
    cmd->add_option("--con-sigma1", sigma1, "CON standard deviation 1");
    cmd->add_option("--con-sigma2", sigma2, "CON standard deviation 2");
  }

  rggu_model model(int d) const {
    rggu_model m;
    rggu_model_init(&m);
    check(rggu_model_parse(name.c_str(), &m.kind));
    m.clu_radius = clu_radius;
    m.sps_sigma = sps_sigma;
    m.sps_p = sps_p;
    m.gamma = gamma;
    if (q1 || q2 || c1 || c2 || sigma1 || sigma2) {
      // Unset fields keep the reference values for this dimension.
      check(rggu_model_con_reference(&m, static_cast<std::size_t>(d)));
      m.con_custom = 1;
      m.con_q1 = q1.value_or(m.con_q1);
      m.con_q2 = q2.value_or(m.con_q2);
      m.con_c1 = c1.value_or(m.con_c1);
      m.con_c2 = c2.value_or(m.con_c2);
      m.con_sigma1 = sigma1.value_or(m.con_sigma1);
      m.con_sigma2 = sigma2.value_or(m.con_sigma2);
    }
    return m;
  }

  std::string describe(int d) const {
    std::ostringstream os;
    os << "model: " << name;
    if (name == "con") {
      rggu_model m = model(d);
      if (!m.con_custom) check(rggu_model_con_reference(&m, static_cast<std::size_t>(d)));
      os << " q1=" << fmt(m.con_q1, 8) << " q2=" << fmt(m.con_q2, 8) << " c1=" << fmt(m.con_c1, 8)
         << " c2=" << fmt(m.con_c2, 8) << " sigma1=" << fmt(m.con_sigma1, 8)
         << " sigma2=" << fmt(m.con_sigma2, 8);
      if (!m.con_custom) os << " (reference parameters)";
    } else if (name == "clu") {
      os << " radius=" << clu_radius << " children=5";
    } else if (name == "sps") {
      os << " sigma=" << sps_sigma << " p=" << sps_p;
    } else if (name == "contiguous") {
      os << " g=cos(2 pi x1) gamma=" << gamma;
    }
    return os.str();
  }
};

// ---------------------------------------------------------------------------

struct TestCommand {
  std::string input;
  std::string window_spec;
  std::string variant = "e";
  std::string regime;
  double beta = 0.0;
  double k = 5.0;
  std::optional<double> radius;
  std::size_t reps = 0;
  std::uint64_t seed = 1;
  double alpha = 0.05;
  unsigned threads = 0;
  std::string json;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--input,-i", input, "Point file (comma-separated rows)")->required();
    cmd->add_option("--window", window_spec, "unit:d or box:L1,L2[,L3] (default unit cube)");
    cmd->add_option("--variant", variant, "e (T_e) or a (T_a)")
        ->check(CLI::IsMember({"e", "a", "te", "ta", "exact", "asym"}));
    cmd->add_option("--beta", beta, "Edge-length exponent (> -d/2)");
    cmd->add_option("--k", k, "Radius schedule parameter");
    cmd->add_option("--regime", regime, "exact or asym (default follows variant)")
        ->check(CLI::IsMember({"exact", "asym"}));
    cmd->add_option("--radius", radius, "Explicit radius, overrides --k/--regime");
    cmd->add_option("--reps", reps, "Null replications for an empirical p-value (0: none)");
    cmd->add_option("--seed", seed, "Master seed for the null replications");
    cmd->add_option("--alpha", alpha, "Significance level")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--threads", threads, "Worker threads");
    cmd->add_option("--json", json, "Also write the report as JSON to this path");
  }

  void run() const {
    rggu_cloud* raw_cloud = nullptr;
    rggu_window* raw_window = nullptr;
    std::size_t expected = 0;
    if (!window_spec.empty()) {
      check(rggu_window_parse(window_spec.c_str(), &raw_window));
      expected = rggu_window_dim(raw_window);
    }
    WindowPtr window(raw_window);
    check(rggu_cloud_read(input.c_str(), expected, &raw_cloud));
    Cloud cloud(raw_cloud);
    if (!window) {
      check(rggu_window_unit(rggu_cloud_dim(cloud.get()), &raw_window));
      window.reset(raw_window);
    }
    if (rggu_window_scale(window.get()) != 1.0) {
      check(rggu_cloud_scaled(cloud.get(), rggu_window_scale(window.get()), &raw_cloud));
      cloud.reset(raw_cloud);
    }
    check(rggu_window_check(window.get(), cloud.get()));

    rggu_test_config cfg;
    rggu_test_config_init(&cfg);
    cfg.beta = beta;
    cfg.variant = variant_code(variant);
    cfg.regime = regime_code(regime);
    cfg.k = k;
    cfg.radius = radius.value_or(0.0);
    cfg.dim = static_cast<int>(rggu_cloud_dim(cloud.get()));
    rggu_test_outcome out;
    check(rggu_run_test(cloud.get(), window.get(), &cfg, &out));

    std::optional<double> p_emp;
    if (reps > 0) {
      if (radius) {
        throw Failure{RGGU_ERR_INVALID_ARGUMENT,
                      "empirical p-values need a radius schedule (--k), not --radius"};
      }
      rggu_plan plan;
      rggu_plan_init(&plan);
      plan.reps = reps;
      plan.seed = seed;
      plan.threads = threads;
      plan.variant = cfg.variant;
      plan.regime = cfg.regime;
      plan.dim = cfg.dim;
      plan.betas = &beta;
      plan.n_betas = 1;
      plan.ks = &k;
      plan.n_ks = 1;
      plan.alpha = alpha;
      rggu_table* raw_table = nullptr;
      check(rggu_batch_pvalues(cloud.get(), window.get(), &plan, &raw_table));
      Table table(raw_table);
      rggu_row row;
      check(rggu_table_row(table.get(), 0, &row));
      p_emp = row.value;
    }

    const double p_decide = p_emp.value_or(out.p_asymptotic);
    const char* name = cfg.variant == RGGU_VARIANT_EXACT ? "T_e" : "T_a";
    std::cout << "window: " << rggu_window_describe(window.get()) << "\n"
              << "n: " << rggu_cloud_size(cloud.get()) << "\n"
              << "beta: " << fmt(beta) << "\n"
              << "radius: " << fmt(out.radius, 8) << "\n"
              << "edge_sum: " << fmt(out.edge_sum, 10) << "\n"
              << "null_mean: " << fmt(out.center, 10) << "\n"
              << "null_std: " << fmt(out.scale, 10) << "\n"
              << "statistic " << name << ": " << fmt(out.statistic, 8) << "\n"
              << "p_asymptotic: " << fmt(out.p_asymptotic, 8) << "\n";
    if (p_emp) std::cout << "p_empirical: " << fmt(*p_emp, 8) << " (reps " << reps << ")\n";
    std::cout << "decision at alpha=" << fmt(alpha) << ": "
              << (p_decide < alpha ? "reject uniformity" : "do not reject") << "\n";

    if (!json.empty()) {
      std::ostringstream js;
      js.precision(17);
      js << "{\n  \"variant\": \"" << (cfg.variant == RGGU_VARIANT_EXACT ? "te" : "ta")
         << "\",\n  \"n\": " << rggu_cloud_size(cloud.get()) << ",\n  \"beta\": " << beta
         << ",\n  \"radius\": " << out.radius << ",\n  \"edge_sum\": " << out.edge_sum
         << ",\n  \"null_mean\": " << out.center << ",\n  \"null_std\": " << out.scale
         << ",\n  \"statistic\": " << out.statistic << ",\n  \"p_asymptotic\": " << out.p_asymptotic
         << ",\n  \"p_empirical\": ";
      if (p_emp) js << *p_emp; else js << "null";
      js << ",\n  \"alpha\": " << alpha << ",\n  \"reject\": " << (p_decide < alpha ? "true" : "false")
         << "\n}\n";
      write_text(json, js.str());
    }
  }
};

struct GenCommand {
  ModelOptions model;
  std::size_t n = 100;
  int d = 2;
  std::uint64_t seed = 1;
  std::uint64_t stream = 0;
  double k = 1.0;
  std::string out;

  void add_to(CLI::App* cmd) {
    model.add_to(cmd);
    cmd->add_option("--n", n, "Number of points")->check(CLI::PositiveNumber);
    cmd->add_option("--d", d, "Dimension")->check(CLI::Range(1, 10));
    cmd->add_option("--seed", seed, "Master seed");
    cmd->add_option("--stream", stream, "Stream index");
    cmd->add_option("--k", k, "Contiguous model: radius schedule parameter (exact regime)");
    cmd->add_option("--out,-o", out, "Output file (default stdout)");
  }

  void run() const {
    const rggu_model m = model.model(d);
    double r = 0.0;
    if (m.kind == RGGU_MODEL_CONTIGUOUS) check(rggu_radius_exact_regime(n, d, k, &r));
    rggu_cloud* raw = nullptr;
    check(rggu_sample(&m, n, static_cast<std::size_t>(d), seed, stream, r, &raw));
    Cloud cloud(raw);
    std::string header = model.describe(d) + "\nn: " + std::to_string(n) +
                         " d: " + std::to_string(d) + " seed: " + std::to_string(seed) +
                         " stream: " + std::to_string(stream);
    char* text = nullptr;
    check(rggu_cloud_format(cloud.get(), header.c_str(), &text));
    CString owned(text);
    write_text(out, owned.get());
  }
};

struct CritCommand {
  GridOptions grid;
  std::string out;
  std::string json;

  void add_to(CLI::App* cmd) {
    grid.add_to(cmd);
    grid.reps = 100000;
    cmd->add_option("--levels", grid.levels, "Quantile levels")->delimiter(',');
    cmd->add_option("--checkpoint", grid.checkpoint, "Resume file, rewritten after each cell");
    cmd->add_option("--out,-o", out, "CSV output path")->required();
    cmd->add_option("--json", json, "Also write JSON here");
  }

  void run() const {
    const rggu_plan plan = grid.plan();
    rggu_table* raw = nullptr;
    check(rggu_simulate_critical_values(&plan, &raw));
    Table table(raw);
    emit_table(table.get(), out, json);
  }
};

struct PowerCommand {
  GridOptions grid;
  ModelOptions model;
  std::string crit_path;
  std::size_t crit_reps = 100000;
  std::string out;
  std::string json;

  void add_to(CLI::App* cmd) {
    grid.add_to(cmd);
    model.add_to(cmd);
    cmd->add_option("--alpha", grid.alpha, "Significance level")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--crit", crit_path, "Critical-value table from `crit` (simulated if absent)");
    cmd->add_option("--crit-reps", crit_reps, "Replications when simulating critical values");
    cmd->add_option("--checkpoint", grid.checkpoint, "Resume file, rewritten after each cell");
    cmd->add_option("--out,-o", out, "CSV output path")->required();
    cmd->add_option("--json", json, "Also write JSON here");
  }

  void run() const {
    rggu_plan plan = grid.plan();
    plan.model = model.model(grid.d);
    rggu_table* raw = nullptr;
    if (!crit_path.empty()) {
      check(rggu_table_load(crit_path.c_str(), &raw));
    } else {
      rggu_plan crit = grid.plan();
      crit.reps = crit_reps;
      crit.checkpoint = nullptr;
      const double level = 1.0 - grid.alpha;
      crit.levels = &level;
      crit.n_levels = 1;
      check(rggu_simulate_critical_values(&crit, &raw));
    }
    Table critical(raw);
    check(rggu_empirical_power(&plan, critical.get(), &raw));
    Table table(raw);
    emit_table(table.get(), out, json);
  }
};

struct CltCommand {
  GridOptions grid;
  std::string out;

  void add_to(CLI::App* cmd) {
    grid.add_to(cmd);
    cmd->add_option("--out,-o", out, "Write the report as JSON here");
  }

  void run() const {
    rggu_plan plan = grid.plan();
    rggu_clt_report r;
    check(rggu_clt_diagnostic(&plan, &r));
    std::ostringstream os;
    os << "ks_distance: " << fmt(r.ks_distance) << "\nmean: " << fmt(r.mean)
       << "\nvariance: " << fmt(r.variance) << "\nskewness: " << fmt(r.skewness)
       << "\nradius: " << fmt(r.radius, 8) << "\nreps: " << r.reps << "\n";
    std::cout << os.str();
    if (!out.empty()) {
      std::ostringstream js;
      js.precision(17);
      js << "{\"ks_distance\": " << r.ks_distance << ", \"mean\": " << r.mean
         << ", \"variance\": " << r.variance << ", \"skewness\": " << r.skewness
         << ", \"radius\": " << r.radius << ", \"reps\": " << r.reps
         << ", \"seed\": " << grid.seed << "}\n";
      write_text(out, js.str());
    }
  }
};

struct ContigCommand {
  GridOptions grid;
  std::vector<double> gammas{0.0, 1.0, 2.0};
  std::string out;

  void add_to(CLI::App* cmd) {
    grid.add_to(cmd);
    grid.ks = {1.0};
    grid.ns = {1000};
    cmd->add_option("--gammas,--gamma", gammas, "Values of n r^{d/2} a_n^2")->delimiter(',');
    cmd->add_option("--out,-o", out, "Write the reports as JSON here");
  }

  void run() const {
    rggu_plan plan = grid.plan();
    std::ostringstream js;
    js.precision(17);
    js << "[\n";
    for (std::size_t i = 0; i < gammas.size(); ++i) {
      rggu_contiguity_report r;
      check(rggu_contiguity_diagnostic(&plan, gammas[i], &r));
      std::cout << "gamma=" << fmt(r.gamma) << " a_n=" << fmt(r.a_n) << " radius=" << fmt(r.radius)
                << " mean=" << fmt(r.mean) << " (se " << fmt(r.mean_std_error, 3)
                << ") limit=" << fmt(r.expected_mean) << " ks=" << fmt(r.ks_distance, 4) << "\n";
      js << "  {\"gamma\": " << r.gamma << ", \"a_n\": " << r.a_n << ", \"radius\": " << r.radius
         << ", \"mu\": " << r.mu << ", \"limit_mean\": " << r.expected_mean
         << ", \"mean\": " << r.mean << ", \"mean_se\": " << r.mean_std_error
         << ", \"ks_distance\": " << r.ks_distance << ", \"reps\": " << r.reps << "}"
         << (i + 1 < gammas.size() ? ",\n" : "\n");
    }
    js << "]\n";
    if (!out.empty()) write_text(out, js.str());
  }
};

struct BrCommand {
  GridOptions grid;
  std::vector<double> hs{0.1, 0.25, 0.5, 1.0};
  std::string out;
  std::string json;

  void add_to(CLI::App* cmd) {
    grid.add_to(cmd, false);
    grid.reps = 100000;
    grid.ns = {50, 100, 200, 500};
    cmd->add_option("--ns,--n", grid.ns, "Sample sizes")->delimiter(',');
    cmd->add_option("--hs,--bandwidths", hs, "Bandwidths")->delimiter(',');
    cmd->add_option("--out,-o", out, "CSV output path")->required();
    cmd->add_option("--json", json, "Also write JSON here");
  }

  void run() const {
    rggu_plan plan = grid.plan();
    if (grid.reps < 10000) {
      std::cerr << "note: fewer than 1e4 replications, quantiles are low precision\n";
    }
    rggu_table* raw = nullptr;
    check(rggu_br_critical_table(&plan, hs.data(), hs.size(), &raw));
    Table table(raw);
    emit_table(table.get(), out, json);
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Uniformity tests based on random geometric graph edge statistics"};
  app.set_version_flag("--version", std::string(rggu_version()));
  app.require_subcommand(1);

  TestCommand test;
  GenCommand gen;
  CritCommand crit;
  PowerCommand power;
  CltCommand clt;
  ContigCommand contig;
  BrCommand br;

  test.add_to(app.add_subcommand("test", "Run T_e or T_a on a point file"));
  gen.add_to(app.add_subcommand("gen", "Sample a point file from H0 or an alternative"));
  crit.add_to(app.add_subcommand("crit", "Simulate critical values over a grid"));
  power.add_to(app.add_subcommand("power", "Simulate rejection rates over a grid"));
  clt.add_to(app.add_subcommand("clt-check", "Normal approximation diagnostic under H0"));
  contig.add_to(app.add_subcommand("contig-check", "Contiguous alternative diagnostic"));
  br.add_to(app.add_subcommand("br-crit", "Simulate BR critical values"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (app.got_subcommand("test")) test.run();
    else if (app.got_subcommand("gen")) gen.run();
    else if (app.got_subcommand("crit")) crit.run();
    else if (app.got_subcommand("power")) power.run();
    else if (app.got_subcommand("clt-check")) clt.run();
    else if (app.got_subcommand("contig-check")) contig.run();
    else if (app.got_subcommand("br-crit")) br.run();
  } catch (const Failure& f) {
    std::cerr << "error (" << rggu_status_name(f.status) << "): " << f.message << "\n";
    return exit_code(f.status);
  }
  return kOk;
}
