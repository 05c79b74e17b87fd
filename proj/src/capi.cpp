#include "rggu/rggu.h"

#include <cstring>
#include <new>
#include <string>

#include "rggu/alternatives.hpp"
#include "rggu/competitors.hpp"
#include "rggu/edge_stats.hpp"
#include "rggu/harness.hpp"
#include "rggu/moments.hpp"
#include "rggu/point_io.hpp"
#include "rggu/uniformity.hpp"

struct rggu_cloud {
  rggu::PointCloud value;
};

struct rggu_window {
  rggu::Window value;
  std::string description;
};

struct rggu_table {
  rggu::ResultTable value;
};

namespace {

thread_local std::string g_last_error;

rggu_status to_status(rggu::ErrorCode code) {
  using rggu::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument: return RGGU_ERR_INVALID_ARGUMENT;
    case ErrorCode::InvalidDimension: return RGGU_ERR_INVALID_DIMENSION;
    case ErrorCode::DimensionMismatch: return RGGU_ERR_DIMENSION_MISMATCH;
    case ErrorCode::TooFewPoints: return RGGU_ERR_TOO_FEW_POINTS;
    case ErrorCode::PointOutsideWindow: return RGGU_ERR_POINT_OUTSIDE_WINDOW;
    case ErrorCode::DuplicatePoints: return RGGU_ERR_DUPLICATE_POINTS;
    case ErrorCode::RadiusTooLarge: return RGGU_ERR_RADIUS_TOO_LARGE;
    case ErrorCode::InvalidMoments: return RGGU_ERR_INVALID_MOMENTS;
    case ErrorCode::DegenerateParameters: return RGGU_ERR_DEGENERATE_PARAMETERS;
    case ErrorCode::MissingCriticalValue: return RGGU_ERR_MISSING_CRITICAL_VALUE;
    case ErrorCode::Parse: return RGGU_ERR_PARSE;
    case ErrorCode::Io: return RGGU_ERR_IO;
  }
  return RGGU_ERR_INTERNAL;
}

rggu_status fail(rggu_status status, const char* message) {
  g_last_error = message;
  return status;
}

// Runs `body`, translating exceptions into status codes. Nothing may escape
// across the C boundary.
template <class F>
rggu_status guarded(F&& body) noexcept {
  try {
    g_last_error.clear();
    body();
    return RGGU_OK;
  } catch (const rggu::Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(RGGU_ERR_OUT_OF_MEMORY, "out of memory");
  } catch (const std::exception& e) {
    return fail(RGGU_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(RGGU_ERR_INTERNAL, "unknown failure");
  }
}

void require(const void* p, const char* what) {
  if (p == nullptr) {
    throw rggu::Error(rggu::ErrorCode::InvalidArgument, std::string(what) + " must not be NULL");
  }
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

rggu::TestConfig to_config(const rggu_test_config& c) {
  rggu::TestConfig cfg;
  cfg.beta = c.beta;
  cfg.variant = c.variant == RGGU_VARIANT_ASYMPTOTIC ? rggu::Variant::Asymptotic
                                                     : rggu::Variant::Exact;
  rggu::Regime regime = cfg.variant == rggu::Variant::Exact ? rggu::Regime::Exact
                                                            : rggu::Regime::Asymptotic;
  if (c.regime == RGGU_REGIME_EXACT) regime = rggu::Regime::Exact;
  if (c.regime == RGGU_REGIME_ASYMPTOTIC) regime = rggu::Regime::Asymptotic;
  cfg.radius = c.radius > 0.0 ? rggu::RadiusRule::fixed(c.radius)
                              : rggu::RadiusRule::schedule(regime, c.k);
  cfg.dim = c.dim;
  return cfg;
}

rggu::ModelSpec to_model(const rggu_model& m, std::size_t d) {
  rggu::ModelSpec spec;
  switch (m.kind) {
    case RGGU_MODEL_H0: spec.kind = rggu::ModelKind::H0; break;
    case RGGU_MODEL_CON: spec.kind = rggu::ModelKind::Con; break;
    case RGGU_MODEL_CLU: spec.kind = rggu::ModelKind::Clu; break;
    case RGGU_MODEL_SPS: spec.kind = rggu::ModelKind::Sps; break;
    case RGGU_MODEL_CONTIGUOUS: spec.kind = rggu::ModelKind::Contiguous; break;
    default: throw rggu::Error(rggu::ErrorCode::InvalidArgument, "unknown model kind");
  }
  if (m.con_custom) {
    rggu::ConParams con;
    con.q1 = m.con_q1;
    con.q2 = m.con_q2;
    con.c1.assign(d, m.con_c1);
    con.c2.assign(d, m.con_c2);
    con.sigma1 = m.con_sigma1;
    con.sigma2 = m.con_sigma2;
    spec.con = con;
  }
  spec.clu_radius = m.clu_radius;
  spec.sps.sigma = m.sps_sigma;
  spec.sps.p = m.sps_p;
  spec.gamma = m.gamma;
  return spec;
}

rggu::MCPlan to_plan(const rggu_plan& p) {
  rggu::MCPlan plan;
  plan.reps = p.reps;
  plan.seed = p.seed;
  plan.threads = p.threads;
  plan.variant = p.variant == RGGU_VARIANT_ASYMPTOTIC ? rggu::Variant::Asymptotic
                                                      : rggu::Variant::Exact;
  if (p.regime == RGGU_REGIME_EXACT) plan.regime = rggu::Regime::Exact;
  if (p.regime == RGGU_REGIME_ASYMPTOTIC) plan.regime = rggu::Regime::Asymptotic;
  if (p.dim < 1) throw rggu::Error(rggu::ErrorCode::InvalidDimension, "plan dimension must be >= 1");
  plan.d = p.dim;
  if (p.n_betas) {
    require(p.betas, "betas");
    plan.betas.assign(p.betas, p.betas + p.n_betas);
  }
  if (p.n_ns) {
    require(p.ns, "ns");
    plan.ns.assign(p.ns, p.ns + p.n_ns);
  }
  if (p.n_ks) {
    require(p.ks, "ks");
    plan.ks.assign(p.ks, p.ks + p.n_ks);
  }
  if (p.n_levels) {
    require(p.levels, "levels");
    plan.levels.assign(p.levels, p.levels + p.n_levels);
  }
  plan.model = to_model(p.model, static_cast<std::size_t>(p.dim));
  plan.alpha = p.alpha;
  if (p.checkpoint) plan.checkpoint = p.checkpoint;
  return plan;
}

}  // namespace

extern "C" {

const char* rggu_version(void) {
#ifdef RGGU_VERSION_STRING
  return RGGU_VERSION_STRING;
#else
  return "dev";
#endif
}

const char* rggu_last_error(void) { return g_last_error.c_str(); }

const char* rggu_status_name(rggu_status status) {
  switch (status) {
    case RGGU_OK: return "ok";
    case RGGU_ERR_INVALID_ARGUMENT: return "invalid argument";
    case RGGU_ERR_INVALID_DIMENSION: return "invalid dimension";
    case RGGU_ERR_DIMENSION_MISMATCH: return "dimension mismatch";
    case RGGU_ERR_TOO_FEW_POINTS: return "too few points";
    case RGGU_ERR_POINT_OUTSIDE_WINDOW: return "point outside window";
    case RGGU_ERR_DUPLICATE_POINTS: return "duplicate points";
    case RGGU_ERR_RADIUS_TOO_LARGE: return "radius too large";
    case RGGU_ERR_INVALID_MOMENTS: return "invalid moments";
    case RGGU_ERR_DEGENERATE_PARAMETERS: return "degenerate parameters";
    case RGGU_ERR_MISSING_CRITICAL_VALUE: return "missing critical value";
    case RGGU_ERR_PARSE: return "parse error";
    case RGGU_ERR_IO: return "i/o error";
    case RGGU_ERR_OUT_OF_MEMORY: return "out of memory";
    case RGGU_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void rggu_string_free(char* s) { delete[] s; }

// ---- clouds

rggu_status rggu_cloud_create(size_t dim, const double* coords, size_t n, rggu_cloud** out) {
  return guarded([&] {
    require(out, "out");
    if (n > 0) require(coords, "coords");
    std::vector<double> v(coords, coords + n * dim);
    *out = new rggu_cloud{rggu::PointCloud(dim, std::move(v))};
  });
}

rggu_status rggu_cloud_parse(const char* text, size_t expected_dim, rggu_cloud** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    std::optional<std::size_t> dim;
    if (expected_dim) dim = expected_dim;
    *out = new rggu_cloud{rggu::parse_points(text, dim)};
  });
}

rggu_status rggu_cloud_read(const char* path, size_t expected_dim, rggu_cloud** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    std::optional<std::size_t> dim;
    if (expected_dim) dim = expected_dim;
    *out = new rggu_cloud{rggu::read_points(path, dim)};
  });
}

rggu_status rggu_cloud_write(const rggu_cloud* cloud, const char* path, const char* header) {
  return guarded([&] {
    require(cloud, "cloud");
    require(path, "path");
    rggu::write_points(path, cloud->value, header ? header : "");
  });
}

rggu_status rggu_cloud_format(const rggu_cloud* cloud, const char* header, char** out) {
  return guarded([&] {
    require(cloud, "cloud");
    require(out, "out");
    *out = copy_string(rggu::format_points(cloud->value, header ? header : ""));
  });
}

rggu_status rggu_cloud_scaled(const rggu_cloud* cloud, double s, rggu_cloud** out) {
  return guarded([&] {
    require(cloud, "cloud");
    require(out, "out");
    *out = new rggu_cloud{cloud->value.scaled(s)};
  });
}

size_t rggu_cloud_size(const rggu_cloud* cloud) { return cloud ? cloud->value.size() : 0; }
size_t rggu_cloud_dim(const rggu_cloud* cloud) { return cloud ? cloud->value.dim() : 0; }
const double* rggu_cloud_coords(const rggu_cloud* cloud) {
  return cloud ? cloud->value.coords().data() : nullptr;
}
void rggu_cloud_free(rggu_cloud* cloud) { delete cloud; }

// ---- windows

rggu_status rggu_window_unit(size_t dim, rggu_window** out) {
  return guarded([&] {
    require(out, "out");
    auto w = rggu::Window::unit_cube(dim);
    *out = new rggu_window{w, w.describe()};
  });
}

rggu_status rggu_window_box(const double* sides, size_t dim, rggu_window** out) {
  return guarded([&] {
    require(sides, "sides");
    require(out, "out");
    auto w = rggu::Window::box(std::vector<double>(sides, sides + dim));
    *out = new rggu_window{w, w.describe()};
  });
}

rggu_status rggu_window_parse(const char* spec, rggu_window** out) {
  return guarded([&] {
    require(spec, "spec");
    require(out, "out");
    auto w = rggu::parse_window_spec(spec);
    *out = new rggu_window{w, w.describe()};
  });
}

size_t rggu_window_dim(const rggu_window* window) { return window ? window->value.dim() : 0; }
double rggu_window_scale(const rggu_window* window) { return window ? window->value.scale() : 0.0; }
int rggu_window_is_unit_cube(const rggu_window* window) {
  return window && window->value.is_unit_cube() ? 1 : 0;
}
const char* rggu_window_describe(const rggu_window* window) {
  return window ? window->description.c_str() : "";
}

rggu_status rggu_window_check(const rggu_window* window, const rggu_cloud* cloud) {
  return guarded([&] {
    require(window, "window");
    require(cloud, "cloud");
    window->value.check_contains(cloud->value);
  });
}

void rggu_window_free(rggu_window* window) { delete window; }

// ---- constants

rggu_status rggu_unit_ball_volume(int d, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = rggu::unit_ball_volume(d);
  });
}

rggu_status rggu_radius_exact_regime(size_t n, int d, double k, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = rggu::radius_exact_regime(n, d, k);
  });
}

rggu_status rggu_radius_asymptotic_regime(size_t n, int d, double k, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = rggu::radius_asymptotic_regime(n, d, k);
  });
}

// ---- edge statistic

rggu_status rggu_close_pairs(const rggu_cloud* cloud, double r, rggu_pair* pairs, size_t capacity,
                             size_t* count) {
  return guarded([&] {
    require(cloud, "cloud");
    require(count, "count");
    if (capacity > 0) require(pairs, "pairs");
    const rggu::PairList list = rggu::enumerate_close_pairs(cloud->value, r);
    for (std::size_t p = 0; p < list.size() && p < capacity; ++p) {
      pairs[p] = {list[p].i, list[p].j, list[p].dist};
    }
    *count = list.size();
  });
}

rggu_status rggu_edge_power_sum(const rggu_cloud* cloud, double r, double beta, double* out) {
  return guarded([&] {
    require(cloud, "cloud");
    require(out, "out");
    *out = rggu::edge_power_sum(cloud->value, r, beta);
  });
}

rggu_status rggu_average_degree(const rggu_cloud* cloud, double r, double* out) {
  return guarded([&] {
    require(cloud, "cloud");
    require(out, "out");
    *out = rggu::average_degree(cloud->value, r);
  });
}

// ---- moments

rggu_status rggu_exact_mean_unit_cube(size_t n, double r, double beta, int d, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = rggu::exact_mean_unit_cube(n, r, beta, d);
  });
}

rggu_status rggu_exact_mean_box(const rggu_window* window, size_t n, double r, double beta,
                                double* out) {
  return guarded([&] {
    require(window, "window");
    require(out, "out");
    *out = rggu::exact_mean_box(window->value, n, r, beta);
  });
}

rggu_status rggu_asymptotic_mean(size_t n, double r, double beta, int d, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = rggu::asymptotic_mean(n, r, beta, d);
  });
}

rggu_status rggu_null_std(size_t n, double r, double beta, int d, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = rggu::null_std(n, r, beta, d);
  });
}

rggu_status rggu_asymptotic_variance_coeffs(double int_f2, double int_f3, double beta, int d,
                                            double* sigma1, double* sigma2) {
  return guarded([&] {
    require(sigma1, "sigma1");
    require(sigma2, "sigma2");
    const auto c = rggu::asymptotic_variance_coeffs(int_f2, int_f3, beta, d);
    *sigma1 = c.sigma1;
    *sigma2 = c.sigma2;
  });
}

rggu_status rggu_exact_variance_mc(size_t n, double r, double beta, int d, size_t budget,
                                   uint64_t seed, double* estimate, double* std_error) {
  return guarded([&] {
    require(estimate, "estimate");
    require(std_error, "std_error");
    const auto e = rggu::exact_variance_mc(n, r, beta, d, budget, seed);
    *estimate = e.value;
    *std_error = e.std_error;
  });
}

// ---- tests

void rggu_test_config_init(rggu_test_config* cfg) {
  if (!cfg) return;
  cfg->beta = 0.0;
  cfg->variant = RGGU_VARIANT_EXACT;
  cfg->regime = RGGU_REGIME_DEFAULT;
  cfg->k = 5.0;
  cfg->radius = 0.0;
  cfg->dim = 2;
}

rggu_status rggu_run_test(const rggu_cloud* cloud, const rggu_window* window,
                          const rggu_test_config* cfg, rggu_test_outcome* out) {
  return guarded([&] {
    require(cloud, "cloud");
    require(window, "window");
    require(cfg, "cfg");
    require(out, "out");
    const rggu::TestOutcome o = rggu::run_test(cloud->value, to_config(*cfg), window->value);
    *out = {o.statistic, o.p_asymptotic, o.radius, o.edge_sum, o.center, o.scale,
            o.variant == rggu::Variant::Exact ? RGGU_VARIANT_EXACT : RGGU_VARIANT_ASYMPTOTIC};
  });
}

rggu_status rggu_chi2_1_pvalue(double t, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = rggu::chi2_1_pvalue(t);
  });
}

rggu_status rggu_empirical_pvalue(double observed, const double* draws, size_t m, double* out) {
  return guarded([&] {
    require(out, "out");
    if (m > 0) require(draws, "draws");
    *out = rggu::empirical_pvalue(observed, std::span<const double>(draws, m));
  });
}

rggu_status rggu_empirical_quantile(const double* samples, size_t m, double level, double* out) {
  return guarded([&] {
    require(out, "out");
    if (m > 0) require(samples, "samples");
    *out = rggu::empirical_quantile(std::span<const double>(samples, m), level);
  });
}

// ---- samplers

void rggu_model_init(rggu_model* model) {
  if (!model) return;
  *model = rggu_model{};
  model->kind = RGGU_MODEL_H0;
  model->con_custom = 0;
  model->con_q1 = 0.135;
  model->con_q2 = 0.24;
  model->con_c1 = 0.25;
  model->con_c2 = 0.7;
  model->clu_radius = 0.1;
  model->sps_sigma = 0.01;
  model->sps_p = 0.05;
  model->gamma = 0.0;
}

rggu_status rggu_model_con_reference(rggu_model* model, size_t d) {
  return guarded([&] {
    require(model, "model");
    if (d < 1) throw rggu::Error(rggu::ErrorCode::InvalidDimension, "dimension must be >= 1");
    const rggu::ConParams p = rggu::ConParams::defaults(d);
    model->con_q1 = p.q1;
    model->con_q2 = p.q2;
    model->con_c1 = p.c1[0];
    model->con_c2 = p.c2[0];
    model->con_sigma1 = p.sigma1;
    model->con_sigma2 = p.sigma2;
  });
}

rggu_status rggu_model_parse(const char* name, int* kind) {
  return guarded([&] {
    require(name, "name");
    require(kind, "kind");
    *kind = static_cast<int>(rggu::parse_model(name));
  });
}

rggu_status rggu_sample(const rggu_model* model, size_t n, size_t d, uint64_t seed,
                        uint64_t stream, double r, rggu_cloud** out) {
  return guarded([&] {
    require(model, "model");
    require(out, "out");
    rggu::RngStream rng(seed, stream);
    *out = new rggu_cloud{rggu::sample_model(to_model(*model, d), n, d, rng, r)};
  });
}

rggu_status rggu_sample_uniform_window(const rggu_window* window, size_t n, uint64_t seed,
                                       uint64_t stream, rggu_cloud** out) {
  return guarded([&] {
    require(window, "window");
    require(out, "out");
    rggu::RngStream rng(seed, stream);
    *out = new rggu_cloud{rggu::sample_uniform(n, window->value, rng)};
  });
}

// ---- competitors

rggu_status rggu_toroidal_distance(const double* x, const double* y, size_t d, double* out) {
  return guarded([&] {
    require(x, "x");
    require(y, "y");
    require(out, "out");
    *out = rggu::toroidal_distance(std::span<const double>(x, d), std::span<const double>(y, d));
  });
}

rggu_status rggu_nn_statistic(const rggu_cloud* cloud, size_t J, double beta, double* out) {
  return guarded([&] {
    require(cloud, "cloud");
    require(out, "out");
    *out = rggu::nn_statistic(cloud->value, rggu::NNConfig{J, beta});
  });
}

rggu_status rggu_br_statistic(const rggu_cloud* cloud, double h, double* out) {
  return guarded([&] {
    require(cloud, "cloud");
    require(out, "out");
    *out = rggu::br_statistic(cloud->value, rggu::BRConfig{h});
  });
}

// ---- harness

void rggu_plan_init(rggu_plan* plan) {
  if (!plan) return;
  *plan = rggu_plan{};
  plan->reps = 10000;
  plan->seed = 1;
  plan->threads = 0;
  plan->variant = RGGU_VARIANT_EXACT;
  plan->regime = RGGU_REGIME_DEFAULT;
  plan->dim = 2;
  rggu_model_init(&plan->model);
  plan->alpha = 0.05;
}

rggu_status rggu_simulate_critical_values(const rggu_plan* plan, rggu_table** out) {
  return guarded([&] {
    require(plan, "plan");
    require(out, "out");
    *out = new rggu_table{rggu::simulate_critical_values(to_plan(*plan))};
  });
}

rggu_status rggu_empirical_power(const rggu_plan* plan, const rggu_table* critical,
                                 rggu_table** out) {
  return guarded([&] {
    require(plan, "plan");
    require(critical, "critical");
    require(out, "out");
    *out = new rggu_table{rggu::empirical_power(to_plan(*plan), critical->value)};
  });
}

rggu_status rggu_clt_diagnostic(const rggu_plan* plan, rggu_clt_report* out) {
  return guarded([&] {
    require(plan, "plan");
    require(out, "out");
    const auto r = rggu::clt_diagnostic(to_plan(*plan));
    *out = {r.ks_distance, r.mean, r.variance, r.skewness, r.radius, r.reps};
  });
}

rggu_status rggu_contiguity_diagnostic(const rggu_plan* plan, double gamma,
                                       rggu_contiguity_report* out) {
  return guarded([&] {
    require(plan, "plan");
    require(out, "out");
    const auto r = rggu::contiguity_diagnostic(to_plan(*plan), gamma);
    *out = {r.gamma, r.a_n,  r.radius,         r.mu,          r.expected_mean,
            r.mean,  r.mean_std_error, r.ks_distance, r.reps};
  });
}

rggu_status rggu_batch_pvalues(const rggu_cloud* cloud, const rggu_window* window,
                               const rggu_plan* plan, rggu_table** out) {
  return guarded([&] {
    require(cloud, "cloud");
    require(window, "window");
    require(plan, "plan");
    require(out, "out");
    *out = new rggu_table{rggu::batch_pvalues(cloud->value, window->value, to_plan(*plan))};
  });
}

rggu_status rggu_br_critical_table(const rggu_plan* plan, const double* bandwidths,
                                   size_t n_bandwidths, rggu_table** out) {
  return guarded([&] {
    require(plan, "plan");
    require(out, "out");
    if (n_bandwidths) require(bandwidths, "bandwidths");
    rggu::MCPlan p = to_plan(*plan);
    p.d = 2;
    *out = new rggu_table{rggu::br_critical_table(
        p, std::vector<double>(bandwidths, bandwidths + n_bandwidths))};
  });
}

// ---- tables

size_t rggu_table_row_count(const rggu_table* table) {
  return table ? table->value.rows().size() : 0;
}

rggu_status rggu_table_row(const rggu_table* table, size_t index, rggu_row* out) {
  return guarded([&] {
    require(table, "table");
    require(out, "out");
    const auto& rows = table->value.rows();
    if (index >= rows.size()) {
      throw rggu::Error(rggu::ErrorCode::InvalidArgument, "row index out of range");
    }
    const auto& r = rows[index];
    *out = {r.model.c_str(), r.variant.c_str(), r.beta, r.d,    r.n,    r.k,
            r.value,         r.se,              r.reps, r.seed, r.level};
  });
}

rggu_status rggu_table_set_metadata(rggu_table* table, const char* key, const char* value) {
  return guarded([&] {
    require(table, "table");
    require(key, "key");
    require(value, "value");
    table->value.metadata()[key] = value;
  });
}

rggu_status rggu_table_to_csv(const rggu_table* table, char** out) {
  return guarded([&] {
    require(table, "table");
    require(out, "out");
    *out = copy_string(table->value.to_csv());
  });
}

rggu_status rggu_table_to_json(const rggu_table* table, char** out) {
  return guarded([&] {
    require(table, "table");
    require(out, "out");
    *out = copy_string(table->value.to_json());
  });
}

rggu_status rggu_table_save(const rggu_table* table, const char* path) {
  return guarded([&] {
    require(table, "table");
    require(path, "path");
    table->value.save(path);
  });
}

rggu_status rggu_table_load(const char* path, rggu_table** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new rggu_table{rggu::ResultTable::load(path)};
  });
}

void rggu_table_free(rggu_table* table) { delete table; }

}  // extern "C"
