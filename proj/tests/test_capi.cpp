// Exercises the extern-C surface only; nothing from the C++ headers.

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "rggu/rggu.h"

namespace {

struct CloudHandle {
  rggu_cloud* p = nullptr;
  ~CloudHandle() { rggu_cloud_free(p); }
};
struct WindowHandle {
  rggu_window* p = nullptr;
  ~WindowHandle() { rggu_window_free(p); }
};
struct TableHandle {
  rggu_table* p = nullptr;
  ~TableHandle() { rggu_table_free(p); }
};
struct CString {
  char* p = nullptr;
  ~CString() { rggu_string_free(p); }
};

TEST(CApi, VersionAndStatusNames) {
  EXPECT_STRNE(rggu_version(), "");
  EXPECT_STREQ(rggu_status_name(RGGU_OK), "ok");
  EXPECT_STREQ(rggu_status_name(RGGU_ERR_TOO_FEW_POINTS), "too few points");
  EXPECT_STRNE(rggu_status_name(static_cast<rggu_status>(1234)), "");
}

TEST(CApi, ErrorsCarryCodeAndMessage) {
  CloudHandle cloud;
  const double one[2] = {0.5, 0.5};
  ASSERT_EQ(rggu_cloud_create(2, one, 1, &cloud.p), RGGU_OK);
  WindowHandle window;
  ASSERT_EQ(rggu_window_unit(2, &window.p), RGGU_OK);
  rggu_test_config cfg;
  rggu_test_config_init(&cfg);
  rggu_test_outcome out{};
  out.statistic = -7.0;
  EXPECT_EQ(rggu_run_test(cloud.p, window.p, &cfg, &out), RGGU_ERR_TOO_FEW_POINTS);
  EXPECT_NE(std::strstr(rggu_last_error(), "n >= 2"), nullptr) << rggu_last_error();
  EXPECT_EQ(out.statistic, -7.0);  // outputs untouched on failure

  EXPECT_EQ(rggu_run_test(nullptr, window.p, &cfg, &out), RGGU_ERR_INVALID_ARGUMENT);
  rggu_cloud* never = nullptr;
  EXPECT_EQ(rggu_cloud_parse("0.1,0.2\n0.3,x\n", 0, &never), RGGU_ERR_PARSE);
  EXPECT_EQ(never, nullptr);
  EXPECT_NE(std::strstr(rggu_last_error(), "line 2"), nullptr) << rggu_last_error();
  EXPECT_EQ(rggu_window_parse("sphere:3", &window.p), RGGU_ERR_PARSE);

  double v = 0.0;
  EXPECT_EQ(rggu_unit_ball_volume(0, &v), RGGU_ERR_INVALID_DIMENSION);
  EXPECT_EQ(rggu_chi2_1_pvalue(-1.0, &v), RGGU_ERR_INVALID_ARGUMENT);

  rggu_model_init(nullptr);
  rggu_cloud_free(nullptr);
  rggu_window_free(nullptr);
  rggu_table_free(nullptr);
  rggu_string_free(nullptr);
}

TEST(CApi, CloudRoundTrip) {
  CloudHandle cloud;
  ASSERT_EQ(rggu_cloud_parse("# header\n0.1,0.2\n0.3,0.4\n0.5, 0.6\n", 0, &cloud.p), RGGU_OK);
  EXPECT_EQ(rggu_cloud_size(cloud.p), 3u);
  EXPECT_EQ(rggu_cloud_dim(cloud.p), 2u);
  EXPECT_EQ(rggu_cloud_coords(cloud.p)[3], 0.4);

  CString text;
  ASSERT_EQ(rggu_cloud_format(cloud.p, "made by a test", &text.p), RGGU_OK);
  EXPECT_EQ(std::string(text.p).rfind("# made by a test", 0), 0u);
  CloudHandle again;
  ASSERT_EQ(rggu_cloud_parse(text.p, 2, &again.p), RGGU_OK);
  EXPECT_EQ(std::memcmp(rggu_cloud_coords(cloud.p), rggu_cloud_coords(again.p), 6 * sizeof(double)),
            0);

  const auto path = (std::filesystem::temp_directory_path() / "rggu_capi_cloud.txt").string();
  ASSERT_EQ(rggu_cloud_write(cloud.p, path.c_str(), nullptr), RGGU_OK);
  CloudHandle loaded;
  ASSERT_EQ(rggu_cloud_read(path.c_str(), 2, &loaded.p), RGGU_OK);
  EXPECT_EQ(rggu_cloud_size(loaded.p), 3u);
  std::filesystem::remove(path);
  CloudHandle missing;
  EXPECT_EQ(rggu_cloud_read(path.c_str(), 2, &missing.p), RGGU_ERR_IO);

  CloudHandle wrong_dim;
  EXPECT_EQ(rggu_cloud_parse("0.1,0.2\n", 3, &wrong_dim.p), RGGU_ERR_DIMENSION_MISMATCH);
}

TEST(CApi, WindowsAndScaling) {
  WindowHandle box;
  const double sides[2] = {4.0, 1.0};
  ASSERT_EQ(rggu_window_box(sides, 2, &box.p), RGGU_OK);
  EXPECT_EQ(rggu_window_dim(box.p), 2u);
  EXPECT_DOUBLE_EQ(rggu_window_scale(box.p), 0.5);
  EXPECT_EQ(rggu_window_is_unit_cube(box.p), 0);
  EXPECT_STRNE(rggu_window_describe(box.p), "");

  WindowHandle parsed;
  ASSERT_EQ(rggu_window_parse("box:4,1", &parsed.p), RGGU_OK);
  EXPECT_STREQ(rggu_window_describe(parsed.p), rggu_window_describe(box.p));

  CloudHandle raw;
  const double pts[4] = {3.5, 0.9, 0.1, 0.2};
  ASSERT_EQ(rggu_cloud_create(2, pts, 2, &raw.p), RGGU_OK);
  CloudHandle scaled;
  ASSERT_EQ(rggu_cloud_scaled(raw.p, rggu_window_scale(box.p), &scaled.p), RGGU_OK);
  EXPECT_EQ(rggu_window_check(box.p, scaled.p), RGGU_OK);
  EXPECT_EQ(rggu_window_check(box.p, raw.p), RGGU_ERR_POINT_OUTSIDE_WINDOW);
}

TEST(CApi, StatisticsMatchClosedForms) {
  double v = 0.0;
  ASSERT_EQ(rggu_unit_ball_volume(2, &v), RGGU_OK);
  EXPECT_DOUBLE_EQ(v, M_PI);
  ASSERT_EQ(rggu_exact_mean_unit_cube(100, 0.1, 0.0, 2, &v), RGGU_OK);
  EXPECT_NEAR(v, 142.55633635, 1e-6);
  ASSERT_EQ(rggu_null_std(100, 0.1, 0.0, 2, &v), RGGU_OK);
  EXPECT_NEAR(v, 12.533141373155, 1e-9);
  ASSERT_EQ(rggu_radius_exact_regime(100, 2, 5.0, &v), RGGU_OK);
  EXPECT_NEAR(v, std::sqrt(5.0 / (100.0 * M_PI)), 1e-15);

  CloudHandle cloud;
  const double pts[6] = {0.0, 0.0, 0.3, 0.4, 0.9, 0.9};
  ASSERT_EQ(rggu_cloud_create(2, pts, 3, &cloud.p), RGGU_OK);
  size_t count = 99;
  ASSERT_EQ(rggu_close_pairs(cloud.p, 0.5, nullptr, 0, &count), RGGU_OK);
  ASSERT_EQ(count, 1u);
  rggu_pair pair{};
  ASSERT_EQ(rggu_close_pairs(cloud.p, 0.5, &pair, 1, &count), RGGU_OK);
  EXPECT_EQ(pair.i, 0u);
  EXPECT_EQ(pair.j, 1u);
  EXPECT_DOUBLE_EQ(pair.dist, 0.5);
  ASSERT_EQ(rggu_edge_power_sum(cloud.p, 0.5, 2.0, &v), RGGU_OK);
  EXPECT_NEAR(v, 0.25, 1e-15);
  ASSERT_EQ(rggu_average_degree(cloud.p, 0.5, &v), RGGU_OK);
  EXPECT_NEAR(v, 2.0 / 3.0, 1e-15);
}

TEST(CApi, RunTestAgreesWithItsParts) {
  rggu_model model;
  rggu_model_init(&model);
  CloudHandle cloud;
  ASSERT_EQ(rggu_sample(&model, 200, 2, 9, 0, 0.0, &cloud.p), RGGU_OK);
  WindowHandle window;
  ASSERT_EQ(rggu_window_unit(2, &window.p), RGGU_OK);
  rggu_test_config cfg;
  rggu_test_config_init(&cfg);
  cfg.beta = 1.0;
  cfg.k = 5.0;
  rggu_test_outcome out{};
  ASSERT_EQ(rggu_run_test(cloud.p, window.p, &cfg, &out), RGGU_OK);
  double r = 0.0;
  double sum = 0.0;
  double mean = 0.0;
  double sd = 0.0;
  double p = 0.0;
  ASSERT_EQ(rggu_radius_exact_regime(200, 2, 5.0, &r), RGGU_OK);
  EXPECT_DOUBLE_EQ(out.radius, r);
  ASSERT_EQ(rggu_edge_power_sum(cloud.p, r, 1.0, &sum), RGGU_OK);
  ASSERT_EQ(rggu_exact_mean_unit_cube(200, r, 1.0, 2, &mean), RGGU_OK);
  ASSERT_EQ(rggu_null_std(200, r, 1.0, 2, &sd), RGGU_OK);
  EXPECT_DOUBLE_EQ(out.edge_sum, sum);
  EXPECT_NEAR(out.statistic, std::pow((sum - mean) / sd, 2), 1e-12 * std::max(1.0, out.statistic));
  ASSERT_EQ(rggu_chi2_1_pvalue(out.statistic, &p), RGGU_OK);
  EXPECT_DOUBLE_EQ(out.p_asymptotic, p);
}

TEST(CApi, SamplersAreReproducible) {
  rggu_model model;
  rggu_model_init(&model);
  int kind = -1;
  ASSERT_EQ(rggu_model_parse("clu", &kind), RGGU_OK);
  EXPECT_EQ(kind, RGGU_MODEL_CLU);
  EXPECT_EQ(rggu_model_parse("nope", &kind), RGGU_ERR_INVALID_ARGUMENT);
  model.kind = RGGU_MODEL_CLU;
  CloudHandle a;
  CloudHandle b;
  CloudHandle c;
  ASSERT_EQ(rggu_sample(&model, 100, 2, 1, 7, 0.0, &a.p), RGGU_OK);
  ASSERT_EQ(rggu_sample(&model, 100, 2, 1, 7, 0.0, &b.p), RGGU_OK);
  ASSERT_EQ(rggu_sample(&model, 100, 2, 1, 8, 0.0, &c.p), RGGU_OK);
  EXPECT_EQ(std::memcmp(rggu_cloud_coords(a.p), rggu_cloud_coords(b.p), 200 * sizeof(double)), 0);
  EXPECT_NE(std::memcmp(rggu_cloud_coords(a.p), rggu_cloud_coords(c.p), 200 * sizeof(double)), 0);
  CloudHandle bad;
  EXPECT_EQ(rggu_sample(&model, 101, 2, 1, 7, 0.0, &bad.p), RGGU_ERR_INVALID_ARGUMENT);

  ASSERT_EQ(rggu_model_con_reference(&model, 2), RGGU_OK);
  EXPECT_NEAR(model.con_sigma1, 0.091899444, 1e-8);
}

TEST(CApi, CriticalValuesPowerAndTables) {
  rggu_plan plan;
  rggu_plan_init(&plan);
  const double betas[] = {-0.5};
  const size_t ns[] = {60};
  const double ks[] = {5.0};
  plan.reps = 200;
  plan.seed = 17;
  plan.threads = 2;
  plan.betas = betas;
  plan.n_betas = 1;
  plan.ns = ns;
  plan.n_ns = 1;
  plan.ks = ks;
  plan.n_ks = 1;
  TableHandle crit;
  ASSERT_EQ(rggu_simulate_critical_values(&plan, &crit.p), RGGU_OK);
  ASSERT_EQ(rggu_table_row_count(crit.p), 1u);
  rggu_row row{};
  ASSERT_EQ(rggu_table_row(crit.p, 0, &row), RGGU_OK);
  EXPECT_STREQ(row.variant, "te");
  EXPECT_EQ(row.n, 60u);
  EXPECT_GT(row.value, 0.0);
  EXPECT_EQ(rggu_table_row(crit.p, 1, &row), RGGU_ERR_INVALID_ARGUMENT);

  plan.model.kind = RGGU_MODEL_CLU;
  TableHandle power;
  ASSERT_EQ(rggu_empirical_power(&plan, crit.p, &power.p), RGGU_OK);
  ASSERT_EQ(rggu_table_row(power.p, 0, &row), RGGU_OK);
  EXPECT_STREQ(row.model, "clu");

  const size_t other_ns[] = {70};
  plan.ns = other_ns;
  TableHandle none;
  EXPECT_EQ(rggu_empirical_power(&plan, crit.p, &none.p), RGGU_ERR_MISSING_CRITICAL_VALUE);

  ASSERT_EQ(rggu_table_set_metadata(crit.p, "note", "capi"), RGGU_OK);
  CString csv;
  CString json;
  ASSERT_EQ(rggu_table_to_csv(crit.p, &csv.p), RGGU_OK);
  ASSERT_EQ(rggu_table_to_json(crit.p, &json.p), RGGU_OK);
  EXPECT_NE(std::strstr(csv.p, "# note: capi"), nullptr);
  EXPECT_NE(std::strstr(json.p, "\"note\""), nullptr);
  const auto path = (std::filesystem::temp_directory_path() / "rggu_capi_table.json").string();
  ASSERT_EQ(rggu_table_save(crit.p, path.c_str()), RGGU_OK);
  TableHandle loaded;
  ASSERT_EQ(rggu_table_load(path.c_str(), &loaded.p), RGGU_OK);
  CString csv2;
  ASSERT_EQ(rggu_table_to_csv(loaded.p, &csv2.p), RGGU_OK);
  EXPECT_STREQ(csv.p, csv2.p);
  std::filesystem::remove(path);
}

TEST(CApi, DiagnosticsAndBatchPvalues) {
  rggu_plan plan;
  rggu_plan_init(&plan);
  const double betas[] = {1.0};
  const size_t ns[] = {200};
  const double ks[] = {5.0};
  plan.reps = 300;
  plan.betas = betas;
  plan.n_betas = 1;
  plan.ns = ns;
  plan.n_ns = 1;
  plan.ks = ks;
  plan.n_ks = 1;
  rggu_clt_report clt{};
  ASSERT_EQ(rggu_clt_diagnostic(&plan, &clt), RGGU_OK);
  EXPECT_EQ(clt.reps, 300u);
  EXPECT_GT(clt.variance, 0.5);
  rggu_contiguity_report con{};
  ASSERT_EQ(rggu_contiguity_diagnostic(&plan, 1.0, &con), RGGU_OK);
  EXPECT_EQ(con.gamma, 1.0);
  EXPECT_GT(con.mu, 0.0);

  rggu_model model;
  rggu_model_init(&model);
  CloudHandle cloud;
  ASSERT_EQ(rggu_sample(&model, 80, 2, 3, 0, 0.0, &cloud.p), RGGU_OK);
  WindowHandle window;
  ASSERT_EQ(rggu_window_unit(2, &window.p), RGGU_OK);
  plan.reps = 99;
  TableHandle pv;
  ASSERT_EQ(rggu_batch_pvalues(cloud.p, window.p, &plan, &pv.p), RGGU_OK);
  rggu_row row{};
  ASSERT_EQ(rggu_table_row(pv.p, 0, &row), RGGU_OK);
  EXPECT_GE(row.value, 0.01);
  EXPECT_LE(row.value, 1.0);

  const double hs[] = {0.5};
  TableHandle br;
  plan.reps = 50;
  ASSERT_EQ(rggu_br_critical_table(&plan, hs, 1, &br.p), RGGU_OK);
  EXPECT_EQ(rggu_table_row_count(br.p), 1u);
}

}  // namespace
