/* Plain C interface to the rggu library.
 *
 * Every function returns an rggu_status. On failure a human-readable message
 * is available from rggu_last_error() on the same thread until the next
 * call into the library. Objects are opaque handles released with the
 * matching *_free function; passing NULL to a free function is a no-op.
 * Output pointers are only written on success.
 */
#ifndef RGGU_RGGU_H
#define RGGU_RGGU_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(RGGU_BUILDING_LIBRARY)
#    define RGGU_API __declspec(dllexport)
#  else
#    define RGGU_API __declspec(dllimport)
#  endif
#else
#  define RGGU_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rggu_status {
  RGGU_OK = 0,
  RGGU_ERR_INVALID_ARGUMENT = 1,
  RGGU_ERR_INVALID_DIMENSION = 2,
  RGGU_ERR_DIMENSION_MISMATCH = 3,
  RGGU_ERR_TOO_FEW_POINTS = 4,
  RGGU_ERR_POINT_OUTSIDE_WINDOW = 5,
  RGGU_ERR_DUPLICATE_POINTS = 6,
  RGGU_ERR_RADIUS_TOO_LARGE = 7,
  RGGU_ERR_INVALID_MOMENTS = 8,
  RGGU_ERR_DEGENERATE_PARAMETERS = 9,
  RGGU_ERR_MISSING_CRITICAL_VALUE = 10,
  RGGU_ERR_PARSE = 11,
  RGGU_ERR_IO = 12,
  RGGU_ERR_OUT_OF_MEMORY = 13,
  RGGU_ERR_INTERNAL = 99
} rggu_status;

typedef struct rggu_cloud rggu_cloud;
typedef struct rggu_window rggu_window;
typedef struct rggu_table rggu_table;

RGGU_API const char* rggu_version(void);
RGGU_API const char* rggu_last_error(void);
RGGU_API const char* rggu_status_name(rggu_status status);
/* Frees strings returned through char** outputs. */
RGGU_API void rggu_string_free(char* s);

/* ---- point clouds -------------------------------------------------------- */

/* `coords` holds n*dim values, row-major. */
RGGU_API rggu_status rggu_cloud_create(size_t dim, const double* coords, size_t n,
                                       rggu_cloud** out);
/* expected_dim = 0 accepts whatever width the first row has. */
RGGU_API rggu_status rggu_cloud_parse(const char* text, size_t expected_dim, rggu_cloud** out);
RGGU_API rggu_status rggu_cloud_read(const char* path, size_t expected_dim, rggu_cloud** out);
RGGU_API rggu_status rggu_cloud_write(const rggu_cloud* cloud, const char* path,
                                      const char* header);
RGGU_API rggu_status rggu_cloud_format(const rggu_cloud* cloud, const char* header, char** out);
RGGU_API rggu_status rggu_cloud_scaled(const rggu_cloud* cloud, double s, rggu_cloud** out);
RGGU_API size_t rggu_cloud_size(const rggu_cloud* cloud);
RGGU_API size_t rggu_cloud_dim(const rggu_cloud* cloud);
/* Borrowed pointer, valid while the cloud lives. */
RGGU_API const double* rggu_cloud_coords(const rggu_cloud* cloud);
RGGU_API void rggu_cloud_free(rggu_cloud* cloud);

/* ---- windows --------------------------------------------------------------- */

RGGU_API rggu_status rggu_window_unit(size_t dim, rggu_window** out);
/* Box with the given side lengths, normalized to unit volume. */
RGGU_API rggu_status rggu_window_box(const double* sides, size_t dim, rggu_window** out);
/* "unit:d" or "box:L1,L2[,L3,...]". */
RGGU_API rggu_status rggu_window_parse(const char* spec, rggu_window** out);
RGGU_API size_t rggu_window_dim(const rggu_window* window);
RGGU_API double rggu_window_scale(const rggu_window* window);
RGGU_API int rggu_window_is_unit_cube(const rggu_window* window);
/* Borrowed string, valid while the window lives. */
RGGU_API const char* rggu_window_describe(const rggu_window* window);
RGGU_API rggu_status rggu_window_check(const rggu_window* window, const rggu_cloud* cloud);
RGGU_API void rggu_window_free(rggu_window* window);

/* ---- constants and radius rules ------------------------------------------- */

RGGU_API rggu_status rggu_unit_ball_volume(int d, double* out);
RGGU_API rggu_status rggu_radius_exact_regime(size_t n, int d, double k, double* out);
RGGU_API rggu_status rggu_radius_asymptotic_regime(size_t n, int d, double k, double* out);

/* ---- edge statistic -------------------------------------------------------- */

typedef struct rggu_pair {
  uint32_t i;
  uint32_t j;
  double dist;
} rggu_pair;

/* Writes up to `capacity` pairs (i < j, sorted) and the total count. Call
 * with capacity 0 to size the buffer. */
RGGU_API rggu_status rggu_close_pairs(const rggu_cloud* cloud, double r, rggu_pair* pairs,
                                      size_t capacity, size_t* count);
RGGU_API rggu_status rggu_edge_power_sum(const rggu_cloud* cloud, double r, double beta,
                                         double* out);
RGGU_API rggu_status rggu_average_degree(const rggu_cloud* cloud, double r, double* out);

/* ---- moments --------------------------------------------------------------- */

RGGU_API rggu_status rggu_exact_mean_unit_cube(size_t n, double r, double beta, int d,
                                               double* out);
RGGU_API rggu_status rggu_exact_mean_box(const rggu_window* window, size_t n, double r,
                                         double beta, double* out);
RGGU_API rggu_status rggu_asymptotic_mean(size_t n, double r, double beta, int d, double* out);
RGGU_API rggu_status rggu_null_std(size_t n, double r, double beta, int d, double* out);
RGGU_API rggu_status rggu_asymptotic_variance_coeffs(double int_f2, double int_f3, double beta,
                                                     int d, double* sigma1, double* sigma2);
RGGU_API rggu_status rggu_exact_variance_mc(size_t n, double r, double beta, int d,
                                            size_t budget, uint64_t seed, double* estimate,
                                            double* std_error);

/* ---- test statistics ------------------------------------------------------- */

enum { RGGU_VARIANT_EXACT = 0, RGGU_VARIANT_ASYMPTOTIC = 1 };
enum { RGGU_REGIME_DEFAULT = -1, RGGU_REGIME_EXACT = 0, RGGU_REGIME_ASYMPTOTIC = 1 };

typedef struct rggu_test_config {
  double beta;
  int variant; /* RGGU_VARIANT_* */
  int regime;  /* RGGU_REGIME_*; DEFAULT follows the variant */
  double k;
  double radius; /* > 0 overrides the schedule */
  int dim;
} rggu_test_config;

typedef struct rggu_test_outcome {
  double statistic;
  double p_asymptotic;
  double radius;
  double edge_sum;
  double center;
  double scale;
  int variant;
} rggu_test_outcome;

RGGU_API void rggu_test_config_init(rggu_test_config* cfg);
RGGU_API rggu_status rggu_run_test(const rggu_cloud* cloud, const rggu_window* window,
                                   const rggu_test_config* cfg, rggu_test_outcome* out);
RGGU_API rggu_status rggu_chi2_1_pvalue(double t, double* out);
RGGU_API rggu_status rggu_empirical_pvalue(double observed, const double* draws, size_t m,
                                           double* out);
RGGU_API rggu_status rggu_empirical_quantile(const double* samples, size_t m, double level,
                                             double* out);

/* ---- samplers -------------------------------------------------------------- */

enum {
  RGGU_MODEL_H0 = 0,
  RGGU_MODEL_CON = 1,
  RGGU_MODEL_CLU = 2,
  RGGU_MODEL_SPS = 3,
  RGGU_MODEL_CONTIGUOUS = 4
};

typedef struct rggu_model {
  int kind; /* RGGU_MODEL_* */
  /* CON: when con_custom is 0 the reference parameters for the dimension
   * are used; centres are replicated on every axis. */
  int con_custom;
  double con_q1, con_q2, con_c1, con_c2, con_sigma1, con_sigma2;
  double clu_radius;
  double sps_sigma, sps_p;
  double gamma; /* contiguous: n r^{d/2} a_n^2 */
} rggu_model;

RGGU_API void rggu_model_init(rggu_model* model);
/* Fills the con_* fields with the reference parameters for dimension d
 * (con_custom is left untouched). */
RGGU_API rggu_status rggu_model_con_reference(rggu_model* model, size_t d);
RGGU_API rggu_status rggu_model_parse(const char* name, int* kind);
/* `r` is needed only for the contiguous model. */
RGGU_API rggu_status rggu_sample(const rggu_model* model, size_t n, size_t d, uint64_t seed,
                                 uint64_t stream, double r, rggu_cloud** out);
RGGU_API rggu_status rggu_sample_uniform_window(const rggu_window* window, size_t n,
                                                uint64_t seed, uint64_t stream,
                                                rggu_cloud** out);

/* ---- competitors ----------------------------------------------------------- */

RGGU_API rggu_status rggu_toroidal_distance(const double* x, const double* y, size_t d,
                                            double* out);
RGGU_API rggu_status rggu_nn_statistic(const rggu_cloud* cloud, size_t J, double beta,
                                       double* out);
RGGU_API rggu_status rggu_br_statistic(const rggu_cloud* cloud, double h, double* out);

/* ---- Monte Carlo harness --------------------------------------------------- */

typedef struct rggu_plan {
  size_t reps;
  uint64_t seed;
  unsigned threads; /* 0: RGGU_THREADS or hardware concurrency */
  int variant;
  int regime;
  int dim;
  const double* betas;
  size_t n_betas;
  const size_t* ns;
  size_t n_ns;
  const double* ks;
  size_t n_ks;
  rggu_model model;
  const double* levels; /* NULL: {0.95} */
  size_t n_levels;
  double alpha;
  const char* checkpoint; /* NULL: none */
} rggu_plan;

typedef struct rggu_clt_report {
  double ks_distance, mean, variance, skewness, radius;
  size_t reps;
} rggu_clt_report;

typedef struct rggu_contiguity_report {
  double gamma, a_n, radius, mu, expected_mean, mean, mean_std_error, ks_distance;
  size_t reps;
} rggu_contiguity_report;

RGGU_API void rggu_plan_init(rggu_plan* plan);
RGGU_API rggu_status rggu_simulate_critical_values(const rggu_plan* plan, rggu_table** out);
RGGU_API rggu_status rggu_empirical_power(const rggu_plan* plan, const rggu_table* critical,
                                          rggu_table** out);
RGGU_API rggu_status rggu_clt_diagnostic(const rggu_plan* plan, rggu_clt_report* out);
RGGU_API rggu_status rggu_contiguity_diagnostic(const rggu_plan* plan, double gamma,
                                                rggu_contiguity_report* out);
RGGU_API rggu_status rggu_batch_pvalues(const rggu_cloud* cloud, const rggu_window* window,
                                        const rggu_plan* plan, rggu_table** out);
RGGU_API rggu_status rggu_br_critical_table(const rggu_plan* plan, const double* bandwidths,
                                            size_t n_bandwidths, rggu_table** out);

/* ---- result tables --------------------------------------------------------- */

typedef struct rggu_row {
  const char* model;   /* borrowed, valid while the table lives */
  const char* variant; /* borrowed */
  double beta;
  int d;
  size_t n;
  double k;
  double value;
  double se;
  size_t reps;
  uint64_t seed;
  double level;
} rggu_row;

RGGU_API size_t rggu_table_row_count(const rggu_table* table);
RGGU_API rggu_status rggu_table_row(const rggu_table* table, size_t index, rggu_row* out);
RGGU_API rggu_status rggu_table_set_metadata(rggu_table* table, const char* key,
                                             const char* value);
RGGU_API rggu_status rggu_table_to_csv(const rggu_table* table, char** out);
RGGU_API rggu_status rggu_table_to_json(const rggu_table* table, char** out);
RGGU_API rggu_status rggu_table_save(const rggu_table* table, const char* path);
RGGU_API rggu_status rggu_table_load(const char* path, rggu_table** out);
RGGU_API void rggu_table_free(rggu_table* table);

#ifdef __cplusplus
}
#endif

#endif /* RGGU_RGGU_H */
