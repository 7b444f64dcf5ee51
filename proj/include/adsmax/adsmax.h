/* C interface to the adsmax core. All functions return an adsmax status
 * code (ADSMAX_OK on success) unless noted; on failure a message is kept per
 * thread and can be read with adsmax_last_error(). Strings returned by the
 * library stay valid until the owning handle is freed. */
#ifndef ADSMAX_ADSMAX_H
#define ADSMAX_ADSMAX_H

#include <stddef.h>

#if defined(_WIN32)
#define ADSMAX_API __declspec(dllexport)
#else
#define ADSMAX_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

#define ADSMAX_OK 0
#define ADSMAX_ERR_INVALID_PARAMETER 1
#define ADSMAX_ERR_GRID_MISMATCH 2
#define ADSMAX_ERR_NO_CONVERGENCE 3
#define ADSMAX_ERR_NORM_TOO_LARGE 4
#define ADSMAX_ERR_INVERSE_INTERPOLATION 5
#define ADSMAX_ERR_VANISHING_DERIVATIVE 6
#define ADSMAX_ERR_NEWTON_DIVERGENCE 7
#define ADSMAX_ERR_NORM_VIOLATION 8
#define ADSMAX_ERR_NON_UNIQUE_CANDIDATE 9
#define ADSMAX_ERR_CONFIG_PARSE 10
#define ADSMAX_ERR_SCENARIO_FAILURE 11
#define ADSMAX_ERR_INTERNAL 99

#define ADSMAX_METRIC_LE 0
#define ADSMAX_METRIC_GE 1
#define ADSMAX_METRIC_INFO 2

typedef struct adsmax_config adsmax_config;
typedef struct adsmax_report adsmax_report;
typedef struct adsmax_surface adsmax_surface;

ADSMAX_API const char* adsmax_last_error(void);
ADSMAX_API const char* adsmax_error_name(int code);

ADSMAX_API size_t adsmax_scenario_count(void);
ADSMAX_API const char* adsmax_scenario_name(size_t index); /* NULL if out of range */

/* configuration: "key = value" lines, '#' starts a comment */
ADSMAX_API int adsmax_config_from_file(const char* path, adsmax_config** out);
ADSMAX_API int adsmax_config_from_string(const char* text, adsmax_config** out);
ADSMAX_API int adsmax_config_set(adsmax_config* cfg, const char* key, const char* value);
ADSMAX_API int adsmax_config_validate(const adsmax_config* cfg);
/* output_path from the config, "" if unset */
ADSMAX_API const char* adsmax_config_output_path(const adsmax_config* cfg);
ADSMAX_API void adsmax_config_free(adsmax_config* cfg);

/* Runs the configured scenario. A numerical failure inside the scenario still
 * yields a (partial, failing) report and ADSMAX_OK; only invalid
 * configurations return an error without a report. */
ADSMAX_API int adsmax_run(const adsmax_config* cfg, adsmax_report** out);
/* Repeats the scenario with parameter ("R", "n_r", "epsilon", "Phi_scale")
 * set to each value. The report carries the sweep table and the metrics of
 * every run prefixed with "run<i>." */
ADSMAX_API int adsmax_sweep(const adsmax_config* cfg, const char* parameter, const double* values, size_t count,
                 adsmax_report** out);

ADSMAX_API int adsmax_report_passed(const adsmax_report* r); /* 1 pass, 0 fail */
ADSMAX_API const char* adsmax_report_scenario(const adsmax_report* r);
ADSMAX_API const char* adsmax_report_failure(const adsmax_report* r); /* "" when none */
ADSMAX_API size_t adsmax_report_metric_count(const adsmax_report* r);
ADSMAX_API int adsmax_report_metric(const adsmax_report* r, size_t index, const char** name, double* value, double* limit,
                         int* comparison, int* ok);
ADSMAX_API int adsmax_report_find_metric(const adsmax_report* r, const char* name, double* value, int* ok);
ADSMAX_API const char* adsmax_report_text(const adsmax_report* r);
ADSMAX_API size_t adsmax_report_table_count(const adsmax_report* r);
ADSMAX_API const char* adsmax_report_table_name(const adsmax_report* r, size_t index);
ADSMAX_API const char* adsmax_report_table_csv(const adsmax_report* r, size_t index);
/* key-value text at path, each table at <path>.<table>.csv */
ADSMAX_API int adsmax_report_write(const adsmax_report* r, const char* path);
ADSMAX_API void adsmax_report_free(adsmax_report* r);

/* Conformal factor and induced Gauss maps for Phi(z) = sum c_k z^k with
 * c_k = re[k] + i im[k], on a polar grid of radius R < 1. */
ADSMAX_API int adsmax_surface_build(int n_r, int n_theta, double R, const double* phi_re, const double* phi_im, size_t degree_plus_one,
                         double tol, adsmax_surface** out);
ADSMAX_API size_t adsmax_surface_node_count(const adsmax_surface* s);
/* node positions and log conformal factor phi, each array of node_count */
ADSMAX_API int adsmax_surface_nodes(const adsmax_surface* s, double* x, double* y);
ADSMAX_API int adsmax_surface_phi(const adsmax_surface* s, double* phi);
/* Beltrami coefficient of F_+ (F_- has the negative) */
ADSMAX_API int adsmax_surface_mu_plus(const adsmax_surface* s, double* re, double* im);
ADSMAX_API double adsmax_surface_energy(const adsmax_surface* s);
ADSMAX_API double adsmax_surface_gauss_residual(const adsmax_surface* s);
ADSMAX_API void adsmax_surface_free(adsmax_surface* s);

#ifdef __cplusplus
}
#endif

#endif
