/* Exercises the shared library through its C header only. */
#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "adsmax/adsmax.h"

static int failures = 0;

#define EXPECT(cond)                                                                                                   \
    do {                                                                                                               \
        if (!(cond)) {                                                                                                 \
            fprintf(stderr, "%s:%d: expected %s (last error: %s)\n", __FILE__, __LINE__, #cond, adsmax_last_error()); \
            ++failures;                                                                                                \
        }                                                                                                              \
    } while (0)

static void config_round(void) {
    adsmax_config* cfg = NULL;
    EXPECT(adsmax_config_from_string("grid.n_r = x\n", &cfg) == ADSMAX_ERR_CONFIG_PARSE);
    EXPECT(cfg == NULL);
    EXPECT(strstr(adsmax_last_error(), "line 1") != NULL);
    EXPECT(strcmp(adsmax_error_name(ADSMAX_ERR_CONFIG_PARSE), "config-parse-error") == 0);

    EXPECT(adsmax_config_from_string("scenario = solve-gauss\noutput_path = here.txt\n", &cfg) == ADSMAX_OK);
    EXPECT(strcmp(adsmax_config_output_path(cfg), "here.txt") == 0);
    EXPECT(adsmax_config_set(cfg, "grid.n_r", "not a number") == ADSMAX_ERR_CONFIG_PARSE);
    EXPECT(adsmax_config_set(cfg, "grid.R", "1.5") == ADSMAX_OK);
    EXPECT(adsmax_config_validate(cfg) == ADSMAX_ERR_CONFIG_PARSE);
    adsmax_report* r = NULL;
    EXPECT(adsmax_run(cfg, &r) == ADSMAX_ERR_CONFIG_PARSE);
    EXPECT(r == NULL);
    EXPECT(adsmax_config_set(NULL, "grid.R", "0.9") == ADSMAX_ERR_INVALID_PARAMETER);
    adsmax_config_free(cfg);
    EXPECT(adsmax_config_from_file("/nonexistent/x.cfg", &cfg) == ADSMAX_ERR_CONFIG_PARSE);
}

static void run_and_inspect(void) {
    adsmax_config* cfg = NULL;
    EXPECT(adsmax_config_from_string("scenario = solve-gauss\ngrid.n_r = 16\ngrid.n_theta = 32\n", &cfg) == ADSMAX_OK);
    adsmax_report* r = NULL;
    EXPECT(adsmax_run(cfg, &r) == ADSMAX_OK);
    EXPECT(adsmax_report_passed(r) == 1);
    EXPECT(strcmp(adsmax_report_scenario(r), "solve-gauss") == 0);
    EXPECT(strcmp(adsmax_report_failure(r), "") == 0);
    EXPECT(strstr(adsmax_report_text(r), "phi_equals_psi: true") != NULL);
    size_t n = adsmax_report_metric_count(r);
    EXPECT(n > 0);
    for (size_t i = 0; i < n; ++i) {
        const char* name = NULL;
        double value = NAN, limit = NAN;
        int cmp = -1, ok = -1;
        EXPECT(adsmax_report_metric(r, i, &name, &value, &limit, &cmp, &ok) == ADSMAX_OK);
        EXPECT(name != NULL && isfinite(value));
        EXPECT(ok == 1);
        EXPECT(cmp == ADSMAX_METRIC_LE || cmp == ADSMAX_METRIC_GE || cmp == ADSMAX_METRIC_INFO);
    }
    EXPECT(adsmax_report_metric(r, n, NULL, NULL, NULL, NULL, NULL) == ADSMAX_ERR_INVALID_PARAMETER);
    double residual = 1.0;
    int ok = 0;
    EXPECT(adsmax_report_find_metric(r, "residual", &residual, &ok) == ADSMAX_OK);
    EXPECT(residual < 1e-9 && ok == 1);
    EXPECT(adsmax_report_find_metric(r, "no_such_metric", &residual, &ok) == ADSMAX_ERR_INVALID_PARAMETER);
    EXPECT(adsmax_report_table_count(r) == 1);
    EXPECT(strcmp(adsmax_report_table_name(r, 0), "field") == 0);
    EXPECT(strncmp(adsmax_report_table_csv(r, 0), "r,theta,phi,u,K\n", 16) == 0);
    EXPECT(adsmax_report_table_csv(r, 1) == NULL);
    adsmax_report_free(r);

    double values[2] = {0.8, 0.9};
    EXPECT(adsmax_sweep(cfg, "R", values, 2, &r) == ADSMAX_OK);
    EXPECT(adsmax_report_passed(r) == 1);
    EXPECT(adsmax_report_find_metric(r, "run1.residual", &residual, &ok) == ADSMAX_OK);
    adsmax_report_free(r);
    EXPECT(adsmax_sweep(cfg, "colour", values, 2, &r) == ADSMAX_ERR_CONFIG_PARSE);

    EXPECT(adsmax_config_set(cfg, "scenario", "mess-forward") == ADSMAX_OK);
    EXPECT(adsmax_config_set(cfg, "base_point.mu.0re", "1.5") == ADSMAX_OK);
    EXPECT(adsmax_run(cfg, &r) == ADSMAX_OK);
    EXPECT(adsmax_report_passed(r) == 0);
    EXPECT(strstr(adsmax_report_failure(r), "norm-violation") != NULL);
    adsmax_report_free(r);
    adsmax_config_free(cfg);
}

static void surface(void) {
    double re[1] = {0.1}, im[1] = {0.0};
    adsmax_surface* s = NULL;
    EXPECT(adsmax_surface_build(16, 32, 1.5, re, im, 1, 1e-11, &s) == ADSMAX_ERR_INVALID_PARAMETER);
    EXPECT(adsmax_surface_build(16, 32, 0.9, re, im, 1, 1e-11, &s) == ADSMAX_OK);
    size_t n = adsmax_surface_node_count(s);
    EXPECT(n == 16 * 32);
    double *x = malloc(n * sizeof(double)), *y = malloc(n * sizeof(double)), *phi = malloc(n * sizeof(double));
    double *mre = malloc(n * sizeof(double)), *mim = malloc(n * sizeof(double));
    EXPECT(adsmax_surface_nodes(s, x, y) == ADSMAX_OK);
    EXPECT(adsmax_surface_phi(s, phi) == ADSMAX_OK);
    EXPECT(adsmax_surface_mu_plus(s, mre, mim) == ADSMAX_OK);
    for (size_t i = 0; i < n; ++i) {
        double r2 = x[i] * x[i] + y[i] * y[i];
        /* mu_+ = conj(Phi) e^{-phi} with Phi = 0.1 real */
        EXPECT(fabs(mre[i] - 0.1 * exp(-phi[i])) < 1e-12 && fabs(mim[i]) < 1e-12);
        /* minimum principle for phi - psi */
        EXPECT(phi[i] >= log(4.0 / ((1.0 - r2) * (1.0 - r2))) - 1e-12);
    }
    EXPECT(adsmax_surface_energy(s) > 0.0);
    EXPECT(adsmax_surface_gauss_residual(s) < 1e-11);
    free(x);
    free(y);
    free(phi);
    free(mre);
    free(mim);
    adsmax_surface_free(s);
}

int main(void) {
    EXPECT(adsmax_scenario_count() == 8);
    EXPECT(strcmp(adsmax_scenario_name(0), "solve-gauss") == 0);
    EXPECT(adsmax_scenario_name(8) == NULL);
    config_round();
    run_and_inspect();
    surface();
    if (failures) fprintf(stderr, "%d failures\n", failures);
    else printf("C API checks passed\n");
    return failures ? 1 : 0;
}
