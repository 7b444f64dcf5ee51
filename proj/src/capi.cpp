#include "adsmax/adsmax.h"

#include <cstring>
#include <new>

#include "runner.hpp"
#include "induced_gauss_maps.hpp"

using namespace adsmax;

struct adsmax_config {
    RunConfig c;
};

struct adsmax_report {
    RunReport r;
    std::string text;
    std::vector<std::string> csv;
};

struct adsmax_surface {
    InducedGaussPair pair;
    double energy = 0.0;
};

namespace {

thread_local std::string last_error;

int fail(int code, const std::string& msg) {
    last_error = msg;
    return code;
}

// runs f, turning exceptions into status codes
template <class F>
int guarded(F&& f) {
    try {
        last_error.clear();
        return f();
    } catch (const Error& e) {
        return fail(static_cast<int>(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(ADSMAX_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(ADSMAX_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(ADSMAX_ERR_INTERNAL, "unknown exception");
    }
}

adsmax_report* wrap(RunReport r) {
    auto* out = new adsmax_report{std::move(r), {}, {}};
    out->text = report_text(out->r);
    for (const auto& t : out->r.tables) out->csv.push_back(table_csv(t));
    return out;
}

#define NEED(p)                                                                                                        \
    if (!(p)) return fail(ADSMAX_ERR_INVALID_PARAMETER, "null argument: " #p)

} // namespace

extern "C" {

const char* adsmax_last_error(void) { return last_error.c_str(); }

const char* adsmax_error_name(int code) { return error_name(static_cast<ErrorCode>(code)); }

size_t adsmax_scenario_count(void) { return scenario_names().size(); }

const char* adsmax_scenario_name(size_t index) {
    const auto& n = scenario_names();
    return index < n.size() ? n[index].c_str() : nullptr;
}

int adsmax_config_from_file(const char* path, adsmax_config** out) {
    NEED(path);
    NEED(out);
    *out = nullptr;
    return guarded([&] {
        *out = new adsmax_config{load_config(path)};
        return ADSMAX_OK;
    });
}

int adsmax_config_from_string(const char* text, adsmax_config** out) {
    NEED(text);
    NEED(out);
    *out = nullptr;
    return guarded([&] {
        *out = new adsmax_config{parse_config(text)};
        return ADSMAX_OK;
    });
}

int adsmax_config_set(adsmax_config* cfg, const char* key, const char* value) {
    NEED(cfg);
    NEED(key);
    NEED(value);
    return guarded([&] {
        RunConfig copy = cfg->c; // unchanged on error
        set_config_key(copy, key, value);
        cfg->c = std::move(copy);
        return ADSMAX_OK;
    });
}

int adsmax_config_validate(const adsmax_config* cfg) {
    NEED(cfg);
    return guarded([&] {
        validate_config(cfg->c);
        return ADSMAX_OK;
    });
}

const char* adsmax_config_output_path(const adsmax_config* cfg) { return cfg ? cfg->c.output_path.c_str() : ""; }

void adsmax_config_free(adsmax_config* cfg) { delete cfg; }

int adsmax_run(const adsmax_config* cfg, adsmax_report** out) {
    NEED(cfg);
    NEED(out);
    *out = nullptr;
    return guarded([&] {
        *out = wrap(run(cfg->c));
        return ADSMAX_OK;
    });
}

int adsmax_sweep(const adsmax_config* cfg, const char* parameter, const double* values, size_t count,
                 adsmax_report** out) {
    NEED(cfg);
    NEED(parameter);
    NEED(values);
    NEED(out);
    *out = nullptr;
    return guarded([&] {
        Table t;
        auto runs = sweep(cfg->c, parameter, RVec(values, values + count), t);
        RunReport all;
        all.scenario = cfg->c.scenario;
        all.pass = true;
        all.config = cfg->c.echo;
        all.config.emplace_back("sweep.parameter", parameter);
        for (size_t i = 0; i < runs.size(); ++i) {
            const RunReport& r = runs[i];
            std::string tag = "run" + std::to_string(i) + ".";
            all.pass = all.pass && r.pass;
            if (!r.failure.empty() && all.failure.empty()) all.failure = tag + r.failure;
            for (Metric m : r.metrics) {
                m.name = tag + m.name;
                all.metrics.push_back(m);
            }
            all.runtime_s += r.runtime_s;
        }
        all.primary = runs.empty() ? "" : runs.front().primary;
        all.tables.push_back(std::move(t));
        *out = wrap(std::move(all));
        return ADSMAX_OK;
    });
}

int adsmax_report_passed(const adsmax_report* r) { return r && r->r.pass ? 1 : 0; }

const char* adsmax_report_scenario(const adsmax_report* r) { return r ? r->r.scenario.c_str() : ""; }

const char* adsmax_report_failure(const adsmax_report* r) { return r ? r->r.failure.c_str() : ""; }

size_t adsmax_report_metric_count(const adsmax_report* r) { return r ? r->r.metrics.size() : 0; }

int adsmax_report_metric(const adsmax_report* r, size_t index, const char** name, double* value, double* limit,
                         int* comparison, int* ok) {
    NEED(r);
    if (index >= r->r.metrics.size()) return fail(ADSMAX_ERR_INVALID_PARAMETER, "metric index out of range");
    const Metric& m = r->r.metrics[index];
    if (name) *name = m.name.c_str();
    if (value) *value = m.value;
    if (limit) *limit = m.limit;
    if (comparison)
        *comparison = m.cmp == Metric::Cmp::le ? ADSMAX_METRIC_LE : m.cmp == Metric::Cmp::ge ? ADSMAX_METRIC_GE
                                                                                              : ADSMAX_METRIC_INFO;
    if (ok) *ok = m.ok() ? 1 : 0;
    return ADSMAX_OK;
}

int adsmax_report_find_metric(const adsmax_report* r, const char* name, double* value, int* ok) {
    NEED(r);
    NEED(name);
    const Metric* m = r->r.metric(name);
    if (!m) return fail(ADSMAX_ERR_INVALID_PARAMETER, std::string("no metric named ") + name);
    if (value) *value = m->value;
    if (ok) *ok = m->ok() ? 1 : 0;
    return ADSMAX_OK;
}

const char* adsmax_report_text(const adsmax_report* r) { return r ? r->text.c_str() : ""; }

size_t adsmax_report_table_count(const adsmax_report* r) { return r ? r->r.tables.size() : 0; }

const char* adsmax_report_table_name(const adsmax_report* r, size_t index) {
    return r && index < r->r.tables.size() ? r->r.tables[index].name.c_str() : nullptr;
}

const char* adsmax_report_table_csv(const adsmax_report* r, size_t index) {
    return r && index < r->csv.size() ? r->csv[index].c_str() : nullptr;
}

int adsmax_report_write(const adsmax_report* r, const char* path) {
    NEED(r);
    NEED(path);
    return guarded([&] {
        write_report(r->r, path);
        return ADSMAX_OK;
    });
}

void adsmax_report_free(adsmax_report* r) { delete r; }

int adsmax_surface_build(int n_r, int n_theta, double R, const double* phi_re, const double* phi_im,
                         size_t degree_plus_one, double tol, adsmax_surface** out) {
    NEED(out);
    *out = nullptr;
    if (degree_plus_one > 0) {
        NEED(phi_re);
        NEED(phi_im);
    }
    return guarded([&] {
        CVec c(degree_plus_one == 0 ? 1 : degree_plus_one, 0.0);
        for (size_t k = 0; k < degree_plus_one; ++k) c[k] = cplx(phi_re[k], phi_im[k]);
        auto cf = solve_gauss(QuadDifferential{c}, make_grid(n_r, n_theta, R), tol);
        auto* s = new adsmax_surface{build_pair(cf, tol), 0.0};
        s->energy = anti_holomorphic_energy(s->pair.cf);
        *out = s;
        return ADSMAX_OK;
    });
}

size_t adsmax_surface_node_count(const adsmax_surface* s) { return s ? s->pair.grid()->size() : 0; }

int adsmax_surface_nodes(const adsmax_surface* s, double* x, double* y) {
    NEED(s);
    NEED(x);
    NEED(y);
    const Grid& g = *s->pair.grid();
    for (int i = 0; i < g.size(); ++i) {
        x[i] = g.z(i).real();
        y[i] = g.z(i).imag();
    }
    return ADSMAX_OK;
}

int adsmax_surface_phi(const adsmax_surface* s, double* phi) {
    NEED(s);
    NEED(phi);
    std::memcpy(phi, s->pair.cf.phi.values.data(), s->pair.cf.phi.values.size() * sizeof(double));
    return ADSMAX_OK;
}

int adsmax_surface_mu_plus(const adsmax_surface* s, double* re, double* im) {
    NEED(s);
    NEED(re);
    NEED(im);
    const ComplexField& m = s->pair.mu_plus.field();
    for (int i = 0; i < m.size(); ++i) {
        re[i] = m[i].real();
        im[i] = m[i].imag();
    }
    return ADSMAX_OK;
}

double adsmax_surface_energy(const adsmax_surface* s) { return s ? s->energy : 0.0; }

double adsmax_surface_gauss_residual(const adsmax_surface* s) { return s ? s->pair.cf.residual_sup : 0.0; }

void adsmax_surface_free(adsmax_surface* s) { delete s; }

} // extern "C"
