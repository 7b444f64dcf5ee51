#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "disc_geometry.hpp"

namespace adsmax {

// Dotted key = value configuration. Polynomial data is given per coefficient:
// base_point.phi.<k>re / <k>im for Phi(z) = sum c_k z^k, base_point.mu.<k>re /
// <k>im for mu(z) = sum c_k conj(z)^k, deformation.nu_source.* and
// deformation.nu_target.* for the q of e^{-psi} conj(q).
struct RunConfig {
    std::string scenario;
    int n_r = 48;
    int n_theta = 128;
    double R = 0.9;
    CVec mu_poly;
    CVec phi{0.0};
    double solver_tol = 1e-11;
    std::optional<double> check_tol;
    RVec epsilons{0.02, 0.01, 0.005};
    std::string output_path;

    CVec nu_source{0.2, 0.0, 1.0};
    CVec nu_target{cplx(0.0, 0.3), 0.5};
    double deformation_sup = 0.1;
    int basis_size = 5;
    int potential_basis_size = 3;
    RVec convergence_R{0.8, 0.9, 0.95};
    std::map<std::string, double> limits; // per-metric overrides

    std::vector<std::pair<std::string, std::string>> echo; // keys as given
};

const std::vector<std::string>& scenario_names();

void set_config_key(RunConfig& c, const std::string& key, const std::string& value);
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
void validate_config(const RunConfig& c);

struct Metric {
    enum class Cmp { le, ge, info };
    std::string name;
    double value = 0.0;
    double limit = 0.0;
    Cmp cmp = Cmp::info;
    bool ok() const;
};

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

struct RunReport {
    std::string scenario;
    bool pass = false;
    std::string failure; // set when the scenario stopped early
    std::string primary; // metric used in sweep tables
    std::vector<Metric> metrics;
    std::vector<std::pair<std::string, std::string>> facts;
    std::vector<Table> tables;
    std::vector<std::pair<std::string, std::string>> config;
    double runtime_s = 0.0;

    const Metric* metric(const std::string& name) const;
};

RunReport run(const RunConfig& c);

// parameter in {R, n_r, epsilon, Phi_scale}; the returned table has columns
// value, metric, ratio
std::vector<RunReport> sweep(const RunConfig& c, const std::string& parameter, const RVec& values, Table& table);

std::string report_text(const RunReport& r);
std::string table_csv(const Table& t);
// key-value text at path, tables at <path>.<table>.csv; each file written
// to a temporary name first and renamed
void write_report(const RunReport& r, const std::string& path);
void write_table(const Table& t, const std::string& path);

} // namespace adsmax
