#include "runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mess_map.hpp"
#include "symplectic.hpp"

namespace adsmax {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorCode::config_parse, msg); }

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
    try {
        size_t used = 0;
        double x = std::stod(v, &used);
        if (trim(v.substr(used)).empty() && std::isfinite(x)) return x;
    } catch (const std::exception&) {
    }
    config_error("not a finite number for " + key + ": '" + v + "'");
}

int to_int(const std::string& key, const std::string& v) {
    double x = to_double(key, v);
    if (x != std::floor(x) || std::abs(x) > 1e6) config_error("not an integer for " + key + ": '" + v + "'");
    return static_cast<int>(x);
}

RVec to_list(const std::string& key, const std::string& v) {
    RVec out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
    if (out.empty()) config_error("empty list for " + key);
    return out;
}

// "<k>re" / "<k>im" suffix of a coefficient key
void set_coefficient(CVec& poly, const std::string& key, const std::string& suffix, const std::string& value) {
    if (suffix.size() < 3) config_error("bad coefficient key " + key);
    std::string part = suffix.substr(suffix.size() - 2);
    std::string idx = suffix.substr(0, suffix.size() - 2);
    if ((part != "re" && part != "im") || idx.empty() || !std::all_of(idx.begin(), idx.end(), ::isdigit))
        config_error("bad coefficient key " + key + " (expected <k>re or <k>im)");
    int k = std::stoi(idx);
    if (k > kMaxDegree) config_error("coefficient index above " + std::to_string(kMaxDegree) + " in " + key);
    if (static_cast<int>(poly.size()) <= k) poly.resize(k + 1, 0.0);
    double x = to_double(key, value);
    poly[k] = part == "re" ? cplx(x, poly[k].imag()) : cplx(poly[k].real(), x);
}

bool starts_with(const std::string& s, const std::string& p) { return s.compare(0, p.size(), p) == 0; }

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string short_fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

// ------------------------------------------------------------------ scenarios

struct Context {
    const RunConfig& c;
    RunReport& r;
    GridPtr g;

    double limit(const std::string& name, double fallback, bool primary_check = false) const {
        auto it = c.limits.find(name);
        if (it != c.limits.end()) return it->second;
        if (primary_check && c.check_tol) return *c.check_tol;
        return fallback;
    }
    void le(const std::string& name, double v, double lim, bool primary_check = false) {
        r.metrics.push_back({name, v, limit(name, lim, primary_check), Metric::Cmp::le});
    }
    void ge(const std::string& name, double v, double lim) {
        r.metrics.push_back({name, v, limit(name, lim), Metric::Cmp::ge});
    }
    void info(const std::string& name, double v) { r.metrics.push_back({name, v, 0.0, Metric::Cmp::info}); }
    void fact(const std::string& k, const std::string& v) { r.facts.emplace_back(k, v); }
};

QuadDifferential phi_of(const RunConfig& c) { return QuadDifferential{c.phi.empty() ? CVec{0.0} : c.phi}; }

BeltramiCoefficient mu_of(const RunConfig& c, const GridPtr& g) {
    CVec p = c.mu_poly;
    return beltrami_from_function(g, [p](cplx z) {
        cplx s = 0.0, zb = std::conj(z), pw = 1.0;
        for (cplx a : p) {
            s += a * pw;
            pw *= zb;
        }
        return s;
    });
}

TangentField normalized_tangent(const GridPtr& g, const CVec& poly, double sup) {
    TangentField t = make_tangent(g, poly);
    double s = sup_abs(t.field);
    if (!(s > 0.0)) throw Error(ErrorCode::invalid_parameter, "deformation polynomial vanishes");
    return t.scaled(sup / s);
}

void scenario_solve_gauss(Context& x) {
    auto cf = solve_gauss(phi_of(x.c), x.g, x.c.solver_tol);
    RealField K = curvature(cf);
    RealField psi = hyperbolic_log_density(x.g);
    RealField gap(x.g);
    double dev = 0.0, kmin = 1e300, kmax = -1e300;
    const Grid& g = *x.g;
    for (int i = 0; i < g.size(); ++i) {
        gap[i] = K[i] + 1.0 - std::norm(cf.Phi(g.z(i))) * std::exp(-2.0 * cf.phi[i]);
        dev = std::max(dev, std::abs(cf.phi[i] - psi[i]));
        if (i < (g.n_r - 1) * g.n_theta) {
            kmin = std::min(kmin, K[i]);
            kmax = std::max(kmax, K[i]);
        }
    }
    x.r.primary = "residual";
    x.le("residual", cf.residual_sup, x.c.solver_tol, true);
    x.le("curvature_identity", interior_sup(gap), 1e-6);
    x.info("phi_minus_psi", dev);
    x.info("K_min", kmin);
    x.info("K_max", kmax);
    x.info("newton_steps", cf.newton_steps);
    x.fact("phi_equals_psi", dev < 1e-9 ? "true" : "false");
    Table t{"field", {"r", "theta", "phi", "u", "K"}, {}};
    for (int i = 0; i < g.size(); ++i) t.rows.push_back({g.r(i), g.theta(i), cf.phi[i], cf.u[i], K[i]});
    x.r.tables.push_back(std::move(t));
}

void scenario_build_surface(Context& x) {
    auto cf = solve_gauss(phi_of(x.c), x.g, x.c.solver_tol);
    auto pair = build_pair(cf, x.c.solver_tol);
    const Grid& g = *x.g;
    RealField w(x.g);
    for (int i = 0; i < g.size(); ++i) w[i] = std::exp(-cf.phi[i]);
    ComplexField Phi = cf.Phi.sample(x.g);
    ComplexField hp = hopf_differential(*pair.F_plus), hm = hopf_differential(*pair.F_minus);
    for (auto& v : hm.values) v = -v;
    double E = anti_holomorphic_energy(cf), T = total_curvature_integral(cf);
    x.r.primary = "hopf_rel_l2_plus";
    x.le("hopf_rel_l2_plus", relative_weighted_l2(hp, Phi, w), 1e-3, true);
    x.le("hopf_rel_l2_minus", relative_weighted_l2(hm, Phi, w), 1e-3, true);
    x.le("harmonic_residual_plus", harmonic_residual(*pair.F_plus), 1e-4);
    x.le("harmonic_residual_minus", harmonic_residual(*pair.F_minus), 1e-4);
    x.le("energy_curvature_gap", std::abs(E - T) / std::max(std::abs(E), 1e-300), 1e-10);
    x.le("mu_F_sup", pair.mu_plus.sup_norm(), 1.0);
    x.info("energy", E);
    x.info("total_curvature", T);
    Table t{"surface", {"r", "theta", "mu_plus_re", "mu_plus_im", "hopf_plus_re", "hopf_plus_im"}, {}};
    for (int i = 0; i < g.size(); ++i) {
        cplx m = pair.mu_plus.field()[i], h = hp[i];
        t.rows.push_back({g.r(i), g.theta(i), m.real(), m.imag(), h.real(), h.imag()});
    }
    x.r.tables.push_back(std::move(t));
}

int monotone_violations(const RVec& t) {
    int v = 0;
    for (size_t j = 1; j < t.size(); ++j)
        if (!(t[j] > t[j - 1])) ++v;
    if (!(t.back() - t.front() < 2.0 * 3.14159265358979323846)) ++v;
    return v;
}

void scenario_mess_forward(Context& x) {
    auto m = mess_forward(CotangentPoint{mu_of(x.c, x.g), phi_of(x.c)}, x.c.solver_tol);
    const Grid& g = *x.g;
    x.r.primary = "mu_plus_sup";
    x.le("mu_plus_sup", m.mu_plus_target.sup_norm(), 1.0);
    x.le("mu_minus_sup", m.mu_minus_target.sup_norm(), 1.0);
    x.le("trace_order_violations", monotone_violations(m.trace_plus) + monotone_violations(m.trace_minus), 0.0);
    double gap = 0.0;
    for (size_t j = 0; j < m.trace_plus.size(); ++j) gap = std::max(gap, std::abs(m.trace_plus[j] - m.trace_minus[j]));
    x.info("trace_gap", gap);
    x.info("chart_residual", m.chart->residual());
    Table t{"traces", {"theta", "trace_plus", "trace_minus"}, {}};
    for (int j = 0; j < g.n_theta; ++j) t.rows.push_back({g.theta_nodes[j], m.trace_plus[j], m.trace_minus[j]});
    x.r.tables.push_back(std::move(t));
    Table c{"coefficients", {"r", "theta", "mu_plus_re", "mu_plus_im", "mu_minus_re", "mu_minus_im"}, {}};
    for (int i = 0; i < g.size(); ++i) {
        cplx p = m.mu_plus_target.field()[i], q = m.mu_minus_target.field()[i];
        c.rows.push_back({g.r(i), g.theta(i), p.real(), p.imag(), q.real(), q.imag()});
    }
    x.r.tables.push_back(std::move(c));
}

void scenario_mess_roundtrip(Context& x) {
    auto mu = mu_of(x.c, x.g);
    auto m = mess_forward(CotangentPoint{mu, phi_of(x.c)}, x.c.solver_tol);
    auto inv = mess_pointwise_invert(m.mu_plus_target.field(), m.mu_minus_target.field(), 1e-14);
    const Grid& g = *x.g;
    const int n = (g.n_r - 1) * g.n_theta;
    RVec err(n);
    for (int i = 0; i < n; ++i)
        err[i] = std::max(std::abs(inv.a[i] - mu.field()[i]), std::abs(inv.b[i] - m.pulled_plus[i]));
    RVec sorted = err;
    std::sort(sorted.begin(), sorted.end());
    const double p99 = sorted[static_cast<size_t>(std::floor(0.99 * (n - 1)))];
    const double ok = static_cast<double>(std::count_if(err.begin(), err.end(), [](double e) { return e < 1e-6; })) / n;
    x.r.primary = "recovery_error_p99";
    x.le("recovery_error_p99", p99, 1e-6, true);
    x.ge("recovered_fraction", ok, 0.99);
    x.info("recovery_error_max", sorted.back());
    x.info("inversion_residual", inv.max_residual);
    Table t{"recovery", {"r", "theta", "error"}, {}};
    for (int i = 0; i < n; ++i) t.rows.push_back({g.r(i), g.theta(i), err[i]});
    x.r.tables.push_back(std::move(t));
}

InducedGaussPair pair_of(const Context& x) { return build_pair(solve_gauss(phi_of(x.c), x.g, x.c.solver_tol), x.c.solver_tol); }

void scenario_lie_check(Context& x) {
    auto pair = pair_of(x);
    TangentField nf = normalized_tangent(x.g, x.c.nu_source, x.c.deformation_sup);
    TangentField nh = normalized_tangent(x.g, x.c.nu_target, x.c.deformation_sup);
    LieOptions opt;
    opt.epsilons = x.c.epsilons;
    opt.tol = x.c.solver_tol;
    const std::map<std::string, double> lim = {{"mu_F", 1e-3},     {"Phi", 2e-3},         {"antihol_density", 2e-3},
                                               {"hol_density", 2e-3}, {"mu_H_dot", 5e-3}, {"mu_H_dot_pulled", 1e-3},
                                               {"delta_Phi", 2e-3}, {"delta_mu", 2e-3},   {"compat_mu", 1e-6},
                                               {"compat_Phi", 1e-4}};
    Table t{"lie", {"sign", "quantity_index", "rel_error", "order"}, {}};
    double worst = 0.0, min_order = kInf;
    auto add = [&](const LieReport& r, const std::string& tag, int sign, int idx) {
        x.le(r.quantity + tag + ".rel_error", r.rel_error, lim.at(r.quantity), true);
        x.ge(r.quantity + tag + ".order", r.order_estimate, 1.5);
        worst = std::max(worst, r.rel_error);
        min_order = std::min(min_order, r.order_estimate);
        t.rows.push_back({double(sign), double(idx), r.rel_error, r.order_estimate});
    };
    for (int sign : {+1, -1}) {
        auto reps = lie_checks(pair, sign, &nf, &nh, opt);
        for (size_t k = 0; k < reps.size(); ++k) add(reps[k], sign > 0 ? ".plus" : ".minus", sign, int(k));
        double imag = 0.0;
        for (int q : {2, 3})
            for (auto v : reps[q].fd_value.values) imag = std::max(imag, std::abs(v.imag()));
        x.le(std::string("density_imag") + (sign > 0 ? ".plus" : ".minus"), imag, 1e-10);
    }
    auto pm = pm_checks(pair, &nh, &nf, opt);
    for (size_t k = 0; k < pm.size(); ++k) add(pm[k], "", 0, int(10 + k));

    SolvedLadder hl = solve_ladder(beltrami_from_tangent(nh), opt.epsilons, opt.tol);
    x.le("ahlfors_defect", ahlfors_defect(lie_fd(*pair.F_plus, nullptr, &hl)), 2e-3);
    x.r.primary = "worst_rel_error";
    x.info("worst_rel_error", worst);
    x.info("min_order", min_order);
    x.r.tables.push_back(std::move(t));
    x.fact("quantity_index", "0 mu_F, 1 Phi, 2 antihol_density, 3 hol_density, 4 mu_H_dot, 5 mu_H_dot_pulled, "
                             "10 delta_Phi, 11 delta_mu, 12 compat_mu, 13 compat_Phi");
}

void matrix_rows(Table& t, const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    for (int j = 0; j < a.rows(); ++j)
        for (int k = 0; k < a.cols(); ++k)
            t.rows.push_back({double(j), double(k), a(j, k).real(), a(j, k).imag(), b(j, k).real(), b(j, k).imag()});
}

void scenario_symplectic_check(Context& x) {
    auto pair = pair_of(x);
    auto basis = monomial_basis(x.g, x.c.basis_size);
    const double tol = x.limit("discrepancy", 5e-3, true);
    auto r = verify_symplectomorphism(pair, basis, basis, tol);
    auto mixed = verify_symplectomorphism(pair, remix(basis, random_unitary(x.c.basis_size, 1)),
                                          remix(basis, random_unitary(x.c.basis_size, 2)), tol);
    x.r.primary = "discrepancy";
    x.le("discrepancy", r.frobenius_rel, 5e-3, true);
    x.info("entry_discrepancy", r.entry_rel);
    x.le("basis_dependence", std::abs(mixed.frobenius_rel - r.frobenius_rel), 1e-8);
    x.le("gram_deviation", (basis.gram - Eigen::MatrixXcd::Identity(x.c.basis_size, x.c.basis_size)).cwiseAbs().maxCoeff(),
         1e-8);
    x.fact("omega_c_normalization", "-2 Im int (dPhi_1 dmu_2 - dPhi_2 dmu_1); no extra constant");
    x.fact("vector_order", "basis_plus on the + factor, then basis_minus on the - factor");
    Table t{"pairings", {"j", "k", "omega_c_re", "omega_c_im", "mess_side_re", "mess_side_im"}, {}};
    matrix_rows(t, r.omega_c, r.mess_side);
    x.r.tables.push_back(std::move(t));
}

void scenario_potential_check(Context& x) {
    auto pair = pair_of(x);
    auto basis = monomial_basis(x.g, x.c.potential_basis_size);
    auto r = verify_kahler_potential(pair, basis, x.limit("route_gap", 5e-3, true));
    x.r.primary = "route_gap";
    double worst = std::max({r.rel_a_b[0], r.rel_a_b[1], r.rel_target_b[0], r.rel_target_b[1]});
    x.le("route_gap", worst, 5e-3, true);
    x.info("route_a_b.plus", r.rel_a_b[0]);
    x.info("route_a_b.minus", r.rel_a_b[1]);
    x.info("route_target_b.plus", r.rel_target_b[0]);
    x.info("route_target_b.minus", r.rel_target_b[1]);
    x.le("sign_gap", r.sign_gap, 0.0);
    x.le("hessian_hermitian_gap", r.hermitian_gap, 1e-12);

    TangentField nf = normalized_tangent(x.g, x.c.nu_source, x.c.deformation_sup);
    TangentField nh = normalized_tangent(x.g, x.c.nu_target, x.c.deformation_sup);
    LieOptions opt;
    opt.epsilons = x.c.epsilons;
    opt.tol = x.c.solver_tol;
    for (int sign : {+1, -1}) {
        auto e = energy_variation_check(pair, sign, nh, nf, opt);
        std::string tag = sign > 0 ? ".plus" : ".minus";
        x.le("energy_first_variation" + tag, e.first_rel_error, 5e-3, true);
        x.le("hessian_integrand" + tag, e.second.rel_error, 5e-3, true);
        x.ge("hessian_integrand_order" + tag, e.second.order_estimate, 1.5);
    }
    x.fact("convention", "d_nu = (L_nu - i L_{i nu}) / 2 with i acting on the target coefficient");
    Table t{"routes", {"j", "k", "route_a_plus_re", "route_a_plus_im", "route_b_re", "route_b_im"}, {}};
    matrix_rows(t, r.route_a[0], r.route_b);
    x.r.tables.push_back(std::move(t));
}

void scenario_convergence(Context& x) {
    const RVec& Rs = x.c.convergence_R;
    if (Rs.size() < 3) throw Error(ErrorCode::invalid_parameter, "convergence needs three radii");
    Table t{"energy_vs_R", {"R", "energy", "total_curvature"}, {}};
    RVec E;
    double gap = 0.0;
    for (double R : Rs) {
        auto g = make_grid(x.c.n_r, x.c.n_theta, R);
        auto cf = solve_gauss(phi_of(x.c), g, x.c.solver_tol);
        double e = anti_holomorphic_energy(cf), k = total_curvature_integral(cf);
        gap = std::max(gap, std::abs(e - k) / std::max(std::abs(e), 1e-300));
        E.push_back(e);
        t.rows.push_back({R, e, k});
    }
    double worst = 0.0;
    for (size_t j = 2; j < E.size(); ++j) {
        double d0 = std::abs(E[j - 1] - E[j - 2]), d1 = std::abs(E[j] - E[j - 1]);
        worst = std::max(worst, d0 > 0.0 ? d1 / d0 : (d1 > 0.0 ? kInf : 0.0));
    }
    x.r.primary = "cauchy_ratio";
    x.le("cauchy_ratio", worst, 0.5, true);
    x.le("energy_curvature_gap", gap, 1e-10);
    x.info("energy_last", E.back());
    x.r.tables.push_back(std::move(t));
}

} // namespace

bool Metric::ok() const {
    if (!std::isfinite(value)) return false;
    switch (cmp) {
    case Cmp::le: return value <= limit;
    case Cmp::ge: return value >= limit;
    case Cmp::info: return true;
    }
    return false;
}

const Metric* RunReport::metric(const std::string& name) const {
    for (const auto& m : metrics)
        if (m.name == name) return &m;
    return nullptr;
}

const std::vector<std::string>& scenario_names() {
    static const std::vector<std::string> names = {"solve-gauss", "build-surface", "mess-forward",  "mess-roundtrip",
                                                   "lie-check",   "symplectic-check", "potential-check", "convergence"};
    return names;
}

void set_config_key(RunConfig& c, const std::string& key, const std::string& v) {
    if (key == "scenario") c.scenario = v;
    else if (key == "grid.n_r") c.n_r = to_int(key, v);
    else if (key == "grid.n_theta") c.n_theta = to_int(key, v);
    else if (key == "grid.R") c.R = to_double(key, v);
    else if (starts_with(key, "base_point.phi.")) set_coefficient(c.phi, key, key.substr(15), v);
    else if (starts_with(key, "base_point.mu_poly.")) set_coefficient(c.mu_poly, key, key.substr(19), v);
    else if (starts_with(key, "base_point.mu.")) set_coefficient(c.mu_poly, key, key.substr(14), v);
    else if (key == "tolerances.solver_tol") c.solver_tol = to_double(key, v);
    else if (key == "tolerances.check_tol") c.check_tol = to_double(key, v);
    else if (key == "epsilons") c.epsilons = to_list(key, v);
    else if (key == "output_path") c.output_path = v;
    else if (starts_with(key, "deformation.nu_source.")) {
        if (c.nu_source == RunConfig{}.nu_source) c.nu_source.assign(1, 0.0);
        set_coefficient(c.nu_source, key, key.substr(22), v);
    } else if (starts_with(key, "deformation.nu_target.")) {
        if (c.nu_target == RunConfig{}.nu_target) c.nu_target.assign(1, 0.0);
        set_coefficient(c.nu_target, key, key.substr(22), v);
    } else if (key == "deformation.sup") c.deformation_sup = to_double(key, v);
    else if (key == "basis.size") c.basis_size = to_int(key, v);
    else if (key == "basis.potential_size") c.potential_basis_size = to_int(key, v);
    else if (key == "convergence.R") c.convergence_R = to_list(key, v);
    else if (starts_with(key, "limits.") && key.size() > 7) c.limits[key.substr(7)] = to_double(key, v);
    else config_error("unknown key '" + key + "'");
    auto same = [&](const auto& kv) { return kv.first == key; };
    auto it = std::find_if(c.echo.begin(), c.echo.end(), same);
    if (it != c.echo.end()) it->second = v;
    else c.echo.emplace_back(key, v);
}

RunConfig parse_config(const std::string& text) {
    RunConfig c;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos) config_error("line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) config_error("line " + std::to_string(lineno) + ": empty key or value");
        try {
            set_config_key(c, key, value);
        } catch (const Error& e) {
            config_error("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) config_error("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

void validate_config(const RunConfig& c) {
    const auto& names = scenario_names();
    if (std::find(names.begin(), names.end(), c.scenario) == names.end())
        config_error("unknown scenario '" + c.scenario + "'");
    if (c.n_r < 4 || c.n_r > 512) config_error("grid.n_r must be in [4, 512]");
    if (c.n_theta < 8 || c.n_theta > 2048 || c.n_theta % 2) config_error("grid.n_theta must be even, in [8, 2048]");
    if (!(c.R > 0.0 && c.R < 1.0)) config_error("grid.R must be in (0, 1)");
    if (!(c.solver_tol > 0.0)) config_error("tolerances.solver_tol must be positive");
    if (c.check_tol && !(*c.check_tol > 0.0)) config_error("tolerances.check_tol must be positive");
    for (size_t k = 0; k < c.epsilons.size(); ++k)
        if (!(c.epsilons[k] > 0.0) || (k && !(c.epsilons[k] < c.epsilons[k - 1])))
            config_error("epsilons must be positive and decreasing");
    if (c.epsilons.size() < 3) config_error("epsilons needs at least three values");
    if (!(c.deformation_sup > 0.0)) config_error("deformation.sup must be positive");
    if (c.basis_size < 1 || c.basis_size > 9 || c.potential_basis_size < 1 || c.potential_basis_size > 9)
        config_error("basis sizes must be in [1, 9]");
    for (double R : c.convergence_R)
        if (!(R > 0.0 && R < 1.0)) config_error("convergence.R values must be in (0, 1)");
}

RunReport run(const RunConfig& c) {
    validate_config(c);
    RunReport r;
    r.scenario = c.scenario;
    r.config = c.echo;
    auto t0 = std::chrono::steady_clock::now();
    Context x{c, r, make_grid(c.n_r, c.n_theta, c.R)};
    try {
        if (c.scenario == "solve-gauss") scenario_solve_gauss(x);
        else if (c.scenario == "build-surface") scenario_build_surface(x);
        else if (c.scenario == "mess-forward") scenario_mess_forward(x);
        else if (c.scenario == "mess-roundtrip") scenario_mess_roundtrip(x);
        else if (c.scenario == "lie-check") scenario_lie_check(x);
        else if (c.scenario == "symplectic-check") scenario_symplectic_check(x);
        else if (c.scenario == "potential-check") scenario_potential_check(x);
        else if (c.scenario == "convergence") scenario_convergence(x);
    } catch (const Error& e) {
        r.failure = std::string(error_name(e.code())) + ": " + e.what();
        if (e.node() >= 0) r.failure += " (node " + std::to_string(e.node()) + ")";
    }
    r.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.pass = r.failure.empty() && !r.metrics.empty() &&
             std::all_of(r.metrics.begin(), r.metrics.end(), [](const Metric& m) { return m.ok(); });
    return r;
}

std::vector<RunReport> sweep(const RunConfig& c, const std::string& parameter, const RVec& values, Table& table) {
    if (values.empty()) config_error("sweep needs values");
    std::vector<RunReport> out;
    table = Table{"sweep_" + parameter, {"value", "metric", "ratio"}, {}};
    double prev = 0.0;
    for (double v : values) {
        RunConfig m = c;
        if (parameter == "R") m.R = v;
        else if (parameter == "n_r") m.n_r = static_cast<int>(v);
        else if (parameter == "epsilon") m.epsilons = {v, v / 2.0, v / 4.0};
        else if (parameter == "Phi_scale")
            for (auto& a : m.phi) a *= v;
        else config_error("sweep parameter must be one of R, n_r, epsilon, Phi_scale");
        m.echo.emplace_back("sweep." + parameter, fmt(v));
        out.push_back(run(m));
        const Metric* pm = out.back().metric(out.back().primary);
        double val = pm ? pm->value : std::nan("");
        double ratio = out.size() > 1 && prev != 0.0 ? val / prev : std::nan(""); // undefined on the first row
        table.rows.push_back({v, val, ratio});
        prev = val;
    }
    return out;
}

std::string report_text(const RunReport& r) {
    std::ostringstream o;
    o << "# adsmax report\n";
    o << "scenario: " << r.scenario << "\n";
    o << "status: " << (r.pass ? "pass" : "fail") << "\n";
    if (!r.failure.empty()) o << "failure: " << r.failure << "\n";
    if (!r.primary.empty()) o << "primary_metric: " << r.primary << "\n";
    for (const auto& [k, v] : r.facts) o << k << ": " << v << "\n";
    for (const auto& m : r.metrics) {
        o << "metric." << m.name << ": " << short_fmt(m.value);
        if (m.cmp == Metric::Cmp::le) o << " <= " << short_fmt(m.limit);
        if (m.cmp == Metric::Cmp::ge) o << " >= " << short_fmt(m.limit);
        if (m.cmp != Metric::Cmp::info) o << (m.ok() ? " ok" : " FAIL");
        o << "\n";
    }
    for (const auto& t : r.tables) o << "table." << t.name << ": " << t.rows.size() << " rows\n";
    for (const auto& [k, v] : r.config) o << "config." << k << ": " << v << "\n";
    o << "runtime_s: " << short_fmt(r.runtime_s) << "\n";
    o << "determinism: no random state beyond fixed seeds; CSV bodies repeat byte for byte\n";
    return o.str();
}

std::string table_csv(const Table& t) {
    std::ostringstream o;
    for (size_t j = 0; j < t.columns.size(); ++j) o << (j ? "," : "") << t.columns[j];
    o << "\n";
    for (const auto& row : t.rows) {
        for (size_t j = 0; j < row.size(); ++j) o << (j ? "," : "") << fmt(row[j]);
        o << "\n";
    }
    return o.str();
}

namespace {
void atomic_write(const std::string& path, const std::string& body) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::invalid_parameter, "cannot write '" + path + "'");
        out << body;
        if (!out) throw Error(ErrorCode::invalid_parameter, "cannot write '" + path + "'");
    }
    std::filesystem::rename(tmp, path);
}
} // namespace

void write_table(const Table& t, const std::string& path) { atomic_write(path, table_csv(t)); }

void write_report(const RunReport& r, const std::string& path) {
    for (const auto& t : r.tables) write_table(t, path + "." + t.name + ".csv");
    atomic_write(path, report_text(r));
}

} // namespace adsmax
