#include "doctest.h"

#include "runner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace adsmax;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::ok;
}

std::string message_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.what();
    }
    return "";
}

} // namespace

TEST_CASE("config parsing") {
    RunConfig c = parse_config("# comment line\n"
                               "scenario = lie-check   # trailing comment\n"
                               "\n"
                               "grid.n_r=24\n"
                               "  grid.n_theta = 64\n"
                               "grid.R = 0.85\n"
                               "base_point.phi.0re = 0.1\n"
                               "base_point.phi.2im = -0.05\n"
                               "base_point.mu_poly.1re = 0.1\n"
                               "epsilons = 0.04, 0.02 ,0.01\n"
                               "tolerances.check_tol = 1e-3\n"
                               "deformation.nu_source.1im = 2\n"
                               "limits.ahlfors_defect = 0.01\n");
    CHECK(c.scenario == "lie-check");
    CHECK(c.n_r == 24);
    CHECK(c.n_theta == 64);
    CHECK(c.R == 0.85);
    REQUIRE(c.phi.size() == 3);
    CHECK(c.phi[0] == cplx(0.1, 0.0));
    CHECK(c.phi[1] == cplx(0.0, 0.0));
    CHECK(c.phi[2] == cplx(0.0, -0.05));
    REQUIRE(c.mu_poly.size() == 2);
    CHECK(c.mu_poly[1] == cplx(0.1, 0.0));
    CHECK(c.epsilons == RVec{0.04, 0.02, 0.01});
    REQUIRE(c.check_tol.has_value());
    CHECK(*c.check_tol == 1e-3);
    // a given source polynomial replaces the default one
    CHECK(c.nu_source == CVec{0.0, cplx(0.0, 2.0)});
    CHECK(c.nu_target == RunConfig{}.nu_target);
    CHECK(c.limits.at("ahlfors_defect") == 0.01);
    CHECK(c.echo.size() == 11);
    CHECK_NOTHROW(validate_config(c));
}

TEST_CASE("config errors carry the line and the parse code") {
    CHECK(code_of([] { parse_config("scenario = solve-gauss\ngrid.n_r = twelve\n"); }) == ErrorCode::config_parse);
    CHECK(message_of([] { parse_config("scenario = solve-gauss\ngrid.n_r = twelve\n"); }).find("line 2") !=
          std::string::npos);
    CHECK(code_of([] { parse_config("grid.nr = 12\n"); }) == ErrorCode::config_parse);
    CHECK(code_of([] { parse_config("just words\n"); }) == ErrorCode::config_parse);
    CHECK(code_of([] { parse_config("grid.R =\n"); }) == ErrorCode::config_parse);
    CHECK(code_of([] { parse_config("grid.n_r = 12.5\n"); }) == ErrorCode::config_parse);
    CHECK(code_of([] { parse_config("grid.R = nan\n"); }) == ErrorCode::config_parse);
    CHECK(code_of([] { parse_config("base_point.phi.9re = 1\n"); }) == ErrorCode::config_parse);
    CHECK(code_of([] { parse_config("base_point.phi.re = 1\n"); }) == ErrorCode::config_parse);
    CHECK(code_of([] { parse_config("base_point.phi.0x = 1\n"); }) == ErrorCode::config_parse);
    CHECK(code_of([] { parse_config("epsilons = 0.1,,0.05\n"); }) == ErrorCode::config_parse);
    CHECK(code_of([] { load_config("/nonexistent/adsmax.cfg"); }) == ErrorCode::config_parse);

    auto invalid = [](const std::string& text) {
        return code_of([&] { validate_config(parse_config(text)); }) == ErrorCode::config_parse;
    };
    CHECK(invalid("scenario = nope\n"));
    CHECK(invalid("scenario = solve-gauss\ngrid.R = 1\n"));
    CHECK(invalid("scenario = solve-gauss\ngrid.n_theta = 63\n"));
    CHECK(invalid("scenario = solve-gauss\nepsilons = 0.01, 0.02, 0.005\n"));
    CHECK(invalid("scenario = solve-gauss\nepsilons = 0.02, 0.01\n"));
    CHECK(invalid("scenario = solve-gauss\ntolerances.solver_tol = 0\n"));
    CHECK(invalid("scenario = solve-gauss\nbasis.size = 10\n"));
    CHECK(invalid("scenario = convergence\nconvergence.R = 0.8, 1.2, 0.9\n"));
    CHECK_FALSE(invalid("scenario = solve-gauss\n"));
}

TEST_CASE("numbers written with 17 digits read back exactly") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        double re = U(rng) * std::pow(10.0, int(U(rng) * 8)), im = U(rng);
        char a[40], b[40];
        std::snprintf(a, sizeof a, "%.17g", re);
        std::snprintf(b, sizeof b, "%.17g", im);
        RunConfig c;
        set_config_key(c, "base_point.phi.3re", a);
        set_config_key(c, "base_point.phi.3im", b);
        REQUIRE(c.phi.size() == 4);
        CHECK(c.phi[3] == cplx(re, im));
    }
}

TEST_CASE("metric comparisons") {
    CHECK(Metric{"a", 1.0, 1.0, Metric::Cmp::le}.ok());
    CHECK_FALSE(Metric{"a", 1.0 + 1e-15, 1.0, Metric::Cmp::le}.ok());
    CHECK(Metric{"a", 2.0, 1.0, Metric::Cmp::ge}.ok());
    CHECK_FALSE(Metric{"a", std::nan(""), 1.0, Metric::Cmp::le}.ok());
    CHECK_FALSE(Metric{"a", std::nan(""), 0.0, Metric::Cmp::info}.ok());
    CHECK(Metric{"a", -5.0, 0.0, Metric::Cmp::info}.ok());
}

TEST_CASE("solve-gauss at Phi = 0 reports the hyperbolic factor") {
    RunConfig c = parse_config("scenario = solve-gauss\ngrid.n_r = 24\ngrid.n_theta = 48\n");
    RunReport r = run(c);
    CHECK(r.pass);
    CHECK(r.failure.empty());
    REQUIRE(r.metric("residual"));
    CHECK(r.metric("residual")->value < 1e-9);
    std::string text = report_text(r);
    CHECK(text.find("phi_equals_psi: true") != std::string::npos);
    CHECK(text.find("status: pass") != std::string::npos);
    REQUIRE(r.tables.size() == 1);
    CHECK(r.tables[0].rows.size() == 24u * 48u);
    CHECK(table_csv(r.tables[0]).rfind("r,theta,phi,u,K\n", 0) == 0);
}

TEST_CASE("limits and check_tol make a run fail") {
    RunConfig c = parse_config("scenario = solve-gauss\ngrid.n_r = 16\ngrid.n_theta = 32\n"
                               "base_point.phi.0re = 0.1\n");
    CHECK(run(c).pass);
    c.limits["curvature_identity"] = 0.0;
    c.limits["K_min"] = -100.0; // info metrics ignore limits
    RunReport r = run(c);
    CHECK_FALSE(r.pass);
    CHECK(r.failure.empty());
    c.limits.clear();
    c.check_tol = 1e-30;
    CHECK_FALSE(run(c).pass);
}

TEST_CASE("numerical failure yields a partial failing report") {
    RunConfig c = parse_config("scenario = mess-forward\ngrid.n_r = 16\ngrid.n_theta = 32\nbase_point.mu.0re = 1.5\n");
    RunReport r = run(c);
    CHECK_FALSE(r.pass);
    CHECK(r.failure.find("norm-violation") == 0);
    CHECK(report_text(r).find("status: fail") != std::string::npos);
}

TEST_CASE("reports and tables are written deterministically") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "adsmax_runner_test";
    fs::create_directories(dir);
    RunConfig c = parse_config("scenario = mess-roundtrip\ngrid.n_r = 16\ngrid.n_theta = 32\n"
                               "base_point.mu.1re = 0.1\nbase_point.phi.0re = 0.1\n");
    RunReport a = run(c), b = run(c);
    CHECK(a.pass);
    write_report(a, (dir / "a.txt").string());
    write_report(b, (dir / "b.txt").string());
    std::string ca = slurp((dir / "a.txt.recovery.csv").string());
    CHECK(!ca.empty());
    CHECK(ca == slurp((dir / "b.txt.recovery.csv").string()));
    CHECK(slurp((dir / "a.txt").string()) == report_text(a));
    CHECK_FALSE(fs::exists(dir / "a.txt.tmp"));
    fs::remove_all(dir);
}

TEST_CASE("sweep over R") {
    RunConfig c = parse_config("scenario = solve-gauss\ngrid.n_r = 16\ngrid.n_theta = 32\nbase_point.phi.0re = 0.1\n");
    Table t;
    auto runs = sweep(c, "R", {0.8, 0.9}, t);
    REQUIRE(runs.size() == 2);
    REQUIRE(t.rows.size() == 2);
    CHECK(t.columns == std::vector<std::string>{"value", "metric", "ratio"});
    CHECK(t.rows[0][0] == 0.8);
    CHECK(std::isnan(t.rows[0][2]));
    CHECK(t.rows[1][2] == doctest::Approx(t.rows[1][1] / t.rows[0][1]));
    CHECK(code_of([&] { sweep(c, "colour", {1.0}, t); }) == ErrorCode::config_parse);
    CHECK(code_of([&] { sweep(c, "R", {1.5}, t); }) == ErrorCode::config_parse);
}
