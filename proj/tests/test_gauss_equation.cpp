#include "doctest.h"

#include "gauss_equation.hpp"
#include "radial_relaxation.hpp"

#include <cmath>

using namespace adsmax;

namespace {
double interior_max(const RealField& f) {
    const Grid& g = *f.grid;
    double m = -1e300;
    for (int i = 0; i < (g.n_r - 1) * g.n_theta; ++i) m = std::max(m, f[i]);
    return m;
}
double interior_min(const RealField& f) {
    const Grid& g = *f.grid;
    double m = 1e300;
    for (int i = 0; i < (g.n_r - 1) * g.n_theta; ++i) m = std::min(m, f[i]);
    return m;
}
} // namespace

TEST_CASE("zero differential gives the hyperbolic metric") {
    auto g = make_grid(32, 64, 0.9);
    auto cf = solve_gauss(QuadDifferential{{0.0}}, g, 1e-12);
    RealField psi = hyperbolic_log_density(g);
    double d = 0.0;
    for (int i = 0; i < g->size(); ++i) d = std::max(d, std::abs(cf.phi[i] - psi[i]));
    CHECK(d < 1e-9);
    RealField K = curvature(cf);
    CHECK(interior_max(K) < -1.0 + 1e-7);
    CHECK(interior_min(K) > -1.0 - 1e-7);
}

TEST_CASE("constant differential matches the relaxation solver") {
    auto g = make_grid(64, 128, 0.9);
    auto cf = solve_gauss(QuadDifferential{{0.1}}, g, 1e-10);
    CHECK(cf.residual_sup <= 1e-10);
    CHECK(interior_sup(gauss_residual(cf)) <= 1e-10);
    auto oracle = radial_oracle::solve(0.9, 0.01, 400);
    double d = 0.0;
    for (int i = 0; i < g->size(); ++i) d = std::max(d, std::abs(cf.u[i] - oracle(std::abs(g->z(i)))));
    CHECK(d < 1e-6);
    // comparison principle: phi >= psi
    for (double v : oracle.u) CHECK(v >= -1e-14);
    CHECK(interior_min(cf.u) >= 0.0);
}

TEST_CASE("curvature identity and bounds") {
    auto g = make_grid(48, 96, 0.9);
    for (auto Phi : {QuadDifferential{{0.1}}, QuadDifferential{{0.2, cplx(0.0, 0.3), 0.0, -0.4}}}) {
        auto cf = solve_gauss(Phi, g, 1e-10);
        RealField K = curvature(cf);
        RealField gap(g);
        for (int i = 0; i < g->size(); ++i) gap[i] = K[i] + 1.0 - std::norm(Phi(g->z(i))) * std::exp(-2.0 * cf.phi[i]);
        CHECK(interior_sup(gap) < 1e-6);
        CHECK(interior_min(K) > -1.0);
        CHECK(interior_max(K) < 0.0);
        CHECK(interior_min(cf.u) >= 0.0);
    }
}

TEST_CASE("rotating the differential leaves the metric alone") {
    auto g = make_grid(24, 64, 0.9);
    QuadDifferential Phi{{0.1, 0.2, cplx(0.0, 0.1)}};
    auto a = solve_gauss(Phi, g, 1e-11);
    auto b = solve_gauss(Phi.scaled(std::polar(1.0, 0.7)), g, 1e-11);
    CHECK(sup_abs_diff(to_complex(a.phi), to_complex(b.phi)) < 1e-10);
}

TEST_CASE("solution converges under grid refinement") {
    QuadDifferential Phi{{0.1, 0.0, 0.3}};
    const double R = 0.9;
    cplx probe[] = {0.0, 0.3, cplx(0.2, -0.5), cplx(-0.6, 0.4)};
    auto value_at = [&](int nr, int nt, cplx z) {
        auto g = make_grid(nr, nt, R);
        auto cf = solve_gauss(Phi, g, 1e-11);
        ComplexField c = to_complex(cf.u);
        Interpolator I(c);
        return I(z).real();
    };
    for (cplx z : probe) {
        double a = value_at(12, 32, z), b = value_at(24, 64, z), c = value_at(48, 128, z);
        CHECK(std::abs(b - c) < 0.5 * std::abs(a - c) + 1e-12);
        CHECK(std::abs(b - c) < 1e-6);
    }
}

TEST_CASE("invalid inputs") {
    auto g = make_grid(8, 16, 0.9);
    CHECK_THROWS_AS(solve_gauss(QuadDifferential{{0.1}}, g, 0.0), Error);
    CHECK_THROWS_AS(solve_gauss(QuadDifferential{}, g, 1e-8), Error);
    QuadDifferential big;
    big.coeffs.assign(10, 0.1);
    CHECK_THROWS_AS(solve_gauss(big, g, 1e-8), Error);
    GaussOptions tight;
    tight.max_newton = 1;
    try {
        solve_gauss(QuadDifferential{{0.3}}, g, 1e-13, tight);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::newton_divergence);
    }
}
