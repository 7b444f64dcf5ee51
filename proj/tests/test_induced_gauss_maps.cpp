#include "doctest.h"

#include "induced_gauss_maps.hpp"

#include <cmath>

using namespace adsmax;

namespace {
ComplexField negated(const ComplexField& f) {
    ComplexField out(f.grid);
    for (int i = 0; i < f.size(); ++i) out[i] = -f[i];
    return out;
}
RealField inverse_density(const ConformalFactor& cf) {
    RealField w(cf.grid());
    for (int i = 0; i < w.size(); ++i) w[i] = std::exp(-cf.phi[i]);
    return w;
}
} // namespace

TEST_CASE("zero differential gives identity Gauss maps") {
    auto g = make_grid(16, 32, 0.9);
    auto cf = solve_gauss(QuadDifferential{{0.0}}, g, 1e-12);
    auto mu = beltrami_of_F(cf, +1);
    CHECK(mu.sup_norm() == 0.0);
    auto p = build_pair(cf, 1e-12);
    auto id = sample(g, [](cplx z) { return z; });
    CHECK(sup_abs_diff(p.F_plus->values(), id) < 1e-12);
    CHECK(sup_abs_diff(p.F_minus->values(), id) < 1e-12);
    CHECK(sup_abs(hopf_differential(*p.F_plus)) < 1e-12);
    CHECK(anti_holomorphic_energy(cf) == 0.0);
    CHECK(total_curvature_integral(cf) == 0.0);
}

TEST_CASE("coefficients of the Gauss maps") {
    auto g = make_grid(32, 64, 0.9);
    QuadDifferential Phi{{0.1, cplx(0.0, 0.2), 0.0, 0.15}};
    auto cf = solve_gauss(Phi, g, 1e-11);
    auto mp = beltrami_of_F(cf, +1), mm = beltrami_of_F(cf, -1);
    RealField K = curvature(cf);
    double sign_gap = 0.0, formula = 0.0, kappa = 0.0;
    for (int i = 0; i < g->size(); ++i) {
        sign_gap = std::max(sign_gap, std::abs(mp.field()[i] + mm.field()[i]));
        formula = std::max(formula, std::abs(mp.field()[i] - std::conj(Phi(g->z(i))) * std::exp(-cf.phi[i])));
        if (i < (g->n_r - 1) * g->n_theta) kappa = std::max(kappa, std::abs(std::abs(mp.field()[i]) - std::sqrt(K[i] + 1.0)));
    }
    CHECK(sign_gap == 0.0);
    CHECK(formula < 1e-12);
    CHECK(kappa < 1e-6);
    CHECK(mp.sup_norm() < 1.0);
    // tail continues with phi = psi
    cplx z = std::polar(0.95, 0.4);
    CHECK(std::abs(mp.at(z) - std::conj(Phi(z)) / hyperbolic_density_at(z)) < 1e-15);
    CHECK(conformal_factor_at(cf, z) == doctest::Approx(std::log(hyperbolic_density_at(z))));
}

TEST_CASE("Hopf differentials, harmonicity and energy density") {
    auto g = make_grid(64, 128, 0.9);
    QuadDifferential Phi{{0.1}};
    auto cf = solve_gauss(Phi, g, 1e-10);
    auto p = build_pair(cf, 1e-11);
    ComplexField hp = hopf_differential(*p.F_plus), hm = hopf_differential(*p.F_minus);
    RealField w = inverse_density(cf);
    CHECK(relative_weighted_l2(hp, Phi.sample(g), w) < 1e-3);
    CHECK(relative_weighted_l2(negated(hm), Phi.sample(g), w) < 1e-3);
    CHECK(relative_weighted_l2(hp, negated(hm), w) < 2e-3);
    CHECK(sup_abs(d_zbar(hp)) < 1e-3);
    CHECK(harmonic_residual(*p.F_plus) < 1e-4);
    CHECK(harmonic_residual(*p.F_minus) < 1e-4);
    RealField e = holomorphic_energy_density(*p.F_plus);
    double rel = 0.0;
    for (int i = 0; i < g->size(); ++i) rel = std::max(rel, std::abs(e[i] * std::exp(-cf.phi[i]) - 1.0));
    CHECK(rel < 2e-3);
}

TEST_CASE("anti-holomorphic energy") {
    QuadDifferential Phi{{0.1}};
    double E[3];
    double Rs[3] = {0.8, 0.9, 0.95};
    for (int k = 0; k < 3; ++k) {
        auto g = make_grid(48, 64, Rs[k]);
        auto cf = solve_gauss(Phi, g, 1e-10);
        E[k] = anti_holomorphic_energy(cf);
        CHECK(E[k] > 0.0);
        CHECK(std::abs(E[k] - total_curvature_integral(cf)) < 1e-12);
        // integrand identity |Phi|^2 e^{-phi} = e^phi |mu_F|^2
        auto mu = beltrami_of_F(cf, +1);
        double gap = 0.0;
        for (int i = 0; i < g->size(); ++i)
            gap = std::max(gap, std::abs(std::norm(Phi(g->z(i))) * std::exp(-cf.phi[i]) -
                                         std::exp(cf.phi[i]) * std::norm(mu.field()[i])));
        CHECK(gap < 1e-10);
    }
    CHECK(std::abs(E[2] - E[1]) <= 0.5 * std::abs(E[1] - E[0]));
    // only |Phi| enters
    auto g = make_grid(24, 64, 0.9);
    QuadDifferential Q{{0.1, 0.2, cplx(0.0, -0.1)}};
    double a = anti_holomorphic_energy(solve_gauss(Q, g, 1e-11));
    double b = anti_holomorphic_energy(solve_gauss(Q.scaled(std::polar(1.0, 2.1)), g, 1e-11));
    CHECK(std::abs(a - b) < 1e-8);
}

TEST_CASE("large differential is outside the solver regime") {
    auto g = make_grid(16, 32, 0.9);
    auto cf = solve_gauss(QuadDifferential{{2.5}}, g, 1e-10);
    CHECK_THROWS_AS(build_pair(cf, 1e-10), Error);
}
