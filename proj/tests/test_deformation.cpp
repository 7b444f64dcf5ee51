#include "doctest.h"

#include "deformation.hpp"

#include <cmath>

using namespace adsmax;

namespace {

// rescale so that the sup over the grid is s
TangentField with_sup(const TangentField& t, double s) { return t.scaled(s / sup_abs(t.field)); }

struct Base {
    GridPtr g;
    InducedGaussPair pair;
    TangentField nu_f, nu_h;
};

const Base& base() {
    static Base b = [] {
        Base x;
        x.g = make_grid(32, 64, 0.9);
        x.pair = build_pair(solve_gauss(QuadDifferential{{0.1, 0.0, cplx(0.0, 0.05)}}, x.g, 1e-11), 1e-11);
        x.nu_f = with_sup(make_tangent(x.g, {0.2, 0.0, 1.0}), 0.1);
        x.nu_h = with_sup(make_tangent(x.g, {cplx(0.0, 0.3), 0.5}), 0.1);
        return x;
    }();
    return b;
}

const LieReport& find(const std::vector<LieReport>& r, const std::string& name) {
    for (const auto& x : r)
        if (x.quantity == name) return x;
    throw std::runtime_error("missing report " + name);
}

double imag_sup(const ComplexField& f) {
    double m = 0.0;
    for (auto v : f.values) m = std::max(m, std::abs(v.imag()));
    return m;
}

} // namespace

TEST_CASE("Richardson step and observed order on a synthetic ladder") {
    auto g = make_grid(4, 8, 0.9);
    RVec eps{0.02, 0.01, 0.005};
    std::vector<ComplexField> D;
    for (double e : eps) D.push_back(sample(g, [e](cplx z) { return z + 3.0 * e * e * z * z + e * e * e * e; }));
    ComplexField v;
    double order;
    extrapolate(eps, D, v, order);
    // one step removes eps^2; the eps^4 term leaves -eps2^2 eps3^2
    CHECK(sup_abs_diff(v, sample(g, [](cplx z) { return z - 2.5e-9; })) < 1e-15);
    CHECK(order == doctest::Approx(2.0).epsilon(0.01));
}

TEST_CASE("constant family has zero Lie derivatives") {
    const Base& b = base();
    auto r = lie_checks(b.pair, +1, nullptr, nullptr);
    for (const auto& x : r) CHECK(sup_abs(x.fd_value) == 0.0);
    TangentField zero = make_tangent(b.g, {0.0});
    auto z = lie_checks(b.pair, +1, &zero, &zero);
    for (const auto& x : z) CHECK(sup_abs(x.fd_value) < 1e-12);
}

TEST_CASE("closed forms reduce as expected") {
    const Base& b = base();
    const GridPtr& g = b.g;
    ComplexField zero(g), nf = b.nu_f.field, pulled = pull_back(b.nu_h, *b.pair.F_plus);
    const ComplexField& m = b.pair.mu_plus.field();
    CHECK(sup_abs(lie_mu_F_closed(zero, zero, m)) == 0.0);
    CHECK(sup_abs(lie_hopf_closed(zero, zero, m, b.pair.cf.phi)) == 0.0);

    ComplexField d(g);
    for (int i = 0; i < g->size(); ++i) d[i] = pulled[i] - nf[i];
    CHECK(sup_abs_diff(lie_mu_F_closed(nf, pulled, zero), d) < 1e-15);
    ComplexField e(g);
    for (int i = 0; i < g->size(); ++i) e[i] = std::exp(b.pair.cf.phi[i]) * std::conj(d[i]);
    CHECK(sup_abs_diff(lie_hopf_closed(nf, pulled, zero, b.pair.cf.phi), e) < 1e-12);

    // the two expressions for mu_H_dot
    ComplexField a = mu_H_dot_from_lie(nf, lie_mu_F_closed(nf, pulled, m), m);
    CHECK(sup_abs_diff(a, mu_H_dot_closed(pulled, m)) < 1e-10);
    CHECK(sup_abs_diff(mu_H_dot_closed(pulled, zero), pulled) == 0.0);

    // densities: identity map with nu_h = nu_f, and Phi = 0
    CHECK(sup_abs(lie_energy_density_closed(nf, nf, sample(g, [](cplx) { return cplx(0.3); }))) == 0.0);
    CHECK(sup_abs(lie_energy_density_closed(nf, pulled, zero)) == 0.0);
    CHECK(imag_sup(lie_energy_density_closed(nf, pulled, b.pair.Phi().sample(g))) == 0.0);

    ComplexField wrong(make_grid(8, 16, 0.9));
    CHECK_THROWS_AS(lie_mu_F_closed(nf, wrong, m), Error);
}

TEST_CASE("variations along the two sides") {
    const Base& b = base();
    const GridPtr& g = b.g;
    ComplexField a = pull_back(b.nu_h, *b.pair.F_plus), zero(g);
    const RealField& phi = b.pair.cf.phi;
    const ComplexField& m = b.pair.mu_plus.field();
    // equal pullbacks leave Phi fixed
    CHECK(sup_abs(pm_variations(a, a, m, phi).delta_Phi) == 0.0);
    auto one = pm_variations(a, zero, zero, phi);
    ComplexField half(g), halfc(g);
    for (int i = 0; i < g->size(); ++i) {
        half[i] = 0.5 * a[i];
        halfc[i] = 0.5 * std::exp(phi[i]) * std::conj(a[i]);
    }
    CHECK(sup_abs_diff(one.delta_mu, half) < 1e-16);
    CHECK(sup_abs_diff(one.delta_Phi, halfc) < 1e-12);
}

TEST_CASE("energy variations at the origin of the fiber") {
    auto g = make_grid(24, 64, 0.9);
    auto pair = build_pair(solve_gauss(QuadDifferential{{0.0}}, g, 1e-12), 1e-12);
    auto nu = make_tangent(g, {0.3, 0.2});
    CHECK(std::abs(energy_first_variation(nu.field, pair)) == 0.0);
    cplx s = energy_second_variation(nu.field, nu.field, pair);
    CHECK(std::abs(s - 2.0 * wp_inner(nu, nu)) < 1e-9 * std::abs(s));
}

TEST_CASE("finite differences match the closed forms on both sides") {
    const Base& b = base();
    for (int sign : {+1, -1}) {
        auto r = lie_checks(b.pair, sign, &b.nu_f, &b.nu_h);
        CHECK(find(r, "mu_F").rel_error < 1e-3);
        CHECK(find(r, "Phi").rel_error < 2e-3);
        CHECK(find(r, "antihol_density").rel_error < 2e-3);
        CHECK(find(r, "hol_density").rel_error < 2e-3);
        CHECK(find(r, "mu_H_dot").rel_error < 1e-3);
        CHECK(find(r, "mu_H_dot_pulled").rel_error < 1e-3);
        for (const auto& x : r) {
            CHECK(x.rel_error < 5e-3);
            CHECK(x.order_estimate >= 1.5);
            CHECK(x.order_estimate <= 2.5);
        }
        CHECK(imag_sup(find(r, "antihol_density").fd_value) < 1e-10);
        CHECK(imag_sup(find(r, "hol_density").fd_value) < 1e-10);
    }
}

TEST_CASE("target-only and source-only families") {
    const Base& b = base();
    auto h_only = lie_checks(b.pair, +1, nullptr, &b.nu_h);
    CHECK(find(h_only, "mu_F").rel_error < 1e-3);
    auto f_only = lie_checks(b.pair, +1, &b.nu_f, nullptr);
    CHECK(find(f_only, "mu_F").rel_error < 1e-3);
    CHECK(find(f_only, "antihol_density").rel_error < 2e-3);
    // with nu_f = 0 the coefficient of h o F moves like the pulled target data
    CHECK(sup_abs_diff(find(h_only, "mu_H_dot").fd_value, find(h_only, "mu_F").fd_value) < 1e-12);
}

TEST_CASE("Ahlfors relation for the target family") {
    const Base& b = base();
    SolvedLadder h = solve_ladder(beltrami_from_tangent(b.nu_h), {0.02, 0.01, 0.005}, 1e-11);
    LieLadder L = lie_fd(*b.pair.F_plus, nullptr, &h);
    CHECK(sup_abs(L.h_dot_u) > 0.01);
    CHECK(ahlfors_defect(L) < 2e-3);
    // a non-harmonic coefficient breaks it
    auto bump = beltrami_from_function(b.g, [](cplx z) { return 0.1 * std::norm(z) * z; });
    SolvedLadder hb = solve_ladder(bump, {0.02, 0.01, 0.005}, 1e-11);
    CHECK(ahlfors_defect(lie_fd(*b.pair.F_plus, nullptr, &hb)) > 0.05);
}

TEST_CASE("two-sided variations of the Hopf differential and the source") {
    const Base& b = base();
    auto r = pm_checks(b.pair, &b.nu_h, &b.nu_f);
    CHECK(find(r, "delta_Phi").rel_error < 2e-3);
    CHECK(find(r, "delta_mu").rel_error < 2e-3);
    CHECK(find(r, "compat_mu").rel_error < 1e-6);
    CHECK(find(r, "compat_Phi").rel_error < 1e-4);
    for (const auto& x : r) CHECK(x.order_estimate >= 1.5);
    CHECK_THROWS_AS(pm_checks(b.pair, nullptr, nullptr), Error);
}

TEST_CASE("energy variations along the sections") {
    const Base& b = base();
    for (int sign : {+1, -1}) {
        auto c = energy_variation_check(b.pair, sign, b.nu_h, b.nu_f);
        CHECK(std::abs(c.closed_first) > 1e-4);
        CHECK(c.first_rel_error < 5e-3);
        CHECK(c.second.rel_error < 5e-3);
        CHECK(c.second.order_estimate >= 1.5);
    }
}

TEST_CASE("ladder validation") {
    const Base& b = base();
    auto nu = beltrami_from_tangent(b.nu_h);
    CHECK_THROWS_AS(solve_ladder(nu, {0.01, 0.02, 0.005}, 1e-10), Error);
    CHECK_THROWS_AS(solve_ladder(nu, {0.02, 0.01}, 1e-10), Error);
    CHECK_THROWS_AS(solve_ladder(nu, {0.02, 0.0, -0.01}, 1e-10), Error);
    CHECK_THROWS_AS(lie_fd(*b.pair.F_plus, nullptr, nullptr), Error);
}
