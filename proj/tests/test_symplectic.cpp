#include "doctest.h"

#include "symplectic.hpp"

#include <cmath>

using namespace adsmax;

namespace {
const cplx I(0.0, 1.0);

InducedGaussPair pair_for(GridPtr g, QuadDifferential Phi) { return build_pair(solve_gauss(Phi, g, 1e-11), 1e-11); }
} // namespace

TEST_CASE("monomial basis is orthonormal") {
    auto g = make_grid(24, 64, 0.9);
    auto b = monomial_basis(g, 5);
    CHECK(b.members.size() == 5);
    CHECK((b.gram - Eigen::MatrixXcd::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-8);
    auto U = random_unitary(5, 3);
    CHECK((U.adjoint() * U - Eigen::MatrixXcd::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((remix(b, U).gram - Eigen::MatrixXcd::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-8);
    CHECK_THROWS_AS(monomial_basis(g, 0), Error);
}

TEST_CASE("Weil-Petersson form") {
    auto g = make_grid(24, 64, 0.9);
    auto b = monomial_basis(g, 3);
    const auto& u = b.members[0];
    CHECK(omega_wp(u, u) == 0.0);
    CHECK(omega_wp(u, u.scaled(I)) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(std::abs(omega_wp(u, b.members[1])) < 1e-8);
    auto v = combine(b.members[1], 0.3, b.members[2], cplx(0.1, 0.4));
    CHECK(omega_wp(u, v) == doctest::Approx(-omega_wp(v, u)));
}

TEST_CASE("canonical form") {
    auto g = make_grid(24, 64, 0.9);
    auto X = sample(g, [](cplx z) { return cplx(0.2, 0.1) + z; });
    auto Y = sample(g, [](cplx z) { return std::conj(z) * 0.5; });
    ComplexField zero(g);
    CotangentTangent t1{zero, X, ""}, t2{Y, zero, ""};
    CHECK(omega_c(t1, t1) == 0.0);
    // direct quadrature of the defining integral
    double direct = 0.0;
    for (int i = 0; i < g->size(); ++i) direct += g->quad_weights[i] * (X[i] * Y[i]).imag();
    CHECK(omega_c(t1, t2) == doctest::Approx(-2.0 * direct).epsilon(1e-12));
    CHECK(omega_c(t2, t1) == -omega_c(t1, t2));
    ComplexField X2(g);
    for (int i = 0; i < g->size(); ++i) X2[i] = 2.0 * X[i];
    CHECK(std::abs(omega_c(CotangentTangent{zero, X2, ""}, t2) - 2.0 * omega_c(t1, t2)) <
          1e-12 * std::abs(omega_c(t1, t2)));
}

TEST_CASE("Mess pullback of the Weil-Petersson form") {
    auto g = make_grid(48, 128, 0.9);
    auto b = monomial_basis(g, 3);
    auto flat = pair_for(g, QuadDifferential{{0.0}});
    auto bent = pair_for(g, QuadDifferential{{0.1}});
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) {
            auto v = b.members[k].scaled(cplx(0.6, 0.8));
            const auto& u = b.members[j];
            for (int s : {+1, -1}) {
                CHECK(std::abs(mess_pullback_wp(s, u, v, flat) - omega_wp(u, v)) < 1e-6);
                CHECK(std::abs(mess_pullback_wp(s, u, v, bent) - omega_wp(u, v)) < 2e-3);
                CHECK(mess_pullback_wp(s, v, u, bent) == -mess_pullback_wp(s, u, v, bent));
            }
        }
}

TEST_CASE("symplectomorphism at the origin and at a bent point") {
    auto g = make_grid(32, 64, 0.9);
    auto b = monomial_basis(g, 5);
    auto flat = verify_symplectomorphism(pair_for(g, QuadDifferential{{0.0}}), b, b, 1e-6);
    CHECK(flat.pass);
    CHECK(flat.frobenius_rel < 1e-6);
    auto p = pair_for(g, QuadDifferential{{0.1}});
    auto r = verify_symplectomorphism(p, b, b, 5e-3);
    CHECK(r.pass);
    CHECK(r.entry_rel < 5e-3);
    // forms are real and antisymmetric, so the matrices are Hermitian
    CHECK((r.omega_c - r.omega_c.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    // cross block: omega_C pairs + and - vectors to zero as the Mess side does
    CHECK(r.omega_c.block(0, 5, 5, 5).cwiseAbs().maxCoeff() < 5e-3 * r.mess_side.cwiseAbs().maxCoeff());
    // the +- blocks carry opposite signs
    CHECK(r.omega_c(0, 0).real() < 0.0);
    CHECK(r.omega_c(5, 5).real() > 0.0);
    // basis independence
    auto m = verify_symplectomorphism(p, remix(b, random_unitary(5, 11)), remix(b, random_unitary(5, 12)), 5e-3);
    CHECK(std::abs(m.frobenius_rel - r.frobenius_rel) < 1e-8);
}

TEST_CASE("energy is a Kahler potential on the sections") {
    auto g = make_grid(32, 64, 0.9);
    auto b = monomial_basis(g, 3);
    auto flat = verify_kahler_potential(pair_for(g, QuadDifferential{{0.0}}), b, 1e-6);
    CHECK(flat.pass);
    CHECK((flat.route_b - 2.0 * Eigen::MatrixXcd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-6);
    auto r = verify_kahler_potential(pair_for(g, QuadDifferential{{0.1, 0.0, 0.05}}), b, 5e-3);
    CHECK(r.pass);
    for (int s = 0; s < 2; ++s) {
        CHECK(r.rel_a_b[s] < 5e-3);
        CHECK(r.rel_target_b[s] < 5e-3);
    }
    CHECK(r.sign_gap == 0.0);
    CHECK(r.hermitian_gap < 1e-14);
}
