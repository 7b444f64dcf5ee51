#include "doctest.h"

#include "cauchy_transform.hpp"

#include <cmath>

using namespace adsmax;

namespace {

struct Pieces {
    ComplexField cd, cr, td, tr;
    CVec outer;
};

Pieces run(const ExtendedDisc& e, const std::function<cplx(cplx)>& h) {
    Pieces p;
    e.apply(sample(e.disc(), h), sample(e.ring(), h), p.cd, p.cr, p.td, p.tr, &p.outer);
    return p;
}

} // namespace

TEST_CASE("Cauchy transform of polynomial densities on the unit disc") {
    auto g = make_grid(24, 32, 0.9);
    ExtendedDisc e(g, 16);
    // h = 1: C h = conj(z), T h = 0, outside C h = 1/z
    auto p = run(e, [](cplx) { return cplx(1.0); });
    CHECK(sup_abs_diff(p.cd, sample(g, [](cplx z) { return std::conj(z); })) < 1e-12);
    CHECK(sup_abs_diff(p.cr, sample(e.ring(), [](cplx z) { return std::conj(z); })) < 1e-12);
    CHECK(sup_abs(p.td) < 1e-12);
    CHECK(std::abs(p.outer[0] - 1.0) < 1e-12);
    // h = z: C h = |z|^2 - 1, T h = conj(z)
    p = run(e, [](cplx z) { return z; });
    CHECK(sup_abs_diff(p.cd, sample(g, [](cplx z) { return cplx(std::norm(z) - 1.0); })) < 1e-12);
    CHECK(sup_abs_diff(p.td, sample(g, [](cplx z) { return std::conj(z); })) < 1e-12);
    // h = conj(z)^3: C h = conj(z)^4 / 4, exterior 1/(4 z^4)
    p = run(e, [](cplx z) { return std::pow(std::conj(z), 3); });
    CHECK(sup_abs_diff(p.cr, sample(e.ring(), [](cplx z) { return std::pow(std::conj(z), 4) / 4.0; })) < 1e-12);
    CHECK(std::abs(p.outer[3] - 0.25) < 1e-12);
}

TEST_CASE("Beurling transform matches the derivative of the Cauchy transform") {
    auto g = make_grid(32, 64, 0.9);
    ExtendedDisc e(g, 16);
    auto h = [](cplx z) { return (1.0 - std::norm(z)) * (1.0 - std::norm(z)) * std::exp(std::conj(z)) * 0.3; };
    auto p = run(e, h);
    auto dc = d_z(p.cd);
    CHECK(sup_abs_diff(dc, p.td) < 1e-8);
    auto dbc = d_zbar(p.cd);
    CHECK(sup_abs_diff(dbc, sample(g, h)) < 1e-8);
    // independent brute-force quadrature at one interior point
    cplx z0(0.31, -0.22);
    RVec xs, ws;
    gauss_legendre(400, 0.0, 1.0, xs, ws);
    cplx acc = 0.0;
    const int nth = 400;
    for (size_t i = 0; i < xs.size(); ++i)
        for (int k = 0; k < nth; ++k) {
            // offset the angular nodes so no sample hits z0
            cplx s = std::polar(xs[i], 2.0 * M_PI * (k + 0.5) / nth);
            acc += ws[i] * xs[i] * (2.0 * M_PI / nth) * (h(s) - h(z0)) / (z0 - s);
        }
    // the subtracted constant contributes h(z0) * conj(z0)
    acc = acc / M_PI + h(z0) * std::conj(z0);
    Interpolator I(p.cd);
    CHECK(std::abs(I(z0) - acc) < 1e-4);
}
