#include "mess_map.hpp"

#include <cmath>

namespace adsmax {

namespace {
constexpr double kPi = 3.14159265358979323846;

RVec unwrapped_angles(const CVec& pts, const RVec& theta) {
    RVec out(pts.size());
    for (size_t j = 0; j < pts.size(); ++j) {
        double a = std::arg(pts[j]);
        // nearest branch to the source angle
        out[j] = a + 2.0 * kPi * std::round((theta[j] - a) / (2.0 * kPi));
    }
    return out;
}

// (a + s b) / (1 + s conj(a) b)
cplx compose(cplx a, cplx b, double s) { return (a + s * b) / (1.0 + s * std::conj(a) * b); }

} // namespace

double wp_norm_squared(const BeltramiCoefficient& mu) {
    const GridPtr& g = mu.grid();
    RealField d(g);
    for (int i = 0; i < g->size(); ++i) d[i] = std::norm(mu.field()[i]) * hyperbolic_density_at(g->z(i));
    return integrate(d);
}

double a2_norm_squared(const QuadDifferential& Phi, const GridPtr& g) {
    RealField d(g);
    for (int i = 0; i < g->size(); ++i) d[i] = std::norm(Phi(g->z(i))) / hyperbolic_density_at(g->z(i));
    return integrate(d);
}

ComplexField pull_back_by_chart(const InducedGaussPair& pair, const QCMap& chart) {
    check_same_grid(pair.grid(), chart.grid());
    const ComplexField& z = chart.values();
    RVec phi = conformal_factor_at(pair.cf, z.values);
    ComplexField out(chart.grid());
    for (int i = 0; i < out.size(); ++i) {
        cplx mu = std::conj(pair.Phi()(z[i])) * std::exp(-phi[i]);
        cplx zw = chart.dz()[i];
        out[i] = mu * std::conj(zw) / zw;
    }
    return out;
}

MessImage mess_forward(const CotangentPoint& p, double tol) {
    const GridPtr& g = p.mu_base.grid();
    MessImage m;
    m.chart = std::make_shared<const QCMap>(solve_beltrami(p.mu_base, Normalization::fix_three_points, tol));
    m.pair = build_pair(solve_gauss(p.Phi, g, tol), tol);
    m.pulled_plus = pull_back_by_chart(m.pair, *m.chart);

    ComplexField tp(g), tm(g);
    for (int i = 0; i < g->size(); ++i) {
        cplx a = p.mu_base.field()[i], b = m.pulled_plus[i];
        tp[i] = compose(a, b, +1.0);
        tm[i] = compose(a, b, -1.0);
    }
    // beyond the grid phi = psi, so mu_{F+} has a closed form there
    auto tail = [mu = p.mu_base, chart = m.chart, Phi = p.Phi](cplx w, double s) {
        cplx z, zw, zwb;
        chart->eval(w, z, zw, zwb);
        cplx b = std::conj(Phi(z)) / hyperbolic_density_at(z) * std::conj(zw) / zw;
        return compose(mu.at(w), b, s);
    };
    m.mu_plus_target = BeltramiCoefficient(tp, [tail](cplx w) { return tail(w, +1.0); });
    m.mu_minus_target = BeltramiCoefficient(tm, [tail](cplx w) { return tail(w, -1.0); });

    CVec zb = m.chart->boundary_trace();
    CVec up(zb.size()), um(zb.size());
    for (size_t j = 0; j < zb.size(); ++j) {
        up[j] = (*m.pair.F_plus)(zb[j]);
        um[j] = (*m.pair.F_minus)(zb[j]);
    }
    m.trace_plus = unwrapped_angles(up, g->theta_nodes);
    m.trace_minus = unwrapped_angles(um, g->theta_nodes);
    return m;
}

PointwiseInverse mess_pointwise_invert(const ComplexField& A, const ComplexField& B, double tol) {
    check_same_grid(A.grid, B.grid);
    if (!(tol > 0.0)) throw Error(ErrorCode::invalid_parameter, "mess_pointwise_invert: tolerance must be positive");
    PointwiseInverse out;
    out.a = ComplexField(A.grid);
    out.b = ComplexField(A.grid);
    for (int i = 0; i < A.size(); ++i) {
        const cplx Ai = A[i], Bi = B[i];
        if (!(std::abs(Ai) < 1.0 && std::abs(Bi) < 1.0))
            throw Error(ErrorCode::norm_violation, "mess_pointwise_invert: targets must satisfy |A|, |B| < 1", i);
        auto residual = [&](cplx a, cplx b, cplx& g1, cplx& g2) {
            g1 = (a + b) - Ai * (1.0 + std::conj(a) * b);
            g2 = (a - b) - Bi * (1.0 - std::conj(a) * b);
            return std::max(std::abs(g1), std::abs(g2));
        };
        auto newton = [&](cplx a, cplx b, cplx& ra, cplx& rb) {
            for (int it = 0; it < 50; ++it) {
                cplx g1, g2;
                double res = residual(a, b, g1, g2);
                if (res <= tol) {
                    ra = a;
                    rb = b;
                    return true;
                }
                // Wirtinger derivatives; neither equation depends on conj(b)
                cplx g1a = 1.0, g1ac = -Ai * b, g1b = 1.0 - Ai * std::conj(a);
                cplx g2a = 1.0, g2ac = Bi * b, g2b = -1.0 + Bi * std::conj(a);
                cplx cols[2][4] = {{g1a + g1ac, cplx(0, 1) * (g1a - g1ac), g1b, cplx(0, 1) * g1b},
                                   {g2a + g2ac, cplx(0, 1) * (g2a - g2ac), g2b, cplx(0, 1) * g2b}};
                Eigen::Matrix4d J;
                Eigen::Vector4d rhs(-g1.real(), -g1.imag(), -g2.real(), -g2.imag());
                for (int c = 0; c < 4; ++c) {
                    J(0, c) = cols[0][c].real();
                    J(1, c) = cols[0][c].imag();
                    J(2, c) = cols[1][c].real();
                    J(3, c) = cols[1][c].imag();
                }
                Eigen::Vector4d d = J.fullPivLu().solve(rhs);
                if (!d.allFinite()) return false;
                a += cplx(d[0], d[1]);
                b += cplx(d[2], d[3]);
            }
            return false;
        };
        const cplx seeds[][2] = {{0.5 * (Ai + Bi), 0.5 * (Ai - Bi)}, {0.0, 0.0}, {Ai, 0.0}, {0.0, Ai}, {Bi, 0.0}, {0.0, -Bi}};
        bool found = false;
        cplx fa = 0.0, fb = 0.0;
        for (const auto& s : seeds) {
            cplx a, b;
            if (!newton(s[0], s[1], a, b)) continue;
            if (!(std::abs(a) < 1.0 && std::abs(b) < 1.0)) continue;
            if (found && (std::abs(a - fa) > 1e3 * tol || std::abs(b - fb) > 1e3 * tol))
                throw Error(ErrorCode::non_unique_candidate, "mess_pointwise_invert: two admissible solutions", i);
            if (!found) {
                fa = a;
                fb = b;
                found = true;
            }
        }
        if (!found) throw Error(ErrorCode::newton_divergence, "mess_pointwise_invert: Newton failed at a node", i);
        cplx g1, g2;
        out.max_residual = std::max(out.max_residual, residual(fa, fb, g1, g2));
        out.a[i] = fa;
        out.b[i] = fb;
    }
    return out;
}

CotangentPoint section_point(const QuadDifferential& Phi, GridPtr g, int sign, double tol) {
    const double s = sign > 0 ? 1.0 : -1.0;
    auto pair = build_pair(solve_gauss(Phi, g, tol), tol);
    BeltramiCoefficient mu(ComplexField(g), {});
    for (int it = 0; it < 100; ++it) {
        auto chart = std::make_shared<const QCMap>(solve_beltrami(mu, Normalization::fix_three_points, tol));
        ComplexField next = pull_back_by_chart(pair, *chart);
        for (auto& v : next.values) v *= s;
        double change = sup_abs_diff(next, mu.field());
        auto tail = [chart, Phi, s](cplx w) {
            cplx z, zw, zwb;
            chart->eval(w, z, zw, zwb);
            return s * std::conj(Phi(z)) / hyperbolic_density_at(z) * std::conj(zw) / zw;
        };
        mu = BeltramiCoefficient(next, tail);
        if (change <= tol) return CotangentPoint{mu, Phi};
    }
    throw Error(ErrorCode::no_convergence, "section_point: fixed-point iteration did not settle");
}

} // namespace adsmax
