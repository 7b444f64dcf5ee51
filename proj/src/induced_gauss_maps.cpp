#include "induced_gauss_maps.hpp"

#include <cmath>

namespace adsmax {

namespace {

double log_density_at(cplx z) { return std::log(hyperbolic_density_at(z)); }

// d psi / dw for e^psi = 4 / (1 - |w|^2)^2
cplx psi_w(cplx w) { return 2.0 * std::conj(w) / (1.0 - std::norm(w)); }

} // namespace

RVec conformal_factor_at(const ConformalFactor& cf, const CVec& pts) {
    const Grid& g = *cf.grid();
    Interpolator I(to_complex(cf.u));
    RVec out(pts.size());
    for (size_t k = 0; k < pts.size(); ++k) {
        double r = std::abs(pts[k]);
        if (r >= 1.0) throw Error(ErrorCode::invalid_parameter, "conformal factor requested outside the disc");
        out[k] = log_density_at(pts[k]) + (r > g.R ? 0.0 : I(pts[k]).real());
    }
    return out;
}

double conformal_factor_at(const ConformalFactor& cf, cplx z) { return conformal_factor_at(cf, CVec{z})[0]; }

BeltramiCoefficient beltrami_of_F(const ConformalFactor& cf, int sign) {
    const Grid& g = *cf.grid();
    const double s = sign > 0 ? 1.0 : -1.0;
    ComplexField f(cf.grid());
    for (int i = 0; i < g.size(); ++i) f[i] = s * std::conj(cf.Phi(g.z(i))) * std::exp(-cf.phi[i]);
    QuadDifferential Phi = cf.Phi;
    auto tail = [Phi, s](cplx z) { return s * std::conj(Phi(z)) / hyperbolic_density_at(z); };
    return BeltramiCoefficient(std::move(f), tail);
}

InducedGaussPair build_pair(const ConformalFactor& cf, double tol) {
    InducedGaussPair p;
    p.cf = cf;
    p.mu_plus = beltrami_of_F(cf, +1);
    p.mu_minus = beltrami_of_F(cf, -1);
    p.F_plus = std::make_shared<const QCMap>(solve_beltrami(p.mu_plus, Normalization::fix_three_points, tol));
    p.F_minus = std::make_shared<const QCMap>(solve_beltrami(p.mu_minus, Normalization::fix_three_points, tol));
    return p;
}

ComplexField hopf_differential(const QCMap& F) {
    ComplexField h(F.grid());
    for (int i = 0; i < h.size(); ++i)
        h[i] = hyperbolic_density_at(F.values()[i]) * F.dz()[i] * std::conj(F.dzbar()[i]);
    return h;
}

RealField holomorphic_energy_density(const QCMap& F) {
    RealField e(F.grid());
    for (int i = 0; i < e.size(); ++i) e[i] = hyperbolic_density_at(F.values()[i]) * std::norm(F.dz()[i]);
    return e;
}

RealField antiholomorphic_energy_density(const QCMap& F) {
    RealField e(F.grid());
    for (int i = 0; i < e.size(); ++i) e[i] = hyperbolic_density_at(F.values()[i]) * std::norm(F.dzbar()[i]);
    return e;
}

double harmonic_residual(const QCMap& F) {
    ComplexField fzz = d_z(F.dzbar());
    double num = 0.0, den = 0.0;
    for (int i = 0; i < fzz.size(); ++i) {
        cplx t = psi_w(F.values()[i]) * F.dz()[i] * F.dzbar()[i];
        num = std::max(num, std::abs(fzz[i] + t));
        den = std::max(den, std::abs(t));
    }
    return den > 0.0 ? num / den : num;
}

double anti_holomorphic_energy(const ConformalFactor& cf) {
    const Grid& g = *cf.grid();
    RealField d(cf.grid());
    for (int i = 0; i < g.size(); ++i) d[i] = std::norm(cf.Phi(g.z(i))) * std::exp(-cf.phi[i]);
    return integrate(d);
}

double total_curvature_integral(const ConformalFactor& cf) {
    const Grid& g = *cf.grid();
    RealField d(cf.grid());
    for (int i = 0; i < g.size(); ++i) {
        double m2 = std::norm(cf.Phi(g.z(i))) * std::exp(-2.0 * cf.phi[i]);
        d[i] = m2 * std::exp(cf.phi[i]);
    }
    return integrate(d);
}

double relative_weighted_l2(const ComplexField& a, const ComplexField& b, const RealField& w) {
    check_same_grid(a.grid, b.grid);
    check_same_grid(a.grid, w.grid);
    RealField num(a.grid), den(a.grid);
    for (int i = 0; i < a.size(); ++i) {
        num[i] = std::norm(a[i] - b[i]) * w[i];
        den[i] = std::norm(b[i]) * w[i];
    }
    double d = integrate(den);
    return d > 0.0 ? std::sqrt(integrate(num) / d) : std::sqrt(integrate(num));
}

} // namespace adsmax
