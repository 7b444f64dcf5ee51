#pragma once

#include "gauss_equation.hpp"
#include "quasiconformal.hpp"

namespace adsmax {

// phi at any point of the unit disc: the solved field inside the grid and psi
// beyond it, where the boundary condition phi = psi is imposed
double conformal_factor_at(const ConformalFactor& cf, cplx z);
RVec conformal_factor_at(const ConformalFactor& cf, const CVec& pts);

// +-conj(Phi) e^{-phi}; the tail beyond the grid uses phi = psi
BeltramiCoefficient beltrami_of_F(const ConformalFactor& cf, int sign);

struct InducedGaussPair {
    ConformalFactor cf;
    BeltramiCoefficient mu_plus, mu_minus;
    QCMapPtr F_plus, F_minus;

    const GridPtr& grid() const { return cf.grid(); }
    const QuadDifferential& Phi() const { return cf.Phi; }
    const QCMap& F(int sign) const { return sign > 0 ? *F_plus : *F_minus; }
};

// F_+- solved from their coefficients, both fixing 1, -1, -i
InducedGaussPair build_pair(const ConformalFactor& cf, double tol);

// e^{psi o F} F_z conj(F)_z
ComplexField hopf_differential(const QCMap& F);
// e^{psi o F} |F_z|^2 and e^{psi o F} |F_zbar|^2
RealField holomorphic_energy_density(const QCMap& F);
RealField antiholomorphic_energy_density(const QCMap& F);

// sup |F_{z zbar} + (psi_w o F) F_z F_zbar| over sup |(psi_w o F) F_z F_zbar|
double harmonic_residual(const QCMap& F);

// int |Phi|^2 e^{-phi} and int |mu_F|^2 e^phi over the grid disc
double anti_holomorphic_energy(const ConformalFactor& cf);
double total_curvature_integral(const ConformalFactor& cf);

// sqrt(int |a - b|^2 w / int |b|^2 w)
double relative_weighted_l2(const ComplexField& a, const ComplexField& b, const RealField& w);

} // namespace adsmax
