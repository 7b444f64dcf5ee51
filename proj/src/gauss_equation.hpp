#pragma once

#include "disc_geometry.hpp"

namespace adsmax {

// Solution of 2 phi_{z zbar} = e^phi - e^{-phi} |Phi|^2 with phi = psi on r = R.
struct ConformalFactor {
    RealField phi;
    RealField u; // phi - psi, kept separately: differencing phi - psi loses eps |psi|
    QuadDifferential Phi;
    double residual_sup = 0.0; // over the rings where the equation is imposed
    int newton_steps = 0;
    int linear_iterations = 0;

    const GridPtr& grid() const { return phi.grid; }
};

struct GaussOptions {
    int max_newton = 40;
    int max_linear = 400;
};

ConformalFactor solve_gauss(const QuadDifferential& Phi, GridPtr grid, double tol, const GaussOptions& opt = {});

// 2 phi_{z zbar} - e^phi + e^{-phi} |Phi|^2 at every node; the outer ring
// carries boundary data, not the equation.
RealField gauss_residual(const RealField& phi, const QuadDifferential& Phi);
RealField gauss_residual(const ConformalFactor& cf); // from the stored correction

// K = -2 phi_{z zbar} e^{-phi}
RealField curvature(const ConformalFactor& cf);

// sup over nodes where the equation holds (all rings but r = R)
double interior_sup(const RealField& f);

} // namespace adsmax
