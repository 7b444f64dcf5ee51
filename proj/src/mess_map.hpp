#pragma once

#include "induced_gauss_maps.hpp"

namespace adsmax {

// (mu, Phi): mu is the coefficient of the chart map z = w_mu, Phi a
// holomorphic quadratic differential in the z chart on the same grid.
struct CotangentPoint {
    BeltramiCoefficient mu_base;
    QuadDifferential Phi;
};

// int |mu|^2 e^psi and int |Phi|^2 e^{-psi} over the grid disc
double wp_norm_squared(const BeltramiCoefficient& mu);
double a2_norm_squared(const QuadDifferential& Phi, const GridPtr& g);

struct MessImage {
    BeltramiCoefficient mu_plus_target;  // coefficient of z_+ = F_+ o z
    BeltramiCoefficient mu_minus_target; // coefficient of z_- = F_- o z
    RVec trace_plus, trace_minus;        // arg z_+-(R e^{i theta_j}), unwrapped

    QCMapPtr chart;             // z = w_mu
    InducedGaussPair pair;      // F_+- in the z chart
    ComplexField pulled_plus;   // z^*(mu_{F+}) on the w grid
};

MessImage mess_forward(const CotangentPoint& p, double tol);

// z^*(mu_{F+}) = mu_{F+}(z(w)) conj(z_w) / z_w at the grid nodes
ComplexField pull_back_by_chart(const InducedGaussPair& pair, const QCMap& chart);

// Pointwise solution of A = (a + b) / (1 + conj(a) b), B = (a - b) / (1 - conj(a) b)
// with |a|, |b| < 1.
struct PointwiseInverse {
    ComplexField a, b;
    double max_residual = 0.0;
};
PointwiseInverse mess_pointwise_invert(const ComplexField& A, const ComplexField& B, double tol);

// A point of the section where z_- (sign +1) or z_+ (sign -1) is the identity:
// mu_z = sign z^*(mu_{F+}), found by fixed-point iteration on the chart.
CotangentPoint section_point(const QuadDifferential& Phi, GridPtr g, int sign, double tol);

} // namespace adsmax
