#pragma once

#include "disc_geometry.hpp"

namespace adsmax {

// The closed unit disc split into the user grid (|z| <= R) and an outer
// ring R <= |z| <= 1 on its own Chebyshev grid. The Cauchy transform
//   (C h)(z) = (1/pi) int_D h(s) / (z - s) dA(s)
// is applied mode by mode as a radial Volterra integral, swept node to node
// so that every weight stays below one.
class ExtendedDisc {
public:
    ExtendedDisc(GridPtr disc, int n_ring);

    const GridPtr& disc() const { return disc_; }
    const GridPtr& ring() const { return ring_; }

    // h given on both pieces; returns C h and T h = d_z C h on both pieces.
    // `outer` receives (C h)_n(1) for n = -1, -2, ..., i.e. the Laurent
    // coefficients of C h outside the unit disc (index k for z^{-(k+1)}).
    void apply(const ComplexField& h_disc, const ComplexField& h_ring, ComplexField& c_disc, ComplexField& c_ring,
               ComplexField& t_disc, ComplexField& t_ring, CVec* outer = nullptr) const;

private:
    struct Interval {
        double lo, hi;
        bool in_disc;
        int q_begin, q_end;
    };

    GridPtr disc_, ring_;
    RVec radii_; // disc nodes then ring nodes without the repeated R
    std::vector<Interval> intervals_;
    RVec qs_, qw_, ln_lo_, ln_hi_;
    Eigen::MatrixXd basis_disc_[2]; // quadrature points x disc radial nodes
    Eigen::MatrixXd basis_ring_;
};

// Shared, cached instance for a disc grid.
std::shared_ptr<const ExtendedDisc> extended_disc(const GridPtr& disc);

} // namespace adsmax
