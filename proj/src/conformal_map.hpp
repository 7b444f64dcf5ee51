#pragma once

#include "disc_geometry.hpp"

namespace adsmax {

// Conformal map f from the unit disc onto the interior of a nearly circular
// Jordan curve, with f(0) = 0 and f'(0) > 0, kept as Taylor coefficients.
// Built by Theodorsen's iteration, which needs the curve star-shaped about 0.
class DiscRiemannMap {
public:
    // curve(s, value, derivative) for s in [0, 2pi)
    using Curve = std::function<void(double, cplx&, cplx&)>;

    static DiscRiemannMap from_curve(const Curve& curve, int samples, double tol, int max_iter = 200);

    cplx operator()(cplx zeta) const;
    cplx derivative(cplx zeta) const;
    // zeta with f(zeta) = w; dinv receives the derivative of the inverse map at w
    cplx inverse(cplx w, cplx* dinv = nullptr) const;
    const CVec& coeffs() const { return coeffs_; }
    int iterations() const { return iterations_; }

private:
    CVec coeffs_;
    int iterations_ = 0;
};

} // namespace adsmax
