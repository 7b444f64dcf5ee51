#pragma once

#include "disc_geometry.hpp"

namespace adsmax {

// Beltrami coefficient on the unit disc: samples on the grid (|z| <= R) and
// an optional closed-form tail for R < |z| < 1. Without a tail the
// coefficient is taken to vanish outside the grid.
class BeltramiCoefficient {
public:
    using Tail = std::function<cplx(cplx)>;

    BeltramiCoefficient() = default;
    explicit BeltramiCoefficient(ComplexField field, Tail tail = {});

    const ComplexField& field() const { return field_; }
    const GridPtr& grid() const { return field_.grid; }
    const Tail& tail() const { return tail_; }
    double sup_norm() const { return sup_; }
    cplx at(cplx z) const;

private:
    ComplexField field_;
    Tail tail_;
    double sup_ = 0.0;
    std::shared_ptr<const Interpolator> interp_;
};

BeltramiCoefficient beltrami_from_function(GridPtr g, const std::function<cplx(cplx)>& f);
BeltramiCoefficient beltrami_from_tangent(const TangentField& t);

enum class Normalization {
    fix_three_points, // self-map of the disc fixing 1, -1, -i
    series_at_origin, // w(0) = 0, w_z(0) = 1, w_zz(0) = 0, conformal outside the disc
};

// Mobius transformation (a z + b) / (c z + d)
struct Mobius {
    cplx a = 1.0, b = 0.0, c = 0.0, d = 1.0;
    cplx operator()(cplx z) const { return (a * z + b) / (c * z + d); }
    cplx derivative(cplx z) const {
        cplx den = c * z + d;
        return (a * d - b * c) / (den * den);
    }
    Mobius inverse() const { return {d, -b, -c, a}; }
    Mobius after(const Mobius& inner) const; // this o inner
    // sends p[k] to q[k], k = 0, 1, 2
    static Mobius three_point(const cplx p[3], const cplx q[3]);
};

// A solved quasiconformal map with values and derivatives on the grid and
// on the outer ring R <= |z| <= 1.
class QCMap {
public:
    const BeltramiCoefficient& mu() const { return mu_; }
    Normalization normalization() const { return norm_; }
    const GridPtr& grid() const { return values_.grid; }

    const ComplexField& values() const { return values_; }
    const ComplexField& dz() const { return dz_; }
    const ComplexField& dzbar() const { return dzbar_; }
    const ComplexField& ring_values() const { return ring_values_; }
    const ComplexField& ring_dz() const { return ring_dz_; }
    const ComplexField& ring_dzbar() const { return ring_dzbar_; }

    // values on theta_nodes at r = R, and on the unit circle
    CVec boundary_trace() const;
    CVec circle_trace() const;

    int iterations() const { return iterations_; }
    double residual() const { return residual_; }

    // w, w_z, w_zbar at any |z| <= 1 by spectral interpolation
    void eval(cplx z, cplx& w, cplx& wz, cplx& wzbar) const;
    cplx operator()(cplx z) const;
    // z with w(z) = y by Newton iteration
    cplx inverse(cplx y) const;
    // |z| >= 1, series-normalized maps only
    cplx exterior(cplx z) const;
    // w = post(z + sum_k laurent[k] z^{-(k+1)}) for |z| >= 1
    const CVec& laurent() const { return laurent_; }

    friend QCMap solve_beltrami(const BeltramiCoefficient& mu, Normalization norm, double tol, int max_iter);

private:
    BeltramiCoefficient mu_;
    Normalization norm_ = Normalization::fix_three_points;
    ComplexField values_, dz_, dzbar_, ring_values_, ring_dz_, ring_dzbar_;
    CVec laurent_; // C h = sum_k laurent_[k] z^{-(k+1)} outside the disc
    Mobius post_;
    int iterations_ = 0;
    double residual_ = 0.0;
    std::shared_ptr<const Interpolator> disc_interp_, ring_interp_;

    void finish();
};

using QCMapPtr = std::shared_ptr<const QCMap>;

constexpr double kSolverNormLimit = 0.5;

QCMap solve_beltrami(const BeltramiCoefficient& mu, Normalization norm, double tol, int max_iter = 2000);

// mu(z) = conj(mu(1/conj z)) z^2 / conj(z)^2 for |z| > 1
CVec reflect_extension(const BeltramiCoefficient& mu, const CVec& points);
ComplexField reflect_extension(const BeltramiCoefficient& mu, GridPtr exterior);

// Coefficient of w_nu o w_mu^{-1}
BeltramiCoefficient group_law(const BeltramiCoefficient& nu, const BeltramiCoefficient& mu, const QCMapPtr& w_mu);
BeltramiCoefficient group_law(const BeltramiCoefficient& nu, const BeltramiCoefficient& mu, double tol);

// Coefficient f_zbar / f_z measured from samples by spectral differentiation
ComplexField measured_coefficient(const ComplexField& values);

// Samples of outer(inner^{-1}(y)) at the grid nodes of outer
ComplexField compose_with_inverse(const QCMap& outer, const QCMap& inner);

// (nu / (1 - |mu|^2) * w_z / conj(w_z)) o w^{-1}
ComplexField right_translation_pullback(const TangentField& nu, const QCMap& w_mu);
ComplexField right_translation_pullback(const TangentField& nu, const BeltramiCoefficient& mu, double tol);

// S(f) = (f_zz / f_z)_z - (f_zz / f_z)^2 / 2
ComplexField schwarzian(const ComplexField& f);

// S(w^mu) on an exterior annulus, w^mu series-normalized. Derivatives come
// from the exterior Laurent series, so the output is holomorphic by
// construction up to roundoff.
ComplexField bers_embedding(const BeltramiCoefficient& mu, GridPtr exterior, double tol);

} // namespace adsmax
