#include "quasiconformal.hpp"

#include "cauchy_transform.hpp"
#include "conformal_map.hpp"

#include <cmath>

namespace adsmax {

namespace {
constexpr double kPi = 3.14159265358979323846;

bool inside_grid(const Grid& g, double r) { return r <= g.R * (1.0 + 1e-13); }

// values on the unit circle are only unit modulus to roundoff, so Newton
// steps may land a hair outside; the ring interpolant extends smoothly there
constexpr double kCircleSlack = 1e-8;
} // namespace

BeltramiCoefficient::BeltramiCoefficient(ComplexField field, Tail tail)
    : field_(std::move(field)), tail_(std::move(tail)) {
    for (const auto& v : field_.values) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw Error(ErrorCode::invalid_parameter, "Beltrami coefficient has non-finite entries");
        sup_ = std::max(sup_, std::abs(v));
    }
    if (sup_ >= 1.0) throw Error(ErrorCode::norm_violation, "Beltrami coefficient must satisfy sup|mu| < 1");
    interp_ = std::make_shared<const Interpolator>(field_);
}

cplx BeltramiCoefficient::at(cplx z) const {
    double r = std::abs(z);
    if (inside_grid(*field_.grid, r)) return (*interp_)(z);
    if (r < 1.0 && tail_) return tail_(z);
    return 0.0;
}

BeltramiCoefficient beltrami_from_function(GridPtr g, const std::function<cplx(cplx)>& f) {
    return BeltramiCoefficient(sample(g, f), f);
}

BeltramiCoefficient beltrami_from_tangent(const TangentField& t) {
    TangentField copy = t;
    return BeltramiCoefficient(t.field, [copy](cplx z) { return copy.at(z); });
}

Mobius Mobius::after(const Mobius& in) const {
    return {a * in.a + b * in.c, a * in.b + b * in.d, c * in.a + d * in.c, c * in.b + d * in.d};
}

Mobius Mobius::three_point(const cplx p[3], const cplx q[3]) {
    // cross-ratio maps sending the triple to (0, 1, infinity)
    auto to_std = [](const cplx s[3]) {
        Mobius m;
        m.a = s[1] - s[2];
        m.b = -s[0] * (s[1] - s[2]);
        m.c = s[1] - s[0];
        m.d = -s[2] * (s[1] - s[0]);
        return m;
    };
    Mobius m = to_std(q).inverse().after(to_std(p));
    // scale for tidy magnitudes
    cplx det = std::sqrt(m.a * m.d - m.b * m.c);
    m.a /= det;
    m.b /= det;
    m.c /= det;
    m.d /= det;
    return m;
}

CVec QCMap::boundary_trace() const {
    const Grid& g = *grid();
    CVec out(g.n_theta);
    for (int k = 0; k < g.n_theta; ++k) out[k] = values_[(g.n_r - 1) * g.n_theta + k];
    return out;
}

CVec QCMap::circle_trace() const {
    const Grid& a = *ring_values_.grid;
    CVec out(a.n_theta);
    for (int k = 0; k < a.n_theta; ++k) out[k] = ring_values_[(a.n_r - 1) * a.n_theta + k];
    return out;
}

void QCMap::finish() {
    disc_interp_ = std::make_shared<const Interpolator>(std::vector<ComplexField>{values_, dz_, dzbar_});
    ring_interp_ =
        std::make_shared<const Interpolator>(std::vector<ComplexField>{ring_values_, ring_dz_, ring_dzbar_});
}

void QCMap::eval(cplx z, cplx& w, cplx& wz, cplx& wzbar) const {
    double r = std::abs(z);
    if (r > 1.0 + kCircleSlack) throw Error(ErrorCode::invalid_parameter, "QCMap::eval outside the unit disc");
    cplx out[3];
    if (inside_grid(*grid(), r))
        disc_interp_->eval(z, out);
    else
        ring_interp_->eval(z, out);
    w = out[0];
    wz = out[1];
    wzbar = out[2];
}

cplx QCMap::operator()(cplx z) const {
    cplx w, a, b;
    eval(z, w, a, b);
    return w;
}

cplx QCMap::exterior(cplx z) const {
    if (norm_ != Normalization::series_at_origin)
        throw Error(ErrorCode::invalid_parameter, "exterior values exist only for series-normalized maps");
    if (std::abs(z) < 1.0 - 1e-12) throw Error(ErrorCode::invalid_parameter, "exterior() needs |z| >= 1");
    cplx zi = 1.0 / z, p = zi, s = z;
    for (const auto& c : laurent_) {
        s += c * p;
        p *= zi;
    }
    return post_(s);
}

cplx QCMap::inverse(cplx y) const {
    auto newton = [&](cplx z, cplx& out) {
        cplx w, wz, wzb;
        for (int it = 0; it < 60; ++it) {
            eval(z, w, wz, wzb);
            cplx e = y - w;
            if (std::abs(e) < 1e-14) {
                out = z;
                return true;
            }
            double jac = std::norm(wz) - std::norm(wzb);
            if (!(jac > 0.0)) return false;
            cplx dz = (std::conj(wz) * e - wzb * std::conj(e)) / jac;
            z += dz;
            double r = std::abs(z);
            if (r > 1.0 + 0.5 * kCircleSlack) z *= (1.0 + 0.5 * kCircleSlack) / r;
            if (std::abs(dz) < 1e-15) {
                eval(z, w, wz, wzb);
                out = z;
                return std::abs(y - w) < 1e-11;
            }
        }
        return false;
    };
    cplx z;
    if (newton(y, z)) return z;
    // fall back to the nearest sampled value
    const Grid& g = *grid();
    double best = 1e300;
    cplx seed = y;
    for (int i = 0; i < g.size(); ++i) {
        double d = std::abs(values_[i] - y);
        if (d < best) {
            best = d;
            seed = g.z(i);
        }
    }
    const Grid& a = *ring_values_.grid;
    for (int i = 0; i < a.size(); ++i) {
        double d = std::abs(ring_values_[i] - y);
        if (d < best) {
            best = d;
            seed = a.z(i);
        }
    }
    if (newton(seed, z)) return z;
    throw Error(ErrorCode::inverse_interpolation_failure, "could not invert the map at a point");
}

QCMap solve_beltrami(const BeltramiCoefficient& mu, Normalization norm, double tol, int max_iter) {
    if (!(tol > 0.0)) throw Error(ErrorCode::invalid_parameter, "solver tolerance must be positive");
    const GridPtr& g = mu.grid();
    auto ext = extended_disc(g);
    const GridPtr& ring = ext->ring();

    ComplexField mu_disc = mu.field();
    ComplexField mu_ring(ring);
    if (mu.tail())
        for (int i = 0; i < ring->size(); ++i) mu_ring[i] = mu.tail()(ring->z(i));
    double sup = std::max(sup_abs(mu_disc), sup_abs(mu_ring));
    if (sup >= 1.0) throw Error(ErrorCode::norm_violation, "Beltrami coefficient must satisfy sup|mu| < 1");
    if (sup > kSolverNormLimit + 1e-12)
        throw Error(ErrorCode::norm_too_large, "sup|mu| exceeds the solver regime 0.5");

    // Neumann iteration h = mu (1 + T h)
    ComplexField hd(g), hr(ring), cd, cr, td, tr;
    CVec outer;
    int it = 0;
    double change = 0.0;
    for (; it < max_iter; ++it) {
        ext->apply(hd, hr, cd, cr, td, tr);
        change = 0.0;
        for (int i = 0; i < g->size(); ++i) {
            cplx nh = mu_disc[i] * (1.0 + td[i]);
            change = std::max(change, std::abs(nh - hd[i]));
            hd[i] = nh;
        }
        for (int i = 0; i < ring->size(); ++i) {
            cplx nh = mu_ring[i] * (1.0 + tr[i]);
            change = std::max(change, std::abs(nh - hr[i]));
            hr[i] = nh;
        }
        if (change <= 0.1 * tol) break;
    }
    if (change > 0.1 * tol) throw Error(ErrorCode::no_convergence, "Beltrami iteration budget exhausted");
    ext->apply(hd, hr, cd, cr, td, tr, &outer);

    QCMap m;
    m.mu_ = mu;
    m.norm_ = norm;
    m.iterations_ = it + 1;
    m.laurent_ = outer;
    double res = 0.0, big = 0.0;
    for (int i = 0; i < g->size(); ++i) {
        res = std::max(res, std::abs(hd[i] - mu_disc[i] * (1.0 + td[i])));
        big = std::max(big, std::abs(1.0 + td[i]));
    }
    m.residual_ = res / big;

    // raw map w = z + C h and its derivatives on both pieces
    ComplexField wd = sample(g, [](cplx z) { return z; });
    ComplexField wr = sample(ring, [](cplx z) { return z; });
    ComplexField wzd(g), wzr(ring);
    for (int i = 0; i < g->size(); ++i) {
        wd[i] += cd[i];
        wzd[i] = 1.0 + td[i];
    }
    for (int i = 0; i < ring->size(); ++i) {
        wr[i] += cr[i];
        wzr[i] = 1.0 + tr[i];
    }

    // post-composition: values -> phi(values), derivative factor phi'(values)
    std::function<void(cplx, cplx&, cplx&)> post;
    if (norm == Normalization::fix_three_points) {
        const CVec coef = outer;
        DiscRiemannMap::Curve curve = [coef](double s, cplx& v, cplx& d) {
            cplx e = std::polar(1.0, s);
            v = e;
            d = cplx(0.0, 1.0) * e;
            cplx ei = std::conj(e), p = ei;
            for (size_t k = 0; k < coef.size(); ++k) {
                v += coef[k] * p;
                d -= cplx(0.0, static_cast<double>(k + 1)) * coef[k] * p;
                p *= ei;
            }
        };
        int samples = std::max(256, 4 * g->n_theta);
        auto riemann = std::make_shared<DiscRiemannMap>(DiscRiemannMap::from_curve(curve, samples, 1e-14));
        cplx src[3], dst[3] = {1.0, -1.0, cplx(0.0, -1.0)};
        const double angles[3] = {0.0, kPi, 1.5 * kPi};
        for (int k = 0; k < 3; ++k) {
            cplx v, d;
            curve(angles[k], v, d);
            src[k] = riemann->inverse(v);
        }
        Mobius mob = Mobius::three_point(src, dst);
        m.post_ = mob;
        post = [riemann, mob](cplx w, cplx& val, cplx& fac) {
            cplx dinv;
            cplx zeta = riemann->inverse(w, &dinv);
            val = mob(zeta);
            fac = mob.derivative(zeta) * dinv;
        };
    } else {
        Interpolator I(std::vector<ComplexField>{wd, wzd, d_z(wzd)});
        cplx v[3];
        I.eval(0.0, v);
        Mobius mob;
        cplx alpha = 1.0 / v[1], beta = v[2] / (2.0 * v[1] * v[1]);
        // alpha (y - a) / (1 + beta (y - a))
        mob.a = alpha;
        mob.b = -alpha * v[0];
        mob.c = beta;
        mob.d = 1.0 - beta * v[0];
        m.post_ = mob;
        post = [mob](cplx w, cplx& val, cplx& fac) {
            val = mob(w);
            fac = mob.derivative(w);
        };
    }

    auto fill = [&](const ComplexField& w, const ComplexField& wz, const ComplexField& h, ComplexField& ov,
                    ComplexField& oz, ComplexField& ozb) {
        ov = ComplexField(w.grid);
        oz = ComplexField(w.grid);
        ozb = ComplexField(w.grid);
        for (int i = 0; i < w.size(); ++i) {
            cplx val, fac;
            post(w[i], val, fac);
            ov[i] = val;
            oz[i] = fac * wz[i];
            ozb[i] = fac * h[i];
        }
    };
    fill(wd, wzd, hd, m.values_, m.dz_, m.dzbar_);
    fill(wr, wzr, hr, m.ring_values_, m.ring_dz_, m.ring_dzbar_);
    m.finish();
    return m;
}

CVec reflect_extension(const BeltramiCoefficient& mu, const CVec& points) {
    CVec out(points.size());
    for (size_t i = 0; i < points.size(); ++i) {
        cplx z = points[i];
        if (std::abs(z) <= 1.0) throw Error(ErrorCode::invalid_parameter, "reflection needs points with |z| > 1");
        cplx zc = std::conj(z);
        out[i] = std::conj(mu.at(1.0 / zc)) * (z * z) / (zc * zc);
    }
    return out;
}

ComplexField reflect_extension(const BeltramiCoefficient& mu, GridPtr exterior) {
    CVec pts(exterior->size());
    for (int i = 0; i < exterior->size(); ++i) pts[i] = exterior->z(i);
    return ComplexField(exterior, reflect_extension(mu, pts));
}

BeltramiCoefficient group_law(const BeltramiCoefficient& nu, const BeltramiCoefficient& mu, const QCMapPtr& w_mu) {
    check_same_grid(nu.grid(), mu.grid());
    check_same_grid(nu.grid(), w_mu->grid());
    auto formula = [nu, mu, w_mu](cplx y) {
        cplx z = w_mu->inverse(y);
        cplx w, wz, wzb;
        w_mu->eval(z, w, wz, wzb);
        cplx a = nu.at(z), b = mu.at(z);
        return (a - b) / (1.0 - a * std::conj(b)) * wz / std::conj(wz);
    };
    const GridPtr& g = nu.grid();
    ComplexField out(g);
    for (int i = 0; i < g->size(); ++i) out[i] = formula(g->z(i));
    return BeltramiCoefficient(out, formula);
}

BeltramiCoefficient group_law(const BeltramiCoefficient& nu, const BeltramiCoefficient& mu, double tol) {
    auto w = std::make_shared<const QCMap>(solve_beltrami(mu, Normalization::fix_three_points, tol));
    return group_law(nu, mu, w);
}

ComplexField measured_coefficient(const ComplexField& values) {
    ComplexField a = d_zbar(values), b = d_z(values);
    for (int i = 0; i < a.size(); ++i) {
        if (std::abs(b[i]) < 1e-14) throw Error(ErrorCode::vanishing_derivative, "f_z vanishes", i);
        a[i] /= b[i];
    }
    return a;
}

ComplexField compose_with_inverse(const QCMap& outer, const QCMap& inner) {
    check_same_grid(outer.grid(), inner.grid());
    const GridPtr& g = outer.grid();
    ComplexField out(g);
    for (int i = 0; i < g->size(); ++i) out[i] = outer(inner.inverse(g->z(i)));
    return out;
}

ComplexField right_translation_pullback(const TangentField& nu, const QCMap& w_mu) {
    check_same_grid(nu.field.grid, w_mu.grid());
    const GridPtr& g = w_mu.grid();
    ComplexField out(g);
    for (int i = 0; i < g->size(); ++i) {
        cplx z = w_mu.inverse(g->z(i));
        cplx w, wz, wzb;
        w_mu.eval(z, w, wz, wzb);
        cplx m = w_mu.mu().at(z);
        out[i] = nu.at(z) / (1.0 - std::norm(m)) * wz / std::conj(wz);
    }
    return out;
}

ComplexField right_translation_pullback(const TangentField& nu, const BeltramiCoefficient& mu, double tol) {
    return right_translation_pullback(nu, solve_beltrami(mu, Normalization::fix_three_points, tol));
}

ComplexField schwarzian(const ComplexField& f) {
    ComplexField fz = d_z(f);
    double top = sup_abs(fz);
    for (int i = 0; i < fz.size(); ++i)
        if (std::abs(fz[i]) <= 1e-12 * top || top == 0.0)
            throw Error(ErrorCode::vanishing_derivative, "schwarzian: f_z vanishes", i);
    ComplexField q = d_z(fz);
    for (int i = 0; i < q.size(); ++i) q[i] /= fz[i];
    ComplexField s = d_z(q);
    for (int i = 0; i < s.size(); ++i) s[i] -= 0.5 * q[i] * q[i];
    return s;
}

ComplexField bers_embedding(const BeltramiCoefficient& mu, GridPtr exterior, double tol) {
    if (exterior->is_disc() || exterior->r_in <= 1.0)
        throw Error(ErrorCode::invalid_parameter, "Bers embedding needs an annulus grid outside the unit circle");
    if (mu.sup_norm() > 0.3 + 1e-12)
        throw Error(ErrorCode::norm_too_large, "Bers embedding regime is sup|mu| <= 0.3");
    QCMap w = solve_beltrami(mu, Normalization::series_at_origin, tol);
    // the Mobius post-composition drops out of the Schwarzian
    const CVec& c = w.laurent();
    ComplexField out(exterior);
    for (int i = 0; i < exterior->size(); ++i) {
        cplx z = exterior->z(i), zi = 1.0 / z;
        cplx d1 = 1.0, d2 = 0.0, d3 = 0.0;
        cplx p = zi * zi; // z^{-(k+2)}
        for (size_t k = 0; k < c.size(); ++k) {
            double a = static_cast<double>(k + 1);
            d1 -= a * c[k] * p;
            d2 += a * (a + 1.0) * c[k] * p * zi;
            d3 -= a * (a + 1.0) * (a + 2.0) * c[k] * p * zi * zi;
            p *= zi;
        }
        if (std::abs(d1) < 1e-14) throw Error(ErrorCode::vanishing_derivative, "Bers map derivative vanishes", i);
        cplx q = d2 / d1;
        out[i] = d3 / d1 - 1.5 * q * q;
    }
    return out;
}

} // namespace adsmax
