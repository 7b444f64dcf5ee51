#include "gauss_equation.hpp"

#include <cmath>
#include <cstdio>

namespace adsmax {

namespace {

// 2 d_zzbar of a real field
RealField half_laplacian(const RealField& u) {
    ComplexField l = d_zzbar(to_complex(u));
    RealField out(u.grid);
    for (int i = 0; i < u.size(); ++i) out[i] = 2.0 * l[i].real();
    return out;
}

// Newton system on the interior rings: (2 d_zzbar - c) x, x = 0 on r = R.
class Jacobian {
public:
    Jacobian(GridPtr g, const RVec& c) : g_(std::move(g)), c_(c) {
        const Grid& G = *g_;
        const int ni = G.n_r - 1;
        RVec cbar(ni, 0.0);
        for (int ir = 0; ir < ni; ++ir) {
            for (int k = 0; k < G.n_theta; ++k) cbar[ir] += c_[ir * G.n_theta + k];
            cbar[ir] /= G.n_theta;
        }
        // per-mode radial operator with the angular mean of c
        lu_.resize(G.n_theta / 2 + 1);
        for (int m = 0; m <= G.n_theta / 2; ++m) {
            int p = m & 1;
            Eigen::MatrixXd A(ni, ni);
            for (int i = 0; i < ni; ++i) {
                double r = G.r_nodes[i];
                for (int j = 0; j < ni; ++j) A(i, j) = 0.5 * (G.D2[p](i, j) + G.D1[p](i, j) / r);
                A(i, i) -= 0.5 * m * m / (r * r) + cbar[i];
            }
            lu_[m].compute(A);
        }
    }

    int n() const { return (g_->n_r - 1) * g_->n_theta; }

    Eigen::VectorXd apply(const Eigen::VectorXd& x) const {
        RealField u(g_);
        for (int i = 0; i < n(); ++i) u[i] = x[i];
        RealField l = half_laplacian(u);
        Eigen::VectorXd y(n());
        for (int i = 0; i < n(); ++i) y[i] = l[i] - c_[i] * x[i];
        return y;
    }

    Eigen::VectorXd precondition(const Eigen::VectorXd& b) const {
        const Grid& G = *g_;
        const int ni = G.n_r - 1;
        ComplexField f(g_);
        for (int i = 0; i < n(); ++i) f[i] = b[i];
        ModeMatrix M = to_modes(f);
        Eigen::VectorXcd col(ni);
        for (int k = 0; k < G.n_theta; ++k) {
            int m = std::abs(mode_number(k, G.n_theta));
            for (int i = 0; i < ni; ++i) col[i] = M(i, k);
            Eigen::VectorXd re = lu_[m].solve(col.real());
            Eigen::VectorXd im = lu_[m].solve(col.imag());
            for (int i = 0; i < ni; ++i) M(i, k) = cplx(re[i], im[i]);
            M(ni, k) = 0.0;
        }
        ComplexField out = from_modes(g_, M);
        Eigen::VectorXd y(n());
        for (int i = 0; i < n(); ++i) y[i] = out[i].real();
        return y;
    }

private:
    GridPtr g_;
    RVec c_;
    std::vector<Eigen::PartialPivLU<Eigen::MatrixXd>> lu_;
};

// right-preconditioned BiCGSTAB; returns iterations used
int bicgstab(const Jacobian& J, const Eigen::VectorXd& b, Eigen::VectorXd& x, double abs_tol, int max_it) {
    const int n = J.n();
    x = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd r = b, r0 = b, p = Eigen::VectorXd::Zero(n), v = Eigen::VectorXd::Zero(n);
    double rho = 1.0, alpha = 1.0, omega = 1.0;
    if (r.lpNorm<Eigen::Infinity>() <= abs_tol) return 0;
    for (int it = 1; it <= max_it; ++it) {
        double rho_new = r0.dot(r);
        if (rho_new == 0.0) return it;
        double beta = (rho_new / rho) * (alpha / omega);
        p = r + beta * (p - omega * v);
        Eigen::VectorXd ph = J.precondition(p);
        v = J.apply(ph);
        alpha = rho_new / r0.dot(v);
        Eigen::VectorXd s = r - alpha * v;
        x += alpha * ph;
        if (s.lpNorm<Eigen::Infinity>() <= abs_tol) return it;
        Eigen::VectorXd sh = J.precondition(s);
        Eigen::VectorXd t = J.apply(sh);
        double tt = t.dot(t);
        omega = tt > 0.0 ? t.dot(s) / tt : 0.0;
        x += omega * sh;
        r = s - omega * t;
        rho = rho_new;
        if (r.lpNorm<Eigen::Infinity>() <= abs_tol || omega == 0.0) return it;
    }
    return max_it;
}

} // namespace

double interior_sup(const RealField& f) {
    const Grid& g = *f.grid;
    double m = 0.0;
    for (int i = 0; i < (g.n_r - 1) * g.n_theta; ++i) m = std::max(m, std::abs(f[i]));
    return m;
}

namespace {

// residual in terms of u = phi - psi; psi is never differentiated, and u is
// stored directly because recovering it as phi - psi costs eps |psi| per node,
// which the radial second derivative amplifies near r = R
RealField residual_of_correction(const RealField& u, const RealField& psi, const RVec& q2) {
    RealField res = half_laplacian(u);
    for (int i = 0; i < u.size(); ++i) {
        double phi = psi[i] + u[i];
        res[i] -= std::exp(psi[i]) * std::expm1(u[i]) - std::exp(-phi) * q2[i];
    }
    return res;
}

RVec modulus_squared(const QuadDifferential& Phi, const Grid& g) {
    RVec q2(g.size());
    for (int i = 0; i < g.size(); ++i) q2[i] = std::norm(Phi(g.z(i)));
    return q2;
}

} // namespace

RealField gauss_residual(const RealField& phi, const QuadDifferential& Phi) {
    RealField psi = hyperbolic_log_density(phi.grid);
    RealField u(phi.grid);
    for (int i = 0; i < u.size(); ++i) u[i] = phi[i] - psi[i];
    return residual_of_correction(u, psi, modulus_squared(Phi, *phi.grid));
}

RealField gauss_residual(const ConformalFactor& cf) {
    return residual_of_correction(cf.u, hyperbolic_log_density(cf.grid()), modulus_squared(cf.Phi, *cf.grid()));
}

ConformalFactor solve_gauss(const QuadDifferential& Phi, GridPtr grid, double tol, const GaussOptions& opt) {
    if (!(tol > 0.0)) throw Error(ErrorCode::invalid_parameter, "solve_gauss: tolerance must be positive");
    if (Phi.coeffs.empty() || Phi.degree() > kMaxDegree)
        throw Error(ErrorCode::invalid_parameter, "solve_gauss: Phi degree must be in [0, 8]");
    const Grid& g = *grid;
    const int n = (g.n_r - 1) * g.n_theta;
    const RVec q2 = modulus_squared(Phi, g);
    const RealField psi = hyperbolic_log_density(grid);

    ConformalFactor cf;
    cf.Phi = Phi;
    cf.u = RealField(grid);
    RealField res = residual_of_correction(cf.u, psi, q2);
    double rnorm = interior_sup(res);
    double best = rnorm;
    int stalled = 0;
    for (int step = 0; step < opt.max_newton && rnorm > tol; ++step) {
        RVec c(n);
        for (int i = 0; i < n; ++i) {
            double phi = psi[i] + cf.u[i];
            c[i] = std::exp(phi) + std::exp(-phi) * q2[i];
        }
        Jacobian J(grid, c);
        Eigen::VectorXd b(n), dx;
        for (int i = 0; i < n; ++i) b[i] = -res[i];
        cf.linear_iterations += bicgstab(J, b, dx, std::max(0.01 * tol, 1e-3 * rnorm), opt.max_linear);
        // damped update: halve while the residual grows
        double lambda = 1.0;
        RealField trial(grid);
        double tnorm = 0.0;
        for (int half = 0; half < 30; ++half) {
            trial = cf.u;
            for (int i = 0; i < n; ++i) trial[i] += lambda * dx[i];
            res = residual_of_correction(trial, psi, q2);
            tnorm = interior_sup(res);
            if (std::isfinite(tnorm) && tnorm < rnorm) break;
            lambda *= 0.5;
        }
        cf.newton_steps = step + 1;
        if (!(std::isfinite(tnorm) && tnorm < rnorm)) break; // roundoff floor or divergence
        cf.u = trial;
        rnorm = tnorm;
        if (rnorm > 0.5 * best) {
            if (++stalled >= 3) break;
        } else {
            stalled = 0;
        }
        best = std::min(best, rnorm);
    }
    cf.phi = RealField(grid);
    for (int i = 0; i < g.size(); ++i) cf.phi[i] = psi[i] + cf.u[i];
    cf.residual_sup = rnorm;
    if (!(rnorm <= tol)) {
        char msg[128];
        std::snprintf(msg, sizeof msg, "Gauss equation did not reach tolerance; last residual %.3e", rnorm);
        throw Error(ErrorCode::newton_divergence, msg);
    }
    return cf;
}

RealField curvature(const ConformalFactor& cf) {
    // 2 phi_{z zbar} = e^psi + 2 u_{z zbar}
    RealField l = half_laplacian(cf.u);
    RealField psi = hyperbolic_log_density(cf.grid());
    RealField k(cf.grid());
    for (int i = 0; i < k.size(); ++i) k[i] = -(std::exp(psi[i]) + l[i]) * std::exp(-cf.phi[i]);
    return k;
}

} // namespace adsmax
