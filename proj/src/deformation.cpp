#include "deformation.hpp"

#include <cmath>
#include <limits>

namespace adsmax {

namespace {

// observed orders above this mean the differences are already at roundoff
constexpr double kOrderCap = 10.0;

ComplexField zeros(const GridPtr& g) { return ComplexField(g); }

ComplexField sampled_hopf(const InducedGaussPair& pair, int sign) {
    ComplexField h = pair.Phi().sample(pair.grid());
    for (auto& v : h.values) v *= double(sign);
    return h;
}

ComplexField mu_of(const InducedGaussPair& pair, int sign) {
    ComplexField m = pair.mu_plus.field();
    for (auto& v : m.values) v *= double(sign);
    return m;
}

void check_ladder(const RVec& eps) {
    if (eps.size() < 3) throw Error(ErrorCode::invalid_parameter, "epsilon ladder needs at least three members");
    for (size_t k = 0; k < eps.size(); ++k) {
        if (!(eps[k] > 0.0)) throw Error(ErrorCode::invalid_parameter, "epsilons must be positive");
        if (k > 0 && !(eps[k] < eps[k - 1])) throw Error(ErrorCode::invalid_parameter, "epsilons must decrease");
    }
}

ComplexField difference(const ComplexField& a, const ComplexField& b, double scale) {
    ComplexField out(a.grid);
    for (int i = 0; i < a.size(); ++i) out[i] = (a[i] - b[i]) * scale;
    return out;
}

} // namespace

const char* lie_quantity_name(LieQuantity q) {
    switch (q) {
    case LieQuantity::mu_F: return "mu_F";
    case LieQuantity::Phi: return "Phi";
    case LieQuantity::antihol_density: return "antihol_density";
    case LieQuantity::hol_density: return "hol_density";
    case LieQuantity::mu_H_dot: return "mu_H_dot";
    }
    return "?";
}

ComplexField pull_back(const TangentField& nu, const QCMap& F) {
    ComplexField out(F.grid());
    for (int i = 0; i < out.size(); ++i) {
        cplx fz = F.dz()[i];
        out[i] = nu.at(F.values()[i]) * std::conj(fz) / fz;
    }
    return out;
}

ComplexField pull_back(const BeltramiCoefficient& nu, const QCMap& F) {
    ComplexField out(F.grid());
    for (int i = 0; i < out.size(); ++i) {
        cplx fz = F.dz()[i];
        out[i] = nu.at(F.values()[i]) * std::conj(fz) / fz;
    }
    return out;
}

BeltramiCoefficient scaled(const BeltramiCoefficient& nu, cplx s) {
    ComplexField f = nu.field();
    for (auto& v : f.values) v *= s;
    BeltramiCoefficient::Tail tail;
    if (nu.tail()) tail = [t = nu.tail(), s](cplx z) { return s * t(z); };
    return BeltramiCoefficient(f, tail);
}

SolvedLadder solve_ladder(const BeltramiCoefficient& nu, const RVec& epsilons, double tol) {
    check_ladder(epsilons);
    SolvedLadder L;
    L.epsilons = epsilons;
    for (double e : epsilons) {
        L.plus.push_back(std::make_shared<const QCMap>(solve_beltrami(scaled(nu, e), Normalization::fix_three_points, tol)));
        L.minus.push_back(std::make_shared<const QCMap>(solve_beltrami(scaled(nu, -e), Normalization::fix_three_points, tol)));
    }
    return L;
}

std::array<ComplexField, kLieQuantityCount> pulled_quantities(const QCMap& F, const QCMap* f, const QCMap* h) {
    const GridPtr& g = F.grid();
    if (f) check_same_grid(f->grid(), g);
    std::array<ComplexField, kLieQuantityCount> q;
    for (auto& x : q) x = zeros(g);
    for (int i = 0; i < g->size(); ++i) {
        const cplx p = F.dz()[i], r = F.dzbar()[i];
        cplx hv = F.values()[i], hu = 1.0, hub = 0.0;
        if (h) h->eval(F.values()[i], hv, hu, hub);
        // H = h o F
        const cplx Hz = hu * p + hub * std::conj(r);
        const cplx Hzb = hu * r + hub * std::conj(p);
        cplx fz = 1.0, fzb = 0.0;
        if (f) {
            fz = f->dz()[i];
            fzb = f->dzbar()[i];
        }
        // H = F^eps o f: H_z = A f_z + B conj(f_zbar), H_zbar = A f_zbar + B conj(f_z)
        const double jac = std::norm(fz) - std::norm(fzb);
        const cplx A = (Hz * std::conj(fz) - std::conj(fzb) * Hzb) / jac;
        const cplx B = (fz * Hzb - fzb * Hz) / jac;
        const double rho = hyperbolic_density_at(hv);
        const double fz2 = std::norm(fz);
        q[0][i] = B / A * std::conj(fz) / fz;
        q[1][i] = rho * A * std::conj(B) * fz * fz;
        q[2][i] = rho * std::norm(B) * fz2;
        q[3][i] = rho * std::norm(A) * fz2;
        q[4][i] = Hzb / Hz;
    }
    return q;
}

void extrapolate(const RVec& eps, const std::vector<ComplexField>& D, ComplexField& value, double& order) {
    const size_t n = D.size();
    const double a = eps[n - 2] * eps[n - 2], b = eps[n - 1] * eps[n - 1];
    value = ComplexField(D[n - 1].grid);
    for (int i = 0; i < value.size(); ++i) value[i] = (a * D[n - 1][i] - b * D[n - 2][i]) / (a - b);
    const double d1 = sup_abs_diff(D[n - 3], D[n - 2]);
    const double d2 = sup_abs_diff(D[n - 2], D[n - 1]);
    const double floor = 1e-13 * std::max(sup_abs(D[n - 1]), std::numeric_limits<double>::min());
    if (d1 <= floor || d2 <= floor)
        order = kOrderCap;
    else
        order = std::min(kOrderCap, std::log(d1 / d2) / std::log(eps[n - 3] / eps[n - 2]));
}

LieLadder lie_fd(const QCMap& F, const SolvedLadder* f, const SolvedLadder* h) {
    const RVec& eps = f ? f->epsilons : h ? h->epsilons : RVec{};
    if (eps.empty()) throw Error(ErrorCode::invalid_parameter, "lie_fd needs a source or target deformation");
    if (f && h && f->epsilons != h->epsilons) throw Error(ErrorCode::invalid_parameter, "ladders use different epsilons");
    check_ladder(eps);
    LieLadder L;
    L.epsilons = eps;
    std::array<std::vector<ComplexField>, kLieQuantityCount> D;
    std::vector<ComplexField> Dh, Dhu;
    for (size_t k = 0; k < eps.size(); ++k) {
        const QCMap* fp = f ? f->plus[k].get() : nullptr;
        const QCMap* fm = f ? f->minus[k].get() : nullptr;
        const QCMap* hp = h ? h->plus[k].get() : nullptr;
        const QCMap* hm = h ? h->minus[k].get() : nullptr;
        auto qp = pulled_quantities(F, fp, hp);
        auto qm = pulled_quantities(F, fm, hm);
        for (int j = 0; j < kLieQuantityCount; ++j) D[j].push_back(difference(qp[j], qm[j], 0.5 / eps[k]));
        if (h) {
            Dh.push_back(difference(hp->values(), hm->values(), 0.5 / eps[k]));
            Dhu.push_back(difference(hp->dz(), hm->dz(), 0.5 / eps[k]));
        }
    }
    for (int j = 0; j < kLieQuantityCount; ++j) extrapolate(eps, D[j], L.fd[j], L.order[j]);
    if (h) {
        double o;
        extrapolate(eps, Dh, L.h_dot, o);
        extrapolate(eps, Dhu, L.h_dot_u, o);
    }
    return L;
}

ComplexField lie_mu_F_closed(const ComplexField& nu_f, const ComplexField& pulled, const ComplexField& mu_F) {
    check_same_grid(nu_f.grid, pulled.grid);
    check_same_grid(nu_f.grid, mu_F.grid);
    ComplexField out(nu_f.grid);
    for (int i = 0; i < out.size(); ++i) {
        cplx m = mu_F[i];
        out[i] = (1.0 - std::norm(m)) * pulled[i] - (nu_f[i] - std::conj(nu_f[i]) * m * m);
    }
    return out;
}

ComplexField mu_H_dot_closed(const ComplexField& pulled, const ComplexField& mu_F) {
    check_same_grid(pulled.grid, mu_F.grid);
    ComplexField out(pulled.grid);
    for (int i = 0; i < out.size(); ++i) out[i] = (1.0 - std::norm(mu_F[i])) * pulled[i];
    return out;
}

ComplexField mu_H_dot_from_lie(const ComplexField& nu_f, const ComplexField& lie_mu_F, const ComplexField& mu_F) {
    check_same_grid(nu_f.grid, lie_mu_F.grid);
    check_same_grid(nu_f.grid, mu_F.grid);
    ComplexField out(nu_f.grid);
    for (int i = 0; i < out.size(); ++i) out[i] = nu_f[i] - std::conj(nu_f[i]) * mu_F[i] * mu_F[i] + lie_mu_F[i];
    return out;
}

ComplexField lie_hopf_closed(const ComplexField& nu_f, const ComplexField& pulled, const ComplexField& mu_F,
                             const RealField& phi) {
    check_same_grid(nu_f.grid, pulled.grid);
    check_same_grid(nu_f.grid, mu_F.grid);
    check_same_grid(nu_f.grid, phi.grid);
    ComplexField out(nu_f.grid);
    for (int i = 0; i < out.size(); ++i) {
        cplx m = mu_F[i], nf = std::conj(nu_f[i]);
        double rho = std::exp(phi[i]);
        out[i] = rho * (pulled[i] * std::conj(m * m) - nf * std::norm(m)) + rho * (std::conj(pulled[i]) - nf);
    }
    return out;
}

ComplexField lie_energy_density_closed(const ComplexField& nu_f, const ComplexField& pulled, const ComplexField& hopf) {
    check_same_grid(nu_f.grid, pulled.grid);
    check_same_grid(nu_f.grid, hopf.grid);
    ComplexField out(nu_f.grid);
    for (int i = 0; i < out.size(); ++i) {
        cplx t = hopf[i] * (pulled[i] - nu_f[i]);
        out[i] = t + std::conj(t);
    }
    return out;
}

PMVariation pm_variations(const ComplexField& a, const ComplexField& b, const ComplexField& mu_F, const RealField& phi) {
    check_same_grid(a.grid, b.grid);
    check_same_grid(a.grid, mu_F.grid);
    check_same_grid(a.grid, phi.grid);
    PMVariation v{ComplexField(a.grid), ComplexField(a.grid)};
    for (int i = 0; i < a.size(); ++i) {
        cplx m = mu_F[i], s = a[i] + b[i], d = a[i] - b[i];
        v.delta_mu[i] = 0.5 * (s + std::conj(s) * m * m) / (1.0 + std::norm(m));
        v.delta_Phi[i] = 0.5 * std::exp(phi[i]) * (d * std::conj(m * m) + std::conj(d));
    }
    return v;
}

PMVariation pm_variations(const TangentField* nu_plus, const TangentField* nu_minus, const InducedGaussPair& pair) {
    const GridPtr& g = pair.grid();
    ComplexField a = nu_plus ? pull_back(*nu_plus, *pair.F_plus) : zeros(g);
    ComplexField b = nu_minus ? pull_back(*nu_minus, *pair.F_minus) : zeros(g);
    return pm_variations(a, b, pair.mu_plus.field(), pair.cf.phi);
}

cplx energy_first_variation(const ComplexField& nu, const InducedGaussPair& pair, int sign) {
    check_same_grid(nu.grid, pair.grid());
    ComplexField d(nu.grid);
    for (int i = 0; i < d.size(); ++i)
        d[i] = 2.0 * std::exp(pair.cf.phi[i]) * nu[i] * std::conj(double(sign) * pair.mu_plus.field()[i]);
    return integrate(d);
}

cplx energy_second_variation(const ComplexField& nu, const ComplexField& mu, const InducedGaussPair& pair) {
    check_same_grid(nu.grid, pair.grid());
    check_same_grid(mu.grid, pair.grid());
    ComplexField d(nu.grid);
    for (int i = 0; i < d.size(); ++i)
        d[i] = 2.0 * std::exp(pair.cf.phi[i]) * (1.0 + std::norm(pair.mu_plus.field()[i])) * nu[i] * std::conj(mu[i]);
    return integrate(d);
}

double relative_sup_error(const ComplexField& fd, const ComplexField& closed) {
    double den = sup_abs(closed);
    double num = sup_abs_diff(fd, closed);
    return den > 0.0 ? num / den : num;
}

namespace {
LieReport report(const std::string& name, ComplexField fd, ComplexField closed, double order) {
    LieReport r;
    r.quantity = name;
    r.rel_error = relative_sup_error(fd, closed);
    r.fd_value = std::move(fd);
    r.closed_value = std::move(closed);
    r.order_estimate = order;
    return r;
}

// residual that should vanish, measured against a reference scale
LieReport vanishing(const std::string& name, ComplexField fd, double scale, double order) {
    LieReport r;
    r.quantity = name;
    r.rel_error = scale > 0.0 ? sup_abs(fd) / scale : sup_abs(fd);
    r.closed_value = ComplexField(fd.grid);
    r.fd_value = std::move(fd);
    r.order_estimate = order;
    return r;
}
} // namespace

std::vector<LieReport> lie_checks(const InducedGaussPair& pair, int sign, const TangentField* nu_f,
                                  const TangentField* nu_h, const LieOptions& opt) {
    const GridPtr& g = pair.grid();
    const QCMap& F = pair.F(sign);
    std::unique_ptr<SolvedLadder> fl, hl;
    if (nu_f) fl = std::make_unique<SolvedLadder>(solve_ladder(beltrami_from_tangent(*nu_f), opt.epsilons, opt.tol));
    if (nu_h) hl = std::make_unique<SolvedLadder>(solve_ladder(beltrami_from_tangent(*nu_h), opt.epsilons, opt.tol));
    if (!fl && !hl) {
        // constant family: every Lie derivative vanishes
        std::vector<LieReport> out;
        for (int j = 0; j < kLieQuantityCount; ++j)
            out.push_back(report(lie_quantity_name(LieQuantity(j)), zeros(g), zeros(g), kOrderCap));
        return out;
    }
    LieLadder L = lie_fd(F, fl.get(), hl.get());

    ComplexField nf = nu_f ? nu_f->field : zeros(g);
    ComplexField pulled = nu_h ? pull_back(*nu_h, F) : zeros(g);
    ComplexField m = mu_of(pair, sign);
    ComplexField dens = lie_energy_density_closed(nf, pulled, sampled_hopf(pair, sign));

    std::vector<LieReport> out;
    out.push_back(report("mu_F", L.fd[0], lie_mu_F_closed(nf, pulled, m), L.order[0]));
    out.push_back(report("Phi", L.fd[1], lie_hopf_closed(nf, pulled, m, pair.cf.phi), L.order[1]));
    out.push_back(report("antihol_density", L.fd[2], dens, L.order[2]));
    out.push_back(report("hol_density", L.fd[3], dens, L.order[3]));
    out.push_back(report("mu_H_dot", L.fd[4], mu_H_dot_from_lie(nf, L.fd[0], m), L.order[4]));
    out.push_back(report("mu_H_dot_pulled", L.fd[4], mu_H_dot_closed(pulled, m), L.order[4]));
    return out;
}

double ahlfors_defect(const LieLadder& L) {
    if (L.h_dot.values.empty()) return 0.0;
    const Grid& g = *L.h_dot.grid;
    double num = 0.0;
    for (int i = 0; i < g.size(); ++i) {
        cplx u = g.z(i);
        cplx psi_u = 2.0 * std::conj(u) / (1.0 - std::norm(u));
        num = std::max(num, std::abs(2.0 * (psi_u * L.h_dot[i] + L.h_dot_u[i]).real()));
    }
    double den = sup_abs(L.h_dot_u);
    return den > 0.0 ? num / den : num;
}

std::vector<LieReport> pm_checks(const InducedGaussPair& pair, const TangentField* nu_plus,
                                 const TangentField* nu_minus, const LieOptions& opt) {
    if (!nu_plus && !nu_minus) throw Error(ErrorCode::invalid_parameter, "pm_checks needs nu_plus or nu_minus");
    const GridPtr& g = pair.grid();
    PMVariation pm = pm_variations(nu_plus, nu_minus, pair);
    std::unique_ptr<SolvedLadder> hp, hm;
    if (nu_plus) hp = std::make_unique<SolvedLadder>(solve_ladder(beltrami_from_tangent(*nu_plus), opt.epsilons, opt.tol));
    if (nu_minus) hm = std::make_unique<SolvedLadder>(solve_ladder(beltrami_from_tangent(*nu_minus), opt.epsilons, opt.tol));
    SolvedLadder fl = solve_ladder(BeltramiCoefficient(pm.delta_mu), opt.epsilons, opt.tol);

    // with the compatible source deformation
    LieLadder Lp = lie_fd(*pair.F_plus, &fl, hp.get());
    LieLadder Lm = lie_fd(*pair.F_minus, &fl, hm.get());
    // target deformations alone
    const ComplexField& m = pair.mu_plus.field();
    ComplexField S(g);
    double order_s = kOrderCap;
    for (auto [L, F] : {std::pair{hp.get(), pair.F_plus.get()}, std::pair{hm.get(), pair.F_minus.get()}}) {
        if (!L) continue;
        LieLadder T = lie_fd(*F, nullptr, L);
        for (int i = 0; i < g->size(); ++i) S[i] += T.fd[0][i];
        order_s = std::min(order_s, T.order[0]);
    }
    ComplexField measured(g);
    for (int i = 0; i < g->size(); ++i) {
        cplx t = 0.5 * S[i], mm = m[i] * m[i];
        measured[i] = (t + std::conj(t) * mm) / (1.0 - std::norm(mm));
    }

    ComplexField sum_mu(g), sum_Phi(g);
    for (int i = 0; i < g->size(); ++i) {
        sum_mu[i] = Lp.fd[0][i] + Lm.fd[0][i];
        sum_Phi[i] = Lp.fd[1][i] + Lm.fd[1][i];
    }
    std::vector<LieReport> out;
    out.push_back(report("delta_Phi", Lp.fd[1], pm.delta_Phi, Lp.order[1]));
    out.push_back(report("delta_mu", measured, pm.delta_mu, order_s));
    out.push_back(vanishing("compat_mu", sum_mu, std::max(sup_abs(Lp.fd[0]), sup_abs(Lm.fd[0])),
                            std::min(Lp.order[0], Lm.order[0])));
    out.push_back(vanishing("compat_Phi", sum_Phi, std::max(sup_abs(Lp.fd[1]), sup_abs(Lm.fd[1])),
                            std::min(Lp.order[1], Lm.order[1])));
    return out;
}

EnergyVariationCheck energy_variation_check(const InducedGaussPair& pair, int sign, const TangentField& nu_target,
                                            const TangentField& nu_source, const LieOptions& opt) {
    const GridPtr& g = pair.grid();
    const QCMap& F = pair.F(sign);
    const cplx I(0.0, 1.0);
    struct Direction {
        ComplexField delta_mu;
        double dE = 0.0;
        ComplexField dPhi;
        double order = 0.0;
    } dir[2];
    for (int k = 0; k < 2; ++k) {
        TangentField nu = nu_target.scaled(k == 0 ? cplx(1.0) : I);
        PMVariation pm = sign > 0 ? pm_variations(&nu, nullptr, pair) : pm_variations(nullptr, &nu, pair);
        SolvedLadder hl = solve_ladder(beltrami_from_tangent(nu), opt.epsilons, opt.tol);
        SolvedLadder fl = solve_ladder(BeltramiCoefficient(pm.delta_mu), opt.epsilons, opt.tol);
        LieLadder L = lie_fd(F, &fl, &hl);
        RealField dens(g);
        for (int i = 0; i < g->size(); ++i) dens[i] = L.fd[2][i].real();
        dir[k].delta_mu = pm.delta_mu;
        dir[k].dE = integrate(dens);
        dir[k].dPhi = L.fd[1];
        dir[k].order = std::min(L.order[1], L.order[2]);
    }
    EnergyVariationCheck c;
    // d_nu (2E) = (L_t - i L_{it}) E
    c.fd_first = cplx(dir[0].dE, 0.0) - I * dir[1].dE;
    c.closed_first = energy_first_variation(dir[0].delta_mu, pair, sign);
    c.first_rel_error = std::abs(c.fd_first - c.closed_first) / std::abs(c.closed_first);

    ComplexField fd(g), closed(g);
    const ComplexField& m = pair.mu_plus.field();
    for (int i = 0; i < g->size(); ++i) {
        cplx nu = nu_source.field[i];
        fd[i] = nu * 0.5 * (dir[0].dPhi[i] + I * dir[1].dPhi[i]);
        closed[i] = std::exp(pair.cf.phi[i]) * (1.0 + std::norm(m[i])) * nu * std::conj(dir[0].delta_mu[i]);
    }
    c.second = report("hessian_integrand", fd, closed, std::min(dir[0].order, dir[1].order));
    return c;
}

} // namespace adsmax
