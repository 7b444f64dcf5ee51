#include "symplectic.hpp"

#include <cmath>
#include <random>

namespace adsmax {

namespace {

const cplx I(0.0, 1.0);

ComplexField zeros(const GridPtr& g) { return ComplexField(g); }

// 2 (nu - conj(nu) m^2) / (1 - |m|^2): the target pullback that makes the
// source coefficient of a one-sided deformation equal nu
cplx section_pullback(cplx nu, cplx m) { return 2.0 * (nu - std::conj(nu) * m * m) / (1.0 - std::norm(m)); }

} // namespace

Eigen::MatrixXcd gram_matrix(const std::vector<TangentField>& t) {
    const int n = static_cast<int>(t.size());
    Eigen::MatrixXcd G(n, n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) G(j, k) = wp_inner(t[j], t[k]);
    return G;
}

TangentBasis monomial_basis(GridPtr g, int size) {
    if (size < 1 || size > kMaxDegree + 1) throw Error(ErrorCode::invalid_parameter, "basis size must be in [1, 9]");
    TangentBasis b;
    for (int k = 0; k < size; ++k) {
        CVec poly(k + 1, 0.0);
        poly[k] = 1.0;
        TangentField t = make_tangent(g, poly);
        // modified Gram-Schmidt, twice for safety
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& e : b.members) t = combine(t, 1.0, e, -wp_inner(t, e));
        t = t.scaled(1.0 / std::sqrt(wp_inner(t, t).real()));
        b.members.push_back(t);
    }
    b.gram = gram_matrix(b.members);
    return b;
}

TangentBasis remix(const TangentBasis& b, const Eigen::MatrixXcd& U) {
    const int n = static_cast<int>(b.members.size());
    if (U.rows() != n || U.cols() != n) throw Error(ErrorCode::invalid_parameter, "remix: matrix size mismatch");
    TangentBasis out;
    for (int j = 0; j < n; ++j) {
        TangentField t = b.members[0].scaled(U(0, j));
        for (int k = 1; k < n; ++k) t = combine(t, 1.0, b.members[k], U(k, j));
        out.members.push_back(t);
    }
    out.gram = gram_matrix(out.members);
    return out;
}

Eigen::MatrixXcd random_unitary(int n, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> N(0.0, 1.0);
    Eigen::MatrixXcd A(n, n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) A(j, k) = cplx(N(rng), N(rng));
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(A);
    return qr.householderQ() * Eigen::MatrixXcd::Identity(n, n);
}

CotangentTangent lift(const InducedGaussPair& pair, const TangentField* nu_plus, const TangentField* nu_minus) {
    PMVariation pm = pm_variations(nu_plus, nu_minus, pair);
    return {pm.delta_mu, pm.delta_Phi, nu_minus ? (nu_plus ? "plus,minus" : "minus") : "plus"};
}

CotangentTangent lift_on_section(const InducedGaussPair& pair, int sign, const ComplexField& nu) {
    const GridPtr& g = pair.grid();
    check_same_grid(nu.grid, g);
    ComplexField a(g);
    const ComplexField& m = pair.mu_plus.field();
    for (int i = 0; i < g->size(); ++i) a[i] = section_pullback(nu[i], m[i]);
    PMVariation pm = sign > 0 ? pm_variations(a, zeros(g), m, pair.cf.phi) : pm_variations(zeros(g), a, m, pair.cf.phi);
    return {pm.delta_mu, pm.delta_Phi, sign > 0 ? "section+" : "section-"};
}

// Im(a conj b) is formed before weighting so that swapping the arguments flips
// the sign bit for bit
double omega_wp(const ComplexField& u, const ComplexField& v) {
    check_same_grid(u.grid, v.grid);
    const Grid& g = *u.grid;
    RealField d(u.grid);
    for (int i = 0; i < g.size(); ++i) d[i] = hyperbolic_density_at(g.z(i)) * (u[i] * std::conj(v[i])).imag();
    return -integrate(d);
}
double omega_wp(const TangentField& u, const TangentField& v) { return omega_wp(u.field, v.field); }

double omega_c(const CotangentTangent& t1, const CotangentTangent& t2) {
    check_same_grid(t1.delta_mu.grid, t2.delta_mu.grid);
    check_same_grid(t1.delta_mu.grid, t1.delta_Phi.grid);
    check_same_grid(t2.delta_mu.grid, t2.delta_Phi.grid);
    ComplexField d(t1.delta_mu.grid);
    for (int i = 0; i < d.size(); ++i) d[i] = t1.delta_Phi[i] * t2.delta_mu[i] - t2.delta_Phi[i] * t1.delta_mu[i];
    return -2.0 * integrate(d).imag();
}

double mess_pullback_wp(int sign, const TangentField& nu_a, const TangentField& nu_b, const InducedGaussPair& pair) {
    const QCMap& F = pair.F(sign);
    ComplexField a = pull_back(nu_a, F), b = pull_back(nu_b, F);
    const GridPtr& g = pair.grid();
    RealField d(g);
    for (int i = 0; i < g->size(); ++i)
        d[i] = (1.0 - std::norm(pair.mu_plus.field()[i])) * std::exp(pair.cf.phi[i]) * (a[i] * std::conj(b[i])).imag();
    return -integrate(d);
}

double entrywise_rel(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b, double s) {
    return (a - s * b).cwiseAbs().maxCoeff() / b.cwiseAbs().maxCoeff();
}

SymplecticReport verify_symplectomorphism(const InducedGaussPair& pair, const TangentBasis& basis_plus,
                                          const TangentBasis& basis_minus, double tol) {
    const int np = static_cast<int>(basis_plus.members.size());
    const int n = np + static_cast<int>(basis_minus.members.size());
    // vectors t_j and i t_j on T_0(1) x T_0(1)
    std::vector<TangentField> side(n);
    std::vector<int> sgn(n);
    for (int j = 0; j < n; ++j) {
        side[j] = j < np ? basis_plus.members[j] : basis_minus.members[j - np];
        sgn[j] = j < np ? +1 : -1;
    }
    std::vector<CotangentTangent> t(n), it(n);
    for (int j = 0; j < n; ++j) {
        TangentField rot = side[j].scaled(I);
        t[j] = sgn[j] > 0 ? lift(pair, &side[j], nullptr) : lift(pair, nullptr, &side[j]);
        it[j] = sgn[j] > 0 ? lift(pair, &rot, nullptr) : lift(pair, nullptr, &rot);
    }
    SymplecticReport r;
    r.omega_c = hermitian_matrix(n, [&](int j, int k, bool rot) { return omega_c(t[j], rot ? it[k] : t[k]); });
    r.mess_side = hermitian_matrix(n, [&](int j, int k, bool rot) {
        if (sgn[j] != sgn[k]) return 0.0; // the two factors are independent
        TangentField v = rot ? side[k].scaled(I) : side[k];
        return -double(sgn[j]) * omega_wp(side[j], v);
    });
    r.frobenius_rel = (r.omega_c - r.mess_side).norm() / r.mess_side.norm();
    r.entry_rel = entrywise_rel(r.omega_c, r.mess_side);
    r.pass = r.frobenius_rel <= tol && std::isfinite(r.frobenius_rel);
    return r;
}

KahlerReport verify_kahler_potential(const InducedGaussPair& pair, const TangentBasis& basis, double tol) {
    const GridPtr& g = pair.grid();
    const int n = static_cast<int>(basis.members.size());
    KahlerReport r;
    r.route_b.resize(n, n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            r.route_b(j, k) = energy_second_variation(basis.members[j].field, basis.members[k].field, pair);

    for (int s = 0; s < 2; ++s) {
        const int sign = s == 0 ? +1 : -1;
        const QCMap& F = pair.F(sign);
        std::vector<CotangentTangent> t(n), it(n);
        for (int j = 0; j < n; ++j) {
            t[j] = lift_on_section(pair, sign, basis.members[j].field);
            it[j] = lift_on_section(pair, sign, basis.members[j].scaled(I).field);
        }
        Eigen::MatrixXcd h =
            hermitian_matrix(n, [&](int j, int k, bool rot) { return omega_c(t[j], rot ? it[k] : t[k]); });
        r.route_a[s] = -0.5 * h;

        // the same vectors pushed to the target: nu_target = (a F_z / conj(F_z)) o F^{-1}
        CVec zsrc(g->size());
        for (int i = 0; i < g->size(); ++i) zsrc[i] = F.inverse(g->z(i));
        std::vector<ComplexField> pushed(n), pushed_i(n);
        for (int j = 0; j < n; ++j) {
            pushed[j] = ComplexField(g);
            pushed_i[j] = ComplexField(g);
            for (int i = 0; i < g->size(); ++i) {
                cplx w, fz, fzb;
                F.eval(zsrc[i], w, fz, fzb);
                cplx nu = basis.members[j].at(zsrc[i]);
                cplx m = pair.mu_plus.at(zsrc[i]);
                cplx rot = fz / std::conj(fz);
                pushed[j][i] = section_pullback(nu, m) * rot;
                pushed_i[j][i] = section_pullback(I * nu, m) * rot;
            }
        }
        // omega_C = -+ omega_WP on the target for the +- section
        Eigen::MatrixXcd ht = hermitian_matrix(n, [&](int j, int k, bool rot) {
            return -double(sign) * omega_wp(pushed[j], rot ? pushed_i[k] : pushed[k]);
        });
        r.route_a_target[s] = -0.5 * ht;
        r.rel_a_b[s] = entrywise_rel(r.route_a[s], r.route_b, double(sign));
        r.rel_target_b[s] = entrywise_rel(r.route_a_target[s], r.route_b, double(sign));
    }
    r.sign_gap = (r.route_a[0] + r.route_a[1]).cwiseAbs().maxCoeff();
    r.hermitian_gap = (r.route_b - r.route_b.adjoint()).cwiseAbs().maxCoeff();
    r.pass = true;
    for (int s = 0; s < 2; ++s) r.pass = r.pass && r.rel_a_b[s] <= tol && r.rel_target_b[s] <= tol;
    r.pass = r.pass && r.sign_gap == 0.0;
    return r;
}

} // namespace adsmax
