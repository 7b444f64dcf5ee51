#pragma once

#include <Eigen/Dense>

#include "deformation.hpp"

namespace adsmax {

// e^{-psi} conj(z^k), k < size, orthonormalized under wp_inner on g
struct TangentBasis {
    std::vector<TangentField> members;
    Eigen::MatrixXcd gram;
};
TangentBasis monomial_basis(GridPtr g, int size);
// members'_j = sum_k U(k, j) members_k
TangentBasis remix(const TangentBasis& b, const Eigen::MatrixXcd& U);
Eigen::MatrixXcd gram_matrix(const std::vector<TangentField>& t);
Eigen::MatrixXcd random_unitary(int n, unsigned seed);

struct CotangentTangent {
    ComplexField delta_mu, delta_Phi;
    std::string source;
};
// (delta mu, delta Phi) of the deformation generated by nu_+- on the targets
CotangentTangent lift(const InducedGaussPair& pair, const TangentField* nu_plus, const TangentField* nu_minus);
// one-sided vector on section `sign` whose source coefficient is nu
CotangentTangent lift_on_section(const InducedGaussPair& pair, int sign, const ComplexField& nu);

double omega_wp(const TangentField& u, const TangentField& v);
double omega_wp(const ComplexField& u, const ComplexField& v);
double omega_c(const CotangentTangent& t1, const CotangentTangent& t2);
// -Im int (1 - |mu_F|^2) e^phi F^*(nu_a) conj(F^*(nu_b)) over the source
double mess_pullback_wp(int sign, const TangentField& nu_a, const TangentField& nu_b, const InducedGaussPair& pair);

// Hermitian matrix of a real form w on vectors t_j: w(t_j, i t_k) - i w(t_j, t_k)
template <class Form>
Eigen::MatrixXcd hermitian_matrix(int n, Form w) {
    Eigen::MatrixXcd h(n, n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) h(j, k) = cplx(w(j, k, true), -w(j, k, false));
    return h;
}

struct SymplecticReport {
    Eigen::MatrixXcd omega_c, mess_side; // over (basis_plus, 0) then (0, basis_minus)
    double frobenius_rel = 0.0;          // unitarily invariant
    double entry_rel = 0.0;              // max entry gap over max entry
    bool pass = false;
};
// omega_C of the lifts against -Mess_+^* omega_WP + Mess_-^* omega_WP, the
// latter evaluated on the target grids
SymplecticReport verify_symplectomorphism(const InducedGaussPair& pair, const TangentBasis& basis_plus,
                                          const TangentBasis& basis_minus, double tol);

struct KahlerReport {
    // index 0: + section, 1: - section
    Eigen::MatrixXcd route_a[2];        // (i w(t_j, t_k) - w(t_j, i t_k)) / 2 with w = omega_C of the lifts
    Eigen::MatrixXcd route_a_target[2]; // same with w evaluated through the Mess pullback on the target
    Eigen::MatrixXcd route_b;           // 2 int e^phi (1 + |mu_F|^2) nu_j conj(nu_k)
    double rel_a_b[2]{}, rel_target_b[2]{};
    double sign_gap = 0.0; // max |route_a[0] + route_a[1]|
    double hermitian_gap = 0.0;
    bool pass = false;
};
KahlerReport verify_kahler_potential(const InducedGaussPair& pair, const TangentBasis& basis, double tol);

// max |a - s b| / max |b|
double entrywise_rel(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b, double s = 1.0);

} // namespace adsmax
