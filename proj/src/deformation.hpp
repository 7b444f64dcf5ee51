#pragma once

#include <array>
#include <string>

#include "induced_gauss_maps.hpp"

namespace adsmax {

enum class LieQuantity { mu_F, Phi, antihol_density, hol_density, mu_H_dot };
constexpr int kLieQuantityCount = 5;
const char* lie_quantity_name(LieQuantity q);

// F^*(nu) = nu(F) conj(F_z) / F_z at the grid nodes of F
ComplexField pull_back(const TangentField& nu, const QCMap& F);
ComplexField pull_back(const BeltramiCoefficient& nu, const QCMap& F);

BeltramiCoefficient scaled(const BeltramiCoefficient& nu, cplx s);

// Maps solving w_zbar = (+-eps) nu w_z for each eps, three-point normalized.
struct SolvedLadder {
    RVec epsilons;
    std::vector<QCMapPtr> plus, minus;
};
SolvedLadder solve_ladder(const BeltramiCoefficient& nu, const RVec& epsilons, double tol);

// Quantities of F^eps = h o F o f^{-1}, pulled back by f, at the nodes of F;
// mu_H_dot slot holds the coefficient of h o F. Null f or h is the identity.
std::array<ComplexField, kLieQuantityCount> pulled_quantities(const QCMap& F, const QCMap* f, const QCMap* h);

// Central differences per eps, one Richardson step on the two smallest, and
// the observed order log(|D1 - D2| / |D2 - D3|) / log(eps1 / eps2).
struct LieLadder {
    RVec epsilons;
    std::array<ComplexField, kLieQuantityCount> fd;
    std::array<double, kLieQuantityCount> order{};
    ComplexField h_dot, h_dot_u; // on the target grid, empty without h
};
LieLadder lie_fd(const QCMap& F, const SolvedLadder* f, const SolvedLadder* h);

// Richardson value and order of a ladder of central differences
void extrapolate(const RVec& eps, const std::vector<ComplexField>& D, ComplexField& value, double& order);

// Closed forms. nu_f is the source coefficient, pulled = F^*(nu_h).
ComplexField lie_mu_F_closed(const ComplexField& nu_f, const ComplexField& pulled, const ComplexField& mu_F);
ComplexField mu_H_dot_closed(const ComplexField& pulled, const ComplexField& mu_F);
ComplexField mu_H_dot_from_lie(const ComplexField& nu_f, const ComplexField& lie_mu_F, const ComplexField& mu_F);
ComplexField lie_hopf_closed(const ComplexField& nu_f, const ComplexField& pulled, const ComplexField& mu_F,
                             const RealField& phi);
// hopf is the Hopf differential of F; the same expression serves both densities
ComplexField lie_energy_density_closed(const ComplexField& nu_f, const ComplexField& pulled, const ComplexField& hopf);

struct PMVariation {
    ComplexField delta_mu, delta_Phi;
};
// a = F_+^*(nu_+), b = F_-^*(nu_-), mu_F = mu_{F+}
PMVariation pm_variations(const ComplexField& a, const ComplexField& b, const ComplexField& mu_F, const RealField& phi);
PMVariation pm_variations(const TangentField* nu_plus, const TangentField* nu_minus, const InducedGaussPair& pair);

// 2 int e^phi nu conj(mu_F), mu_F of F_sign, and 2 int e^phi (1 + |mu_F|^2) nu conj(mu)
cplx energy_first_variation(const ComplexField& nu, const InducedGaussPair& pair, int sign = +1);
cplx energy_second_variation(const ComplexField& nu, const ComplexField& mu, const InducedGaussPair& pair);

// sup |fd - closed| / sup |closed|; sup |fd| when closed vanishes
double relative_sup_error(const ComplexField& fd, const ComplexField& closed);

struct LieReport {
    std::string quantity;
    ComplexField fd_value, closed_value;
    double rel_error = 0.0;
    double order_estimate = 0.0;
};

struct LieOptions {
    RVec epsilons{0.02, 0.01, 0.005};
    double tol = 1e-11;
};

// Family with source coefficient nu_f and target coefficient nu_h on F_sign.
// Reports mu_F, Phi, antihol_density, hol_density and mu_H_dot.
std::vector<LieReport> lie_checks(const InducedGaussPair& pair, int sign, const TangentField* nu_f,
                                  const TangentField* nu_h, const LieOptions& opt = {});

// sup |2 Re(psi_u hdot + hdot_u)| / sup |hdot_u| on the target grid
double ahlfors_defect(const LieLadder& L);

// Two-sided families with f solved from delta_mu. Reports delta_Phi (fd of
// the Hopf variation of F_+), delta_mu (source coefficient recovered from the
// nu_f = 0 families by requiring mu_{F+} + mu_{F-} to stay zero), and the
// compatibility residuals of mu_{F+} + mu_{F-} and Phi_+ + Phi_-.
std::vector<LieReport> pm_checks(const InducedGaussPair& pair, const TangentField* nu_plus,
                                 const TangentField* nu_minus, const LieOptions& opt = {});

// One-sided family on the section generated by nu on target `sign`:
// holomorphic derivative of 2E against energy_first_variation, and the
// antiholomorphic derivative of e^phi nu_s conj(mu_F) against the Hessian
// integrand.
struct EnergyVariationCheck {
    cplx fd_first = 0.0, closed_first = 0.0;
    double first_rel_error = 0.0;
    LieReport second; // pointwise
};
EnergyVariationCheck energy_variation_check(const InducedGaussPair& pair, int sign, const TangentField& nu_target,
                                            const TangentField& nu_source, const LieOptions& opt = {});

} // namespace adsmax
