#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"

namespace adsmax {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;
using RVec = std::vector<double>;
using ModeMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Polar tensor grid. A disc grid covers |z| <= R with r = 0 excluded; an
// annulus grid covers r_in <= |z| <= r_out. Node index = ir * n_theta + it,
// radii ascending.
struct Grid {
    enum class Kind { disc, annulus };

    Kind kind = Kind::disc;
    int n_r = 0;
    int n_theta = 0;
    double r_in = 0.0;
    double R = 0.0; // outer radius
    RVec r_nodes;
    RVec theta_nodes;
    RVec radial_weights; // integral of the radial basis times r dr
    RVec quad_weights;   // area weights, n_r * n_theta

    // Radial derivative matrices acting on mode profiles, indexed by the
    // parity of the angular mode (disc) or shared (annulus).
    Eigen::MatrixXd D1[2];
    Eigen::MatrixXd D2[2];

    // barycentric data for radial interpolation
    RVec bary_x; // full node set (disc: both signs)
    RVec bary_w;
    std::vector<int> bary_index;  // which stored radius each full node maps to
    std::vector<int> bary_mirror; // 1 if full node is the reflected copy

    int size() const { return n_r * n_theta; }
    bool is_disc() const { return kind == Kind::disc; }
    double r(int node) const { return r_nodes[node / n_theta]; }
    double theta(int node) const { return theta_nodes[node % n_theta]; }
    cplx z(int node) const { return std::polar(r(node), theta(node)); }

    // Radial basis values at radius s for both mode parities (disc) so that
    // f_m(s) = sum_i basis[p][i] * f_m(r_i).
    void radial_basis(double s, RVec& even, RVec& odd) const;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr make_grid(int n_r, int n_theta, double R);
GridPtr make_annulus_grid(int n_r, int n_theta, double r_in, double r_out);

bool same_grid(const Grid& a, const Grid& b);

struct ComplexField {
    GridPtr grid;
    CVec values;

    ComplexField() = default;
    ComplexField(GridPtr g) : grid(std::move(g)), values(grid->size(), cplx(0.0)) {}
    ComplexField(GridPtr g, CVec v);

    int size() const { return static_cast<int>(values.size()); }
    cplx& operator[](int i) { return values[i]; }
    const cplx& operator[](int i) const { return values[i]; }
};

struct RealField {
    GridPtr grid;
    RVec values;

    RealField() = default;
    RealField(GridPtr g) : grid(std::move(g)), values(grid->size(), 0.0) {}
    RealField(GridPtr g, RVec v);

    int size() const { return static_cast<int>(values.size()); }
    double& operator[](int i) { return values[i]; }
    const double& operator[](int i) const { return values[i]; }
};

ComplexField sample(GridPtr g, const std::function<cplx(cplx)>& f);
RealField sample_real(GridPtr g, const std::function<double(cplx)>& f);
ComplexField to_complex(const RealField& f);
ComplexField conj(const ComplexField& f);
double sup_abs(const ComplexField& f);
double sup_abs(const RealField& f);
double sup_abs_diff(const ComplexField& a, const ComplexField& b);
void check_same_grid(const GridPtr& a, const GridPtr& b);

// Angular Fourier coefficients per ring: modes(ir, k), mode number
// m = k for k < n_theta/2, k - n_theta otherwise.
ModeMatrix to_modes(const ComplexField& f);
ComplexField from_modes(GridPtr g, const ModeMatrix& modes);
int mode_number(int k, int n_theta);
int mode_slot(int m, int n_theta); // -1 if out of range

ComplexField d_z(const ComplexField& f);
ComplexField d_zbar(const ComplexField& f);
// f_{z zbar} = Laplacian / 4
ComplexField d_zzbar(const ComplexField& f);
ComplexField d_r(const ComplexField& f);

cplx integrate(const ComplexField& f);
double integrate(const RealField& f);

// Spectral interpolation of one or more fields at arbitrary points of the
// grid domain. eval() fills one value per field.
class Interpolator {
public:
    explicit Interpolator(const ComplexField& f);
    explicit Interpolator(const std::vector<ComplexField>& fields);
    cplx operator()(cplx z) const;
    CVec operator()(const CVec& pts) const;
    void eval(cplx z, cplx* out) const;
    const Grid& grid() const { return *grid_; }
    int count() const { return static_cast<int>(modes_.size()); }

private:
    GridPtr grid_;
    std::vector<ModeMatrix> modes_;
};

// e^psi = 4 / (1 - |z|^2)^2 and psi itself
double hyperbolic_density_at(cplx z);
RealField hyperbolic_density(GridPtr g);
RealField hyperbolic_log_density(GridPtr g);

struct QuadDifferential {
    CVec coeffs; // Phi(z) = sum c_k z^k

    cplx operator()(cplx z) const;
    cplx derivative(cplx z) const;
    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    ComplexField sample(GridPtr g) const;
    QuadDifferential scaled(cplx s) const;
};

constexpr int kMaxDegree = 8;

// Harmonic Beltrami differential nu = e^{-psi} conj(q), q polynomial.
struct TangentField {
    CVec poly;
    ComplexField field;

    cplx at(cplx z) const; // analytic value anywhere in the unit disc
    TangentField scaled(cplx s) const;
};

TangentField make_tangent(GridPtr g, CVec poly);
TangentField combine(const TangentField& a, cplx sa, const TangentField& b, cplx sb);
cplx wp_inner(const TangentField& u, const TangentField& v);
cplx wp_inner(const ComplexField& u, const ComplexField& v);

// In-place DFT of length v.size(); forward uses e^{-ikx} and no scaling.
void fft_inplace(CVec& v, bool forward);

// Gauss-Legendre nodes and weights on [a, b]
void gauss_legendre(int n, double a, double b, RVec& x, RVec& w);

} // namespace adsmax
