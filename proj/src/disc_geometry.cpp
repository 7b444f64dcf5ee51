#include "disc_geometry.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>

namespace adsmax {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Chebyshev points x_j = cos(pi j / N) and the differentiation matrix,
// diagonal by negative row sums.
void chebyshev(int N, RVec& x, Eigen::MatrixXd& D) {
    x.resize(N + 1);
    for (int j = 0; j <= N; ++j) x[j] = std::cos(kPi * j / N);
    // symmetric evaluation keeps x exactly odd around the middle
    for (int j = 0; j <= N; ++j) x[j] = std::sin(kPi * (N - 2.0 * j) / (2.0 * N));
    D = Eigen::MatrixXd::Zero(N + 1, N + 1);
    auto c = [&](int j) { return ((j == 0 || j == N) ? 2.0 : 1.0) * ((j % 2) ? -1.0 : 1.0); };
    for (int i = 0; i <= N; ++i) {
        double s = 0.0;
        for (int j = 0; j <= N; ++j) {
            if (i == j) continue;
            D(i, j) = c(i) / c(j) / (x[i] - x[j]);
            s += D(i, j);
        }
        D(i, i) = -s;
    }
}

// Second derivative matrix by the recursion D2_ij = 2 D_ij (D_ii - 1/(x_i - x_j)),
// diagonal by negative row sums; more accurate than D * D near the ends.
Eigen::MatrixXd second_derivative(const RVec& x, const Eigen::MatrixXd& D) {
    const int n = static_cast<int>(x.size());
    Eigen::MatrixXd D2 = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            D2(i, j) = 2.0 * D(i, j) * (D(i, i) - 1.0 / (x[i] - x[j]));
            s += D2(i, j);
        }
        D2(i, i) = -s;
    }
    return D2;
}

RVec chebyshev_bary_weights(int N) {
    RVec w(N + 1);
    for (int j = 0; j <= N; ++j) {
        w[j] = (j % 2) ? -1.0 : 1.0;
        if (j == 0 || j == N) w[j] *= 0.5;
    }
    return w;
}

struct FftPlans {
    fftw_plan fwd;
    fftw_plan bwd;
};

std::mutex g_plan_mutex;

FftPlans& plans_for(int n_theta, int howmany) {
    static std::map<std::pair<int, int>, FftPlans> cache;
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    auto key = std::make_pair(n_theta, howmany);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::vector<fftw_complex> buf(static_cast<size_t>(n_theta) * howmany);
    int n[1] = {n_theta};
    FftPlans p;
    p.fwd = fftw_plan_many_dft(1, n, howmany, buf.data(), nullptr, 1, n_theta, buf.data(), nullptr, 1,
                               n_theta, FFTW_FORWARD, FFTW_ESTIMATE);
    p.bwd = fftw_plan_many_dft(1, n, howmany, buf.data(), nullptr, 1, n_theta, buf.data(), nullptr, 1,
                               n_theta, FFTW_BACKWARD, FFTW_ESTIMATE);
    return cache.emplace(key, p).first->second;
}

void finish_grid(Grid& g) {
    g.theta_nodes.resize(g.n_theta);
    for (int k = 0; k < g.n_theta; ++k) g.theta_nodes[k] = 2.0 * kPi * k / g.n_theta;

    // radial weights: exact integrals of the (even) radial basis times r
    double a = g.is_disc() ? 0.0 : g.r_in;
    RVec xq, wq;
    gauss_legendre(g.n_r + 24, a, g.R, xq, wq);
    g.radial_weights.assign(g.n_r, 0.0);
    RVec ev, od;
    for (size_t q = 0; q < xq.size(); ++q) {
        g.radial_basis(xq[q], ev, od);
        for (int i = 0; i < g.n_r; ++i) g.radial_weights[i] += wq[q] * xq[q] * ev[i];
    }
    g.quad_weights.resize(g.size());
    double dth = 2.0 * kPi / g.n_theta;
    for (int i = 0; i < g.n_r; ++i)
        for (int k = 0; k < g.n_theta; ++k) g.quad_weights[i * g.n_theta + k] = g.radial_weights[i] * dth;
}

} // namespace

const char* error_name(ErrorCode c) {
    switch (c) {
    case ErrorCode::ok: return "ok";
    case ErrorCode::invalid_parameter: return "invalid-parameter";
    case ErrorCode::grid_mismatch: return "grid-mismatch";
    case ErrorCode::no_convergence: return "no-convergence";
    case ErrorCode::norm_too_large: return "norm-too-large";
    case ErrorCode::inverse_interpolation_failure: return "inverse-interpolation-failure";
    case ErrorCode::vanishing_derivative: return "vanishing-derivative";
    case ErrorCode::newton_divergence: return "newton-divergence";
    case ErrorCode::norm_violation: return "norm-violation";
    case ErrorCode::non_unique_candidate: return "non-unique-candidate";
    case ErrorCode::config_parse: return "config-parse-error";
    case ErrorCode::scenario_failure: return "scenario-failure";
    case ErrorCode::internal: return "internal";
    }
    return "unknown";
}

void gauss_legendre(int n, double a, double b, RVec& x, RVec& w) {
    x.resize(n);
    w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double t = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) { p1 = t; p0 = 1.0; }
            dp = n * (t * p1 - p0) / (t * t - 1.0);
            double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-16) break;
        }
        double p0 = 1.0, p1 = t;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = (n == 1) ? 1.0 : n * (t * p1 - p0) / (t * t - 1.0);
        double wt = 2.0 / ((1.0 - t * t) * dp * dp);
        double h = 0.5 * (b - a), m = 0.5 * (b + a);
        x[i] = m - h * t;
        x[n - 1 - i] = m + h * t;
        w[i] = w[n - 1 - i] = h * wt;
    }
}

void Grid::radial_basis(double s, RVec& even, RVec& odd) const {
    even.assign(n_r, 0.0);
    odd.assign(n_r, 0.0);
    const int M = static_cast<int>(bary_x.size());
    int hit = -1;
    for (int j = 0; j < M; ++j)
        if (s == bary_x[j]) { hit = j; break; }
    auto add = [&](int j, double l) {
        int i = bary_index[j];
        even[i] += l;
        odd[i] += bary_mirror[j] ? -l : l;
    };
    if (hit >= 0) {
        add(hit, 1.0);
        return;
    }
    double den = 0.0;
    thread_local RVec t;
    t.resize(M);
    for (int j = 0; j < M; ++j) {
        t[j] = bary_w[j] / (s - bary_x[j]);
        den += t[j];
    }
    for (int j = 0; j < M; ++j) add(j, t[j] / den);
}

GridPtr make_grid(int n_r, int n_theta, double R) {
    if (n_r < 4 || n_theta < 8 || n_theta % 2 != 0 || !(R > 0.0 && R < 1.0))
        throw Error(ErrorCode::invalid_parameter, "make_grid: need n_r >= 4, n_theta >= 8 even, 0 < R < 1");
    auto g = std::make_shared<Grid>();
    g->kind = Grid::Kind::disc;
    g->n_r = n_r;
    g->n_theta = n_theta;
    g->r_in = 0.0;
    g->R = R;
    const int N = 2 * n_r - 1;
    RVec x;
    Eigen::MatrixXd D;
    chebyshev(N, x, D);
    Eigen::MatrixXd DD = second_derivative(x, D);
    // stored index i <-> full index j = n_r - 1 - i (x_j > 0)
    auto full = [&](int i) { return n_r - 1 - i; };
    g->r_nodes.resize(n_r);
    for (int i = 0; i < n_r; ++i) g->r_nodes[i] = R * x[full(i)];
    g->r_nodes[n_r - 1] = R;
    for (int p = 0; p < 2; ++p) {
        double sgn = p ? -1.0 : 1.0;
        g->D1[p].resize(n_r, n_r);
        g->D2[p].resize(n_r, n_r);
        for (int i = 0; i < n_r; ++i)
            for (int k = 0; k < n_r; ++k) {
                int ji = full(i), jk = full(k);
                g->D1[p](i, k) = (D(ji, jk) + sgn * D(ji, N - jk)) / R;
                g->D2[p](i, k) = (DD(ji, jk) + sgn * DD(ji, N - jk)) / (R * R);
            }
    }
    g->bary_x.resize(N + 1);
    g->bary_w = chebyshev_bary_weights(N);
    g->bary_index.resize(N + 1);
    g->bary_mirror.resize(N + 1);
    for (int j = 0; j <= N; ++j) {
        g->bary_x[j] = R * x[j];
        if (j <= n_r - 1) {
            g->bary_index[j] = n_r - 1 - j;
            g->bary_mirror[j] = 0;
        } else {
            g->bary_index[j] = n_r - 1 - (N - j);
            g->bary_mirror[j] = 1;
        }
    }
    g->bary_x[0] = R;
    finish_grid(*g);
    return g;
}

GridPtr make_annulus_grid(int n_r, int n_theta, double r_in, double r_out) {
    if (n_r < 4 || n_theta < 8 || n_theta % 2 != 0 || !(r_in > 0.0 && r_out > r_in))
        throw Error(ErrorCode::invalid_parameter, "make_annulus_grid: need n_r >= 4, n_theta >= 8 even, 0 < r_in < r_out");
    auto g = std::make_shared<Grid>();
    g->kind = Grid::Kind::annulus;
    g->n_r = n_r;
    g->n_theta = n_theta;
    g->r_in = r_in;
    g->R = r_out;
    const int N = n_r - 1;
    RVec x;
    Eigen::MatrixXd D;
    chebyshev(N, x, D);
    const double h = 0.5 * (r_out - r_in);
    g->r_nodes.resize(n_r);
    for (int i = 0; i < n_r; ++i) g->r_nodes[i] = r_in + h * (x[N - i] + 1.0);
    g->r_nodes[0] = r_in;
    g->r_nodes[n_r - 1] = r_out;
    Eigen::MatrixXd Ds(n_r, n_r);
    for (int i = 0; i < n_r; ++i)
        for (int k = 0; k < n_r; ++k) Ds(i, k) = D(N - i, N - k) / h;
    Eigen::MatrixXd DDs = second_derivative(x, D);
    {
        Eigen::MatrixXd tmp(n_r, n_r);
        for (int i = 0; i < n_r; ++i)
            for (int k = 0; k < n_r; ++k) tmp(i, k) = DDs(N - i, N - k) / (h * h);
        DDs = tmp;
    }
    for (int p = 0; p < 2; ++p) {
        g->D1[p] = Ds;
        g->D2[p] = DDs;
    }
    g->bary_x = g->r_nodes;
    RVec bw = chebyshev_bary_weights(N);
    g->bary_w.resize(n_r);
    for (int i = 0; i < n_r; ++i) g->bary_w[i] = bw[N - i];
    g->bary_index.resize(n_r);
    g->bary_mirror.assign(n_r, 0);
    for (int i = 0; i < n_r; ++i) g->bary_index[i] = i;
    finish_grid(*g);
    return g;
}

bool same_grid(const Grid& a, const Grid& b) {
    return a.kind == b.kind && a.n_r == b.n_r && a.n_theta == b.n_theta && a.r_in == b.r_in && a.R == b.R;
}

void check_same_grid(const GridPtr& a, const GridPtr& b) {
    if (!a || !b || (a != b && !same_grid(*a, *b)))
        throw Error(ErrorCode::grid_mismatch, "fields live on different grids");
}

ComplexField::ComplexField(GridPtr g, CVec v) : grid(std::move(g)), values(std::move(v)) {
    if (static_cast<int>(values.size()) != grid->size())
        throw Error(ErrorCode::grid_mismatch, "field length does not match grid");
}

RealField::RealField(GridPtr g, RVec v) : grid(std::move(g)), values(std::move(v)) {
    if (static_cast<int>(values.size()) != grid->size())
        throw Error(ErrorCode::grid_mismatch, "field length does not match grid");
}

ComplexField sample(GridPtr g, const std::function<cplx(cplx)>& f) {
    ComplexField out(g);
    for (int i = 0; i < g->size(); ++i) out[i] = f(g->z(i));
    return out;
}

RealField sample_real(GridPtr g, const std::function<double(cplx)>& f) {
    RealField out(g);
    for (int i = 0; i < g->size(); ++i) out[i] = f(g->z(i));
    return out;
}

ComplexField to_complex(const RealField& f) {
    ComplexField out(f.grid);
    for (int i = 0; i < f.size(); ++i) out[i] = f[i];
    return out;
}

ComplexField conj(const ComplexField& f) {
    ComplexField out(f.grid);
    for (int i = 0; i < f.size(); ++i) out[i] = std::conj(f[i]);
    return out;
}

double sup_abs(const ComplexField& f) {
    double m = 0.0;
    for (auto& v : f.values) m = std::max(m, std::abs(v));
    return m;
}

double sup_abs(const RealField& f) {
    double m = 0.0;
    for (auto v : f.values) m = std::max(m, std::abs(v));
    return m;
}

double sup_abs_diff(const ComplexField& a, const ComplexField& b) {
    check_same_grid(a.grid, b.grid);
    double m = 0.0;
    for (int i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

int mode_number(int k, int n_theta) { return k < n_theta / 2 ? k : k - n_theta; }

int mode_slot(int m, int n_theta) {
    if (m < -n_theta / 2 || m >= n_theta / 2) return -1;
    return m >= 0 ? m : m + n_theta;
}

ModeMatrix to_modes(const ComplexField& f) {
    const Grid& g = *f.grid;
    ModeMatrix M(g.n_r, g.n_theta);
    for (int i = 0; i < g.size(); ++i) M.data()[i] = f[i];
    auto& p = plans_for(g.n_theta, g.n_r);
    fftw_execute_dft(p.fwd, reinterpret_cast<fftw_complex*>(M.data()), reinterpret_cast<fftw_complex*>(M.data()));
    M /= static_cast<double>(g.n_theta);
    return M;
}

ComplexField from_modes(GridPtr gp, const ModeMatrix& modes) {
    const Grid& g = *gp;
    ModeMatrix M = modes;
    auto& p = plans_for(g.n_theta, g.n_r);
    fftw_execute_dft(p.bwd, reinterpret_cast<fftw_complex*>(M.data()), reinterpret_cast<fftw_complex*>(M.data()));
    ComplexField out(gp);
    for (int i = 0; i < g.size(); ++i) out[i] = M.data()[i];
    return out;
}

void fft_inplace(CVec& v, bool forward) {
    auto& p = plans_for(static_cast<int>(v.size()), 1);
    auto* d = reinterpret_cast<fftw_complex*>(v.data());
    fftw_execute_dft(forward ? p.fwd : p.bwd, d, d);
}

namespace {

// Apply a radial operator per angular mode and shift the mode number.
// op(m, profile) returns the new profile for mode m, placed at m + shift.
template <class Op>
ComplexField mode_map(const ComplexField& f, int shift, Op op) {
    const Grid& g = *f.grid;
    ModeMatrix in = to_modes(f);
    ModeMatrix out = ModeMatrix::Zero(g.n_r, g.n_theta);
    Eigen::VectorXcd prof(g.n_r);
    for (int k = 0; k < g.n_theta; ++k) {
        int m = mode_number(k, g.n_theta);
        if (m == -g.n_theta / 2) continue; // Nyquist carries no derivative
        int slot = mode_slot(m + shift, g.n_theta);
        if (slot < 0 || m + shift == -g.n_theta / 2) continue;
        prof = in.col(k);
        out.col(slot) = op(m, prof);
    }
    return from_modes(f.grid, out);
}

Eigen::VectorXd inv_r(const Grid& g) {
    Eigen::VectorXd v(g.n_r);
    for (int i = 0; i < g.n_r; ++i) v[i] = 1.0 / g.r_nodes[i];
    return v;
}

} // namespace

ComplexField d_z(const ComplexField& f) {
    const Grid& g = *f.grid;
    Eigen::VectorXd ir = inv_r(g);
    return mode_map(f, -1, [&](int m, const Eigen::VectorXcd& c) -> Eigen::VectorXcd {
        int p = m & 1;
        Eigen::VectorXcd dr = g.D1[p] * c;
        return 0.5 * (dr + (static_cast<double>(m) * ir).cwiseProduct(c));
    });
}

ComplexField d_zbar(const ComplexField& f) { return conj(d_z(conj(f))); }

ComplexField d_zzbar(const ComplexField& f) {
    const Grid& g = *f.grid;
    Eigen::VectorXd ir = inv_r(g);
    return mode_map(f, 0, [&](int m, const Eigen::VectorXcd& c) -> Eigen::VectorXcd {
        int p = m & 1;
        Eigen::VectorXcd v = g.D2[p] * c + ir.cwiseProduct(g.D1[p] * c) -
                             (static_cast<double>(m) * m * ir.cwiseProduct(ir)).cwiseProduct(c);
        return 0.25 * v;
    });
}

ComplexField d_r(const ComplexField& f) {
    const Grid& g = *f.grid;
    return mode_map(f, 0, [&](int m, const Eigen::VectorXcd& c) -> Eigen::VectorXcd { return g.D1[m & 1] * c; });
}

cplx integrate(const ComplexField& f) {
    cplx s = 0.0;
    const RVec& w = f.grid->quad_weights;
    for (int i = 0; i < f.size(); ++i) s += w[i] * f[i];
    return s;
}

double integrate(const RealField& f) {
    double s = 0.0;
    const RVec& w = f.grid->quad_weights;
    for (int i = 0; i < f.size(); ++i) s += w[i] * f[i];
    return s;
}

Interpolator::Interpolator(const ComplexField& f) : grid_(f.grid) { modes_.push_back(to_modes(f)); }

Interpolator::Interpolator(const std::vector<ComplexField>& fields) {
    if (fields.empty()) throw Error(ErrorCode::invalid_parameter, "Interpolator needs at least one field");
    grid_ = fields[0].grid;
    for (const auto& f : fields) {
        check_same_grid(grid_, f.grid);
        modes_.push_back(to_modes(f));
    }
}

void Interpolator::eval(cplx z, cplx* out) const {
    const Grid& g = *grid_;
    const int nf = count();
    const int half = g.n_theta / 2;
    double r = std::abs(z);
    thread_local RVec ev, od;
    g.radial_basis(r, ev, od);
    for (int f = 0; f < nf; ++f) out[f] = 0.0;
    if (g.is_disc() && r == 0.0) {
        // only mode 0 survives at the centre
        for (int f = 0; f < nf; ++f)
            for (int i = 0; i < g.n_r; ++i) out[f] += ev[i] * modes_[f](i, 0);
        return;
    }
    cplx e1 = z / r;
    thread_local CVec phase;
    phase.assign(g.n_theta, 0.0);
    // Nyquist column is left out, matching the derivative operators
    cplx ep = 1.0, em = 1.0;
    for (int m = 0; m < half; ++m) {
        phase[m] = ep;
        if (m > 0) phase[g.n_theta - m] = em;
        ep *= e1;
        em *= std::conj(e1);
    }
    for (int i = 0; i < g.n_r; ++i) {
        double be = ev[i], bo = od[i];
        if (be == 0.0 && bo == 0.0) continue;
        for (int f = 0; f < nf; ++f) {
            const cplx* row = modes_[f].data() + static_cast<size_t>(i) * g.n_theta;
            cplx se = 0.0, so = 0.0;
            for (int k = 0; k < g.n_theta; ++k) {
                if (k == half) continue;
                int m = k < half ? k : g.n_theta - k;
                if (m & 1)
                    so += row[k] * phase[k];
                else
                    se += row[k] * phase[k];
            }
            out[f] += be * se + bo * so;
        }
    }
}

cplx Interpolator::operator()(cplx z) const {
    thread_local CVec out;
    out.resize(count());
    eval(z, out.data());
    return out[0];
}

CVec Interpolator::operator()(const CVec& pts) const {
    CVec out(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) out[i] = (*this)(pts[i]);
    return out;
}

double hyperbolic_density_at(cplx z) {
    double d = 1.0 - std::norm(z);
    return 4.0 / (d * d);
}

RealField hyperbolic_density(GridPtr g) {
    // from the ring radius so that every ring is exactly constant
    RealField out(g);
    for (int i = 0; i < g->size(); ++i) out[i] = hyperbolic_density_at(g->r(i));
    return out;
}

RealField hyperbolic_log_density(GridPtr g) {
    RealField out(g);
    for (int i = 0; i < g->size(); ++i) {
        double r = g->r(i);
        out[i] = std::log(4.0) - 2.0 * std::log1p(-r * r);
    }
    return out;
}

cplx QuadDifferential::operator()(cplx z) const {
    cplx s = 0.0;
    for (int k = static_cast<int>(coeffs.size()) - 1; k >= 0; --k) s = s * z + coeffs[k];
    return s;
}

cplx QuadDifferential::derivative(cplx z) const {
    cplx s = 0.0;
    for (int k = static_cast<int>(coeffs.size()) - 1; k >= 1; --k) s = s * z + static_cast<double>(k) * coeffs[k];
    return s;
}

ComplexField QuadDifferential::sample(GridPtr g) const {
    return adsmax::sample(g, [this](cplx z) { return (*this)(z); });
}

QuadDifferential QuadDifferential::scaled(cplx s) const {
    QuadDifferential q = *this;
    for (auto& c : q.coeffs) c *= s;
    return q;
}

namespace {
cplx poly_eval(const CVec& p, cplx z) {
    cplx s = 0.0;
    for (int k = static_cast<int>(p.size()) - 1; k >= 0; --k) s = s * z + p[k];
    return s;
}
} // namespace

cplx TangentField::at(cplx z) const {
    double d = 1.0 - std::norm(z);
    return 0.25 * d * d * std::conj(poly_eval(poly, z));
}

TangentField TangentField::scaled(cplx s) const {
    // s * e^{-psi} conj(q) = e^{-psi} conj(conj(s) q)
    TangentField t = *this;
    for (auto& c : t.poly) c *= std::conj(s);
    for (auto& v : t.field.values) v *= s;
    return t;
}

TangentField make_tangent(GridPtr g, CVec poly) {
    if (poly.empty() || static_cast<int>(poly.size()) > kMaxDegree + 1)
        throw Error(ErrorCode::invalid_parameter, "tangent polynomial degree must be in [0, 8]");
    TangentField t;
    t.poly = std::move(poly);
    t.field = ComplexField(g);
    for (int i = 0; i < g->size(); ++i) t.field[i] = t.at(g->z(i));
    return t;
}

TangentField combine(const TangentField& a, cplx sa, const TangentField& b, cplx sb) {
    check_same_grid(a.field.grid, b.field.grid);
    TangentField t;
    size_t n = std::max(a.poly.size(), b.poly.size());
    t.poly.assign(n, 0.0);
    for (size_t k = 0; k < a.poly.size(); ++k) t.poly[k] += std::conj(sa) * a.poly[k];
    for (size_t k = 0; k < b.poly.size(); ++k) t.poly[k] += std::conj(sb) * b.poly[k];
    t.field = ComplexField(a.field.grid);
    for (int i = 0; i < t.field.size(); ++i) t.field[i] = sa * a.field[i] + sb * b.field[i];
    return t;
}

cplx wp_inner(const ComplexField& u, const ComplexField& v) {
    check_same_grid(u.grid, v.grid);
    const Grid& g = *u.grid;
    cplx s = 0.0;
    for (int i = 0; i < u.size(); ++i) s += g.quad_weights[i] * hyperbolic_density_at(g.z(i)) * (u[i] * std::conj(v[i]));
    return s;
}

cplx wp_inner(const TangentField& u, const TangentField& v) { return wp_inner(u.field, v.field); }

} // namespace adsmax
