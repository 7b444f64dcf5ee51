#include "cauchy_transform.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

namespace adsmax {

ExtendedDisc::ExtendedDisc(GridPtr disc, int n_ring) : disc_(std::move(disc)) {
    if (!disc_->is_disc()) throw Error(ErrorCode::invalid_parameter, "ExtendedDisc needs a disc grid");
    const Grid& g = *disc_;
    ring_ = make_annulus_grid(n_ring, g.n_theta, g.R, 1.0);
    const Grid& a = *ring_;

    radii_ = g.r_nodes;
    for (int j = 1; j < a.n_r; ++j) radii_.push_back(a.r_nodes[j]);

    const int n_max = g.n_theta / 2;
    RVec x, w, ev, od;
    Eigen::MatrixXd bd_even, bd_odd, br;
    std::vector<RVec> rows_even, rows_odd, rows_ring;
    double lo = 0.0;
    for (size_t k = 0; k < radii_.size(); ++k) {
        double hi = radii_[k];
        Interval iv;
        iv.lo = lo;
        iv.hi = hi;
        iv.in_disc = k < static_cast<size_t>(g.n_r);
        int p;
        if (k == 0)
            p = 24 + n_max;
        else
            p = std::min(240, 20 + static_cast<int>(std::ceil(0.75 * n_max * std::log(hi / lo))));
        gauss_legendre(p, lo, hi, x, w);
        iv.q_begin = static_cast<int>(qs_.size());
        for (int q = 0; q < p; ++q) {
            qs_.push_back(x[q]);
            qw_.push_back(w[q]);
            ln_lo_.push_back(k == 0 ? 0.0 : std::log(x[q] / lo));
            ln_hi_.push_back(std::log(hi / x[q]));
            if (iv.in_disc) {
                g.radial_basis(x[q], ev, od);
                rows_even.push_back(ev);
                rows_odd.push_back(od);
                rows_ring.emplace_back();
            } else {
                a.radial_basis(x[q], ev, od);
                rows_ring.push_back(ev);
                rows_even.emplace_back();
                rows_odd.emplace_back();
            }
        }
        iv.q_end = static_cast<int>(qs_.size());
        intervals_.push_back(iv);
        lo = hi;
    }
    const int Q = static_cast<int>(qs_.size());
    basis_disc_[0] = Eigen::MatrixXd::Zero(Q, g.n_r);
    basis_disc_[1] = Eigen::MatrixXd::Zero(Q, g.n_r);
    basis_ring_ = Eigen::MatrixXd::Zero(Q, a.n_r);
    for (int q = 0; q < Q; ++q) {
        if (!rows_even[q].empty()) {
            for (int i = 0; i < g.n_r; ++i) {
                basis_disc_[0](q, i) = rows_even[q][i];
                basis_disc_[1](q, i) = rows_odd[q][i];
            }
        } else {
            for (int i = 0; i < a.n_r; ++i) basis_ring_(q, i) = rows_ring[q][i];
        }
    }
}

void ExtendedDisc::apply(const ComplexField& h_disc, const ComplexField& h_ring, ComplexField& c_disc,
                         ComplexField& c_ring, ComplexField& t_disc, ComplexField& t_ring, CVec* outer) const {
    check_same_grid(h_disc.grid, disc_);
    check_same_grid(h_ring.grid, ring_);
    const Grid& g = *disc_;
    const Grid& a = *ring_;
    const int nt = g.n_theta;
    const int half = nt / 2;
    const int nc = static_cast<int>(radii_.size());
    const int Q = static_cast<int>(qs_.size());

    ModeMatrix hd = to_modes(h_disc), hr = to_modes(h_ring);
    ModeMatrix cd = ModeMatrix::Zero(g.n_r, nt), cr = ModeMatrix::Zero(a.n_r, nt);
    ModeMatrix td = ModeMatrix::Zero(g.n_r, nt), tr = ModeMatrix::Zero(a.n_r, nt);
    if (outer) outer->assign(half, 0.0);

    Eigen::VectorXcd hq(Q), gval(nc), hnode(nc), hring_col(a.n_r), hdisc_col(g.n_r);
    CVec local(nc);
    for (int n = -half + 1; n <= half - 2; ++n) {
        const int m = n + 1;
        const int kin = mode_slot(m, nt);
        const int kout = mode_slot(n, nt);
        const int p = m & 1;
        hdisc_col = hd.col(kin);
        hring_col = hr.col(kin);
        // profile at the quadrature points, piece by piece
        for (const auto& iv : intervals_) {
            int len = iv.q_end - iv.q_begin;
            if (iv.in_disc)
                hq.segment(iv.q_begin, len) = basis_disc_[p].middleRows(iv.q_begin, len) * hdisc_col;
            else
                hq.segment(iv.q_begin, len) = basis_ring_.middleRows(iv.q_begin, len) * hring_col;
        }
        if (n >= 0) {
            // g(r) = -2 int_r^1 h(s) (r/s)^n ds
            gval[nc - 1] = 0.0;
            for (int k = nc - 1; k >= 1; --k) {
                const auto& iv = intervals_[k];
                cplx acc = 0.0;
                for (int q = iv.q_begin; q < iv.q_end; ++q) acc += qw_[q] * std::exp(-n * ln_lo_[q]) * hq[q];
                gval[k - 1] = std::pow(iv.lo / iv.hi, n) * gval[k] - 2.0 * acc;
            }
        } else {
            // g(r) = 2 int_0^r h(s) (s/r)^{|n|} ds
            const int an = -n;
            cplx prev = 0.0;
            for (int k = 0; k < nc; ++k) {
                const auto& iv = intervals_[k];
                cplx acc = 0.0;
                for (int q = iv.q_begin; q < iv.q_end; ++q) acc += qw_[q] * std::exp(-an * ln_hi_[q]) * hq[q];
                double carry = (k == 0) ? 0.0 : std::pow(iv.lo / iv.hi, an);
                gval[k] = carry * prev + 2.0 * acc;
                prev = gval[k];
            }
            if (outer) (*outer)[an - 1] = gval[nc - 1];
        }
        // T h at mode n-1 is n g/r + h_{n+1}, from g' - n g / r = 2 h_{n+1}
        const int kt = mode_slot(n - 1, nt);
        for (int i = 0; i < g.n_r; ++i) {
            cd(i, kout) = gval[i];
            if (n - 1 > -half) td(i, kt) = static_cast<double>(n) * gval[i] / radii_[i] + hdisc_col[i];
        }
        for (int j = 0; j < a.n_r; ++j) {
            int c = g.n_r - 1 + j;
            cr(j, kout) = gval[c];
            if (n - 1 > -half) tr(j, kt) = static_cast<double>(n) * gval[c] / radii_[c] + hring_col[j];
        }
    }
    c_disc = from_modes(disc_, cd);
    c_ring = from_modes(ring_, cr);
    t_disc = from_modes(disc_, td);
    t_ring = from_modes(ring_, tr);
}

std::shared_ptr<const ExtendedDisc> extended_disc(const GridPtr& disc) {
    static std::mutex mtx;
    static std::map<std::tuple<int, int, double>, std::shared_ptr<const ExtendedDisc>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto key = std::make_tuple(disc->n_r, disc->n_theta, disc->R);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    int n_ring = std::max(16, disc->n_r / 2);
    auto e = std::make_shared<const ExtendedDisc>(disc, n_ring);
    cache.emplace(key, e);
    return e;
}

} // namespace adsmax
