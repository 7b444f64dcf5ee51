#include "conformal_map.hpp"

#include <cmath>

namespace adsmax {

namespace {
constexpr double kTwoPi = 6.28318530717958647692;
}

DiscRiemannMap DiscRiemannMap::from_curve(const Curve& curve, int M, double tol, int max_iter) {
    if (M < 16 || M % 2) throw Error(ErrorCode::invalid_parameter, "Riemann map needs an even sample count >= 16");
    RVec t(M), S(M), v(M);
    for (int j = 0; j < M; ++j) t[j] = S[j] = kTwoPi * j / M;
    CVec buf(M);
    cplx val, der;
    DiscRiemannMap out;
    double change = 1.0;
    int it = 0;
    for (; it < max_iter && change > tol; ++it) {
        for (int j = 0; j < M; ++j) {
            curve(S[j], val, der);
            buf[j] = std::log(std::abs(val));
        }
        // conjugate function: multiplier -i sign(k)
        fft_inplace(buf, true);
        for (int k = 0; k < M; ++k) {
            int m = k < M / 2 ? k : k - M;
            double sg = (m > 0) ? 1.0 : (m < 0 ? -1.0 : 0.0);
            if (k == M / 2) sg = 0.0;
            buf[k] *= cplx(0.0, -sg) / static_cast<double>(M);
        }
        fft_inplace(buf, false);
        for (int j = 0; j < M; ++j) v[j] = buf[j].real();

        change = 0.0;
        for (int j = 0; j < M; ++j) {
            double target = t[j] + v[j];
            double s = S[j];
            for (int nt = 0; nt < 50; ++nt) {
                curve(s, val, der);
                double delta = std::arg(val * std::polar(1.0, -s));
                double F = s + delta - target;
                double dF = (der / val).imag();
                if (!(dF > 0.0)) throw Error(ErrorCode::no_convergence, "curve is not star-shaped about the origin");
                double step = F / dF;
                s -= step;
                if (std::abs(step) < 1e-15) break;
            }
            change = std::max(change, std::abs(s - S[j]));
            S[j] = s;
        }
    }
    if (change > tol) throw Error(ErrorCode::no_convergence, "Theodorsen iteration did not converge");
    out.iterations_ = it;

    for (int j = 0; j < M; ++j) {
        curve(S[j], val, der);
        buf[j] = val;
    }
    fft_inplace(buf, true);
    out.coeffs_.assign(M / 2, 0.0);
    double scale = 0.0;
    for (int k = 0; k < M / 2; ++k) {
        out.coeffs_[k] = buf[k] / static_cast<double>(M);
        scale = std::max(scale, std::abs(out.coeffs_[k]));
    }
    out.coeffs_[0] = 0.0;
    // trim the tail below roundoff
    while (out.coeffs_.size() > 2 && std::abs(out.coeffs_.back()) < 1e-17 * scale) out.coeffs_.pop_back();
    return out;
}

cplx DiscRiemannMap::operator()(cplx z) const {
    cplx s = 0.0;
    for (int k = static_cast<int>(coeffs_.size()) - 1; k >= 0; --k) s = s * z + coeffs_[k];
    return s;
}

cplx DiscRiemannMap::derivative(cplx z) const {
    cplx s = 0.0;
    for (int k = static_cast<int>(coeffs_.size()) - 1; k >= 1; --k) s = s * z + static_cast<double>(k) * coeffs_[k];
    return s;
}

cplx DiscRiemannMap::inverse(cplx w, cplx* dinv) const {
    cplx z = w / coeffs_[1];
    for (int it = 0; it < 60; ++it) {
        cplx d = derivative(z);
        if (std::abs(d) < 1e-300) throw Error(ErrorCode::vanishing_derivative, "Riemann map derivative vanished");
        cplx step = ((*this)(z) - w) / d;
        z -= step;
        // the series converges a little beyond the circle; allow slack there
        if (std::abs(z) > 1.05) z *= 1.05 / std::abs(z);
        if (std::abs(step) < 1e-14) {
            if (dinv) *dinv = 1.0 / derivative(z);
            return z;
        }
    }
    throw Error(ErrorCode::no_convergence, "Riemann map inversion did not converge");
}

} // namespace adsmax
