#include "hfgi/theta.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hfgi {

namespace {

constexpr double kPi = std::numbers::pi;
const std::complex<double> kI(0.0, 1.0);

/// Upper incomplete gamma Gamma(a, x) for a a positive multiple of 1/2.
double upper_gamma_half(int twice_a, double x) {
    double g;
    int k;
    if (twice_a % 2 == 1) {
        g = std::sqrt(kPi) * std::erfc(std::sqrt(x));
        k = 1;
    } else {
        g = std::exp(-x);
        k = 2;
    }
    for (; k < twice_a; k += 2) {
        const double a = 0.5 * k;
        g = a * g + std::pow(x, a) * std::exp(-x);
    }
    return g;
}

double binomial(int n, int k) {
    double r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

ThetaContext::ThetaContext(Eigen::MatrixXcd tau, double eps) : tau_(std::move(tau)) {
    const int g = genus();
    if (g < 1 || tau_.cols() != g) throw std::invalid_argument("theta: tau must be square and nonempty");
    if ((tau_ - tau_.transpose()).cwiseAbs().maxCoeff() > 1e-8 * std::max(1.0, tau_.cwiseAbs().maxCoeff())) {
        throw std::invalid_argument("theta: tau is not symmetric");
    }
    Y_ = tau_.imag();
    Y_ = 0.5 * (Y_ + Y_.transpose()).eval();
    Eigen::LLT<Eigen::MatrixXd> llt(Y_);
    if (llt.info() != Eigen::Success) throw std::invalid_argument("theta: Im tau is not positive definite");
    T_ = std::sqrt(kPi) * Eigen::MatrixXd(llt.matrixU());
    Yinv_ = llt.solve(Eigen::MatrixXd::Identity(g, g));
    Tinv_norm_ = T_.inverse().jacobiSvd().singularValues()(0);

    double r0 = T_.colwise().norm().minCoeff() * (1 + 1e-12);
    rho_ = r0;
    for (const auto &n : ellipsoid_points(Eigen::VectorXd::Zero(g), r0)) {
        if (n.isZero()) continue;
        rho_ = std::min(rho_, (T_ * n.cast<double>()).norm());
    }

    for (int order = 0; order < 4; ++order) {
        double lo = 0.5 * (std::sqrt(static_cast<double>(g)) + rho_), hi = lo + 1;
        while (tail_bound(hi, order) > eps) hi += hi - lo;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            (tail_bound(mid, order) > eps ? lo : hi) = mid;
        }
        radius_[order] = hi;
    }
}

double ThetaContext::tail_bound(double r, int order) const {
    const int g = genus();
    const double x = (r - 0.5 * rho_) * (r - 0.5 * rho_);
    double s = 0;
    for (int j = 0; j <= order; ++j) {
        s += binomial(order, j) * std::pow(Tinv_norm_, j) * std::pow(0.5 * std::sqrt(static_cast<double>(g)), order - j) *
             upper_gamma_half(g + j, x);
    }
    return std::pow(2 * kPi, order) * 0.5 * g * std::pow(2.0 / rho_, g) * s;
}

std::vector<Eigen::VectorXi> ThetaContext::ellipsoid_points(const Eigen::VectorXd &c, double r) const {
    const int g = genus();
    std::vector<Eigen::VectorXi> out;
    Eigen::VectorXi n(g);
    Eigen::VectorXd v(g);
    auto rec = [&](auto &&self, int i, double rem) -> void {
        double shift = 0;
        for (int j = i + 1; j < g; ++j) shift += T_(i, j) * v[j];
        const double tii = T_(i, i);
        const double center = -c[i] - shift / tii;
        const double half = std::sqrt(std::max(rem, 0.0)) / tii;
        for (int k = static_cast<int>(std::ceil(center - half)); k <= static_cast<int>(std::floor(center + half)); ++k) {
            n[i] = k;
            v[i] = k + c[i];
            const double t = tii * v[i] + shift;
            const double left = rem - t * t;
            if (left < 0) continue;
            if (i == 0) {
                out.push_back(n);
            } else {
                self(self, i - 1, left);
            }
        }
    };
    rec(rec, g - 1, r * r);
    return out;
}

ThetaValue theta_derivative_scaled(const ThetaContext &ctx, const Eigen::VectorXcd &z,
                                   const std::vector<Eigen::VectorXcd> &dirs) {
    if (dirs.size() > 3) throw std::invalid_argument("theta: derivative order above 3");
    const Eigen::MatrixXcd &tau = ctx.tau();
    const Eigen::MatrixXd X = tau.real(), Y = tau.imag();
    const Eigen::VectorXd x = z.real(), y = z.imag();
    const Eigen::VectorXd c = Y.llt().solve(y);
    ThetaValue out;
    out.log_scale = kPi * y.dot(c);
    std::complex<double> s = 0;
    for (const auto &ni : ctx.ellipsoid_points(c, ctx.radius(static_cast<int>(dirs.size())))) {
        const Eigen::VectorXd n = ni.cast<double>();
        const Eigen::VectorXd v = n + c;
        const double phase = kPi * n.dot(X * n) + 2 * kPi * n.dot(x);
        std::complex<double> term = std::exp(-kPi * v.dot(Y * v)) * std::polar(1.0, phase);
        for (const auto &d : dirs) term *= 2.0 * kPi * kI * (n.cast<std::complex<double>>().dot(d));
        s += term;
    }
    out.value = s;
    return out;
}

ThetaValue theta_scaled(const ThetaContext &ctx, const Eigen::VectorXcd &z) { return theta_derivative_scaled(ctx, z, {}); }

Eigen::VectorXcd theta_gradient(const ThetaContext &ctx, const Eigen::VectorXcd &z) {
    const int g = ctx.genus();
    Eigen::VectorXcd grad(g);
    for (int k = 0; k < g; ++k) grad[k] = theta_derivative(ctx, z, {Eigen::VectorXcd::Unit(g, k)});
    return grad;
}

std::complex<double> theta_char(const ThetaContext &ctx, const Eigen::VectorXd &a, const Eigen::VectorXd &b,
                                const Eigen::VectorXcd &z) {
    const Eigen::VectorXcd ac = a.cast<std::complex<double>>();
    const Eigen::VectorXcd shifted = z + ctx.tau() * ac + b.cast<std::complex<double>>();
    const std::complex<double> pre =
        std::exp(kI * kPi * ac.dot(ctx.tau() * ac) + 2.0 * kPi * kI * ac.dot(z + b.cast<std::complex<double>>()));
    return pre * theta(ctx, shifted);
}

}  // namespace hfgi
