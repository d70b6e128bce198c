#include "hfgi/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hfgi {

GaussLegendre::GaussLegendre(int n) : x(n), w(n) {
    for (int i = 0; i < n; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1, p1 = z;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (z * p1 - p0) / (z * z - 1);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        x[i] = z;
        w[i] = 2.0 / ((1 - z * z) * dp * dp);
    }
}

namespace {

const GaussLegendre &rule() {
    static const GaussLegendre gl(20);
    return gl;
}

Eigen::VectorXcd panel(const std::function<Eigen::VectorXcd(double)> &f, double a, double b) {
    const GaussLegendre &gl = rule();
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    Eigen::VectorXcd s = f(c + h * gl.x[0]) * gl.w[0];
    for (int i = 1; i < gl.x.size(); ++i) s += f(c + h * gl.x[i]) * gl.w[i];
    return s * h;
}

Eigen::VectorXcd adapt(const std::function<Eigen::VectorXcd(double)> &f, double a, double b,
                       const Eigen::VectorXcd &whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    Eigen::VectorXcd left = panel(f, a, m), right = panel(f, m, b);
    Eigen::VectorXcd both = left + right;
    const double err = (both - whole).cwiseAbs().maxCoeff();
    if (err <= tol * std::max(1.0, both.cwiseAbs().maxCoeff()) || depth <= 0) return both;
    return adapt(f, a, m, left, tol, depth - 1) + adapt(f, m, b, right, tol, depth - 1);
}

}  // namespace

Eigen::VectorXcd integrate_real(const std::function<Eigen::VectorXcd(double)> &f, double a, double b, double tol,
                                int max_depth) {
    // below this, refinement only chases rounding noise
    tol = std::max(tol, 1e-14);
    return adapt(f, a, b, panel(f, a, b), tol, max_depth);
}

}  // namespace hfgi
