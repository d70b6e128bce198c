#ifndef HFGI_QUADRATURE_HPP
#define HFGI_QUADRATURE_HPP

#include <functional>

#include <Eigen/Dense>

namespace hfgi {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
    Eigen::VectorXd x, w;
    explicit GaussLegendre(int n);
};

/// Adaptive bisection with a 20-point Gauss-Legendre rule; stops when the two-half estimate
/// agrees with the whole-interval estimate to tol relative (absolute below magnitude 1).
Eigen::VectorXcd integrate_real(const std::function<Eigen::VectorXcd(double)> &f, double a, double b,
                                double tol = 1e-13, int max_depth = 40);

}  // namespace hfgi

#endif  // HFGI_QUADRATURE_HPP
