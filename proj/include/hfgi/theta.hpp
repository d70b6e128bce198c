#ifndef HFGI_THETA_HPP
#define HFGI_THETA_HPP

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace hfgi {

/// Riemann theta function theta(z | tau) = sum_n exp(pi i n.tau.n + 2 pi i n.z), summed over the
/// Fincke-Pohst ellipsoid pi (n + c)^T Y (n + c) < R^2 with c = Y^{-1} Im z.
class ThetaContext {
public:
    explicit ThetaContext(Eigen::MatrixXcd tau, double eps = 1e-16);

    int genus() const { return static_cast<int>(tau_.rows()); }
    const Eigen::MatrixXcd &tau() const { return tau_; }
    /// Ellipsoid radius for derivative order 0..3.
    double radius(int order = 0) const { return radius_[order]; }
    /// Length of the shortest nonzero vector of the lattice sqrt(pi) T Z^g.
    double shortest() const { return rho_; }

    /// Integer points n with |sqrt(pi) T (n + c)| < r.
    std::vector<Eigen::VectorXi> ellipsoid_points(const Eigen::VectorXd &c, double r) const;

    /// Tail bound on the truncation error of the order-N derivative sum, relative to the
    /// exponential factor exp(pi y^T Y^{-1} y).
    double tail_bound(double r, int order = 0) const;

private:
    Eigen::MatrixXcd tau_;
    Eigen::MatrixXd Y_, Yinv_, T_;
    double rho_ = 0;
    double Tinv_norm_ = 0;
    double radius_[4] = {0, 0, 0, 0};
};

/// theta = exp(log_scale) * value; ratios of thetas stay finite when exp(log_scale) would not.
struct ThetaValue {
    double log_scale = 0;
    std::complex<double> value;

    std::complex<double> full() const { return std::exp(log_scale) * value; }
};

ThetaValue theta_scaled(const ThetaContext &ctx, const Eigen::VectorXcd &z);

inline std::complex<double> theta(const ThetaContext &ctx, const Eigen::VectorXcd &z) {
    return theta_scaled(ctx, z).full();
}

/// Directional derivative D_{d_1} ... D_{d_k} theta at z, k = dirs.size() <= 3.
ThetaValue theta_derivative_scaled(const ThetaContext &ctx, const Eigen::VectorXcd &z,
                                   const std::vector<Eigen::VectorXcd> &dirs);

inline std::complex<double> theta_derivative(const ThetaContext &ctx, const Eigen::VectorXcd &z,
                                             const std::vector<Eigen::VectorXcd> &dirs) {
    return theta_derivative_scaled(ctx, z, dirs).full();
}

/// Gradient d theta / d z_k.
Eigen::VectorXcd theta_gradient(const ThetaContext &ctx, const Eigen::VectorXcd &z);

/// theta with half-integer characteristic [a; b].
std::complex<double> theta_char(const ThetaContext &ctx, const Eigen::VectorXd &a, const Eigen::VectorXd &b,
                                const Eigen::VectorXcd &z);

}  // namespace hfgi

#endif  // HFGI_THETA_HPP
