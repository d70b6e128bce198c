#ifndef HFGI_DUBROVIN_HPP
#define HFGI_DUBROVIN_HPP

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hfgi/curve.hpp"

namespace hfgi {

// ---------------------------------------------------------------- symmetric functions

/// e_0..e_N of the given values.
template <class T>
std::vector<T> elementary_symmetric(const std::vector<T> &x) {
    std::vector<T> e(x.size() + 1, T(0));
    e[0] = T(1);
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t k = i + 1; k >= 1; --k) e[k] = e[k] + x[i] * e[k - 1];
    }
    return e;
}

/// h_0..h_dmax, complete homogeneous symmetric polynomials.
template <class T>
std::vector<T> complete_homogeneous(const std::vector<T> &x, int dmax) {
    std::vector<T> h(dmax + 1, T(0));
    h[0] = T(1);
    for (const T &xi : x) {
        for (int d = 1; d <= dmax; ++d) h[d] = h[d] + xi * h[d - 1];
    }
    return h;
}

/// sum_k x_k^{l-1} / prod_{r != k} (x_k - x_r).
template <class T>
T lagrange_sum(const std::vector<T> &x, int l) {
    T s = T(0);
    for (std::size_t k = 0; k < x.size(); ++k) {
        T num = T(1), den = T(1);
        for (int p = 1; p < l; ++p) num = num * x[k];
        for (std::size_t r = 0; r < x.size(); ++r) {
            if (r != k) den = den * (x[k] - x[r]);
        }
        s = s + num / den;
    }
    return s;
}

/// beta_{-1}..beta_kmax from alpha_0..alpha_kmax; entry j holds beta_{j-1}.
template <class T>
std::vector<T> beta_coeffs(const std::vector<T> &alphas, int kmax) {
    if (static_cast<int>(alphas.size()) < kmax + 1) throw std::invalid_argument("beta_coeffs: need alpha_0..alpha_kmax");
    std::vector<T> beta(kmax + 2, T(0));
    beta[0] = T(1);
    for (int k = 0; k <= kmax; ++k) {
        T s = T(0);
        for (int j = 0; j <= k; ++j) s = s + alphas[j] * beta[k - j];
        beta[k + 1] = -s;
    }
    return beta;
}

/// F_{-1}..F_n divided by u for F = u prod (lambda - mu_j); entry l + 1 holds F_l / u.
template <class T>
std::vector<T> product_coefficients(const std::vector<T> &roots) {
    std::vector<T> e = elementary_symmetric(roots);
    for (std::size_t k = 1; k < e.size(); k += 2) e[k] = -e[k];
    return e;
}

/// V_{-1}..V_m (over u) with V_k = sum_{j=0}^{k+1} beta_{j-1} F_{k-j}; entry k + 1 holds V_k.
template <class T>
std::vector<T> flow_coefficients(const std::vector<T> &F_over_u, const std::vector<T> &beta, int m) {
    std::vector<T> V(m + 2, T(0));
    for (int k = -1; k <= m; ++k) {
        for (int j = 0; j <= k + 1; ++j) {
            const int idx = k - j + 1;
            if (idx < static_cast<int>(F_over_u.size()) && j < static_cast<int>(beta.size())) {
                V[k + 1] = V[k + 1] + beta[j] * F_over_u[idx];
            }
        }
    }
    return V;
}

// ---------------------------------------------------------------- state

class CollisionError : public std::runtime_error {
public:
    CollisionError(const std::string &what, int family, int i, int j)
        : std::runtime_error(what), family(family), i(i), j(j) {}
    int family;  // 0 for mu, 1 for nu
    int i, j;
};

/// Elliptic variables with their lifts: y equals G(lambda) at every mu_k and nu_k, which is the
/// square root entering the Dubrovin equations.
struct EllipticState {
    std::vector<cplx> mu, mu_y;
    std::vector<cplx> nu, nu_y;
    double x = 0;
    double t = 0;

    int size() const { return static_cast<int>(mu.size()); }
    SurfacePoint mu_point(const Curve &c, int k) const { return {mu[k], c.sheet_of(mu[k], mu_y[k])}; }
    SurfacePoint nu_point(const Curve &c, int k) const { return {nu[k], c.sheet_of(nu[k], nu_y[k])}; }
    /// max |y^2 - R| / max(1, |R|) over all points.
    double curve_defect(const Curve &c) const;
};

/// State from n + 1 lifted mu's and the leading coefficient w of G: G interpolates the lifts with
/// leading coefficient w, and the nu's are the roots of (R - G^2) / prod (lambda - mu).
EllipticState make_state(const Curve &c, const std::vector<SurfacePoint> &mu_points, cplx w);

/// G(lambda) = sum_k g_k lambda^k, k = 0..n+1, least-squares fitted through all 2n + 2 lifts;
/// residual reports the fit quality.
struct GFit {
    VectorXc g;
    double residual = 0;
    cplx operator()(cplx lambda) const;
};
GFit fit_G(const EllipticState &s);

struct FlowSpec {
    int m = 0;
    std::vector<cplx> alphas;  // alpha_0..alpha_m
    std::vector<cplx> betas;   // entry j holds beta_{j-1}
    /// beta_{-1}..beta_{m + tail_terms}, for evaluating V at points far from the branch points.
    std::vector<cplx> betas_long;

    static FlowSpec from_curve(const Curve &c, int m, int tail_terms = 60);
};

enum class FlowKind { X, T };

/// d/dx of (mu, mu_y, nu, nu_y) flattened in that order.
VectorXc x_flow_rhs(const Curve &c, const EllipticState &s, double margin);
/// V(lambda) / u at a root lambda of the family's product: the polynomial form near the branch
/// points, minus the 1/lambda tail of lambda^{m-n} B(lambda) F(lambda) / u far away.
cplx flow_polynomial_at_root(const std::vector<cplx> &roots, int k, const FlowSpec &f, double scale);

/// d/dt_m of the same vector.
VectorXc t_flow_rhs(const Curve &c, const EllipticState &s, const FlowSpec &f, double margin);

struct IntegratorOptions {
    double rtol = 1e-9;
    double atol = 1e-9;
    double collision_margin = 1e-6;  // times the branch-point scale
    double min_step = 1e-12;
    int max_steps = 200000;
};

struct Trajectory {
    FlowKind kind = FlowKind::X;
    std::vector<double> s;
    std::vector<EllipticState> states;
    int steps_accepted = 0;
    int steps_rejected = 0;
};

/// Dormand-Prince 5(4) integration of the state along x or t_m, landing exactly on every sample.
Trajectory integrate_flow(const Curve &c, const EllipticState &s0, FlowKind kind, const std::vector<double> &samples,
                          const FlowSpec &f, const IntegratorOptions &opt = {});

/// (rho1, rho2): sums of Abel maps over the stored lifts of the mu's and nu's.
std::pair<VectorXc, VectorXc> abel_jacobi_coords(const Curve &c, const PeriodData &pd, const EllipticState &s);

/// Abel-Jacobi coordinates along a trajectory, lattice shifts removed so that consecutive samples
/// stay close.
std::vector<std::pair<VectorXc, VectorXc>> abel_jacobi_trajectory(const Curve &c, const PeriodData &pd,
                                                                  const Trajectory &traj);

/// Representative of z modulo the lattice closest to ref.
VectorXc unwrap_to(const VectorXc &z, const VectorXc &ref, const MatrixXc &tau);

/// Predicted slopes of rho1 for the x flow (kind X) or t_m flow; rho2 slopes are the negatives.
VectorXc linear_slope(const PeriodData &pd, FlowKind kind, const FlowSpec &f);

void write_trajectory_csv(std::ostream &os, const Curve &c, const Trajectory &traj,
                          const std::vector<std::pair<VectorXc, VectorXc>> &rho);

}  // namespace hfgi

#endif  // HFGI_DUBROVIN_HPP
