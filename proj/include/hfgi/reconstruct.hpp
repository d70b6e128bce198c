#ifndef HFGI_RECONSTRUCT_HPP
#define HFGI_RECONSTRUCT_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "hfgi/curve.hpp"
#include "hfgi/dubrovin.hpp"
#include "hfgi/lenard.hpp"
#include "hfgi/theta.hpp"

namespace hfgi {

// ---------------------------------------------------------------- quantities read off a state

/// Lifts mu_hat_k = (mu_k, -G(mu_k)) and nu_hat_k = (nu_k, G(nu_k)).
SurfacePoint mu_hat(const Curve &c, const EllipticState &s, int k);
SurfacePoint nu_hat(const Curve &c, const EllipticState &s, int k);

/// Leading coefficient of G.
cplx state_w(const EllipticState &s);
/// d ln u / dx from the top coefficients of F_x = 2 lambda (w F - u G): -2 w sum(mu) - 2 G_0.
cplx state_dlogu_dx(const EllipticState &s);
/// d ln u / dt_m = 2 (w S_F / u - S_G), S_X the lambda^0 coefficient of lambda^{m-n} B(lambda) X(lambda).
cplx state_dlogu_dt(const EllipticState &s, const FlowSpec &f);
/// u_x / u + w w_x / (1 - w^2) = -w (sum(mu) + sum(nu)) - 2 G_0.
cplx state_log_rhs(const EllipticState &s);

/// phi = (y - G) / F = H / (y + G) with F = u prod(lambda - mu), H = v prod(lambda - nu), v = (1 - w^2) / u.
/// form 0 picks the better conditioned quotient, 1 forces (y - G) / F, 2 forces H / (y + G).
cplx phi_eval(const Curve &c, const EllipticState &s, cplx u, const SurfacePoint &p, int form = 0);

// ---------------------------------------------------------------- Riemann constants

/// K = (a + tau b) / 2 with a, b in {0, 1}^n, the half period for which theta(K - A(P) + A(D))
/// vanishes at every point of a generic probe divisor D of degree n.
struct RiemannConstants {
    VectorXc K;
    Eigen::VectorXi a, b;
    double vanishing = 0;  // worst |theta| on the probe divisor, relative to generic values
    double runner_up = 0;  // the same figure for the next best half period
};

RiemannConstants riemann_constants(const Curve &c, const PeriodData &pd, const ThetaContext &ctx);

// ---------------------------------------------------------------- divisor data

struct DivisorData {
    std::vector<SurfacePoint> mu_hat, nu_hat;
    int pole_mu = 0, pole_nu = 0;  // indices of the pair carried by omega3
    VectorXc rho1, rho2;         // Abel sums over the first n lifts
    VectorXc K;
    ThirdKindData omega3;        // residue +1 at nu_hat_{n+1}, -1 at mu_hat_{n+1}
    VectorXc abel_inf_plus;      // A(P_inf+) along omega3.inf_path; A(P_inf-) is its negative
    VectorXc b_periods;          // b-periods of omega3 over 2 pi i
    Eigen::VectorXd tau_shift;   // N in rho2 -> rho2 - tau N
    double lattice_residual = 0; // distance of rho2 - rho1 + b_periods from Z^n
};

/// sum_mu, sum_nu are (n+1)-point Abel sums over the stored lifts, as from abel_jacobi_coords.
/// The pair carried by omega3 is the mu and the nu farthest from the branch points.
DivisorData divisor_data(const Curve &c, const PeriodData &pd, const VectorXc &K, const EllipticState &s,
                         const VectorXc &sum_mu, const VectorXc &sum_nu);
DivisorData divisor_data(const Curve &c, const PeriodData &pd, const VectorXc &K, const EllipticState &s);

/// theta(K - A(P) + rho2) / theta(K - A(P) + rho1) exp(int_{P0}^{P} omega3); equals phi / N with N
/// independent of P.
cplx theta_quotient(const Curve &c, const PeriodData &pd, const ThetaContext &ctx, const DivisorData &dd,
                    const SurfacePoint &p);

struct NodeValues {
    cplx w;
    cplx log_rhs;            // right side of u_x/u + w w_x/(1 - w^2) = ...
    cplx quotient_plus;      // theta_quotient at P_inf+ and P_inf-
    cplx quotient_minus;
    double denominator = 0;  // |a - b| / (|a| + |b|) in w = (a + b) / (a - b)
};

NodeValues reconstruct_node(const PeriodData &pd, const ThetaContext &ctx, const DivisorData &dd);

// ---------------------------------------------------------------- grids

struct GridSpec {
    double x0 = 0, x1 = 1;
    int nx = 101;
    double t0 = 0, t1 = 0.2;
    int nt = 21;
};

/// One estimated quasi-period in x, 1 / max_j |2 C_{jn}|, and a fifth of the matching t_m span.
GridSpec default_grid(const PeriodData &pd, const FlowSpec &f, int nx = 101, int nt = 21);

/// Rows index t, columns index x.
struct FieldGrid {
    int m = 1;
    std::vector<double> x, t;
    MatrixXc w, u, v;
    Eigen::MatrixXd residual;
    cplx u0 = 1;
};

struct ResidualSummary {
    double max = 0;
    double rms = 0;
};

/// Central-difference residual of (u_t, v_t) against the hierarchy member m at the nodes at least
/// two columns and one row away from the edges; other entries are zero. Members 1 and 2 use their
/// printed forms in w, w_x, w_xx; higher members evaluate hierarchy_rhs, whose w-free form divides
/// by powers of w.
Eigen::MatrixXd pde_residual(const FieldGrid &g, const LenardChain &lc);
ResidualSummary summarize_residual(const FieldGrid &g, const Eigen::MatrixXd &residual);

/// Cumulative integral of equally spaced samples, fourth order; entry 0 is zero.
std::vector<cplx> cumulative_integral(const std::vector<cplx> &f, double h);

struct ReconstructionReport {
    double constraint = 0;        // max |w^2 + u v - 1|
    double w_routes = 0;          // max |w_theta - w_state| / max(1, |w|)
    double log_rhs_routes = 0;    // max |log_rhs_theta - log_rhs_state| / max(1, |rhs|)
    double divisor_routes = 0;    // linear rho flow against Abel sums of the integrated states
    double lattice_residual = 0;  // worst DivisorData::lattice_residual
    double min_denominator = 1;
    ResidualSummary residual;
};

struct Reconstruction {
    FieldGrid grid;
    std::vector<std::vector<EllipticState>> states;  // [t index][x index]
    RiemannConstants K;
    MatrixXc w_state;
    ReconstructionReport report;
};

struct ReconstructOptions {
    IntegratorOptions ode;
    double pole_tolerance = 1e-12;
    int divisor_check_stride = 1;  // compare the two divisor routes on every k-th node
};

/// Dubrovin states on the grid (t_m flow along x = x0, then x flows), the theta formulas for w and
/// d ln u / dx at every node, u by x quadrature anchored by the exact d ln u / dt_m at x0, and
/// v = (1 - w^2) / u.
Reconstruction reconstruct(const Curve &c, const PeriodData &pd, const ThetaContext &ctx, const EllipticState &s0,
                           const FlowSpec &f, const GridSpec &grid, cplx u0, const LenardChain &lc,
                           const ReconstructOptions &opt = {});

// ---------------------------------------------------------------- phi asymptotics

struct PhiAsymptotics {
    cplx lead[2], slope[2];          // fitted a + b zeta on P_inf+ (index 0) and P_inf- (index 1)
    cplx lead_expect[2], slope_expect[2];
    double lead_error = 0;           // relative
    double slope_error = 0;          // relative
    double condition = 0;
};

/// Fits phi(1 / zeta) on both infinity sheets at |lambda| from r_min up to 16 r_min and compares with
/// -(1 + w)/u, (1 - w)/u and the first-order coefficients built from u_x, w_x.
PhiAsymptotics phi_asymptotics_check(const Curve &c, const EllipticState &s, cplx u, cplx w, cplx ux, cplx wx,
                                     double r_min = 1e3);

// ---------------------------------------------------------------- output

/// x, t, Re w, Im w, Re u, Im u, Re v, Im v, residual at 17 significant digits.
void write_field_csv(std::ostream &os, const FieldGrid &g);

}  // namespace hfgi

#endif  // HFGI_RECONSTRUCT_HPP
