#ifndef HFGI_CURVE_HPP
#define HFGI_CURVE_HPP

#include <complex>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace hfgi {

using cplx = std::complex<double>;
using VectorXc = Eigen::VectorXcd;
using MatrixXc = Eigen::MatrixXcd;

class CurveError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Branch points of y^2 = R(lambda) = prod (lambda - lambda_j).
struct CurveSpec {
    std::vector<cplx> branch_points;
    int genus = 0;

    /// Validates count (even, >= 4), nonzero entries and pairwise separation > eps * scale.
    static CurveSpec from_points(std::vector<cplx> points, double eps = 1e-8);
};

/// y = sheet * y_+(lambda), with y_+ ~ lambda^{n+1} at infinity.
struct SurfacePoint {
    cplx lambda;
    int sheet = 1;

    SurfacePoint involution() const { return {lambda, -sheet}; }
};

/// Polyline on the lambda plane. A branch-point endpoint is integrated with the substitution
/// lambda = e + (p - e) t^2.
struct Path {
    std::vector<cplx> vertices;
    bool start_at_branch = false;
    bool end_at_branch = false;
};

struct PointObstacle {
    cplx center;
    double radius;
};

class Curve {
public:
    explicit Curve(CurveSpec spec);

    int genus() const { return n_; }
    const CurveSpec &spec() const { return spec_; }
    /// Branch points sorted by (Re, Im); cut k joins entries 2k and 2k + 1.
    const std::vector<cplx> &sorted_points() const { return e_; }
    cplx cut_start(int k) const { return e_[2 * k]; }
    cplx cut_end(int k) const { return e_[2 * k + 1]; }
    double scale() const { return scale_; }
    double clearance() const { return clearance_; }

    cplx R(cplx lambda) const;
    /// Branch of sqrt(R) analytic off the straight cuts; 0 at branch points.
    cplx y_plus(cplx lambda) const;
    /// y_+(e_i + delta) for sorted branch point i, accurate for tiny delta.
    cplx y_plus_near(int i, cplx delta) const;
    cplx sqrtR(const SurfacePoint &p) const { return static_cast<double>(p.sheet) * y_plus(p.lambda); }
    /// y_+(1/zeta) zeta^{n+1}, analytic near zeta = 0 with value 1 there.
    cplx y_hat(cplx zeta) const;
    /// Sheet on which sqrt(R(lambda)) equals y (the nearer one when y is inexact).
    int sheet_of(cplx lambda, cplx y) const;
    /// Index of the branch point within tol * scale of lambda, if any.
    std::optional<int> branch_index(cplx lambda, double tol = 1e-12) const;

    /// Counterclockwise integral over a tight loop around cut k on sheet +1 of f(lambda) d lambda / y,
    /// f analytic near the cut.  Gauss-Chebyshev with node doubling.
    VectorXc a_cycle_integral(int k, const std::function<VectorXc(cplx)> &f, double tol = 1e-13,
                              int *nodes_used = nullptr) const;

    /// Shortest obstacle-avoiding polyline between two points of the lambda plane.
    Path plan_path(cplx from, cplx to, const std::vector<PointObstacle> &points = {}) const;

    /// Integral of g(lambda, y_+(lambda)) d lambda along the path; g may blow up like 1 / y at
    /// branch-point endpoints.
    VectorXc path_integral(const Path &path, const std::function<VectorXc(cplx, cplx)> &g, double tol = 1e-13) const;

    /// Integral of h(zeta) d zeta along the straight segment zeta0 -> zeta1.
    VectorXc zeta_integral(cplx zeta0, cplx zeta1, const std::function<VectorXc(cplx)> &h, double tol = 1e-13) const;

private:
    CurveSpec spec_;
    int n_;
    std::vector<cplx> e_;
    double scale_;
    double clearance_;

    bool edge_ok(cplx p, cplx q, const std::vector<PointObstacle> &points) const;
};

/// lambda^{l-1} / y_+ for l = 1..n.
VectorXc holomorphic_row(const Curve &c, cplx lambda);
VectorXc holomorphic_row(int n, cplx lambda, cplx y);

struct PeriodData {
    MatrixXc A, B, C, tau;
    /// b_j runs on sheet +1 from the end of cut j to the start of cut n + 1 along b_paths[j]
    /// and back on sheet -1; b_signs flips orientation so that Im tau_jj > 0.
    std::vector<Path> b_paths;
    std::vector<int> b_signs;
    cplx base_point;
    double cond_A = 0;
    double symmetry_error = 0;
    int max_chebyshev_nodes = 0;

    /// Normalized differentials omega = C (lambda^{l-1}) d lambda / y_+ at lambda.
    VectorXc omega_plus(const Curve &c, cplx lambda) const { return C * holomorphic_row(c, lambda); }
};

PeriodData period_matrices(const Curve &c, double tol = 1e-13);

void write_period_data(std::ostream &os, const PeriodData &pd);
/// Reads matrices written by write_period_data; cycle geometry is rebuilt from the curve.
PeriodData read_period_data(std::istream &is, const Curve &c);

/// Abel map from the base point on sheet +1 along a planned path.
VectorXc abel_plus(const Curve &c, const PeriodData &pd, cplx lambda, const std::vector<PointObstacle> &avoid = {});
VectorXc abel_map(const Curve &c, const PeriodData &pd, const SurfacePoint &p);

/// Sheet of the point at infinity labelled P_inf+ or P_inf-; P_inf+ has y ~ -lambda^{n+1}.
inline int infinity_sheet(int sign) { return -sign; }

/// Endpoint of the finite part of every path to infinity; |p| exceeds all branch points and obstacles.
cplx infinity_anchor(const Curve &c, const std::vector<PointObstacle> &avoid = {});

/// A(P_inf+-) with sign = +1 / -1.
VectorXc abel_map_infinity(const Curve &c, const PeriodData &pd, int sign, const std::vector<PointObstacle> &avoid = {});
/// Same, along the given path from the base point to a point beyond every branch point.
VectorXc abel_map_infinity(const Curve &c, const PeriodData &pd, int sign, const Path &path);

/// d omega / d zeta at zeta on the given infinity sheet.
VectorXc omega_zeta(const Curve &c, const PeriodData &pd, cplx zeta, int sheet);

/// Reduces z modulo Z^n + tau Z^n; returns the reduced vector and the integer shifts (z = r + m + tau N).
struct LatticeSplit {
    VectorXc reduced;
    Eigen::VectorXd m, N;
};
LatticeSplit lattice_reduce(const VectorXc &z, const MatrixXc &tau);

/// Real coordinates (a, b) with z = a + tau b.
void lattice_coordinates(const VectorXc &z, const MatrixXc &tau, Eigen::VectorXd &a, Eigen::VectorXd &b);

struct ThirdKindData {
    SurfacePoint q_plus, q_minus;  // residue +1 and -1
    cplx y1, y2;                   // y at q_plus, q_minus
    VectorXc kappa;                // coefficients of lambda^{l-1} d lambda / y
    VectorXc gamma;                // gamma_1..gamma_{n-1} roots, gamma_n = kappa_n
    cplx M;                        // (lambda(q_minus) - lambda(q_plus)) / 2
    cplx omega0_inf_plus, omega0_inf_minus;
    Path inf_path;                 // path from the base point used for both infinity integrals
    cplx inf_anchor;
    double a_period_error = 0;

    /// omega3 / d lambda at (lambda, y).
    cplx integrand(cplx lambda, cplx y) const;
    /// omega3 / d zeta on the given infinity sheet.
    cplx integrand_zeta(const Curve &c, cplx zeta, int sheet) const;
};

ThirdKindData third_kind(const Curve &c, const PeriodData &pd, const SurfacePoint &q_plus,
                         const SurfacePoint &q_minus);

/// Contour residue of omega3 on a circle of radius r around a surface point.
cplx third_kind_residue(const Curve &c, const ThirdKindData &t, const SurfacePoint &p, double r);

/// beta_k = (1 / 2 pi i) oint_{b_k} omega3.
VectorXc third_kind_b_periods(const Curve &c, const PeriodData &pd, const ThirdKindData &t);

/// Discs around the two poles that planned paths keep clear of.
std::vector<PointObstacle> third_kind_obstacles(const Curve &c, const ThirdKindData &t);

/// a-periods of omega3 (should vanish).
VectorXc third_kind_a_periods(const Curve &c, const ThirdKindData &t);

}  // namespace hfgi

#endif  // HFGI_CURVE_HPP
