#ifndef HFGI_VERIFY_HPP
#define HFGI_VERIFY_HPP

#include <functional>
#include <string>
#include <vector>

#include "hfgi/reconstruct.hpp"

namespace hfgi {

/// One identity or measured quantity inside a property check.
struct CheckItem {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct CheckResult {
    int id = 0;
    std::string title;
    std::vector<CheckItem> items;
    double seconds = 0;
    double time_limit = 0;  // 0 when unconstrained

    bool pass() const;
    /// First failing item, or the time limit, in one line.
    std::string summary() const;
};

/// Numeric thresholds of the property suite. Exact checks have none.
struct Thresholds {
    double period = 1e-10;
    double agm = 1e-10;
    double theta_laws = 1e-10;
    double theta_fd = 1e-7;
    double theta_box = 1e-12;
    double linear_fit = 1e-6;
    double constraint = 1e-10;
    double residual = 1e-4;
    double convergence_ratio = 3.5;  // coarse / fine residual under halving, order >= 1.8
    double asymptotics = 1e-3;
    double w_routes = 1e-5;
    double divisor_routes = 1e-5;

    /// Every numeric threshold multiplied by factor; the convergence ratio is divided by it.
    Thresholds scaled(double factor) const;
};

/// Spectrum and divisor used by the reconstruction checks: a genus-1 curve small enough that a
/// 201 x 41 grid over the default spans resolves the fields.
struct DemoSetup {
    std::vector<cplx> branch_points;
    std::vector<SurfacePoint> mu;
    cplx w0;
    cplx u0;
};
DemoSetup compact_genus1_setup();

CheckResult check_symbolic();                       // Lenard members and hierarchy equations
CheckResult check_hamiltonian();                    // variational derivatives and zero curvature
CheckResult check_homogeneous();                    // homogeneous recursion and degree law
CheckResult check_series();                         // convolution identity of the c and chat series
CheckResult check_periods(const Thresholds &th);
CheckResult check_theta(const Thresholds &th);
CheckResult check_linearization(const Thresholds &th);
CheckResult check_reconstruction(const Thresholds &th);
CheckResult check_divisor_routes(const Thresholds &th);

/// All nine checks in order; progress is called after each.
std::vector<CheckResult> verify_all(const Thresholds &th,
                                    const std::function<void(const CheckResult &)> &progress = {});

}  // namespace hfgi

#endif  // HFGI_VERIFY_HPP
