#include "doctest.h"

#include <random>
#include <sstream>

#include "hfgi/dubrovin.hpp"
#include "hfgi/jet.hpp"
#include "hfgi/series.hpp"

using namespace hfgi;

namespace {

Curve genus1() { return Curve(CurveSpec::from_points({{-2.0, 0.3}, {-0.8, -0.2}, {0.9, 0.4}, {2.2, -0.1}})); }

Curve genus2() {
    return Curve(CurveSpec::from_points({{-3.0, 0.2}, {-2.0, -0.1}, {-0.5, 0.3}, {0.7, -0.2}, {2.1, 0.1}, {3.0, -0.3}}));
}

EllipticState state1(const Curve &c) { return make_state(c, {{cplx(0.3, 1.0), 1}, {cplx(-1.0, -0.9), -1}}, cplx(0.4, 0.2)); }

EllipticState state2(const Curve &c) {
    return make_state(c, {{cplx(0.3, 1.0), 1}, {cplx(-1.4, -0.9), -1}, {cplx(1.6, 0.8), 1}}, cplx(0.3, -0.1));
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
    return v;
}

/// Max deviation of the samples from their least-squares line, and the fitted slope.
std::pair<double, cplx> line_fit(const std::vector<double> &s, const std::vector<cplx> &v) {
    const int n = static_cast<int>(s.size());
    double sm = 0, ss = 0;
    cplx vm = 0, sv = 0;
    for (int i = 0; i < n; ++i) {
        sm += s[i];
        vm += v[i];
    }
    sm /= n;
    vm /= static_cast<double>(n);
    for (int i = 0; i < n; ++i) {
        ss += (s[i] - sm) * (s[i] - sm);
        sv += (s[i] - sm) * (v[i] - vm);
    }
    const cplx b = sv / ss;
    double res = 0;
    for (int i = 0; i < n; ++i) res = std::max(res, std::abs(v[i] - (vm + b * (s[i] - sm))));
    return {res, b};
}

void check_linear(const Curve &c, const PeriodData &pd, const Trajectory &traj, const VectorXc &slope) {
    const auto rho = abel_jacobi_trajectory(c, pd, traj);
    for (int j = 0; j < c.genus(); ++j) {
        std::vector<cplx> r1, r2;
        for (const auto &r : rho) {
            r1.push_back(r.first[j]);
            r2.push_back(r.second[j]);
        }
        const auto [res1, b1] = line_fit(traj.s, r1);
        const auto [res2, b2] = line_fit(traj.s, r2);
        CAPTURE(j);
        CHECK(res1 < 1e-6);
        CHECK(res2 < 1e-6);
        CHECK(std::abs(b1 - slope[j]) < 1e-6);
        CHECK(std::abs(b2 + slope[j]) < 1e-6);
    }
}

}  // namespace

TEST_CASE("beta recursion") {
    const std::vector<Rational> alpha{Rational(3, 2), Rational(-1, 3), Rational(5), Rational(2, 7), Rational(-4),
                                      Rational(1, 9), Rational(6), Rational(-2, 5), Rational(7, 4)};
    const auto beta = beta_coeffs(alpha, 8);
    CHECK(beta[0] == 1);
    CHECK(beta[1] == -alpha[0]);
    CHECK(beta[2] == alpha[0] * alpha[0] - alpha[1]);
    for (int k = 0; k <= 8; ++k) {
        Rational s = beta[k + 1];
        for (int j = 0; j <= k; ++j) s += alpha[j] * beta[k - j];
        CHECK(s == 0);
    }
    CHECK_THROWS_AS(beta_coeffs(alpha, 9), std::invalid_argument);
}

TEST_CASE("Lagrange interpolation identity, exact") {
    CHECK(lagrange_sum(std::vector<Rational>{1, 2, 3}, 3) == 1);
    std::mt19937 rng(17);
    std::uniform_int_distribution<int> num(-20, 20), den(1, 7);
    for (int N = 1; N <= 6; ++N) {
        std::vector<Rational> x;
        while (static_cast<int>(x.size()) < N) {
            Rational r(num(rng), den(rng));
            r.canonicalize();
            if (std::find(x.begin(), x.end(), r) == x.end()) x.push_back(r);
        }
        const auto h = complete_homogeneous(x, 4);
        for (int l = 1; l <= N + 4; ++l) {
            CAPTURE(N);
            CAPTURE(l);
            const Rational expect = l <= N ? Rational(l == N ? 1 : 0) : h[l - N];
            CHECK(lagrange_sum(x, l) == expect);
        }
    }
}

TEST_CASE("Gamma-F orthogonality, exact") {
    const std::vector<Rational> mu{Rational(1, 2), Rational(-3), Rational(7, 5), Rational(2, 9)};
    const auto F = product_coefficients(mu);
    const auto Gamma = complete_homogeneous(mu, 6);
    CHECK(F[0] == 1);
    CHECK(F[1] == -(mu[0] + mu[1] + mu[2] + mu[3]));
    for (int k = 1; k <= 4; ++k) {
        Rational s = 0;
        for (int j1 = 0; j1 <= k; ++j1) s += Gamma[j1] * F[k - j1];
        CHECK(s == 0);
    }
    const std::vector<Rational> beta{1, Rational(2, 3), Rational(-1, 4)};
    const auto V = flow_coefficients(F, beta, 1);
    CHECK(V[0] == 1);
    CHECK(V[1] == F[1] + beta[1]);
    CHECK(V[2] == F[2] + beta[1] * F[1] + beta[2]);
}

TEST_CASE("state construction is consistent with the curve") {
    for (const Curve &c : {genus1(), genus2()}) {
        const EllipticState s = c.genus() == 1 ? state1(c) : state2(c);
        CHECK(s.curve_defect(c) < 1e-10);
        const GFit G = fit_G(s);
        CHECK(G.residual < 1e-10);
        CHECK(std::abs(G.g[c.genus() + 1] - (c.genus() == 1 ? cplx(0.4, 0.2) : cplx(0.3, -0.1))) < 1e-10);
    }
    CHECK_THROWS_AS(make_state(genus1(), {{cplx(0.3, 1.0), 1}}, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(make_state(genus1(), {{cplx(0.3, 1.0), 1}, {cplx(0.3, 1.0), -1}}, 0.5), CollisionError);
}

TEST_CASE("Dubrovin right-hand side") {
    const Curve c = genus1();
    EllipticState s = state1(c);
    const VectorXc base = x_flow_rhs(c, s, 1e-8);
    s.mu_y[0] = -s.mu_y[0];
    const VectorXc flipped = x_flow_rhs(c, s, 1e-8);
    CHECK(std::abs(flipped[0] + base[0]) < 1e-14);
    s.mu[1] = c.sorted_points()[2];
    s.mu_y[1] = 0;
    CHECK(x_flow_rhs(c, s, 1e-8)[1] == cplx(0));
    s.mu[1] = s.mu[0];
    CHECK_THROWS_AS(x_flow_rhs(c, s, 1e-8), CollisionError);
}

TEST_CASE("short x-flow agrees with a tiny-step Euler oracle") {
    const Curve c = genus1();
    const EllipticState s0 = state1(c);
    const FlowSpec f = FlowSpec::from_curve(c, 1);
    const Trajectory traj = integrate_flow(c, s0, FlowKind::X, {0.0, 0.01}, f);
    REQUIRE(traj.states.size() == 2);
    CHECK(traj.states.front().mu == s0.mu);
    EllipticState e = s0;
    const int steps = 100000;
    for (int i = 0; i < steps; ++i) {
        const VectorXc d = x_flow_rhs(c, e, 1e-8) * (0.01 / steps);
        for (int k = 0; k < 2; ++k) {
            e.mu[k] += d[k];
            e.mu_y[k] += d[2 + k];
            e.nu[k] += d[4 + k];
            e.nu_y[k] += d[6 + k];
        }
    }
    for (int k = 0; k < 2; ++k) {
        CHECK(std::abs(e.mu[k] - traj.states.back().mu[k]) < 1e-6);
        CHECK(std::abs(e.nu[k] - traj.states.back().nu[k]) < 1e-6);
    }
    CHECK(traj.states.back().curve_defect(c) < 1e-8);
}

TEST_CASE("global error tracks the tolerance") {
    const Curve c = genus1();
    const EllipticState s0 = state1(c);
    const FlowSpec f = FlowSpec::from_curve(c, 1);
    IntegratorOptions tight;
    tight.rtol = tight.atol = 1e-13;
    const EllipticState ref = integrate_flow(c, s0, FlowKind::X, {0.5}, f, tight).states.back();
    std::vector<double> errs;
    for (double tol : {1e-6, 1e-8}) {
        IntegratorOptions o;
        o.rtol = o.atol = tol;
        const EllipticState got = integrate_flow(c, s0, FlowKind::X, {0.5}, f, o).states.back();
        double e = 0;
        for (int k = 0; k < 2; ++k) e = std::max({e, std::abs(got.mu[k] - ref.mu[k]), std::abs(got.nu[k] - ref.nu[k])});
        errs.push_back(e);
        CHECK(e < 10 * tol * 50);
    }
    CHECK(errs[1] < errs[0]);
}

TEST_CASE("x-flow is straightened by the Abel map") {
    for (const Curve &c : {genus1(), genus2()}) {
        CAPTURE(c.genus());
        const PeriodData pd = period_matrices(c);
        const EllipticState s0 = c.genus() == 1 ? state1(c) : state2(c);
        const FlowSpec f = FlowSpec::from_curve(c, 1);
        const Trajectory traj = integrate_flow(c, s0, FlowKind::X, linspace(0.0, 1.0, 21), f);
        check_linear(c, pd, traj, linear_slope(pd, FlowKind::X, f));
    }
}

TEST_CASE("t_m flows are straightened by the Abel map") {
    for (const Curve &c : {genus1(), genus2()}) {
        const PeriodData pd = period_matrices(c);
        const EllipticState s0 = c.genus() == 1 ? state1(c) : state2(c);
        for (int m = 1; m <= 2; ++m) {
            CAPTURE(c.genus());
            CAPTURE(m);
            const FlowSpec f = FlowSpec::from_curve(c, m);
            const Trajectory traj = integrate_flow(c, s0, FlowKind::T, linspace(0.0, 1.0, 21), f);
            check_linear(c, pd, traj, linear_slope(pd, FlowKind::T, f));
        }
    }
}

TEST_CASE("trajectory CSV") {
    const Curve c = genus1();
    const PeriodData pd = period_matrices(c);
    const FlowSpec f = FlowSpec::from_curve(c, 1);
    const Trajectory traj = integrate_flow(c, state1(c), FlowKind::X, {0.0, 0.1}, f);
    std::ostringstream os;
    write_trajectory_csv(os, c, traj, abel_jacobi_trajectory(c, pd, traj));
    const std::string out = os.str();
    CHECK(out.rfind("x,mu1_re,mu1_im,mu2_re,mu2_im,nu1_re", 0) == 0);
    CHECK(std::count(out.begin(), out.end(), '\n') == 3);
}

TEST_CASE("high-order series coefficients of a single factor") {
    const cplx lam(1.3, -0.4);
    const auto chat = series_chat(std::vector<cplx>{lam}, 80);
    for (int j : {10, 31, 32, 33, 50, 80}) {
        const double binom = std::exp(std::lgamma(j + 0.5) - std::lgamma(j + 1.0) - 0.5 * std::log(M_PI));
        const cplx expect = binom * std::pow(lam, j);
        CAPTURE(j);
        CHECK(std::abs(chat[j] - expect) < 1e-12 * std::abs(expect));
    }
}

TEST_CASE("far-field evaluation of the flow polynomial") {
    const Curve c = genus2();
    const FlowSpec f = FlowSpec::from_curve(c, 2);
    const int top = static_cast<int>(f.betas_long.size()) - 1;
    const auto chat = series_chat(c.sorted_points(), top);
    for (int j = 0; j <= top; ++j) CHECK(std::abs(f.betas_long[j] - chat[j]) < 1e-12 * std::max(1.0, std::abs(chat[j])));
    const std::vector<cplx> roots{cplx(0.4, 0.2), cplx(-1.1, 0.5), cplx(9.0, 7.0)};
    FlowSpec poly_only = f;
    poly_only.betas_long = poly_only.betas;
    const cplx near = flow_polynomial_at_root(roots, 2, poly_only, c.scale());
    const cplx far = flow_polynomial_at_root(roots, 2, f, c.scale());
    CHECK(std::abs(near - far) < 1e-9 * std::abs(near));
    CHECK(flow_polynomial_at_root(roots, 0, f, c.scale()) == flow_polynomial_at_root(roots, 0, poly_only, c.scale()));
}

TEST_CASE("an elliptic variable running off to infinity stops the integrator") {
    const Curve c(CurveSpec::from_points({-2.0, -1.0, 0.5, 1.5}));
    const EllipticState s = make_state(c, {{-0.5, 1}, {1.8, 1}}, 0.3);
    const FlowSpec f = FlowSpec::from_curve(c, 1);
    CHECK_NOTHROW(integrate_flow(c, s, FlowKind::X, {0.25}, f));
    CHECK_THROWS_AS(integrate_flow(c, s, FlowKind::X, {0.5}, f), std::runtime_error);
}
