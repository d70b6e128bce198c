#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "hfgi/curve.hpp"
#include "hfgi/series.hpp"
#include "hfgi/jet.hpp"

using namespace hfgi;

namespace {

constexpr double kPi = std::numbers::pi;

double agm(double a, double b) {
    for (int i = 0; i < 40; ++i) {
        const double m = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = m;
    }
    return a;
}

double ellipticK(double k) { return kPi / (2.0 * agm(1.0, std::sqrt(1.0 - k * k))); }

Curve genus2() {
    return Curve(CurveSpec::from_points({{-3.0, 0.2}, {-2.0, -0.1}, {-0.5, 0.3}, {0.7, -0.2}, {2.1, 0.1}, {3.0, -0.3}}));
}

/// Plain trapezoid on a circle that encloses only cut k; y_+ is analytic there.
VectorXc circle_oracle(const Curve &c, int k, double radius, int l_max) {
    const cplx center = 0.5 * (c.cut_start(k) + c.cut_end(k));
    const int N = 4000;
    VectorXc s = VectorXc::Zero(l_max);
    for (int i = 0; i < N; ++i) {
        const cplx e = std::polar(1.0, 2 * kPi * i / N);
        const cplx lambda = center + radius * e;
        const cplx dl = cplx(0, 1) * radius * e * (2 * kPi / N);
        for (int l = 0; l < l_max; ++l) s[l] += std::pow(lambda, l) / c.y_plus(lambda) * dl;
    }
    return s;
}

}  // namespace

TEST_CASE("series coefficients: closed values and two routes") {
    const std::vector<Rational> lam{1, 2, 3, 4};
    const auto c = series_c(lam, 3);
    const auto ch = series_chat(lam, 3);
    CHECK(c[0] == 1);
    CHECK(ch[0] == 1);
    CHECK(c[1] == -5);
    CHECK(ch[1] == 5);
    for (int l = -1; l <= 3; ++l) {
        CHECK(series_multinomial(lam, l, true) == c[l + 1]);
        CHECK(series_multinomial(lam, l, false) == ch[l + 1]);
    }
}

TEST_CASE("series convolution identity, exact and floating") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> num(-9, 9), den(1, 5);
    for (int genus = 1; genus <= 3; ++genus) {
        std::vector<Rational> lam;
        for (int j = 0; j < 2 * genus + 2; ++j) {
            Rational q(num(rng), den(rng));
            q.canonicalize();
            lam.push_back(q);
        }
        const auto c = series_c(lam, 10), ch = series_chat(lam, 10);
        for (int k = 0; k <= 10; ++k) {
            Rational s = 0;
            for (int l = 0; l <= k; ++l) s += c[k - l] * ch[l];
            CHECK(s == (k == 0 ? 1 : 0));
        }
    }
    std::uniform_real_distribution<double> U(-2, 2);
    std::vector<cplx> lam;
    for (int j = 0; j < 6; ++j) lam.emplace_back(U(rng), U(rng));
    const auto c = series_c(lam, 10), ch = series_chat(lam, 10);
    for (int k = 0; k <= 10; ++k) {
        cplx s = 0;
        for (int l = 0; l <= k; ++l) s += c[k - l] * ch[l];
        CHECK(std::abs(s - (k == 0 ? 1.0 : 0.0)) < 1e-12 * std::max(1.0, std::abs(c[k])));
        const double ref = std::max(1.0, std::abs(c[k + 1]));
        CHECK(std::abs(series_multinomial(lam, k, true) - c[k + 1]) < 1e-12 * ref);
    }
}

TEST_CASE("curve validation") {
    CHECK_THROWS_AS(CurveSpec::from_points({1, 2, 3}), CurveError);
    CHECK_THROWS_AS(CurveSpec::from_points({1, 2, 3, 0.0}), CurveError);
    CHECK_THROWS_AS(CurveSpec::from_points({1, 2, 3, 3}), CurveError);
}

TEST_CASE("sqrtR conventions") {
    const Curve c(CurveSpec::from_points({-2, -1, 1, 2}));
    CHECK(std::abs(c.y_plus(3.0) - std::sqrt(40.0)) < 1e-14);
    CHECK(c.sqrtR({2.0, 1}) == cplx(0));
    const SurfacePoint p{cplx(0.3, 0.7), 1};
    CHECK(std::abs(c.sqrtR(p) + c.sqrtR(p.involution())) < 1e-15);
    const Curve g = genus2();
    for (const cplx lambda : {cplx(0.1, 2.0), cplx(-4, -1), cplx(5, 0.3)}) {
        CHECK(std::abs(g.y_plus(lambda) * g.y_plus(lambda) - g.R(lambda)) < 1e-12 * std::abs(g.R(lambda)));
    }
    const cplx far(1e5, 3e4);
    CHECK(std::abs(g.y_plus(far) / std::pow(far, 3) - 1.0) < 1e-4);
    CHECK(std::abs(g.y_hat(1.0 / far) * std::pow(far, 3) - g.y_plus(far)) < 1e-9 * std::abs(g.y_plus(far)));
}

TEST_CASE("a-cycle quadrature matches a brute-force contour") {
    const Curve g = genus2();
    for (int k = 0; k < 2; ++k) {
        const VectorXc cheb = g.a_cycle_integral(k, [](cplx l) {
            VectorXc r(3);
            r << 1.0, l, l * l;
            return r;
        });
        const double half = 0.5 * std::abs(g.cut_end(k) - g.cut_start(k));
        const VectorXc oracle = circle_oracle(g, k, half + 0.35, 3);
        CHECK((cheb - oracle).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("genus-1 periods against the AGM oracle") {
    for (double k : {0.3, 0.55, 0.8}) {
        const Curve c(CurveSpec::from_points({-1.0 / k, -1.0, 1.0, 1.0 / k}));
        const PeriodData pd = period_matrices(c);
        const double kp = std::sqrt(1 - k * k);
        CHECK(std::abs(std::abs(pd.A(0, 0)) - 2 * k * ellipticK(kp)) < 1e-10 * 2 * k * ellipticK(kp));
        const cplx tau_ref(0, 2 * ellipticK(k) / ellipticK(kp));
        CHECK(std::abs(pd.tau(0, 0) - tau_ref) < 1e-10 * std::abs(tau_ref));
    }
}

TEST_CASE("genus-2 period matrix quality") {
    const Curve g = genus2();
    const PeriodData pd = period_matrices(g);
    CHECK(pd.symmetry_error < 1e-10);
    CHECK((pd.C * pd.A - MatrixXc::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-10);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(pd.tau.imag());
    CHECK(es.eigenvalues().minCoeff() > 0);
    CHECK(pd.b_paths.size() == 2);

    // node doubling changes nothing beyond the target
    const PeriodData tight = period_matrices(g, 1e-15);
    CHECK((tight.tau - pd.tau).cwiseAbs().maxCoeff() < 1e-10 * pd.tau.cwiseAbs().maxCoeff());

    // continuity under a tiny perturbation of one branch point
    const Curve g2(CurveSpec::from_points({{-3.0, 0.2}, {-2.0, -0.1}, {-0.5, 0.3}, {0.7 + 1e-9, -0.2}, {2.1, 0.1}, {3.0, -0.3}}));
    const PeriodData pd2 = period_matrices(g2);
    const double dA = (pd2.A - pd.A).cwiseAbs().maxCoeff(), dB = (pd2.B - pd.B).cwiseAbs().maxCoeff();
    CHECK(dA < 1e-7);
    CHECK(dB < 1e-7);
}

TEST_CASE("period data round trip") {
    const Curve g = genus2();
    const PeriodData pd = period_matrices(g);
    std::stringstream ss;
    write_period_data(ss, pd);
    const PeriodData back = read_period_data(ss, g);
    CHECK(back.A == pd.A);
    CHECK(back.tau == pd.tau);
    CHECK(back.b_signs == pd.b_signs);
}

TEST_CASE("Abel map properties") {
    const Curve g = genus2();
    const PeriodData pd = period_matrices(g);
    CHECK(abel_map(g, pd, {pd.base_point, 1}).cwiseAbs().maxCoeff() == 0.0);
    const SurfacePoint p{cplx(0.4, 1.3), 1};
    const VectorXc a = abel_map(g, pd, p), b = abel_map(g, pd, p.involution());
    CHECK(lattice_reduce(a + b, pd.tau).reduced.cwiseAbs().maxCoeff() < 1e-10);
    // value independent of the chosen path up to lattice vectors
    const VectorXc detour = abel_plus(g, pd, p.lambda, {{cplx(-0.5, 0.8), 0.4}});
    CHECK(lattice_reduce(a - detour, pd.tau).reduced.cwiseAbs().maxCoeff() < 1e-10);

    // branch points map to half periods
    for (const cplx &e : g.sorted_points()) {
        const VectorXc h = 2.0 * abel_plus(g, pd, e);
        CHECK(lattice_reduce(h, pd.tau).reduced.cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("Abel map at infinity") {
    const Curve g = genus2();
    const PeriodData pd = period_matrices(g);
    const VectorXc ap = abel_map_infinity(g, pd, 1), am = abel_map_infinity(g, pd, -1);
    CHECK((ap + am).cwiseAbs().maxCoeff() < 1e-12);
    // leading coefficients: +C_n at P_inf+, -C_n at P_inf-
    const VectorXc Cn = pd.C.col(1);
    CHECK((omega_zeta(g, pd, 0.0, infinity_sheet(1)) - Cn).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((omega_zeta(g, pd, 0.0, infinity_sheet(-1)) + Cn).cwiseAbs().maxCoeff() < 1e-12);
    // oracle: straight ray integral in lambda from a far point, tail by the leading term
    const cplx far(3e3, 2e3);
    const VectorXc to_far = abel_plus(g, pd, far);
    const VectorXc tail = Cn / far;  // int_far^inf of C_n dlambda / lambda^2 on sheet +1
    const VectorXc plus_sheet_inf = -ap;  // sheet +1 is P_inf-
    CHECK(lattice_reduce(to_far + tail - plus_sheet_inf, pd.tau).reduced.cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("third-kind differential") {
    const Curve g = genus2();
    const PeriodData pd = period_matrices(g);
    const SurfacePoint qp{cplx(0.3, 1.1), 1}, qm{cplx(-1.2, -0.9), -1};
    const ThirdKindData t = third_kind(g, pd, qp, qm);
    CHECK(t.a_period_error < 1e-9);
    CHECK(std::abs(third_kind_residue(g, t, qp, 0.05) - 1.0) < 1e-8);
    CHECK(std::abs(third_kind_residue(g, t, qm, 0.05) + 1.0) < 1e-8);
    CHECK(std::abs(third_kind_residue(g, t, qp.involution(), 0.05)) < 1e-8);
    const cplx M = 0.5 * (qm.lambda - qp.lambda);
    CHECK(std::abs(t.M - M) < 1e-15);
    for (int sign : {1, -1}) {
        const cplx lead = t.integrand_zeta(g, 0.0, infinity_sheet(sign));
        CHECK(std::abs(lead - (M + static_cast<double>(sign) * t.gamma[1])) < 1e-12);
    }
    // gamma_1 is the root of kappa_1 + kappa_2 lambda
    CHECK(std::abs(t.kappa[0] + t.kappa[1] * t.gamma[0]) < 1e-12);
}
