#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "hfgi/theta.hpp"

using namespace hfgi;
using cd = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;
const cd kI(0, 1);

Eigen::MatrixXcd tau2() {
    Eigen::MatrixXcd t(2, 2);
    t << cd(0.3, 1.2), cd(-0.4, 0.5), cd(-0.4, 0.5), cd(0.1, 0.9);
    return t;
}

Eigen::MatrixXcd tau3() {
    Eigen::MatrixXcd t(3, 3);
    t << cd(0.2, 1.5), cd(0.1, 0.3), cd(-0.3, -0.2), cd(0.1, 0.3), cd(-0.5, 1.1), cd(0.25, 0.4), cd(-0.3, -0.2),
        cd(0.25, 0.4), cd(0.4, 1.3);
    return t;
}

/// Plain box sum, no ellipsoid pruning.
cd box_sum(const Eigen::MatrixXcd &tau, const Eigen::VectorXcd &z, int N) {
    const int g = static_cast<int>(tau.rows());
    Eigen::VectorXi n = Eigen::VectorXi::Constant(g, -N);
    cd s = 0;
    while (true) {
        const Eigen::VectorXcd nc = n.cast<cd>();
        s += std::exp(kI * kPi * nc.dot(tau * nc) + 2.0 * kPi * kI * nc.dot(z));
        int i = 0;
        while (i < g && n[i] == N) n[i++] = -N;
        if (i == g) break;
        ++n[i];
    }
    return s;
}

Eigen::VectorXcd random_z(std::mt19937 &rng, int g, double scale = 1.0) {
    std::uniform_real_distribution<double> U(-scale, scale);
    Eigen::VectorXcd z(g);
    for (int i = 0; i < g; ++i) z[i] = cd(U(rng), U(rng));
    return z;
}

/// Fourth-order central difference along d.
template <class F>
cd five_point(F &&f, const Eigen::VectorXcd &z, const Eigen::VectorXcd &d, double h = 1e-3) {
    return (-f(z + 2 * h * d) + 8.0 * f(z + h * d) - 8.0 * f(z - h * d) + f(z - 2 * h * d)) / (12 * h);
}

double rel(cd a, cd b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("theta at tau = i matches the closed form and a box sum") {
    Eigen::MatrixXcd tau(1, 1);
    tau(0, 0) = kI;
    const ThetaContext ctx(tau);
    const cd th = theta(ctx, Eigen::VectorXcd::Zero(1));
    const double closed = std::pow(kPi, 0.25) / std::tgamma(0.75);
    CHECK(std::abs(th - closed) < 1e-12 * closed);
    CHECK(std::abs(th - box_sum(tau, Eigen::VectorXcd::Zero(1), 30)) < 1e-12);
}

TEST_CASE("ellipsoid sum agrees with a box sum in genus 2 and 3") {
    std::mt19937 rng(3);
    for (const Eigen::MatrixXcd &tau : {tau2(), tau3()}) {
        const ThetaContext ctx(tau);
        const int g = ctx.genus();
        for (int rep = 0; rep < 4; ++rep) {
            const Eigen::VectorXcd z = random_z(rng, g, 0.6);
            CHECK(rel(theta(ctx, z), box_sum(tau, z, g == 2 ? 14 : 9)) < 1e-12);
        }
    }
}

TEST_CASE("parity, periodicity and quasi-periodicity") {
    std::mt19937 rng(11);
    for (const Eigen::MatrixXcd &tau : {tau2(), tau3()}) {
        const ThetaContext ctx(tau);
        const int g = ctx.genus();
        for (int rep = 0; rep < 5; ++rep) {
            const Eigen::VectorXcd z = random_z(rng, g);
            const cd t0 = theta(ctx, z);
            CHECK(rel(theta(ctx, -z), t0) < 1e-10);
            for (int k = 0; k < g; ++k) {
                const Eigen::VectorXcd ek = Eigen::VectorXcd::Unit(g, k);
                CHECK(rel(theta(ctx, z + ek), t0) < 1e-10);
                const cd factor = std::exp(-2.0 * kPi * kI * z[k] - kPi * kI * tau(k, k));
                CHECK(rel(theta(ctx, z + tau * ek), factor * t0) < 1e-10);
            }
        }
    }
}

TEST_CASE("scaled representation survives large imaginary parts") {
    const ThetaContext ctx(tau2());
    Eigen::VectorXcd z(2);
    z << cd(0.2, 40.0), cd(-0.1, -35.0);
    const ThetaValue big = theta_scaled(ctx, z);
    CHECK(std::isfinite(big.value.real()));
    CHECK(big.log_scale > 100);
    // shifting by tau e_1 three times brings it back towards the reference
    Eigen::VectorXcd w = z;
    cd log_factor = 0;
    for (int r = 0; r < 3; ++r) {
        log_factor += -2.0 * kPi * kI * w[0] - kPi * kI * tau2()(0, 0);
        w += tau2().col(0);
    }
    const ThetaValue moved = theta_scaled(ctx, w);
    const cd lhs = moved.value * std::exp(moved.log_scale - big.log_scale - log_factor);
    CHECK(rel(lhs, big.value) < 1e-9);
}

TEST_CASE("derivatives against central differences") {
    std::mt19937 rng(5);
    for (const Eigen::MatrixXcd &tau : {tau2(), tau3()}) {
        const ThetaContext ctx(tau);
        const int g = ctx.genus();
        const Eigen::VectorXcd z = random_z(rng, g, 0.5);
        const Eigen::VectorXcd d1 = random_z(rng, g), d2 = random_z(rng, g);
        const cd an1 = theta_derivative(ctx, z, {d1});
        CHECK(rel(an1, five_point([&](const Eigen::VectorXcd &p) { return theta(ctx, p); }, z, d1)) < 1e-7);
        const cd fd2 = five_point([&](const Eigen::VectorXcd &p) { return theta_derivative(ctx, p, {d1}); }, z, d2);
        CHECK(rel(theta_derivative(ctx, z, {d1, d2}), fd2) < 1e-7);
        const cd fd3 = five_point([&](const Eigen::VectorXcd &p) { return theta_derivative(ctx, p, {d1, d2}); }, z, d1);
        CHECK(rel(theta_derivative(ctx, z, {d1, d2, d1}), fd3) < 1e-7);
        const Eigen::VectorXcd grad = theta_gradient(ctx, z);
        CHECK(rel(grad.cwiseProduct(d1).sum(), an1) < 1e-12);
    }
}

TEST_CASE("odd characteristic vanishes at the origin") {
    const ThetaContext ctx(tau2());
    Eigen::VectorXd a(2), b(2);
    a << 0.5, 0.0;
    b << 0.5, 0.0;
    CHECK(std::abs(theta_char(ctx, a, b, Eigen::VectorXcd::Zero(2))) < 1e-13);
    b << 0.0, 0.0;
    CHECK(std::abs(theta_char(ctx, a, b, Eigen::VectorXcd::Zero(2))) > 1e-3);
}

TEST_CASE("tail bound and radius") {
    const ThetaContext ctx(tau3());
    for (int order = 0; order < 4; ++order) {
        CHECK(ctx.tail_bound(ctx.radius(order), order) <= 1e-16);
        CHECK(ctx.tail_bound(ctx.radius(order) + 1, order) < ctx.tail_bound(ctx.radius(order), order));
    }
    CHECK(ctx.radius(3) > ctx.radius(0));
    CHECK_THROWS_AS(ThetaContext(Eigen::MatrixXcd::Identity(2, 2)), std::invalid_argument);
}
