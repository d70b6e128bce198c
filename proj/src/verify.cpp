#include "hfgi/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <limits>
#include <random>
#include <stdexcept>

#include "hfgi/lenard.hpp"
#include "hfgi/series.hpp"

namespace hfgi {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI(0, 1);

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

/// Item "name: value < limit".
CheckItem below(std::string name, double value, double limit) {
    return {std::move(name), value < limit, sci(value) + " < " + sci(limit)};
}

CheckItem exact(std::string name, bool ok) { return {std::move(name), ok, ok ? "exact" : "differs"}; }

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
    return v;
}

Curve genus1_curve() { return Curve(CurveSpec::from_points({{-2.0, 0.3}, {-0.8, -0.2}, {0.9, 0.4}, {2.2, -0.1}})); }

Curve genus2_curve() {
    return Curve(CurveSpec::from_points({{-3.0, 0.2}, {-2.0, -0.1}, {-0.5, 0.3}, {0.7, -0.2}, {2.1, 0.1}, {3.0, -0.3}}));
}

Curve genus3_curve() {
    return Curve(CurveSpec::from_points(
        {{-4.0, 0.2}, {-3.0, -0.1}, {-1.5, 0.3}, {-0.5, -0.2}, {0.8, 0.1}, {1.9, -0.3}, {3.0, 0.2}, {4.1, -0.1}}));
}

EllipticState genus1_state(const Curve &c) {
    return make_state(c, {{cplx(0.3, 1.0), 1}, {cplx(-1.0, -0.9), -1}}, cplx(0.4, 0.2));
}

EllipticState genus2_state(const Curve &c) {
    return make_state(c, {{cplx(0.3, 1.0), 1}, {cplx(-1.4, -0.9), -1}, {cplx(1.6, 0.8), 1}}, cplx(0.3, -0.1));
}

// ---------------------------------------------------------------- oracles

double agm(double a, double b) {
    for (int i = 0; i < 40; ++i) {
        const double m = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = m;
    }
    return a;
}

double elliptic_k(double k) { return kPi / (2.0 * agm(1.0, std::sqrt(1.0 - k * k))); }

/// Trapezoid sum of lambda^l / y_+ on a circle around cut k that keeps clear of the other cuts.
VectorXc circle_periods(const Curve &c, int k) {
    const cplx center = 0.5 * (c.cut_start(k) + c.cut_end(k));
    const double half = 0.5 * std::abs(c.cut_end(k) - c.cut_start(k));
    double other = std::numeric_limits<double>::infinity();
    for (const cplx &e : c.sorted_points()) {
        if (e != c.cut_start(k) && e != c.cut_end(k)) other = std::min(other, std::abs(e - center));
    }
    const double radius = 0.5 * (half + other);
    const int N = 4000, n = c.genus();
    VectorXc s = VectorXc::Zero(n);
    for (int i = 0; i < N; ++i) {
        const cplx e = std::polar(1.0, 2 * kPi * i / N);
        const cplx lambda = center + radius * e;
        const cplx dl = kI * radius * e * (2 * kPi / N);
        for (int l = 0; l < n; ++l) s[l] += std::pow(lambda, l) / c.y_plus(lambda) * dl;
    }
    return s;
}

cplx box_sum(const MatrixXc &tau, const VectorXc &z, int N) {
    const int g = static_cast<int>(tau.rows());
    Eigen::VectorXi n = Eigen::VectorXi::Constant(g, -N);
    cplx s = 0;
    while (true) {
        const VectorXc nc = n.cast<cplx>();
        s += std::exp(kI * kPi * nc.dot(tau * nc) + 2.0 * kPi * kI * nc.dot(z));
        int i = 0;
        while (i < g && n[i] == N) n[i++] = -N;
        if (i == g) break;
        ++n[i];
    }
    return s;
}

template <class F>
cplx five_point(F &&f, const VectorXc &z, const VectorXc &d, double h = 1e-3) {
    return (-f(z + 2 * h * d) + 8.0 * f(z + h * d) - 8.0 * f(z - h * d) + f(z - 2 * h * d)) / (12 * h);
}

VectorXc random_vector(std::mt19937 &rng, int g, double scale) {
    std::uniform_real_distribution<double> U(-scale, scale);
    VectorXc z(g);
    for (int i = 0; i < g; ++i) z[i] = cplx(U(rng), U(rng));
    return z;
}

/// Max deviation from the least-squares line, and its slope.
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

/// Slopes of rho1: 2 C_{jn} along x, 2 sum_l beta_{l-1} C_{j, n-m+l} along t_m.
VectorXc predicted_slope(const PeriodData &pd, FlowKind kind, const FlowSpec &f) {
    const int n = static_cast<int>(pd.C.rows());
    if (kind == FlowKind::X) return 2.0 * pd.C.col(n - 1);
    VectorXc s = VectorXc::Zero(n);
    for (int l = 0; l <= f.m; ++l) {
        if (n - f.m + l >= 1) s += 2.0 * f.betas[l] * pd.C.col(n - f.m + l - 1);
    }
    return s;
}

std::string flow_label(int genus, FlowKind kind, int m) {
    return "genus " + std::to_string(genus) + (kind == FlowKind::X ? " x" : " t_" + std::to_string(m));
}

}  // namespace

bool CheckResult::pass() const {
    if (time_limit > 0 && seconds >= time_limit) return false;
    for (const CheckItem &it : items) {
        if (!it.pass) return false;
    }
    return !items.empty();
}

std::string CheckResult::summary() const {
    for (const CheckItem &it : items) {
        if (!it.pass) return it.name + ": " + it.detail;
    }
    if (items.empty()) return "no items";
    char buf[64];
    if (time_limit > 0 && seconds >= time_limit) {
        std::snprintf(buf, sizeof buf, "runtime %.1f s >= %.0f s", seconds, time_limit);
        return buf;
    }
    std::snprintf(buf, sizeof buf, "%zu items, %.2f s", items.size(), seconds);
    return buf;
}

Thresholds Thresholds::scaled(double factor) const {
    Thresholds t = *this;
    for (double *p : {&t.period, &t.agm, &t.theta_laws, &t.theta_fd, &t.theta_box, &t.linear_fit, &t.constraint,
                      &t.residual, &t.asymptotics, &t.w_routes, &t.divisor_routes})
        *p *= factor;
    t.convergence_ratio /= factor;
    return t;
}

DemoSetup compact_genus1_setup() {
    return {{-0.1, -0.075, 0.15, 0.175}, {{cplx(0.025, 0.075), 1}, {cplx(0.075, -0.0875), -1}}, 0.2, cplx(1.0, 0.5)};
}

CheckResult check_symbolic() {
    Stopwatch sw;
    CheckResult r{1, "Lenard chain and hierarchy members", {}, 0, 10.0};
    const LenardChain lc(3);
    const JetExpr u = JetExpr::u(), v = JetExpr::v(), w = JetExpr::w();
    const JetExpr ux = JetExpr::u(1), vx = JetExpr::v(1), uxx = JetExpr::u(2), vxx = JetExpr::v(2);
    const JetExpr wx = jet_derive(w), wxx = jet_derive(w, 2);
    const JetExpr i2w = (JetExpr(2) * w).inverse(), i4w = (JetExpr(4) * w).inverse();
    auto q = [](long n, long d) { return JetExpr(Rational(n, d)); };

    const LenardTriple L0{-vx * i2w, ux * i2w, (ux * v - u * vx) * i2w};
    const LenardTriple L1{(vxx * w - v * wxx) * i4w, (uxx * w - u * wxx) * i4w,
                          (JetExpr(-2) * wxx - JetExpr(3) * w * (ux * vx + wx * wx)) * i4w};
    r.items.push_back(exact("L_0", lc.L(0) == L0));
    r.items.push_back(exact("L_1", lc.L(1) == L1));
    bool chain = apply_J(lenard_seed()).is_zero();
    for (int j = 0; j <= lc.jmax(); ++j) chain = chain && apply_J(lc.L(j)) == apply_K(lc.L(j - 1));
    r.items.push_back(exact("K L_{j-1} = J L_j, j <= 3", chain));

    const auto [u1, v1] = hierarchy_rhs(lc, 1);
    r.items.push_back(exact("u_t1 = (u_xx w - u w_xx) / 2", u1 == q(1, 2) * (uxx * w - u * wxx)));
    r.items.push_back(exact("v_t1 = (w_xx v - w v_xx) / 2", v1 == q(1, 2) * (wxx * v - w * vxx)));
    const auto [u2, v2] = hierarchy_rhs(lc, 2);
    r.items.push_back(exact("u_t2 = u_xxx / 4 + 3/8 (u u_x v_x + u w_x^2)_x",
                            u2 == q(1, 4) * JetExpr::u(3) + q(3, 8) * jet_derive(u * ux * vx + u * wx * wx)));
    r.items.push_back(exact("v_t2 = v_xxx / 4 + 3/8 (v u_x v_x + v w_x^2)_x",
                            v2 == q(1, 4) * JetExpr::v(3) + q(3, 8) * jet_derive(v * ux * vx + v * wx * wx)));
    r.seconds = sw.seconds();
    return r;
}

CheckResult check_hamiltonian() {
    Stopwatch sw;
    CheckResult r{2, "Hamiltonians and zero curvature", {}, 0, 0};
    const LenardChain lc(3);
    for (int n = 1; n <= 2; ++n) {
        const JetExpr h = hamiltonian(lc, n);
        r.items.push_back(exact("dH_" + std::to_string(n) + "/du = c_" + std::to_string(n),
                                variational_derivative(h, Field::U) == lc.L(n).c));
        r.items.push_back(exact("dH_" + std::to_string(n) + "/dv = b_" + std::to_string(n),
                                variational_derivative(h, Field::V) == lc.L(n).b));
    }
    for (int m = 1; m <= 3; ++m)
        r.items.push_back(exact("U_t - V_x + [U, V] = 0, m = " + std::to_string(m),
                                zero_curvature_residual(lc, m).is_zero()));
    // a perturbed flow must leave a residual
    const auto [u1, v1] = hierarchy_rhs(lc, 1);
    r.items.push_back(exact("perturbed flow rejected", !zero_curvature_residual(lc, 1, u1 + JetExpr::u(), v1).is_zero()));
    r.seconds = sw.seconds();
    return r;
}

CheckResult check_homogeneous() {
    Stopwatch sw;
    CheckResult r{3, "Homogeneous recursion against the hatted Lenard quantities", {}, 0, 0};
    const LenardChain lc(3);
    const HomogeneousSeq s = homogeneous_recursion(3);
    const FGH hat = hatted_coefficients(lc, 3);
    for (int k = -1; k <= 3; ++k) {
        const std::string ks = std::to_string(k);
        r.items.push_back(exact("F_" + ks, s.F[k + 1] == hat.F[k + 1]));
        r.items.push_back(exact("H_" + ks, s.H[k + 1] == hat.H[k + 1]));
        r.items.push_back(exact("G_" + ks, s.G[k + 1] == hat.G[k + 1]));
        const bool deg = degree(hat.F[k + 1]) == k + 1 && degree(hat.H[k + 1]) == k + 1 &&
                         degree(hat.G[k + 1]) == k + 1;
        r.items.push_back(exact("degree " + ks + " + 1", deg));
    }
    r.items.push_back(exact("recursion relations", homogeneous_relations_hold(s)));
    r.seconds = sw.seconds();
    return r;
}

CheckResult check_series() {
    Stopwatch sw;
    CheckResult r{4, "Series convolution identity", {}, 0, 0};
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> num(-9, 9), den(1, 5);
    for (int genus = 1; genus <= 3; ++genus) {
        for (int rep = 0; rep < 3; ++rep) {
            std::vector<Rational> lam;
            for (int j = 0; j < 2 * genus + 2; ++j) {
                Rational q(num(rng), den(rng));
                q.canonicalize();
                lam.push_back(q);
            }
            const auto c = series_c(lam, 10), ch = series_chat(lam, 10);
            bool ok = true;
            for (int k = 0; k <= 10; ++k) {
                Rational s = 0;
                for (int l = 0; l <= k; ++l) s += c[k - l] * ch[l];
                ok = ok && s == (k == 0 ? 1 : 0);
            }
            r.items.push_back(exact("genus " + std::to_string(genus) + " sample " + std::to_string(rep) + ", k <= 10", ok));
        }
    }
    r.seconds = sw.seconds();
    return r;
}

CheckResult check_periods(const Thresholds &th) {
    Stopwatch sw;
    CheckResult r{5, "Period matrices", {}, 0, 0};
    double worst_time = 0;
    for (double k : {0.3, 0.55, 0.8}) {
        Stopwatch one;
        const Curve c(CurveSpec::from_points({-1.0 / k, -1.0, 1.0, 1.0 / k}));
        const PeriodData pd = period_matrices(c);
        worst_time = std::max(worst_time, one.seconds());
        const double kp = std::sqrt(1 - k * k);
        const double a_ref = 2 * k * elliptic_k(kp);
        const cplx tau_ref(0, 2 * elliptic_k(k) / elliptic_k(kp));
        const double err = std::max(std::abs(std::abs(pd.A(0, 0)) - a_ref) / a_ref, rel(pd.tau(0, 0), tau_ref));
        r.items.push_back(below("AGM oracle, k = " + sci(k), err, th.agm));
    }
    for (const Curve &c : {genus2_curve(), genus3_curve()}) {
        Stopwatch one;
        const PeriodData pd = period_matrices(c);
        worst_time = std::max(worst_time, one.seconds());
        const int n = c.genus();
        const std::string g = "genus " + std::to_string(n);
        double norm = 0;
        for (int k = 0; k < n; ++k)
            norm = std::max(norm, (pd.C * circle_periods(c, k) - VectorXc::Unit(n, k)).cwiseAbs().maxCoeff());
        r.items.push_back(below(g + " a-periods of omega against circle sums", norm, th.period));
        r.items.push_back(below(g + " tau symmetry", (pd.tau - pd.tau.transpose()).cwiseAbs().maxCoeff(), th.period));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (pd.tau.imag() + pd.tau.imag().transpose()));
        const double lmin = es.eigenvalues().minCoeff();
        r.items.push_back({g + " Im tau positive definite", lmin > 0, "min eigenvalue " + sci(lmin)});
    }
    r.items.push_back(below("slowest curve runtime (s)", worst_time, 30.0));
    r.seconds = sw.seconds();
    return r;
}

CheckResult check_theta(const Thresholds &th) {
    Stopwatch sw;
    CheckResult r{6, "Theta function", {}, 0, 0};
    MatrixXc t2(2, 2), t3(3, 3);
    t2 << cplx(0.3, 1.2), cplx(-0.4, 0.5), cplx(-0.4, 0.5), cplx(0.1, 0.9);
    t3 << cplx(0.2, 1.5), cplx(0.1, 0.3), cplx(-0.3, -0.2), cplx(0.1, 0.3), cplx(-0.5, 1.1), cplx(0.25, 0.4),
        cplx(-0.3, -0.2), cplx(0.25, 0.4), cplx(0.4, 1.3);
    std::vector<std::pair<std::string, MatrixXc>> taus{{"synthetic genus 2", t2}, {"synthetic genus 3", t3}};
    taus.emplace_back("genus-2 curve", period_matrices(genus2_curve()).tau);

    std::mt19937 rng(11);
    for (const auto &[label, tau] : taus) {
        const ThetaContext ctx(tau);
        const int g = ctx.genus();
        double parity = 0, period = 0, quasi = 0, fd = 0;
        for (int rep = 0; rep < 5; ++rep) {
            const VectorXc z = random_vector(rng, g, 1.0);
            const cplx t0 = theta(ctx, z);
            parity = std::max(parity, rel(theta(ctx, -z), t0));
            for (int k = 0; k < g; ++k) {
                const VectorXc ek = VectorXc::Unit(g, k);
                period = std::max(period, rel(theta(ctx, z + ek), t0));
                const cplx factor = std::exp(-2.0 * kPi * kI * z[k] - kPi * kI * tau(k, k));
                quasi = std::max(quasi, rel(theta(ctx, z + tau * ek), factor * t0));
            }
            const VectorXc zs = random_vector(rng, g, 0.5), d1 = random_vector(rng, g, 1.0), d2 = random_vector(rng, g, 1.0);
            auto th0 = [&](const VectorXc &p) { return theta(ctx, p); };
            auto th1 = [&](const VectorXc &p) { return theta_derivative(ctx, p, {d1}); };
            auto th2 = [&](const VectorXc &p) { return theta_derivative(ctx, p, {d1, d2}); };
            fd = std::max({fd, rel(theta_derivative(ctx, zs, {d1}), five_point(th0, zs, d1)),
                           rel(theta_derivative(ctx, zs, {d1, d2}), five_point(th1, zs, d2)),
                           rel(theta_derivative(ctx, zs, {d1, d2, d1}), five_point(th2, zs, d1))});
        }
        r.items.push_back(below(label + " parity", parity, th.theta_laws));
        r.items.push_back(below(label + " periodicity", period, th.theta_laws));
        r.items.push_back(below(label + " quasi-periodicity", quasi, th.theta_laws));
        r.items.push_back(below(label + " derivatives vs central differences", fd, th.theta_fd));
    }
    MatrixXc ti(1, 1);
    ti(0, 0) = kI;
    const ThetaContext ctx(ti);
    const cplx t0 = theta(ctx, VectorXc::Zero(1));
    r.items.push_back(below("theta(0; i) vs lattice box sum", std::abs(t0 - box_sum(ti, VectorXc::Zero(1), 30)), th.theta_box));
    const double closed = std::pow(kPi, 0.25) / std::tgamma(0.75);
    r.items.push_back(below("theta(0; i) vs pi^(1/4) / Gamma(3/4)", std::abs(t0 - closed) / closed, th.theta_box));
    r.seconds = sw.seconds();
    return r;
}

CheckResult check_linearization(const Thresholds &th) {
    Stopwatch sw;
    CheckResult r{7, "Linearization of the Dubrovin flows", {}, 0, 120.0};
    const std::vector<double> s = linspace(0.0, 1.0, 21);
    for (int genus : {1, 2}) {
        const Curve c = genus == 1 ? genus1_curve() : genus2_curve();
        const PeriodData pd = period_matrices(c);
        const EllipticState s0 = genus == 1 ? genus1_state(c) : genus2_state(c);
        for (const auto &[kind, m] : {std::pair{FlowKind::X, 1}, {FlowKind::T, 1}, {FlowKind::T, 2}}) {
            const FlowSpec f = FlowSpec::from_curve(c, m);
            const auto rho = abel_jacobi_trajectory(c, pd, integrate_flow(c, s0, kind, s, f));
            const VectorXc slope = predicted_slope(pd, kind, f);
            double fit = 0, slope_err = 0;
            for (int j = 0; j < genus; ++j) {
                std::vector<cplx> r1, r2;
                for (const auto &p : rho) {
                    r1.push_back(p.first[j]);
                    r2.push_back(p.second[j]);
                }
                const auto [res1, b1] = line_fit(s, r1);
                const auto [res2, b2] = line_fit(s, r2);
                fit = std::max({fit, res1, res2});
                slope_err = std::max({slope_err, std::abs(b1 - slope[j]), std::abs(b2 + slope[j])});
            }
            const std::string label = flow_label(genus, kind, m);
            r.items.push_back(below(label + " linear-fit residual", fit, th.linear_fit));
            r.items.push_back(below(label + " slope vs prediction", slope_err, th.linear_fit));
        }
    }
    r.seconds = sw.seconds();
    return r;
}

CheckResult check_reconstruction(const Thresholds &th) {
    Stopwatch sw;
    CheckResult r{8, "Theta-function reconstruction on a genus-1 grid", {}, 0, 300.0};
    const DemoSetup d = compact_genus1_setup();
    const Curve c(CurveSpec::from_points(d.branch_points));
    const EllipticState s0 = make_state(c, d.mu, d.w0);
    const PeriodData pd = period_matrices(c);
    const ThetaContext ctx(pd.tau);
    const LenardChain lc(3);
    ReconstructOptions opt;
    opt.ode.rtol = opt.ode.atol = 1e-12;
    opt.divisor_check_stride = 10;
    for (int m : {1, 2}) {
        const FlowSpec f = FlowSpec::from_curve(c, m);
        const std::string ms = "m = " + std::to_string(m);
        const Reconstruction fine = reconstruct(c, pd, ctx, s0, f, default_grid(pd, f, 201, 41), d.u0, lc, opt);
        const Reconstruction coarse = reconstruct(c, pd, ctx, s0, f, default_grid(pd, f, 101, 21), d.u0, lc, opt);
        r.items.push_back(below(ms + " w^2 + u v - 1", fine.report.constraint, th.constraint));
        r.items.push_back(below(ms + " max PDE residual on 201 x 41", fine.report.residual.max, th.residual));
        const double ratio = coarse.report.residual.max / fine.report.residual.max;
        r.items.push_back({ms + " residual ratio 101 x 21 / 201 x 41", ratio > th.convergence_ratio,
                           sci(ratio) + " > " + sci(th.convergence_ratio) + " (order " + sci(std::log2(ratio)) + ")"});
        r.items.push_back(below(ms + " theta w vs Lax-pair w", fine.report.w_routes, th.w_routes));

        // phi asymptotics at interior nodes of the middle row, derivatives from the grid
        const FieldGrid &g = fine.grid;
        const int it = static_cast<int>(g.t.size()) / 2, nx = static_cast<int>(g.x.size());
        const double h = g.x[1] - g.x[0];
        double lead = 0, wdiff = 0;
        for (int j = 10; j < nx - 10; j += (nx - 20) / 6) {
            auto dx = [&](const MatrixXc &F) {
                return (F(it, j - 2) - 8.0 * F(it, j - 1) + 8.0 * F(it, j + 1) - F(it, j + 2)) / (12 * h);
            };
            const cplx u = g.u(it, j), w = g.w(it, j);
            const PhiAsymptotics a = phi_asymptotics_check(c, fine.states[it][j], u, w, dx(g.u), dx(g.w));
            lead = std::max(lead, a.lead_error);
            const cplx w_phi = -(a.lead[0] + a.lead[1]) / (a.lead[1] - a.lead[0]);
            wdiff = std::max(wdiff, std::abs(w_phi - w) / std::max(1.0, std::abs(w)));
        }
        r.items.push_back(below(ms + " phi leading terms at infinity", lead, th.asymptotics));
        r.items.push_back(below(ms + " w from phi asymptotics vs theta w", wdiff, th.w_routes));
    }
    r.seconds = sw.seconds();
    return r;
}

CheckResult check_divisor_routes(const Thresholds &th) {
    Stopwatch sw;
    CheckResult r{9, "Linear rho flow against Dubrovin integration", {}, 0, 0};
    const std::vector<double> s = linspace(0.0, 1.0, 21);
    IntegratorOptions ode;
    ode.rtol = ode.atol = 1e-12;
    for (int genus : {1, 2}) {
        const Curve c = genus == 1 ? genus1_curve() : genus2_curve();
        const PeriodData pd = period_matrices(c);
        const EllipticState s0 = genus == 1 ? genus1_state(c) : genus2_state(c);
        for (const auto &[kind, m] : {std::pair{FlowKind::X, 1}, {FlowKind::T, 1}, {FlowKind::T, 2}}) {
            const FlowSpec f = FlowSpec::from_curve(c, m);
            const auto rho = abel_jacobi_trajectory(c, pd, integrate_flow(c, s0, kind, s, f, ode));
            const VectorXc slope = predicted_slope(pd, kind, f);
            double diff = 0;
            for (std::size_t i = 0; i < s.size(); ++i) {
                const VectorXc l1 = rho[0].first + s[i] * slope, l2 = rho[0].second - s[i] * slope;
                const VectorXc d1 = unwrap_to(rho[i].first, l1, pd.tau) - l1;
                const VectorXc d2 = unwrap_to(rho[i].second, l2, pd.tau) - l2;
                for (int j = 0; j < genus; ++j) {
                    diff = std::max({diff, std::abs(d1[j].real()), std::abs(d1[j].imag()), std::abs(d2[j].real()),
                                     std::abs(d2[j].imag())});
                }
            }
            r.items.push_back(below(flow_label(genus, kind, m) + " over [0, 1]", diff, th.divisor_routes));
        }
    }
    // every node of a reconstruction grid
    const DemoSetup d = compact_genus1_setup();
    const Curve c(CurveSpec::from_points(d.branch_points));
    const PeriodData pd = period_matrices(c);
    const ThetaContext ctx(pd.tau);
    ReconstructOptions opt;
    opt.ode = ode;
    for (int m : {1, 2}) {
        const FlowSpec f = FlowSpec::from_curve(c, m);
        const Reconstruction rec = reconstruct(c, pd, ctx, make_state(c, d.mu, d.w0), f, default_grid(pd, f, 101, 21),
                                               d.u0, LenardChain(m + 1), opt);
        r.items.push_back(below("reconstruction grid 101 x 21, m = " + std::to_string(m), rec.report.divisor_routes,
                                th.divisor_routes));
    }
    r.seconds = sw.seconds();
    return r;
}

std::vector<CheckResult> verify_all(const Thresholds &th, const std::function<void(const CheckResult &)> &progress) {
    const std::vector<std::function<CheckResult()>> checks{
        check_symbolic,
        check_hamiltonian,
        check_homogeneous,
        check_series,
        [&] { return check_periods(th); },
        [&] { return check_theta(th); },
        [&] { return check_linearization(th); },
        [&] { return check_reconstruction(th); },
        [&] { return check_divisor_routes(th); },
    };
    std::vector<CheckResult> out;
    for (std::size_t i = 0; i < checks.size(); ++i) {
        try {
            out.push_back(checks[i]());
        } catch (const std::exception &e) {
            CheckResult failed{static_cast<int>(i) + 1, "aborted", {{"exception", false, e.what()}}, 0, 0};
            out.push_back(failed);
        }
        if (progress) progress(out.back());
    }
    return out;
}

}  // namespace hfgi
