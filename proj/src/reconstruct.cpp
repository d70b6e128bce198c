#include "hfgi/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <tuple>
#include <utility>

namespace hfgi {

namespace {

constexpr double kPi = std::numbers::pi;

double max_abs(const VectorXc &v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

/// G coefficients in the G_{-1}, G_0, ..., G_n order of the product coefficients.
std::vector<cplx> descending(const GFit &G) {
    const int top = static_cast<int>(G.g.size()) - 1;
    std::vector<cplx> out(top + 1);
    for (int l = 0; l <= top; ++l) out[l] = G.g[top - l];
    return out;
}

cplx sum_of(const std::vector<cplx> &v) {
    cplx s = 0;
    for (const cplx &x : v) s += x;
    return s;
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
    return out;
}

/// How well a pole at lambda suits the third-kind differential: distance to the cuts relative to
/// the size of lambda.
double pole_score(const Curve &c, cplx lambda) {
    double d = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= c.genus(); ++k) {
        const cplx a = c.cut_start(k), b = c.cut_end(k);
        const double t = std::clamp(std::real((lambda - a) * std::conj(b - a)) / std::norm(b - a), 0.0, 1.0);
        d = std::min(d, std::abs(lambda - (a + t * (b - a))));
    }
    return d / std::max(c.scale(), std::abs(lambda));
}

int best_pole(const Curve &c, const std::vector<cplx> &lam) {
    int best = 0;
    for (int k = 1; k < static_cast<int>(lam.size()); ++k) {
        if (pole_score(c, lam[k]) > pole_score(c, lam[best])) best = k;
    }
    return best;
}

struct Jets {
    cplx d[5];
};

Jets central_jets(const MatrixXc &f, int i, int j, double h) {
    const cplx m2 = f(i, j - 2), m1 = f(i, j - 1), c0 = f(i, j), p1 = f(i, j + 1), p2 = f(i, j + 2);
    Jets J;
    J.d[0] = c0;
    J.d[1] = (p1 - m1) / (2 * h);
    J.d[2] = (p1 - 2.0 * c0 + m1) / (h * h);
    J.d[3] = (p2 - 2.0 * p1 + 2.0 * m1 - m2) / (2 * h * h * h);
    J.d[4] = (p2 - 4.0 * p1 + 6.0 * c0 - 4.0 * m1 + m2) / (h * h * h * h);
    return J;
}

/// log z continued from prev by multiples of 2 pi i.
cplx log_near(cplx z, cplx prev) {
    cplx l = std::log(z);
    const double k = std::round((prev.imag() - l.imag()) / (2 * kPi));
    return l + cplx(0, 2 * kPi * k);
}

}  // namespace

// ---------------------------------------------------------------- state quantities

SurfacePoint mu_hat(const Curve &c, const EllipticState &s, int k) {
    return {s.mu[k], c.sheet_of(s.mu[k], -s.mu_y[k])};
}

SurfacePoint nu_hat(const Curve &c, const EllipticState &s, int k) { return s.nu_point(c, k); }

cplx state_w(const EllipticState &s) { return fit_G(s).g[s.size()]; }

cplx state_dlogu_dx(const EllipticState &s) {
    const std::vector<cplx> G = descending(fit_G(s));
    return -2.0 * G[0] * sum_of(s.mu) - 2.0 * G[1];
}

cplx state_dlogu_dt(const EllipticState &s, const FlowSpec &f) {
    const std::vector<cplx> G = descending(fit_G(s));
    const std::vector<cplx> F = product_coefficients(s.mu);
    const cplx SF = flow_coefficients(F, f.betas, f.m)[f.m + 1];
    const cplx SG = flow_coefficients(G, f.betas, f.m)[f.m + 1];
    return 2.0 * (G[0] * SF - SG);
}

cplx state_log_rhs(const EllipticState &s) {
    const std::vector<cplx> G = descending(fit_G(s));
    return -G[0] * (sum_of(s.mu) + sum_of(s.nu)) - 2.0 * G[1];
}

cplx phi_eval(const Curve &c, const EllipticState &s, cplx u, const SurfacePoint &p, int form) {
    const GFit G = fit_G(s);
    if (G.residual > 1e-8) throw std::runtime_error("phi_eval: G interpolation residual " + std::to_string(G.residual));
    const cplx w = G.g[s.size()];
    const cplx v = (1.0 - w * w) / u;
    const cplx y = c.sqrtR(p), g = G(p.lambda);
    if (form == 0) form = std::abs(y + g) >= std::abs(y - g) ? 2 : 1;
    cplx r;
    if (form == 1) {
        cplx F = u;
        for (const cplx &m : s.mu) F *= p.lambda - m;
        r = (y - g) / F;
    } else {
        cplx H = v;
        for (const cplx &m : s.nu) H *= p.lambda - m;
        r = H / (y + g);
    }
    if (!std::isfinite(r.real()) || !std::isfinite(r.imag())) throw std::domain_error("phi_eval: at a pole");
    return r;
}

// ---------------------------------------------------------------- Riemann constants

RiemannConstants riemann_constants(const Curve &c, const PeriodData &pd, const ThetaContext &ctx) {
    const int n = c.genus();
    auto generic_point = [&](int k) {
        double r = 0.45 * (1.0 + 0.3 * k) * c.scale();
        cplx l = std::polar(r, 0.9 + 2.1 * k);
        while (pole_score(c, l) < 0.05) l *= cplx(1.07, 0.05);
        return SurfacePoint{l, k % 2 == 0 ? 1 : -1};
    };
    std::vector<VectorXc> probe, generic;
    VectorXc AD = VectorXc::Zero(n);
    for (int k = 0; k < n; ++k) {
        probe.push_back(abel_map(c, pd, generic_point(k)));
        AD += probe.back();
    }
    for (int k = n; k < n + 3; ++k) generic.push_back(abel_map(c, pd, generic_point(k)));

    std::vector<std::pair<double, int>> scores;
    const int count = 1 << (2 * n);
    for (int code = 0; code < count; ++code) {
        VectorXc K(n);
        for (int j = 0; j < n; ++j) {
            K[j] = 0.5 * static_cast<double>((code >> j) & 1);
        }
        for (int j = 0; j < n; ++j) {
            if ((code >> (n + j)) & 1) K += 0.5 * pd.tau.col(j);
        }
        double vanish = 0, typical = 0;
        for (const VectorXc &A : probe) vanish = std::max(vanish, std::abs(theta_scaled(ctx, K - A + AD).value));
        for (const VectorXc &A : generic) typical += std::abs(theta_scaled(ctx, K - A + AD).value);
        scores.push_back({vanish / (typical / generic.size()), code});
    }
    std::sort(scores.begin(), scores.end());
    RiemannConstants rc;
    const int code = scores[0].second;
    rc.a = Eigen::VectorXi(n);
    rc.b = Eigen::VectorXi(n);
    for (int j = 0; j < n; ++j) {
        rc.a[j] = (code >> j) & 1;
        rc.b[j] = (code >> (n + j)) & 1;
    }
    rc.K = 0.5 * (rc.a.cast<cplx>() + pd.tau * rc.b.cast<cplx>());
    rc.vanishing = scores[0].first;
    rc.runner_up = scores.size() > 1 ? scores[1].first : 0.0;
    return rc;
}

// ---------------------------------------------------------------- divisor data

DivisorData divisor_data(const Curve &c, const PeriodData &pd, const VectorXc &K, const EllipticState &s,
                         const VectorXc &sum_mu, const VectorXc &sum_nu) {
    DivisorData dd;
    for (int k = 0; k < s.size(); ++k) {
        dd.mu_hat.push_back(mu_hat(c, s, k));
        dd.nu_hat.push_back(nu_hat(c, s, k));
    }
    dd.pole_mu = best_pole(c, s.mu);
    dd.pole_nu = best_pole(c, s.nu);
    dd.K = K;
    dd.rho1 = -(sum_mu - abel_map(c, pd, s.mu_point(c, dd.pole_mu)));
    dd.rho2 = sum_nu - abel_map(c, pd, s.nu_point(c, dd.pole_nu));
    dd.omega3 = third_kind(c, pd, dd.nu_hat[dd.pole_nu], dd.mu_hat[dd.pole_mu]);
    dd.abel_inf_plus = abel_map_infinity(c, pd, 1, dd.omega3.inf_path);
    dd.b_periods = third_kind_b_periods(c, pd, dd.omega3);
    const LatticeSplit split = lattice_reduce(dd.rho2 - dd.rho1 + dd.b_periods, pd.tau);
    dd.tau_shift = split.N;
    dd.rho2 -= pd.tau * split.N.cast<cplx>();
    dd.lattice_residual = max_abs(split.reduced);
    return dd;
}

DivisorData divisor_data(const Curve &c, const PeriodData &pd, const VectorXc &K, const EllipticState &s) {
    const auto [r1, r2] = abel_jacobi_coords(c, pd, s);
    return divisor_data(c, pd, K, s, r1, r2);
}

cplx theta_quotient(const Curve &c, const PeriodData &pd, const ThetaContext &ctx, const DivisorData &dd,
                    const SurfacePoint &p) {
    const int n = c.genus();
    const Path path = c.plan_path(pd.base_point, p.lambda, third_kind_obstacles(c, dd.omega3));
    const double s = p.sheet;
    const VectorXc raw = c.path_integral(path, [&](cplx l, cplx y) {
        VectorXc r(n + 1);
        r.head(n) = holomorphic_row(n, l, s * y);
        r[n] = dd.omega3.integrand(l, s * y);
        return r;
    });
    const VectorXc A = pd.C * raw.head(n);
    const ThetaValue t2 = theta_scaled(ctx, dd.K - A + dd.rho2);
    const ThetaValue t1 = theta_scaled(ctx, dd.K - A + dd.rho1);
    return std::exp(t2.log_scale - t1.log_scale + raw[n]) * t2.value / t1.value;
}

NodeValues reconstruct_node(const PeriodData &pd, const ThetaContext &ctx, const DivisorData &dd) {
    const int n = static_cast<int>(dd.K.size());
    const VectorXc zp = dd.K - dd.abel_inf_plus, zm = dd.K + dd.abel_inf_plus;
    const ThetaValue p2 = theta_scaled(ctx, zp + dd.rho2), p1 = theta_scaled(ctx, zp + dd.rho1);
    const ThetaValue m2 = theta_scaled(ctx, zm + dd.rho2), m1 = theta_scaled(ctx, zm + dd.rho1);

    NodeValues nv;
    const cplx la = dd.omega3.omega0_inf_plus + p2.log_scale + m1.log_scale + std::log(p2.value * m1.value);
    const cplx lb = dd.omega3.omega0_inf_minus + p1.log_scale + m2.log_scale + std::log(p1.value * m2.value);
    const double ref = std::max(la.real(), lb.real());
    const cplx a = std::exp(la - ref), b = std::exp(lb - ref);
    nv.denominator = std::abs(a - b) / (std::abs(a) + std::abs(b));
    nv.w = (a + b) / (a - b);
    nv.quotient_plus = std::exp(dd.omega3.omega0_inf_plus + p2.log_scale - p1.log_scale) * p2.value / p1.value;
    nv.quotient_minus = std::exp(dd.omega3.omega0_inf_minus + m2.log_scale - m1.log_scale) * m2.value / m1.value;

    const std::vector<VectorXc> dir{pd.C.col(n - 1)};
    auto D = [&](const VectorXc &z, const ThetaValue &t) {
        const ThetaValue d = theta_derivative_scaled(ctx, z, dir);
        return std::exp(d.log_scale - t.log_scale) * d.value / t.value;
    };
    nv.log_rhs = D(zm + dd.rho2, m2) + D(zp + dd.rho2, p2) - D(zm + dd.rho1, m1) - D(zp + dd.rho1, p1) -
                 2.0 * dd.omega3.gamma[n - 1];
    return nv;
}

// ---------------------------------------------------------------- grids

GridSpec default_grid(const PeriodData &pd, const FlowSpec &f, int nx, int nt) {
    const int n = static_cast<int>(pd.C.rows());
    GridSpec g;
    g.nx = nx;
    g.nt = nt;
    const double sx = max_abs(2.0 * pd.C.col(n - 1));
    g.x1 = 1.0 / sx;
    g.t1 = 0.2 / std::max(max_abs(linear_slope(pd, FlowKind::T, f)), 1e-3 * sx);
    return g;
}

std::vector<cplx> cumulative_integral(const std::vector<cplx> &f, double h) {
    const int n = static_cast<int>(f.size());
    std::vector<cplx> out(std::max(n, 1), 0.0);
    if (n < 2) return out;
    std::vector<cplx> piece(n - 1);
    if (n == 2) {
        piece[0] = 0.5 * h * (f[0] + f[1]);
    } else if (n == 3) {
        piece[0] = h / 12 * (5.0 * f[0] + 8.0 * f[1] - f[2]);
        piece[1] = h / 12 * (-f[0] + 8.0 * f[1] + 5.0 * f[2]);
    } else {
        piece[0] = h / 24 * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]);
        for (int i = 1; i < n - 2; ++i) piece[i] = h / 24 * (-f[i - 1] + 13.0 * f[i] + 13.0 * f[i + 1] - f[i + 2]);
        piece[n - 2] = h / 24 * (f[n - 4] - 5.0 * f[n - 3] + 19.0 * f[n - 2] + 9.0 * f[n - 1]);
    }
    for (int i = 1; i < n; ++i) out[i] = out[i - 1] + piece[i - 1];
    return out;
}

namespace {

/// (u_t, v_t) of the first two members written with w and its x-derivatives, which stays regular
/// where w vanishes.
std::pair<cplx, cplx> explicit_rhs(int m, const Jets &u, const Jets &v, const Jets &w) {
    if (m == 1) {
        return {0.5 * (u.d[2] * w.d[0] - u.d[0] * w.d[2]), 0.5 * (w.d[2] * v.d[0] - w.d[0] * v.d[2])};
    }
    // (f u_x v_x + f w_x^2)_x for f = u, v
    const cplx q = u.d[1] * v.d[1] + w.d[1] * w.d[1];
    const cplx qx = u.d[2] * v.d[1] + u.d[1] * v.d[2] + 2.0 * w.d[1] * w.d[2];
    return {0.25 * u.d[3] + 0.375 * (u.d[1] * q + u.d[0] * qx), 0.25 * v.d[3] + 0.375 * (v.d[1] * q + v.d[0] * qx)};
}

}  // namespace

Eigen::MatrixXd pde_residual(const FieldGrid &g, const LenardChain &lc) {
    const int nt = static_cast<int>(g.t.size()), nx = static_cast<int>(g.x.size());
    Eigen::MatrixXd res = Eigen::MatrixXd::Zero(nt, nx);
    if (nt < 3 || nx < 5) return res;
    const bool explicit_form = g.m == 1 || g.m == 2;
    JetExpr ru, rv;
    int order = 3;
    if (!explicit_form) {
        std::tie(ru, rv) = hierarchy_rhs(lc, g.m);
        order = std::max(max_jet_order(ru), max_jet_order(rv));
        if (order > 4) throw std::invalid_argument("pde_residual: flows beyond fourth x-derivatives are not supported");
    }
    const double hx = g.x[1] - g.x[0], ht = g.t[1] - g.t[0];
    JetValues jv;
    jv.u.resize(order + 1);
    jv.v.resize(order + 1);
    for (int i = 1; i < nt - 1; ++i) {
        for (int j = 2; j < nx - 2; ++j) {
            const Jets U = central_jets(g.u, i, j, hx), V = central_jets(g.v, i, j, hx);
            std::pair<cplx, cplx> rhs;
            if (explicit_form) {
                rhs = explicit_rhs(g.m, U, V, central_jets(g.w, i, j, hx));
            } else {
                for (int k = 0; k <= order; ++k) {
                    jv.u[k] = U.d[k];
                    jv.v[k] = V.d[k];
                }
                jv.w = g.w(i, j);
                rhs = {evaluate(ru, jv), evaluate(rv, jv)};
            }
            const cplx ut = (g.u(i + 1, j) - g.u(i - 1, j)) / (2 * ht);
            const cplx vt = (g.v(i + 1, j) - g.v(i - 1, j)) / (2 * ht);
            res(i, j) = std::max(std::abs(ut - rhs.first), std::abs(vt - rhs.second));
        }
    }
    return res;
}

ResidualSummary summarize_residual(const FieldGrid &g, const Eigen::MatrixXd &residual) {
    const int nt = static_cast<int>(g.t.size()), nx = static_cast<int>(g.x.size());
    ResidualSummary s;
    double sq = 0;
    int count = 0;
    for (int i = 1; i < nt - 1; ++i) {
        for (int j = 2; j < nx - 2; ++j) {
            s.max = std::max(s.max, residual(i, j));
            sq += residual(i, j) * residual(i, j);
            ++count;
        }
    }
    s.rms = count ? std::sqrt(sq / count) : 0.0;
    return s;
}

Reconstruction reconstruct(const Curve &c, const PeriodData &pd, const ThetaContext &ctx, const EllipticState &s0,
                           const FlowSpec &f, const GridSpec &grid, cplx u0, const LenardChain &lc,
                           const ReconstructOptions &opt) {
    if (grid.nx < 1 || grid.nt < 1) throw std::invalid_argument("reconstruct: empty grid");
    Reconstruction rec;
    FieldGrid &g = rec.grid;
    g.m = f.m;
    g.u0 = u0;
    g.x = linspace(grid.x0, grid.x1, grid.nx);
    g.t = linspace(grid.t0, grid.t1, grid.nt);
    const int nx = grid.nx, nt = grid.nt;
    const double hx = nx > 1 ? g.x[1] - g.x[0] : 0.0, ht = nt > 1 ? g.t[1] - g.t[0] : 0.0;

    EllipticState start = s0;
    start.x = grid.x0;
    start.t = grid.t0;
    const std::vector<EllipticState> column =
        integrate_flow(c, start, FlowKind::T, g.t, f, opt.ode).states;
    for (int i = 0; i < nt; ++i) rec.states.push_back(integrate_flow(c, column[i], FlowKind::X, g.x, f, opt.ode).states);

    rec.K = riemann_constants(c, pd, ctx);
    const auto [r1_0, r2_0] = abel_jacobi_coords(c, pd, start);
    const VectorXc sx = linear_slope(pd, FlowKind::X, f), st = linear_slope(pd, FlowKind::T, f);

    g.w.resize(nt, nx);
    g.u.resize(nt, nx);
    g.v.resize(nt, nx);
    rec.w_state.resize(nt, nx);
    MatrixXc rhs(nt, nx);
    ReconstructionReport &rep = rec.report;
    const int stride = std::max(1, opt.divisor_check_stride);
    for (int i = 0; i < nt; ++i) {
        for (int j = 0; j < nx; ++j) {
            const EllipticState &s = rec.states[i][j];
            const VectorXc shift = sx * (g.x[j] - grid.x0) + st * (g.t[i] - grid.t0);
            const VectorXc r1 = r1_0 + shift, r2 = r2_0 - shift;
            const DivisorData dd = divisor_data(c, pd, rec.K.K, s, r1, r2);
            const NodeValues nv = reconstruct_node(pd, ctx, dd);
            if (nv.denominator < opt.pole_tolerance) {
                throw std::runtime_error("reconstruct: w has a pole near x = " + std::to_string(g.x[j]) +
                                         ", t = " + std::to_string(g.t[i]));
            }
            g.w(i, j) = nv.w;
            rhs(i, j) = nv.log_rhs;
            rec.w_state(i, j) = state_w(s);
            rep.w_routes = std::max(rep.w_routes, std::abs(nv.w - rec.w_state(i, j)) / std::max(1.0, std::abs(nv.w)));
            const cplx lr = state_log_rhs(s);
            rep.log_rhs_routes = std::max(rep.log_rhs_routes, std::abs(nv.log_rhs - lr) / std::max(1.0, std::abs(lr)));
            rep.lattice_residual = std::max(rep.lattice_residual, dd.lattice_residual);
            rep.min_denominator = std::min(rep.min_denominator, nv.denominator);
            if (i % stride == 0 && j % stride == 0) {
                const auto [a1, a2] = abel_jacobi_coords(c, pd, s);
                rep.divisor_routes = std::max({rep.divisor_routes, max_abs(unwrap_to(a1, r1, pd.tau) - r1),
                                               max_abs(unwrap_to(a2, r2, pd.tau) - r2)});
            }
        }
    }

    std::vector<cplx> dt(nt);
    for (int i = 0; i < nt; ++i) dt[i] = state_dlogu_dt(column[i], f);
    const std::vector<cplx> anchor = cumulative_integral(dt, ht);
    for (int i = 0; i < nt; ++i) {
        std::vector<cplx> row(nx);
        for (int j = 0; j < nx; ++j) row[j] = rhs(i, j);
        const std::vector<cplx> integral = cumulative_integral(row, hx);
        cplx L0 = 0, Lprev = 0;
        for (int j = 0; j < nx; ++j) {
            const cplx one_minus = 1.0 - g.w(i, j) * g.w(i, j);
            if (std::abs(one_minus) < 1e-12) throw std::runtime_error("reconstruct: 1 - w^2 vanishes");
            const cplx L = j == 0 ? std::log(one_minus) : log_near(one_minus, Lprev);
            if (j == 0) L0 = L;
            Lprev = L;
            g.u(i, j) = std::exp(std::log(u0) + anchor[i] + integral[j] + 0.5 * (L - L0));
            g.v(i, j) = one_minus / g.u(i, j);
            rep.constraint = std::max(rep.constraint, std::abs(g.w(i, j) * g.w(i, j) + g.u(i, j) * g.v(i, j) - 1.0));
        }
    }
    g.residual = pde_residual(g, lc);
    rep.residual = summarize_residual(g, g.residual);
    return rec;
}

// ---------------------------------------------------------------- phi asymptotics

PhiAsymptotics phi_asymptotics_check(const Curve &c, const EllipticState &s, cplx u, cplx w, cplx ux, cplx wx,
                                     double r_min) {
    constexpr int kSamples = 5;
    PhiAsymptotics out;
    out.lead_expect[0] = -(1.0 + w) / u;
    out.lead_expect[1] = (1.0 - w) / u;
    out.slope_expect[0] = ((1.0 + w) * ux - u * wx) / (2.0 * u * u);
    out.slope_expect[1] = ((1.0 - w) * ux + u * wx) / (2.0 * u * u);
    MatrixXc V(kSamples, 3);
    std::vector<cplx> zeta(kSamples);
    for (int k = 0; k < kSamples; ++k) {
        zeta[k] = 1.0 / std::polar(r_min * std::pow(2.0, k), 0.37);
        V(k, 0) = 1;
        V(k, 1) = zeta[k] * r_min;
        V(k, 2) = zeta[k] * zeta[k] * r_min * r_min;
    }
    const Eigen::JacobiSVD<MatrixXc> svd(V);
    out.condition = svd.singularValues()(0) / svd.singularValues()(2);
    if (!(out.condition < 1e8)) throw std::runtime_error("phi_asymptotics_check: ill-conditioned fit");
    for (int side = 0; side < 2; ++side) {
        VectorXc phi(kSamples);
        const int sheet = infinity_sheet(side == 0 ? 1 : -1);
        for (int k = 0; k < kSamples; ++k) phi[k] = phi_eval(c, s, u, {1.0 / zeta[k], sheet});
        const VectorXc coef = V.colPivHouseholderQr().solve(phi);
        out.lead[side] = coef[0];
        out.slope[side] = coef[1] * r_min;
        out.lead_error =
            std::max(out.lead_error, std::abs(out.lead[side] - out.lead_expect[side]) / std::abs(out.lead_expect[side]));
        out.slope_error = std::max(out.slope_error, std::abs(out.slope[side] - out.slope_expect[side]) /
                                                        std::max(std::abs(out.slope_expect[side]), 1e-300));
    }
    return out;
}

// ---------------------------------------------------------------- output

void write_field_csv(std::ostream &os, const FieldGrid &g) {
    os << "x,t,Re w,Im w,Re u,Im u,Re v,Im v,residual\n" << std::setprecision(17);
    for (int i = 0; i < static_cast<int>(g.t.size()); ++i) {
        for (int j = 0; j < static_cast<int>(g.x.size()); ++j) {
            const double r = g.residual.size() ? g.residual(i, j) : 0.0;
            os << g.x[j] << ',' << g.t[i] << ',' << g.w(i, j).real() << ',' << g.w(i, j).imag() << ','
               << g.u(i, j).real() << ',' << g.u(i, j).imag() << ',' << g.v(i, j).real() << ',' << g.v(i, j).imag()
               << ',' << r << '\n';
        }
    }
}

}  // namespace hfgi
