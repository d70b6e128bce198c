#include "hfgi/dubrovin.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "hfgi/series.hpp"

namespace hfgi {

namespace {

using Poly = std::vector<cplx>;  // low to high

Poly poly_mul(const Poly &a, const Poly &b) {
    Poly r(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

cplx poly_eval(const Poly &p, cplx x) {
    cplx r = 0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) r = r * x + *it;
    return r;
}

/// Quotient of a by the monic b; the remainder is returned through rem.
Poly poly_div(Poly a, const Poly &b, Poly &rem) {
    const int na = static_cast<int>(a.size()) - 1, nb = static_cast<int>(b.size()) - 1;
    Poly q(std::max(na - nb + 1, 1), 0.0);
    for (int k = na - nb; k >= 0; --k) {
        q[k] = a[k + nb] / b[nb];
        for (int j = 0; j <= nb; ++j) a[k + j] -= q[k] * b[j];
    }
    rem.assign(a.begin(), a.begin() + nb);
    return q;
}

std::vector<cplx> poly_roots(const Poly &p) {
    const int d = static_cast<int>(p.size()) - 1;
    MatrixXc comp = MatrixXc::Zero(d, d);
    for (int i = 1; i < d; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < d; ++i) comp(i, d - 1) = -p[i] / p[d];
    Eigen::ComplexEigenSolver<MatrixXc> es(comp);
    std::vector<cplx> r(es.eigenvalues().data(), es.eigenvalues().data() + d);
    Poly dp(d);
    for (int i = 1; i <= d; ++i) dp[i - 1] = static_cast<double>(i) * p[i];
    for (cplx &z : r) {
        for (int it = 0; it < 4; ++it) {
            const cplx der = poly_eval(dp, z);
            if (der == 0.0) break;
            z -= poly_eval(p, z) / der;
        }
    }
    return r;
}

Poly curve_poly(const Curve &c) {
    Poly R{1.0};
    for (const cplx &e : c.sorted_points()) R = poly_mul(R, Poly{-e, 1.0});
    return R;
}

cplx dR(const Curve &c, cplx lambda) {
    const auto &e = c.sorted_points();
    cplx s = 0;
    for (std::size_t i = 0; i < e.size(); ++i) {
        cplx p = 1;
        for (std::size_t j = 0; j < e.size(); ++j)
            if (j != i) p *= lambda - e[j];
        s += p;
    }
    return s;
}

void check_collisions(const std::vector<cplx> &v, int family, double margin) {
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = i + 1; j < v.size(); ++j)
            if (std::abs(v[i] - v[j]) < margin) {
                throw CollisionError(std::string(family == 0 ? "mu" : "nu") + "_" + std::to_string(i + 1) + " and " +
                                         (family == 0 ? "mu" : "nu") + "_" + std::to_string(j + 1) + " collide",
                                     family, static_cast<int>(i), static_cast<int>(j));
            }
}

cplx others(const std::vector<cplx> &v, std::size_t k) {
    cplx p = 1;
    for (std::size_t j = 0; j < v.size(); ++j)
        if (j != k) p *= v[k] - v[j];
    return p;
}

/// Fills d(lambda)/ds and d(y)/ds for one family given P(lambda) in lambda_s = sign 2 P y / prod.
template <class P>
void family_rhs(const Curve &c, const std::vector<cplx> &lam, const std::vector<cplx> &y, double sign, P &&Pfun,
                VectorXc &out, int offset) {
    const int N = static_cast<int>(lam.size());
    for (int k = 0; k < N; ++k) {
        const cplx q = sign * 2.0 * Pfun(lam[k]) / others(lam, k);
        out[offset + k] = q * y[k];
        out[offset + N + k] = 0.5 * q * dR(c, lam[k]);
    }
}

EllipticState unpack(const EllipticState &like, const VectorXc &v) {
    EllipticState s = like;
    const int N = like.size();
    for (int k = 0; k < N; ++k) {
        s.mu[k] = v[k];
        s.mu_y[k] = v[N + k];
        s.nu[k] = v[2 * N + k];
        s.nu_y[k] = v[3 * N + k];
    }
    return s;
}

VectorXc pack(const EllipticState &s) {
    const int N = s.size();
    VectorXc v(4 * N);
    for (int k = 0; k < N; ++k) {
        v[k] = s.mu[k];
        v[N + k] = s.mu_y[k];
        v[2 * N + k] = s.nu[k];
        v[3 * N + k] = s.nu_y[k];
    }
    return v;
}

}  // namespace

double EllipticState::curve_defect(const Curve &c) const {
    double d = 0;
    auto one = [&](cplx l, cplx y) {
        const cplx R = c.R(l);
        d = std::max(d, std::abs(y * y - R) / std::max(1.0, std::abs(R)));
    };
    for (int k = 0; k < size(); ++k) {
        one(mu[k], mu_y[k]);
        one(nu[k], nu_y[k]);
    }
    return d;
}

EllipticState make_state(const Curve &c, const std::vector<SurfacePoint> &mu_points, cplx w) {
    const int n = c.genus(), N = n + 1;
    if (static_cast<int>(mu_points.size()) != N) throw std::invalid_argument("make_state: need genus + 1 mu points");
    if (std::abs(1.0 - w * w) < 1e-12) throw std::invalid_argument("make_state: w^2 = 1 leaves no room for u v");
    EllipticState s;
    for (const SurfacePoint &p : mu_points) {
        s.mu.push_back(p.lambda);
        s.mu_y.push_back(c.sqrtR(p));
    }
    check_collisions(s.mu, 0, 1e-10 * c.scale());
    MatrixXc V(N, N);
    VectorXc rhs(N);
    for (int k = 0; k < N; ++k) {
        cplx p = 1;
        for (int j = 0; j < N; ++j) {
            V(k, j) = p;
            p *= s.mu[k];
        }
        rhs[k] = s.mu_y[k] - w * p;
    }
    const VectorXc low = V.fullPivLu().solve(rhs);
    Poly G(N + 1);
    for (int j = 0; j < N; ++j) G[j] = low[j];
    G[N] = w;
    Poly num = curve_poly(c);
    const Poly G2 = poly_mul(G, G);
    for (std::size_t i = 0; i < G2.size(); ++i) num[i] -= G2[i];
    Poly prod{1.0};
    for (const cplx &m : s.mu) prod = poly_mul(prod, Poly{-m, 1.0});
    Poly rem;
    const Poly Q = poly_div(num, prod, rem);
    s.nu = poly_roots(Q);
    for (const cplx &v : s.nu) s.nu_y.push_back(poly_eval(G, v));
    check_collisions(s.nu, 1, 1e-10 * c.scale());
    return s;
}

cplx GFit::operator()(cplx lambda) const {
    cplx r = 0;
    for (int k = static_cast<int>(g.size()) - 1; k >= 0; --k) r = r * lambda + g[k];
    return r;
}

GFit fit_G(const EllipticState &s) {
    const int N = s.size();
    MatrixXc V(2 * N, N + 1);
    VectorXc rhs(2 * N);
    auto row = [&](int r, cplx l, cplx y) {
        cplx p = 1;
        for (int j = 0; j <= N; ++j) {
            V(r, j) = p;
            p *= l;
        }
        rhs[r] = y;
    };
    for (int k = 0; k < N; ++k) {
        row(k, s.mu[k], s.mu_y[k]);
        row(N + k, s.nu[k], s.nu_y[k]);
    }
    GFit fit;
    fit.g = V.colPivHouseholderQr().solve(rhs);
    fit.residual = (V * fit.g - rhs).cwiseAbs().maxCoeff() / std::max(1.0, rhs.cwiseAbs().maxCoeff());
    return fit;
}

FlowSpec FlowSpec::from_curve(const Curve &c, int m, int tail_terms) {
    FlowSpec f;
    f.m = m;
    const int kmax = m + tail_terms;
    const auto c_all = series_c(c.sorted_points(), kmax);
    std::vector<cplx> alphas(c_all.begin() + 1, c_all.end());
    f.betas_long = beta_coeffs(alphas, kmax);
    f.alphas.assign(alphas.begin(), alphas.begin() + m + 1);
    f.betas.assign(f.betas_long.begin(), f.betas_long.begin() + m + 2);
    return f;
}

cplx flow_polynomial_at_root(const std::vector<cplx> &roots, int k, const FlowSpec &f, double scale) {
    const std::vector<cplx> F = product_coefficients(roots);
    const int m = f.m, n1 = static_cast<int>(roots.size());
    const cplx lam = roots[k];
    if (std::abs(lam) <= 2.0 * scale || f.betas_long.size() <= f.betas.size()) {
        const std::vector<cplx> V = flow_coefficients(F, f.betas, m);
        cplx r = 0;
        for (int p = 0; p <= m; ++p) r += V[p] * std::pow(lam, m + 1 - p);
        return r;
    }
    // coefficient of lambda^{m+1-p} in lambda^{m-n} B F is sum_q beta_{q-1} F_{p-1-q}; p > m here
    const int pmax = static_cast<int>(f.betas_long.size()) - 1;
    cplx r = 0, pw = 1;
    for (int p = m + 1; p <= pmax; ++p) {
        cplx coef = 0;
        for (int q = std::max(0, p - n1); q <= p; ++q) coef += f.betas_long[q] * F[p - q];
        r -= coef * pw;
        pw /= lam;
    }
    return r;
}

VectorXc x_flow_rhs(const Curve &c, const EllipticState &s, double margin) {
    check_collisions(s.mu, 0, margin);
    check_collisions(s.nu, 1, margin);
    const int N = s.size();
    VectorXc out(4 * N);
    family_rhs(c, s.mu, s.mu_y, 1.0, [](cplx l) { return l; }, out, 0);
    family_rhs(c, s.nu, s.nu_y, -1.0, [](cplx l) { return l; }, out, 2 * N);
    return out;
}

VectorXc t_flow_rhs(const Curve &c, const EllipticState &s, const FlowSpec &f, double margin) {
    check_collisions(s.mu, 0, margin);
    check_collisions(s.nu, 1, margin);
    const int N = s.size();
    VectorXc out(4 * N);
    for (int fam = 0; fam < 2; ++fam) {
        const std::vector<cplx> &lam = fam == 0 ? s.mu : s.nu;
        const std::vector<cplx> &y = fam == 0 ? s.mu_y : s.nu_y;
        const double sign = fam == 0 ? 1.0 : -1.0;
        for (int k = 0; k < N; ++k) {
            const cplx q = sign * 2.0 * flow_polynomial_at_root(lam, k, f, c.scale()) / others(lam, k);
            out[2 * N * fam + k] = q * y[k];
            out[2 * N * fam + N + k] = 0.5 * q * dR(c, lam[k]);
        }
    }
    return out;
}

namespace {

/// Moves every y onto the curve, keeping the square root nearest to the integrated value.
void project_lifts(const Curve &c, VectorXc &v) {
    const int N = static_cast<int>(v.size()) / 4;
    for (int fam = 0; fam < 2; ++fam) {
        for (int k = 0; k < N; ++k) {
            const cplx lam = v[2 * N * fam + k];
            cplx &y = v[2 * N * fam + N + k];
            const cplx r = std::sqrt(c.R(lam));
            y = std::abs(y - r) <= std::abs(y + r) ? r : -r;
        }
    }
}

}  // namespace

Trajectory integrate_flow(const Curve &c, const EllipticState &s0, FlowKind kind, const std::vector<double> &samples,
                          const FlowSpec &f, const IntegratorOptions &opt) {
    // Dormand-Prince 5(4) tableau
    static constexpr double a21 = 1.0 / 5;
    static constexpr std::array<double, 2> a3{3.0 / 40, 9.0 / 40};
    static constexpr std::array<double, 3> a4{44.0 / 45, -56.0 / 15, 32.0 / 9};
    static constexpr std::array<double, 4> a5{19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729};
    static constexpr std::array<double, 5> a6{9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656};
    static constexpr std::array<double, 6> b5{35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84};
    static constexpr std::array<double, 7> b4{5179.0 / 57600, 0,          7571.0 / 16695, 393.0 / 640,
                                              -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

    const double margin = opt.collision_margin * c.scale();
    auto rhs = [&](const VectorXc &v) {
        const EllipticState s = unpack(s0, v);
        return kind == FlowKind::X ? x_flow_rhs(c, s, margin) : t_flow_rhs(c, s, f, margin);
    };
    Trajectory traj;
    traj.kind = kind;
    double s = kind == FlowKind::X ? s0.x : s0.t;
    VectorXc y = pack(s0);
    double h = 0;
    auto record = [&](double at) {
        EllipticState st = unpack(s0, y);
        (kind == FlowKind::X ? st.x : st.t) = at;
        traj.s.push_back(at);
        traj.states.push_back(std::move(st));
    };
    for (double target : samples) {
        const double dir = target >= s ? 1.0 : -1.0;
        if (h == 0) h = 0.01;
        h = dir * std::abs(h);
        while (std::abs(target - s) > 1e-14 * std::max(1.0, std::abs(target))) {
            if (traj.steps_accepted + traj.steps_rejected > opt.max_steps) {
                throw std::runtime_error("integrate_flow: step budget exhausted");
            }
            const bool last = std::abs(h) >= std::abs(target - s);
            const double step = last ? target - s : h;
            VectorXc k1, k2, k3, k4, k5, k6, k7, y5;
            try {
                k1 = rhs(y);
                k2 = rhs(y + step * a21 * k1);
                k3 = rhs(y + step * (a3[0] * k1 + a3[1] * k2));
                k4 = rhs(y + step * (a4[0] * k1 + a4[1] * k2 + a4[2] * k3));
                k5 = rhs(y + step * (a5[0] * k1 + a5[1] * k2 + a5[2] * k3 + a5[3] * k4));
                k6 = rhs(y + step * (a6[0] * k1 + a6[1] * k2 + a6[2] * k3 + a6[3] * k4 + a6[4] * k5));
                y5 = y + step * (b5[0] * k1 + b5[2] * k3 + b5[3] * k4 + b5[4] * k5 + b5[5] * k6);
                k7 = rhs(y5);
            } catch (const CollisionError &) {
                if (std::abs(step) * 0.5 < opt.min_step) throw;
                h = 0.5 * step;
                ++traj.steps_rejected;
                continue;
            }
            const VectorXc y4 =
                y + step * (b4[0] * k1 + b4[2] * k3 + b4[3] * k4 + b4[4] * k5 + b4[5] * k6 + b4[6] * k7);
            if (!y5.allFinite() || !y4.allFinite()) {
                h = 0.25 * step;
                ++traj.steps_rejected;
                if (std::abs(h) < opt.min_step) {
                    throw std::runtime_error("integrate_flow: an elliptic variable escapes to infinity near s = " +
                                             std::to_string(s));
                }
                continue;
            }
            double err = 0;
            for (int i = 0; i < y.size(); ++i) {
                const double sc = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
                err = std::max(err, std::abs(y5[i] - y4[i]) / sc);
            }
            const double factor = err == 0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
            if (err <= 1.0) {
                y = y5;
                project_lifts(c, y);
                s = last ? target : s + step;
                ++traj.steps_accepted;
                if (!last) h = step * factor;
            } else {
                h = step * factor;
                ++traj.steps_rejected;
                if (std::abs(h) < opt.min_step) throw std::runtime_error("integrate_flow: step size underflow");
            }
        }
        record(target);
    }
    return traj;
}

std::pair<VectorXc, VectorXc> abel_jacobi_coords(const Curve &c, const PeriodData &pd, const EllipticState &s) {
    const int n = c.genus();
    VectorXc r1 = VectorXc::Zero(n), r2 = VectorXc::Zero(n);
    for (int k = 0; k < s.size(); ++k) {
        r1 += abel_map(c, pd, s.mu_point(c, k));
        r2 += abel_map(c, pd, s.nu_point(c, k));
    }
    return {r1, r2};
}

VectorXc unwrap_to(const VectorXc &z, const VectorXc &ref, const MatrixXc &tau) {
    return ref + lattice_reduce(z - ref, tau).reduced;
}

std::vector<std::pair<VectorXc, VectorXc>> abel_jacobi_trajectory(const Curve &c, const PeriodData &pd,
                                                                  const Trajectory &traj) {
    std::vector<std::pair<VectorXc, VectorXc>> out;
    for (const EllipticState &s : traj.states) {
        auto r = abel_jacobi_coords(c, pd, s);
        if (!out.empty()) {
            r.first = unwrap_to(r.first, out.back().first, pd.tau);
            r.second = unwrap_to(r.second, out.back().second, pd.tau);
        }
        out.push_back(std::move(r));
    }
    return out;
}

VectorXc linear_slope(const PeriodData &pd, FlowKind kind, const FlowSpec &f) {
    const int n = static_cast<int>(pd.C.rows());
    if (kind == FlowKind::X) return 2.0 * pd.C.col(n - 1);
    VectorXc s = VectorXc::Zero(n);
    for (int l = 0; l <= f.m; ++l) {
        const int col = n - f.m + l;  // C_k vanishes for k < 1
        if (col >= 1) s += 2.0 * f.betas[l] * pd.C.col(col - 1);
    }
    return s;
}

void write_trajectory_csv(std::ostream &os, const Curve &c, const Trajectory &traj,
                          const std::vector<std::pair<VectorXc, VectorXc>> &rho) {
    const int N = traj.states.empty() ? 0 : traj.states.front().size();
    const int n = rho.empty() ? 0 : static_cast<int>(rho.front().first.size());
    os << (traj.kind == FlowKind::X ? "x" : "t");
    for (const char *fam : {"mu", "nu"})
        for (int k = 1; k <= N; ++k) os << ',' << fam << k << "_re," << fam << k << "_im";
    for (const char *fam : {"mu", "nu"})
        for (int k = 1; k <= N; ++k) os << ',' << fam << k << "_sheet";
    for (const char *fam : {"rho1", "rho2"})
        for (int j = 1; j <= n; ++j) os << ',' << fam << '_' << j << "_re," << fam << '_' << j << "_im";
    os << '\n' << std::setprecision(17);
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        const EllipticState &s = traj.states[i];
        os << traj.s[i];
        for (int k = 0; k < N; ++k) os << ',' << s.mu[k].real() << ',' << s.mu[k].imag();
        for (int k = 0; k < N; ++k) os << ',' << s.nu[k].real() << ',' << s.nu[k].imag();
        for (int k = 0; k < N; ++k) os << ',' << s.mu_point(c, k).sheet;
        for (int k = 0; k < N; ++k) os << ',' << s.nu_point(c, k).sheet;
        if (i < rho.size()) {
            for (const VectorXc *r : {&rho[i].first, &rho[i].second})
                for (int j = 0; j < n; ++j) os << ',' << (*r)[j].real() << ',' << (*r)[j].imag();
        }
        os << '\n';
    }
}

}  // namespace hfgi
