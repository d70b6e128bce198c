#include "hfgi/curve.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <queue>
#include <sstream>

#include "hfgi/quadrature.hpp"

namespace hfgi {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI(0.0, 1.0);

double point_segment_distance(cplx p, cplx a, cplx b) {
    const cplx d = b - a;
    const double len2 = std::norm(d);
    if (len2 == 0.0) return std::abs(p - a);
    const double t = std::clamp(std::real((p - a) * std::conj(d)) / len2, 0.0, 1.0);
    return std::abs(p - (a + t * d));
}

double cross(cplx a, cplx b) { return std::imag(std::conj(a) * b); }

bool segments_intersect(cplx p, cplx q, cplx a, cplx b) {
    const double d1 = cross(q - p, a - p), d2 = cross(q - p, b - p);
    const double d3 = cross(b - a, p - a), d4 = cross(b - a, q - a);
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 && d4 != 0;
}

double segment_distance(cplx p, cplx q, cplx a, cplx b) {
    if (segments_intersect(p, q, a, b)) return 0.0;
    return std::min({point_segment_distance(p, a, b), point_segment_distance(q, a, b), point_segment_distance(a, p, q),
                     point_segment_distance(b, p, q)});
}

bool lex_less(cplx a, cplx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

cplx cut_factor(cplx lambda, cplx a, cplx b) { return (lambda - a) * std::sqrt((lambda - b) / (lambda - a)); }

}  // namespace

// ---------------------------------------------------------------- CurveSpec

CurveSpec CurveSpec::from_points(std::vector<cplx> points, double eps) {
    const int count = static_cast<int>(points.size());
    if (count < 4 || count % 2 != 0) {
        throw CurveError("branch_points: need an even number >= 4 of points, got " + std::to_string(count));
    }
    double scale = 0;
    for (const cplx &p : points) scale = std::max(scale, std::abs(p));
    for (int i = 0; i < count; ++i) {
        if (std::abs(points[i]) <= eps * scale) throw CurveError("branch_points: entry " + std::to_string(i) + " is zero");
        for (int j = i + 1; j < count; ++j) {
            if (std::abs(points[i] - points[j]) <= eps * scale) {
                throw CurveError("branch_points: entries " + std::to_string(i) + " and " + std::to_string(j) +
                                 " coincide");
            }
        }
    }
    CurveSpec s;
    s.branch_points = std::move(points);
    s.genus = count / 2 - 1;
    return s;
}

// ---------------------------------------------------------------- Curve

Curve::Curve(CurveSpec spec) : spec_(std::move(spec)), n_(spec_.genus), e_(spec_.branch_points) {
    std::sort(e_.begin(), e_.end(), lex_less);
    scale_ = 0;
    for (const cplx &p : e_) scale_ = std::max(scale_, std::abs(p));
    const int cuts = n_ + 1;
    double min_sep = std::numeric_limits<double>::infinity();
    for (int j = 0; j < cuts; ++j) {
        for (int k = j + 1; k < cuts; ++k) {
            const double d = segment_distance(cut_start(j), cut_end(j), cut_start(k), cut_end(k));
            if (d <= 1e-12 * scale_) {
                throw CurveError("cuts " + std::to_string(j) + " and " + std::to_string(k) +
                                 " intersect; relabel the branch points");
            }
            min_sep = std::min(min_sep, d);
        }
    }
    clearance_ = 0.2 * min_sep;
}

cplx Curve::R(cplx lambda) const {
    cplx r = 1;
    for (const cplx &p : e_) r *= lambda - p;
    return r;
}

cplx Curve::y_plus(cplx lambda) const {
    cplx y = 1;
    for (int k = 0; k <= n_; ++k) {
        const cplx a = cut_start(k), b = cut_end(k);
        if (lambda == a || lambda == b) return 0;
        y *= cut_factor(lambda, a, b);
    }
    return y;
}

cplx Curve::y_plus_near(int i, cplx delta) const {
    const cplx lambda = e_[i] + delta;
    const int own = i / 2;
    cplx y = 1;
    for (int k = 0; k <= n_; ++k) {
        const cplx a = cut_start(k), b = cut_end(k);
        if (k != own) {
            y *= cut_factor(lambda, a, b);
            continue;
        }
        const cplx la = i % 2 == 0 ? delta : (b - a) + delta;
        const cplx lb = i % 2 == 0 ? (a - b) + delta : delta;
        if (la == 0.0 || lb == 0.0) return 0;
        y *= la * std::sqrt(lb / la);
    }
    return y;
}

cplx Curve::y_hat(cplx zeta) const {
    cplx y = 1;
    for (int k = 0; k <= n_; ++k) {
        const cplx a = cut_start(k), b = cut_end(k);
        y *= (1.0 - a * zeta) * std::sqrt((1.0 - b * zeta) / (1.0 - a * zeta));
    }
    return y;
}

int Curve::sheet_of(cplx lambda, cplx y) const {
    const cplx yp = y_plus(lambda);
    return std::abs(y - yp) <= std::abs(y + yp) ? 1 : -1;
}

std::optional<int> Curve::branch_index(cplx lambda, double tol) const {
    for (int i = 0; i < static_cast<int>(e_.size()); ++i) {
        if (std::abs(lambda - e_[i]) <= tol * scale_) return i;
    }
    return std::nullopt;
}

VectorXc Curve::a_cycle_integral(int k, const std::function<VectorXc(cplx)> &f, double tol, int *nodes_used) const {
    const cplx a = cut_start(k), b = cut_end(k);
    const cplx c = 0.5 * (a + b), h = 0.5 * (b - a);
    auto rest = [&](cplx lambda) {
        cplx r = 1;
        for (int j = 0; j <= n_; ++j) {
            if (j != k) r *= cut_factor(lambda, cut_start(j), cut_end(j));
        }
        return r;
    };
    auto estimate = [&](int N) {
        VectorXc s;
        for (int i = 1; i <= N; ++i) {
            const double theta = (2.0 * i - 1.0) * kPi / (2.0 * N);
            const cplx lambda = c + h * std::cos(theta);
            VectorXc term = f(lambda) / rest(lambda);
            if (s.size() == 0) s = VectorXc::Zero(term.size());
            s += term;
        }
        // oint = i int_0^{2 pi} = 2 i int_0^pi
        return VectorXc(s * (2.0 * kI * kPi / static_cast<double>(N)));
    };
    int N = 16;
    VectorXc prev = estimate(N);
    while (N < (1 << 14)) {
        N *= 2;
        VectorXc cur = estimate(N);
        const double diff = (cur - prev).cwiseAbs().maxCoeff();
        const double mag = std::max(1.0, cur.cwiseAbs().maxCoeff());
        prev = std::move(cur);
        if (diff < tol * mag) break;
    }
    if (nodes_used) *nodes_used = N;
    return prev;
}

bool Curve::edge_ok(cplx p, cplx q, const std::vector<PointObstacle> &points) const {
    const double tiny = 1e-12 * scale_;
    constexpr double kMinAngle = 0.35;
    for (int k = 0; k <= n_; ++k) {
        const cplx a = cut_start(k), b = cut_end(k);
        const bool p_end = std::abs(p - a) < tiny || std::abs(p - b) < tiny;
        const bool q_end = std::abs(q - a) < tiny || std::abs(q - b) < tiny;
        if (p_end && q_end) return false;
        if (p_end || q_end) {
            const cplx from = p_end ? p : q, to = p_end ? q : p;
            const cplx other = std::abs(from - a) < tiny ? b : a;
            if (std::abs(std::arg((to - from) / (other - from))) < kMinAngle) return false;
            continue;
        }
        const double d = segment_distance(p, q, a, b);
        const double need =
            std::min(clearance_, 0.5 * std::min(point_segment_distance(p, a, b), point_segment_distance(q, a, b)));
        if (d <= 0 || d < need) return false;
    }
    for (const PointObstacle &o : points) {
        const double d = point_segment_distance(o.center, p, q);
        const double need = std::min(o.radius, 0.5 * std::min(std::abs(p - o.center), std::abs(q - o.center)));
        if (d <= 0 || d < need) return false;
    }
    return true;
}

Path Curve::plan_path(cplx from, cplx to, const std::vector<PointObstacle> &points) const {
    std::vector<cplx> nodes{from, to};
    for (int k = 0; k <= n_; ++k) {
        const cplx a = cut_start(k), b = cut_end(k);
        const cplx d = (b - a) / std::abs(b - a), nrm = kI * d;
        const double g = 2.0 * clearance_;
        for (const cplx &corner : {a - g * d + g * nrm, a - g * d - g * nrm, b + g * d + g * nrm, b + g * d - g * nrm}) {
            nodes.push_back(corner);
        }
    }
    for (const PointObstacle &o : points) {
        for (int i = 0; i < 4; ++i) nodes.push_back(o.center + 2.0 * o.radius * std::polar(1.0, kPi / 4 + i * kPi / 2));
    }
    const int N = static_cast<int>(nodes.size());
    std::vector<double> dist(N, std::numeric_limits<double>::infinity());
    std::vector<int> prev(N, -1);
    std::vector<bool> done(N, false);
    dist[0] = 0;
    for (int iter = 0; iter < N; ++iter) {
        int u = -1;
        for (int i = 0; i < N; ++i) {
            if (!done[i] && (u < 0 || dist[i] < dist[u])) u = i;
        }
        if (u < 0 || !std::isfinite(dist[u])) break;
        done[u] = true;
        if (u == 1) break;
        for (int v = 0; v < N; ++v) {
            if (done[v]) continue;
            const double alt = dist[u] + std::abs(nodes[v] - nodes[u]);
            if (alt < dist[v] && edge_ok(nodes[u], nodes[v], points)) {
                dist[v] = alt;
                prev[v] = u;
            }
        }
    }
    if (!std::isfinite(dist[1])) throw CurveError("path planner: no admissible path between the requested points");
    Path path;
    for (int v = 1; v >= 0; v = prev[v]) path.vertices.push_back(nodes[v]);
    std::reverse(path.vertices.begin(), path.vertices.end());
    path.start_at_branch = branch_index(from).has_value();
    path.end_at_branch = branch_index(to).has_value();
    if (path.vertices.size() == 2 && path.start_at_branch && path.end_at_branch) {
        path.vertices.insert(path.vertices.begin() + 1, 0.5 * (from + to));
    }
    return path;
}

VectorXc Curve::path_integral(const Path &path, const std::function<VectorXc(cplx, cplx)> &g, double tol) const {
    const auto &v = path.vertices;
    const int segs = static_cast<int>(v.size()) - 1;
    VectorXc total;
    auto add = [&](const VectorXc &x) {
        if (total.size() == 0) total = VectorXc::Zero(x.size());
        total += x;
    };
    auto from_branch = [&](cplx e, cplx p) {
        const int i = *branch_index(e);
        return integrate_real(
            [&, i](double t) {
                const cplx delta = (p - e) * (t * t);
                return VectorXc(g(e_[i] + delta, y_plus_near(i, delta)) * (2.0 * (p - e) * t));
            },
            0.0, 1.0, tol);
    };
    for (int s = 0; s < segs; ++s) {
        const cplx p = v[s], q = v[s + 1];
        if (p == q) continue;
        if (s == 0 && path.start_at_branch) {
            add(from_branch(p, q));
        } else if (s == segs - 1 && path.end_at_branch) {
            add(-from_branch(q, p));
        } else {
            add(integrate_real(
                [&](double t) {
                    const cplx l = p + (q - p) * t;
                    return VectorXc(g(l, y_plus(l)) * (q - p));
                },
                0.0, 1.0, tol));
        }
    }
    if (total.size() == 0) total = g(v.front(), y_plus(v.front())) * cplx(0);
    return total;
}

VectorXc Curve::zeta_integral(cplx zeta0, cplx zeta1, const std::function<VectorXc(cplx)> &h, double tol) const {
    return integrate_real([&](double t) { return VectorXc(h(zeta0 + (zeta1 - zeta0) * t) * (zeta1 - zeta0)); }, 0.0,
                          1.0, tol);
}

VectorXc holomorphic_row(const Curve &c, cplx lambda) { return holomorphic_row(c.genus(), lambda, c.y_plus(lambda)); }

VectorXc holomorphic_row(int n, cplx lambda, cplx y) {
    VectorXc r(n);
    const cplx inv_y = 1.0 / y;
    cplx p = 1;
    for (int l = 0; l < n; ++l) {
        r[l] = p * inv_y;
        p *= lambda;
    }
    return r;
}

// ---------------------------------------------------------------- periods

PeriodData period_matrices(const Curve &c, double tol) {
    const int n = c.genus();
    PeriodData pd;
    pd.A.resize(n, n);
    pd.B.resize(n, n);
    pd.base_point = c.sorted_points().front();
    auto powers = [n](cplx lambda) {
        VectorXc r(n);
        cplx p = 1;
        for (int l = 0; l < n; ++l) {
            r[l] = p;
            p *= lambda;
        }
        return r;
    };
    for (int j = 0; j < n; ++j) {
        int used = 0;
        pd.A.col(j) = c.a_cycle_integral(j, powers, tol, &used);
        pd.max_chebyshev_nodes = std::max(pd.max_chebyshev_nodes, used);
    }
    for (int j = 0; j < n; ++j) {
        Path p = c.plan_path(c.cut_end(j), c.cut_start(n));
        pd.B.col(j) = 2.0 * c.path_integral(p, [&](cplx l, cplx y) { return holomorphic_row(n, l, y); }, tol);
        pd.b_paths.push_back(std::move(p));
        pd.b_signs.push_back(1);
    }
    Eigen::JacobiSVD<MatrixXc> svd(pd.A);
    const auto &sv = svd.singularValues();
    pd.cond_A = sv(0) / sv(sv.size() - 1);
    if (!(pd.cond_A < 1e10)) throw CurveError("period matrix A is ill-conditioned (cond = " + std::to_string(pd.cond_A) + ")");
    pd.C = pd.A.inverse();
    pd.tau = pd.C * pd.B;
    for (int j = 0; j < n; ++j) {
        if (pd.tau(j, j).imag() < 0) {
            pd.B.col(j) *= -1.0;
            pd.b_signs[j] = -1;
        }
    }
    pd.tau = pd.C * pd.B;
    // b cycles sharing an endpoint can meet there; adding integer a-cycles restores symmetry
    for (int j = 0; j < n; ++j) {
        for (int k = j + 1; k < n; ++k) {
            const cplx d = pd.tau(j, k) - pd.tau(k, j);
            const double m = std::round(d.real());
            if (m != 0 && std::abs(d - m) < 1e-6) {
                pd.B.col(j) += m * pd.A.col(k);
                pd.tau.col(j) = pd.C * pd.B.col(j);
            }
        }
    }
    pd.symmetry_error = (pd.tau - pd.tau.transpose()).cwiseAbs().maxCoeff();
    if (pd.symmetry_error > 1e-8) {
        throw CurveError("period matrix tau is not symmetric (error " + std::to_string(pd.symmetry_error) + ")");
    }
    Eigen::LLT<Eigen::MatrixXd> llt(pd.tau.imag());
    if (llt.info() != Eigen::Success) throw CurveError("Im tau is not positive definite");
    return pd;
}

void write_period_data(std::ostream &os, const PeriodData &pd) {
    const int n = static_cast<int>(pd.A.rows());
    os << std::setprecision(17);
    os << "hfgi-period-data 1\n";
    os << "genus " << n << "\n";
    os << "base_point " << pd.base_point.real() << ' ' << pd.base_point.imag() << "\n";
    os << "cond_A " << pd.cond_A << "\n";
    os << "b_signs";
    for (int s : pd.b_signs) os << ' ' << s;
    os << "\n";
    auto mat = [&](const char *name, const MatrixXc &m) {
        os << name << "\n";
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) os << (j ? " " : "") << m(i, j).real() << ' ' << m(i, j).imag();
            os << "\n";
        }
    };
    mat("A", pd.A);
    mat("B", pd.B);
    mat("C", pd.C);
    mat("tau", pd.tau);
}

PeriodData read_period_data(std::istream &is, const Curve &c) {
    std::string tag;
    int version = 0, n = 0;
    is >> tag >> version;
    if (tag != "hfgi-period-data" || version != 1) throw CurveError("period data: unrecognised header");
    is >> tag >> n;
    if (tag != "genus" || n != c.genus()) throw CurveError("period data: genus mismatch");
    PeriodData pd;
    double re = 0, im = 0;
    is >> tag >> re >> im;
    pd.base_point = cplx(re, im);
    is >> tag >> pd.cond_A;
    is >> tag;
    pd.b_signs.resize(n);
    for (int &s : pd.b_signs) is >> s;
    auto mat = [&](const char *name) {
        std::string t;
        is >> t;
        if (t != name) throw CurveError(std::string("period data: expected matrix ") + name);
        MatrixXc m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                is >> re >> im;
                m(i, j) = cplx(re, im);
            }
        return m;
    };
    pd.A = mat("A");
    pd.B = mat("B");
    pd.C = mat("C");
    pd.tau = mat("tau");
    if (!is) throw CurveError("period data: truncated file");
    for (int j = 0; j < n; ++j) pd.b_paths.push_back(c.plan_path(c.cut_end(j), c.cut_start(n)));
    pd.symmetry_error = (pd.tau - pd.tau.transpose()).cwiseAbs().maxCoeff();
    return pd;
}

// ---------------------------------------------------------------- Abel map

VectorXc abel_plus(const Curve &c, const PeriodData &pd, cplx lambda, const std::vector<PointObstacle> &avoid) {
    const int n = c.genus();
    if (std::abs(lambda - pd.base_point) <= 1e-14 * c.scale()) return VectorXc::Zero(n);
    const Path p = c.plan_path(pd.base_point, lambda, avoid);
    return pd.C * c.path_integral(p, [&](cplx l, cplx y) { return holomorphic_row(n, l, y); });
}

VectorXc abel_map(const Curve &c, const PeriodData &pd, const SurfacePoint &p) {
    return static_cast<double>(p.sheet) * abel_plus(c, pd, p.lambda);
}

cplx infinity_anchor(const Curve &c, const std::vector<PointObstacle> &avoid) {
    double r = c.scale();
    for (const PointObstacle &o : avoid) r = std::max(r, std::abs(o.center) + o.radius);
    return std::polar(1.5 * r + 1.0, 0.61);
}

namespace {

VectorXc zeta_row(const Curve &c, cplx zeta) {
    const int n = c.genus();
    VectorXc r(n);
    const cplx inv = 1.0 / c.y_hat(zeta);
    for (int l = 1; l <= n; ++l) r[l - 1] = -std::pow(zeta, n - l) * inv;
    return r;
}

}  // namespace

VectorXc abel_map_infinity(const Curve &c, const PeriodData &pd, int sign, const std::vector<PointObstacle> &avoid) {
    return abel_map_infinity(c, pd, sign, c.plan_path(pd.base_point, infinity_anchor(c, avoid), avoid));
}

VectorXc abel_map_infinity(const Curve &c, const PeriodData &pd, int sign, const Path &p) {
    const int n = c.genus();
    const cplx anchor = p.vertices.back();
    VectorXc raw = c.path_integral(p, [&](cplx l, cplx y) { return holomorphic_row(n, l, y); });
    raw += c.zeta_integral(1.0 / anchor, 0.0, [&](cplx z) { return zeta_row(c, z); });
    return static_cast<double>(infinity_sheet(sign)) * (pd.C * raw);
}

VectorXc omega_zeta(const Curve &c, const PeriodData &pd, cplx zeta, int sheet) {
    return static_cast<double>(sheet) * (pd.C * zeta_row(c, zeta));
}

void lattice_coordinates(const VectorXc &z, const MatrixXc &tau, Eigen::VectorXd &a, Eigen::VectorXd &b) {
    const Eigen::MatrixXd Y = tau.imag();
    b = Y.llt().solve(z.imag());
    a = z.real() - tau.real() * b;
}

LatticeSplit lattice_reduce(const VectorXc &z, const MatrixXc &tau) {
    Eigen::VectorXd a, b;
    lattice_coordinates(z, tau, a, b);
    LatticeSplit s;
    s.N = b.array().round().matrix();
    s.m = a.array().round().matrix();
    s.reduced = z - tau * s.N.cast<cplx>() - s.m.cast<cplx>();
    return s;
}

// ---------------------------------------------------------------- third kind

cplx ThirdKindData::integrand(cplx lambda, cplx y) const {
    const cplx l1 = q_plus.lambda, l2 = q_minus.lambda;
    cplx hol = 0, p = 1;
    for (int l = 0; l < kappa.size(); ++l) {
        hol += kappa[l] * p;
        p *= lambda;
    }
    return ((y + y1) / (lambda - l1) - (y + y2) / (lambda - l2)) / (2.0 * y) + hol / y;
}

cplx ThirdKindData::integrand_zeta(const Curve &c, cplx zeta, int sheet) const {
    const int n = c.genus();
    const cplx l1 = q_plus.lambda, l2 = q_minus.lambda;
    const double s = sheet;
    const cplx yh = c.y_hat(zeta);
    const cplx even = -0.5 * (l1 - l2) / ((1.0 - l1 * zeta) * (1.0 - l2 * zeta));
    const cplx odd = -std::pow(zeta, n) / (2.0 * s * yh) * (y1 / (1.0 - l1 * zeta) - y2 / (1.0 - l2 * zeta));
    cplx hol = 0;
    for (int l = 1; l <= n; ++l) hol += kappa[l - 1] * std::pow(zeta, n - l);
    return even + odd - hol / (s * yh);
}

namespace {

std::vector<PointObstacle> pole_obstacles(const Curve &c, const ThirdKindData &t) {
    double r = 0.25 * std::abs(t.q_plus.lambda - t.q_minus.lambda);
    for (const cplx &e : c.sorted_points()) {
        r = std::min({r, 0.25 * std::abs(e - t.q_plus.lambda), 0.25 * std::abs(e - t.q_minus.lambda)});
    }
    r = std::min(r, c.clearance());
    return {{t.q_plus.lambda, r}, {t.q_minus.lambda, r}};
}

}  // namespace

ThirdKindData third_kind(const Curve &c, const PeriodData &pd, const SurfacePoint &q_plus, const SurfacePoint &q_minus) {
    const int n = c.genus();
    if (std::abs(q_plus.lambda - q_minus.lambda) < 1e-12 * c.scale() && q_plus.sheet == q_minus.sheet) {
        throw CurveError("third_kind: coincident poles");
    }
    if (c.branch_index(q_plus.lambda, 1e-9) || c.branch_index(q_minus.lambda, 1e-9)) {
        throw CurveError("third_kind: pole at a branch point");
    }
    ThirdKindData t;
    t.q_plus = q_plus;
    t.q_minus = q_minus;
    t.y1 = c.sqrtR(q_plus);
    t.y2 = c.sqrtR(q_minus);
    t.kappa = VectorXc::Zero(n);
    VectorXc p = third_kind_a_periods(c, t);
    t.kappa = pd.A.transpose().partialPivLu().solve(-p);
    t.a_period_error = third_kind_a_periods(c, t).cwiseAbs().maxCoeff();
    t.M = 0.5 * (q_minus.lambda - q_plus.lambda);
    t.gamma = VectorXc::Zero(n);
    t.gamma[n - 1] = t.kappa[n - 1];
    if (n > 1) {
        // roots of sum_l kappa_l lambda^{l-1} via the companion matrix
        MatrixXc comp = MatrixXc::Zero(n - 1, n - 1);
        for (int i = 1; i < n - 1; ++i) comp(i, i - 1) = 1;
        for (int i = 0; i < n - 1; ++i) comp(i, n - 2) = -t.kappa[i] / t.kappa[n - 1];
        Eigen::ComplexEigenSolver<MatrixXc> es(comp);
        for (int i = 0; i < n - 1; ++i) t.gamma[i] = es.eigenvalues()[i];
    }
    const std::vector<PointObstacle> avoid = pole_obstacles(c, t);
    t.inf_anchor = infinity_anchor(c, avoid);
    t.inf_path = c.plan_path(pd.base_point, t.inf_anchor, avoid);
    for (int sign : {1, -1}) {
        const int s = infinity_sheet(sign);
        cplx val = c.path_integral(t.inf_path, [&](cplx l, cplx y) {
                        VectorXc r(1);
                        r[0] = t.integrand(l, static_cast<double>(s) * y);
                        return r;
                    })[0];
        val += c.zeta_integral(1.0 / t.inf_anchor, 0.0, [&](cplx z) {
                   VectorXc r(1);
                   r[0] = t.integrand_zeta(c, z, s);
                   return r;
               })[0];
        (sign > 0 ? t.omega0_inf_plus : t.omega0_inf_minus) = val;
    }
    return t;
}

std::vector<PointObstacle> third_kind_obstacles(const Curve &c, const ThirdKindData &t) { return pole_obstacles(c, t); }

VectorXc third_kind_a_periods(const Curve &c, const ThirdKindData &t) {
    const int n = c.genus();
    VectorXc p(n);
    const cplx l1 = t.q_plus.lambda, l2 = t.q_minus.lambda;
    for (int j = 0; j < n; ++j) {
        p[j] = c.a_cycle_integral(j, [&](cplx lambda) {
                    VectorXc r(1);
                    cplx hol = 0, pw = 1;
                    for (int l = 0; l < n; ++l) {
                        hol += t.kappa[l] * pw;
                        pw *= lambda;
                    }
                    r[0] = t.y1 / (2.0 * (lambda - l1)) - t.y2 / (2.0 * (lambda - l2)) + hol;
                    return r;
                })[0];
    }
    return p;
}

cplx third_kind_residue(const Curve &c, const ThirdKindData &t, const SurfacePoint &p, double r) {
    constexpr int N = 512;
    cplx s = 0;
    for (int i = 0; i < N; ++i) {
        const cplx e = std::polar(1.0, 2.0 * kPi * i / N);
        const cplx lambda = p.lambda + r * e;
        s += t.integrand(lambda, static_cast<double>(p.sheet) * c.y_plus(lambda)) * (kI * r * e);
    }
    return s * (2.0 * kPi / N) / (2.0 * kPi * kI);
}

VectorXc third_kind_b_periods(const Curve &c, const PeriodData &pd, const ThirdKindData &t) {
    const int n = c.genus();
    const std::vector<PointObstacle> avoid = pole_obstacles(c, t);
    const cplx l1 = t.q_plus.lambda, l2 = t.q_minus.lambda;
    VectorXc beta(n);
    for (int j = 0; j < n; ++j) {
        const Path path = c.plan_path(c.cut_end(j), c.cut_start(n), avoid);
        const cplx v = c.path_integral(path, [&](cplx lambda, cplx y) {
                            cplx hol = 0, pw = 1;
                            for (int l = 0; l < n; ++l) {
                                hol += t.kappa[l] * pw;
                                pw *= lambda;
                            }
                            VectorXc r(1);
                            r[0] = (t.y1 / (lambda - l1) - t.y2 / (lambda - l2) + 2.0 * hol) / y;
                            return r;
                        })[0];
        beta[j] = static_cast<double>(pd.b_signs[j]) * v / (2.0 * kPi * kI);
    }
    return beta;
}

}  // namespace hfgi
