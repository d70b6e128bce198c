#include "hfgi/lenard.hpp"

#include <algorithm>

#include "hfgi/series.hpp"

namespace hfgi {

namespace {

const JetExpr &U0() {
    static const JetExpr e = JetExpr::u();
    return e;
}
const JetExpr &V0() {
    static const JetExpr e = JetExpr::v();
    return e;
}
const JetExpr &W0() {
    static const JetExpr e = JetExpr::w();
    return e;
}

const JetExpr kHalf = JetExpr(Rational(1, 2));

JetExpr D(const JetExpr &e) { return jet_derive(e); }

LambdaPoly trimmed(LambdaPoly p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
    return p;
}

LambdaPoly scaled(const JetExpr &s, const LambdaPoly &p) {
    LambdaPoly r(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) r[i] = s * p[i];
    return r;
}

/// Multiply by lambda.
LambdaPoly shifted(const LambdaPoly &p) {
    LambdaPoly r(p.size() + 1);
    for (std::size_t i = 0; i < p.size(); ++i) r[i + 1] = p[i];
    return r;
}

LambdaPoly derived(const LambdaPoly &p) {
    LambdaPoly r(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) r[i] = D(p[i]);
    return r;
}

/// sum_j X_{j-1} lambda^{n+1-j} from entries X_{-1}..X_n.
LambdaPoly descending(const std::vector<JetExpr> &coeffs) {
    const int top = static_cast<int>(coeffs.size()) - 1;
    LambdaPoly r(coeffs.size());
    for (int j = 0; j <= top; ++j) r[top - j] = coeffs[j];
    return r;
}

}  // namespace

// ---------------------------------------------------------------- containers

LenardTriple operator+(const LenardTriple &x, const LenardTriple &y) { return {x.c + y.c, x.b + y.b, x.a + y.a}; }

LenardTriple operator*(const JetExpr &s, const LenardTriple &x) { return {s * x.c, s * x.b, s * x.a}; }

LambdaPoly operator+(const LambdaPoly &p, const LambdaPoly &q) {
    LambdaPoly r(std::max(p.size(), q.size()));
    for (std::size_t i = 0; i < p.size(); ++i) r[i] += p[i];
    for (std::size_t i = 0; i < q.size(); ++i) r[i] += q[i];
    return r;
}

LambdaPoly operator-(const LambdaPoly &p, const LambdaPoly &q) {
    LambdaPoly r(std::max(p.size(), q.size()));
    for (std::size_t i = 0; i < p.size(); ++i) r[i] += p[i];
    for (std::size_t i = 0; i < q.size(); ++i) r[i] -= q[i];
    return r;
}

LambdaPoly operator*(const LambdaPoly &p, const LambdaPoly &q) {
    if (p.empty() || q.empty()) return {};
    LambdaPoly r(p.size() + q.size() - 1);
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i].is_zero()) continue;
        for (std::size_t j = 0; j < q.size(); ++j) {
            if (!q[j].is_zero()) r[i + j] += p[i] * q[j];
        }
    }
    return r;
}

LambdaPoly lambda_derive(const LambdaPoly &p) { return derived(p); }

bool is_zero(const LambdaPoly &p) {
    return std::all_of(p.begin(), p.end(), [](const JetExpr &e) { return e.is_zero(); });
}

bool LambdaMatrixExpr::is_zero() const {
    for (const auto &row : e) {
        for (const auto &p : row) {
            if (!hfgi::is_zero(p)) return false;
        }
    }
    return true;
}

LambdaPoly LambdaMatrixExpr::trace() const { return e[0][0] + e[1][1]; }

LambdaMatrixExpr operator+(const LambdaMatrixExpr &a, const LambdaMatrixExpr &b) {
    LambdaMatrixExpr r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r(i, j) = a(i, j) + b(i, j);
    return r;
}

LambdaMatrixExpr operator-(const LambdaMatrixExpr &a, const LambdaMatrixExpr &b) {
    LambdaMatrixExpr r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r(i, j) = a(i, j) - b(i, j);
    return r;
}

LambdaMatrixExpr operator*(const LambdaMatrixExpr &a, const LambdaMatrixExpr &b) {
    LambdaMatrixExpr r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j);
    return r;
}

LambdaMatrixExpr commutator(const LambdaMatrixExpr &a, const LambdaMatrixExpr &b) { return a * b - b * a; }

LambdaMatrixExpr lambda_derive(const LambdaMatrixExpr &a) {
    LambdaMatrixExpr r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r(i, j) = derived(a(i, j));
    return r;
}

// ---------------------------------------------------------------- Lenard chain

LenardTriple apply_K(const LenardTriple &t) {
    return {D(t.b) - kHalf * D(U0() * t.a), D(t.c) - kHalf * D(V0() * t.a), U0() * D(t.c) + V0() * D(t.b) - D(t.a)};
}

LenardTriple apply_J(const LenardTriple &t) {
    const JetExpr two_w = JetExpr(2) * W0();
    return {two_w * t.b, -(two_w * t.c), U0() * D(t.c) + V0() * D(t.b) - D(t.a)};
}

LenardTriple lenard_seed() { return {JetExpr(), JetExpr(), JetExpr(-2)}; }

LenardTriple lenard_next(const LenardTriple &prev) {
    const LenardTriple k = apply_K(prev);
    const JetExpr inv_two_w = (JetExpr(2) * W0()).inverse();
    LenardTriple next;
    next.b = k.c * inv_two_w;
    next.c = -(k.b * inv_two_w);
    next.a = antiderivative(U0() * D(next.c) + V0() * D(next.b) - k.a);
    if (apply_J(next) != k) throw std::logic_error("lenard_next: J L_j != K L_{j-1} after re-substitution");
    return next;
}

LenardChain::LenardChain(int jmax) {
    chain_.push_back(lenard_seed());
    for (int j = 0; j <= jmax; ++j) chain_.push_back(lenard_next(chain_.back()));
}

std::pair<JetExpr, JetExpr> hierarchy_rhs(const LenardChain &lc, int m) {
    const JetExpr two_w = JetExpr(2) * W0();
    const LenardTriple &L = lc.L(m);
    return {two_w * L.b, -(two_w * L.c)};
}

JetExpr hamiltonian(const LenardChain &lc, int n) {
    if (n == 0) throw std::domain_error("hamiltonian: H_n divides by n, n = 0 given");
    const LenardTriple &L = lc.L(n);
    return (L.a - U0() * L.c - V0() * L.b) * JetExpr(Rational(1, n));
}

// ---------------------------------------------------------------- zero curvature

LambdaMatrixExpr spectral_U() {
    LambdaMatrixExpr U;
    U(0, 0) = {JetExpr(), W0()};
    U(0, 1) = {JetExpr(), U0()};
    U(1, 0) = {JetExpr(), V0()};
    U(1, 1) = {JetExpr(), -W0()};
    return U;
}

LambdaMatrixExpr V_matrix(const LenardChain &lc, int m) {
    LambdaMatrixExpr V;
    for (auto &row : V.e)
        for (auto &p : row) p.assign(m + 2, JetExpr());
    for (int j = 0; j <= m; ++j) {
        const LenardTriple &L = lc.L(j - 1);
        const int power = m + 1 - j;
        V(0, 0)[power] = -(kHalf * W0() * L.a);
        V(0, 1)[power] = L.b - kHalf * U0() * L.a;
        V(1, 0)[power] = L.c - kHalf * V0() * L.a;
        V(1, 1)[power] = kHalf * W0() * L.a;
    }
    return V;
}

LambdaMatrixExpr zero_curvature_residual(const LenardChain &lc, int m, const JetExpr &ut, const JetExpr &vt) {
    const JetExpr wt = -(ut * V0() + U0() * vt) / (JetExpr(2) * W0());
    LambdaMatrixExpr Ut;
    Ut(0, 0) = {JetExpr(), wt};
    Ut(0, 1) = {JetExpr(), ut};
    Ut(1, 0) = {JetExpr(), vt};
    Ut(1, 1) = {JetExpr(), -wt};
    const LambdaMatrixExpr V = V_matrix(lc, m);
    LambdaMatrixExpr r = Ut - lambda_derive(V) + commutator(spectral_U(), V);
    for (auto &row : r.e)
        for (auto &p : row) p = trimmed(p);
    return r;
}

LambdaMatrixExpr zero_curvature_residual(const LenardChain &lc, int m) {
    const auto [ut, vt] = hierarchy_rhs(lc, m);
    return zero_curvature_residual(lc, m, ut, vt);
}

// ---------------------------------------------------------------- stationary objects

LenardTriple build_E(const LenardChain &lc, int k, const std::vector<Rational> &alphas) {
    if (static_cast<int>(alphas.size()) != k + 1) {
        throw std::invalid_argument("build_E: expected alpha_0..alpha_k (" + std::to_string(k + 1) + " values), got " +
                                    std::to_string(alphas.size()));
    }
    LenardTriple E = lc.L(k);
    for (int j = 1; j <= k + 1; ++j) E = E + JetExpr(alphas[j - 1]) * lc.L(k - j);
    return E;
}

LambdaPoly FGH::F_poly() const { return descending(F); }
LambdaPoly FGH::G_poly() const { return descending(G); }
LambdaPoly FGH::H_poly() const { return descending(H); }

FGH assemble_FGH(const LenardChain &lc, int n, const std::vector<Rational> &alphas) {
    if (static_cast<int>(alphas.size()) < n + 1) throw std::invalid_argument("assemble_FGH: need alpha_0..alpha_n");
    FGH r;
    for (int j = 0; j <= n + 1; ++j) {
        const int k = j - 1;
        const LenardTriple E =
            k < 0 ? lenard_seed() : build_E(lc, k, std::vector<Rational>(alphas.begin(), alphas.begin() + k + 1));
        r.G.push_back(-(kHalf * W0() * E.a));
        r.F.push_back(E.b - kHalf * U0() * E.a);
        r.H.push_back(E.c - kHalf * V0() * E.a);
    }
    return r;
}

LambdaPoly casimir_derivative(const FGH &fgh) {
    const LambdaPoly F = fgh.F_poly(), G = fgh.G_poly(), H = fgh.H_poly();
    return trimmed(derived(G * G + F * H));
}

std::array<LambdaPoly, 3> lax_residual(const FGH &fgh) {
    const LambdaPoly F = fgh.F_poly(), G = fgh.G_poly(), H = fgh.H_poly();
    const JetExpr two(2);
    std::array<LambdaPoly, 3> r{
        derived(G) - shifted(scaled(U0(), H) - scaled(V0(), F)),
        derived(F) - shifted(scaled(two * W0(), F) - scaled(two * U0(), G)),
        derived(H) - shifted(scaled(two * V0(), G) - scaled(two * W0(), H)),
    };
    for (auto &p : r) p = trimmed(p);
    return r;
}

FGH hatted_coefficients(const LenardChain &lc, int kmax) {
    FGH r;
    for (int k = -1; k <= kmax; ++k) {
        const LenardTriple &L = lc.L(k);
        r.F.push_back(L.b - kHalf * U0() * L.a);
        r.H.push_back(L.c - kHalf * V0() * L.a);
        r.G.push_back(-(kHalf * W0() * L.a));
    }
    return r;
}

// ---------------------------------------------------------------- homogeneous recursion

namespace {

/// Shared form of the F and H recursions; `p` is u (resp. v) and `coef` the first-order
/// multiplier (w_x u - w u_x)/u (resp. (w v_x - w_x v)/v).
JetExpr homogeneous_step(const std::vector<JetExpr> &X, int k, const JetExpr &p, const JetExpr &coef) {
    auto at = [&](int idx) -> const JetExpr & { return X.at(idx + 1); };
    const JetExpr px_over_2p = D(p) / (JetExpr(2) * p);
    JetExpr s;
    for (int l = 0; l <= k - 2; ++l) {
        const JetExpr &a = at(l - 1);
        const JetExpr &b = at(k - 3 - l);
        const JetExpr ax = D(a);
        s += JetExpr(Rational(-1, 2)) * D(ax) * b + JetExpr(Rational(1, 4)) * ax * D(b) + px_over_2p * ax * b;
    }
    for (int l = 1; l <= k - 1; ++l) s += at(l - 1) * at(k - 1 - l);
    for (int l = 0; l <= k - 1; ++l) s += coef * at(l - 1) * at(k - 2 - l);
    return -(s / (JetExpr(2) * p));
}

}  // namespace

HomogeneousSeq homogeneous_recursion(int kmax) {
    const JetExpr &u = U0(), &v = V0(), &w = W0();
    const JetExpr ux = D(u), vx = D(v), wx = D(w);
    HomogeneousSeq s;
    s.F = {u, kHalf * (w * ux - wx * u)};
    s.H = {v, kHalf * (wx * v - w * vx)};
    s.G = {w, JetExpr(Rational(1, 4)) * (u * vx - ux * v)};
    const JetExpr coef_f = (wx * u - w * ux) / u;
    const JetExpr coef_h = (w * vx - wx * v) / v;
    for (int k = 2; k - 1 <= kmax; ++k) {
        s.F.push_back(homogeneous_step(s.F, k, u, coef_f));
        s.H.push_back(homogeneous_step(s.H, k, v, coef_h));
        JetExpr acc;
        for (int l = 0; l <= k; ++l) acc += s.F.at(l) * s.H.at(k - l);
        for (int l = 1; l <= k - 1; ++l) acc += s.G.at(l) * s.G.at(k - l);
        s.G.push_back(-(acc / (JetExpr(2) * w)));
    }
    s.F.resize(kmax + 2);
    s.H.resize(kmax + 2);
    s.G.resize(kmax + 2);
    return s;
}

bool homogeneous_relations_hold(const HomogeneousSeq &s) {
    const JetExpr &u = U0(), &v = V0(), &w = W0();
    const JetExpr two(2);
    for (std::size_t i = 1; i < s.F.size(); ++i) {
        // entry i holds index i - 1 = k, previous entry index k - 1
        if (D(s.F[i - 1]) + two * u * s.G[i] != two * w * s.F[i]) return false;
        if (D(s.H[i - 1]) - two * v * s.G[i] != -(two * w * s.H[i])) return false;
        if (D(s.G[i - 1]) != u * s.H[i] - v * s.F[i]) return false;
    }
    return true;
}

bool convert_homogeneous(const LenardChain &lc, int k, const std::vector<Rational> &branch_points) {
    const std::vector<Rational> c = series_c(branch_points, std::max(k, 0));
    std::vector<Rational> alphas(c.begin() + 1, c.end());
    alphas.resize(std::max(k, 0) + 1);
    const FGH full = assemble_FGH(lc, std::max(k, 0), alphas);
    const FGH hat = hatted_coefficients(lc, k);
    JetExpr f, g, h;
    for (int m = 0; m <= k + 1; ++m) {
        const JetExpr cm(c.at(k - m + 1));
        f += cm * hat.F.at(m);
        g += cm * hat.G.at(m);
        h += cm * hat.H.at(m);
    }
    return full.F.at(k + 1) == f && full.G.at(k + 1) == g && full.H.at(k + 1) == h;
}

}  // namespace hfgi
