#ifndef HFGI_LENARD_HPP
#define HFGI_LENARD_HPP

#include <array>
#include <utility>
#include <vector>

#include "hfgi/jet.hpp"

namespace hfgi {

/// (c, b, a) in that order; also used for (h, f, g).
struct LenardTriple {
    JetExpr c, b, a;

    bool operator==(const LenardTriple &o) const { return c == o.c && b == o.b && a == o.a; }
    bool operator!=(const LenardTriple &o) const { return !(*this == o); }
    bool is_zero() const { return c.is_zero() && b.is_zero() && a.is_zero(); }
};

LenardTriple operator+(const LenardTriple &x, const LenardTriple &y);
LenardTriple operator*(const JetExpr &s, const LenardTriple &x);

/// Polynomial in lambda; entry k is the coefficient of lambda^k.
using LambdaPoly = std::vector<JetExpr>;

LambdaPoly operator+(const LambdaPoly &p, const LambdaPoly &q);
LambdaPoly operator-(const LambdaPoly &p, const LambdaPoly &q);
LambdaPoly operator*(const LambdaPoly &p, const LambdaPoly &q);
LambdaPoly lambda_derive(const LambdaPoly &p);
bool is_zero(const LambdaPoly &p);

struct LambdaMatrixExpr {
    std::array<std::array<LambdaPoly, 2>, 2> e;

    LambdaPoly &operator()(int i, int j) { return e[i][j]; }
    const LambdaPoly &operator()(int i, int j) const { return e[i][j]; }
    bool is_zero() const;
    LambdaPoly trace() const;
};

LambdaMatrixExpr operator+(const LambdaMatrixExpr &a, const LambdaMatrixExpr &b);
LambdaMatrixExpr operator-(const LambdaMatrixExpr &a, const LambdaMatrixExpr &b);
LambdaMatrixExpr operator*(const LambdaMatrixExpr &a, const LambdaMatrixExpr &b);
LambdaMatrixExpr commutator(const LambdaMatrixExpr &a, const LambdaMatrixExpr &b);
LambdaMatrixExpr lambda_derive(const LambdaMatrixExpr &a);

LenardTriple apply_K(const LenardTriple &t);
LenardTriple apply_J(const LenardTriple &t);

/// L_{-1} = (0, 0, -2).
LenardTriple lenard_seed();

/// Solves K prev = J next with the kernel multiple of L_{-1} set to zero.
/// Throws std::logic_error if the re-substitution check fails.
LenardTriple lenard_next(const LenardTriple &prev);

/// L_{-1}, ..., L_{jmax}; element j + 1 holds L_j.
class LenardChain {
public:
    explicit LenardChain(int jmax = 4);
    const LenardTriple &L(int j) const { return chain_.at(j + 1); }
    int jmax() const { return static_cast<int>(chain_.size()) - 2; }

private:
    std::vector<LenardTriple> chain_;
};

/// (u_{t_m}, v_{t_m}) = (2 w b_m, -2 w c_m).
std::pair<JetExpr, JetExpr> hierarchy_rhs(const LenardChain &lc, int m);

/// H_n = (a_n - u c_n - v b_n) / n; throws std::domain_error for n = 0.
JetExpr hamiltonian(const LenardChain &lc, int n);

/// U = lambda [[w, u], [v, -w]].
LambdaMatrixExpr spectral_U();
/// V^(m) built from L_{-1}, ..., L_{m-1}.
LambdaMatrixExpr V_matrix(const LenardChain &lc, int m);

/// U_t - V_x + [U, V] with the supplied flow (u_t, v_t) and w_t from the constraint.
LambdaMatrixExpr zero_curvature_residual(const LenardChain &lc, int m, const JetExpr &ut, const JetExpr &vt);
LambdaMatrixExpr zero_curvature_residual(const LenardChain &lc, int m);

/// E_k = sum_{j=0}^{k+1} alpha_{j-1} L_{k-j} with alpha_{-1} = 1; alphas = (alpha_0, ..., alpha_k).
LenardTriple build_E(const LenardChain &lc, int k, const std::vector<Rational> &alphas);

struct FGH {
    /// Entry j holds X_{j-1}.
    std::vector<JetExpr> F, G, H;

    LambdaPoly F_poly() const;
    LambdaPoly G_poly() const;
    LambdaPoly H_poly() const;
};

/// F, G, H of degree n + 1 in lambda; alphas = (alpha_0, ..., alpha_n).
FGH assemble_FGH(const LenardChain &lc, int n, const std::vector<Rational> &alphas);

/// Coefficients of the total x-derivative of G^2 + F H; entry k is the lambda^k coefficient.
LambdaPoly casimir_derivative(const FGH &fgh);

/// Hatted (all alpha = 0) coefficients X_k for k = -1..kmax; entry k + 1 holds X_k.
FGH hatted_coefficients(const LenardChain &lc, int kmax);

/// Nonlinear homogeneous recursion; entry k + 1 holds the index-k quantity.
struct HomogeneousSeq {
    std::vector<JetExpr> F, H, G;
};

HomogeneousSeq homogeneous_recursion(int kmax);

/// F_{k-1,x} + 2u G_k = 2w F_k, H_{k-1,x} - 2v G_k = -2w H_k, G_{k-1,x} = u H_k - v F_k
/// for every k available in s.
bool homogeneous_relations_hold(const HomogeneousSeq &s);

/// Residuals (G_x - lambda(uH - vF), F_x - 2 lambda(wF - uG), H_x - 2 lambda(vG - wH)).
std::array<LambdaPoly, 3> lax_residual(const FGH &fgh);

/// Checks F_k = sum_{m=0}^{k+1} c_{k-m}(Lambda) Fhat_{m-1} (and the H, G analogues) with
/// alpha_l = c_l(Lambda).
bool convert_homogeneous(const LenardChain &lc, int k, const std::vector<Rational> &branch_points);

}  // namespace hfgi

#endif  // HFGI_LENARD_HPP
