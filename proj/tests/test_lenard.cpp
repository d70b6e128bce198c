#include "doctest.h"

#include "hfgi/lenard.hpp"
#include "hfgi/series.hpp"

using namespace hfgi;

namespace {

const JetExpr u = JetExpr::u(), v = JetExpr::v(), w = JetExpr::w();
const JetExpr ux = JetExpr::u(1), vx = JetExpr::v(1), uxx = JetExpr::u(2), vxx = JetExpr::v(2);
const JetExpr wx = jet_derive(w), wxx = jet_derive(w, 2);

JetExpr q(long n, long d = 1) { return JetExpr(Rational(n, d)); }

const LenardChain &chain() {
    static const LenardChain lc(3);
    return lc;
}

}  // namespace

TEST_CASE("J annihilates the seed and K L_{-1} = J L_0") {
    CHECK(apply_J(lenard_seed()).is_zero());
    const LenardTriple L0 = chain().L(0);
    CHECK(apply_K(lenard_seed()) == apply_J(L0));
    const LenardTriple t{u, v, w};
    CHECK(apply_J(t).c == JetExpr(2) * w * v);
}

TEST_CASE("first Lenard members in closed form") {
    const JetExpr i2w = (JetExpr(2) * w).inverse();
    const LenardTriple L0{-vx * i2w, ux * i2w, (ux * v - u * vx) * i2w};
    CHECK(chain().L(0) == L0);
    const JetExpr i4w = (JetExpr(4) * w).inverse();
    const LenardTriple L1{(vxx * w - v * wxx) * i4w, (uxx * w - u * wxx) * i4w,
                          (JetExpr(-2) * wxx - JetExpr(3) * w * (ux * vx + wx * wx)) * i4w};
    CHECK(chain().L(1) == L1);
}

TEST_CASE("chain relations hold for every generated member") {
    for (int j = 0; j <= chain().jmax(); ++j) CHECK(apply_J(chain().L(j)) == apply_K(chain().L(j - 1)));
}

TEST_CASE("hierarchy members") {
    const auto [u1, v1] = hierarchy_rhs(chain(), 1);
    CHECK(u1 == q(1, 2) * (uxx * w - u * wxx));
    CHECK(v1 == q(1, 2) * (wxx * v - w * vxx));
    const auto [u2, v2] = hierarchy_rhs(chain(), 2);
    CHECK(u2 == q(1, 4) * JetExpr::u(3) + q(3, 8) * jet_derive(u * ux * vx + u * wx * wx));
    CHECK(v2 == q(1, 4) * JetExpr::v(3) + q(3, 8) * jet_derive(v * ux * vx + v * wx * wx));
    for (int m = 1; m <= 3; ++m) {
        const auto [um, vm] = hierarchy_rhs(chain(), m);
        CHECK(degree(um) == m + 1);
        CHECK(degree(vm) == m + 1);
    }
}

TEST_CASE("Hamiltonians generate the flows") {
    for (int n = 1; n <= 2; ++n) {
        const JetExpr h = hamiltonian(chain(), n);
        CHECK(variational_derivative(h, Field::U) == chain().L(n).c);
        CHECK(variational_derivative(h, Field::V) == chain().L(n).b);
    }
    CHECK_THROWS_AS(hamiltonian(chain(), 0), std::domain_error);
}

TEST_CASE("zero curvature") {
    for (int m = 1; m <= 3; ++m) CHECK(zero_curvature_residual(chain(), m).is_zero());
    const auto [u1, v1] = hierarchy_rhs(chain(), 1);
    CHECK_FALSE(zero_curvature_residual(chain(), 1, u1 + u, v1).is_zero());
}

TEST_CASE("E_0 and E_1 with integration constants") {
    const Rational a0(3, 7), a1(-2, 5);
    const JetExpr A0(a0), A1(a1);
    const JetExpr i2w = (JetExpr(2) * w).inverse(), i4w = (JetExpr(4) * w).inverse();
    const LenardTriple E0{-vx * i2w, ux * i2w, (ux * v - u * vx) * i2w - JetExpr(2) * A0};
    CHECK(build_E(chain(), 0, {a0}) == E0);
    const LenardTriple E1{
        (vxx * w - v * wxx) * i4w - A0 * vx * i2w,
        (uxx * w - u * wxx) * i4w + A0 * ux * i2w,
        (JetExpr(-2) * wxx - JetExpr(3) * w * (ux * vx + wx * wx)) * i4w + A0 * (ux * v - u * vx) * i2w - JetExpr(2) * A1,
    };
    CHECK(build_E(chain(), 1, {a0, a1}) == E1);
    CHECK_THROWS_AS(build_E(chain(), 1, {a0}), std::invalid_argument);
}

TEST_CASE("Lax residual lives in the lambda^0 coefficient and drives the Casimir derivative") {
    const int n = 2;
    const FGH fgh = assemble_FGH(chain(), n, {Rational(1, 3), Rational(-2), Rational(5, 4)});
    CHECK(fgh.F.front() == u);
    CHECK(fgh.G.front() == w);
    CHECK(fgh.H.front() == v);
    const auto res = lax_residual(fgh);
    for (const auto &r : res) {
        for (std::size_t k = 1; k < r.size(); ++k) CHECK(r[k].is_zero());
    }
    const LambdaPoly cas = casimir_derivative(fgh);
    for (std::size_t k = n + 2; k < cas.size(); ++k) CHECK(cas[k].is_zero());
    const LambdaPoly via_lax = LambdaPoly{JetExpr(2)} * fgh.G_poly() * res[0] + fgh.H_poly() * res[1] +
                               fgh.F_poly() * res[2];
    CHECK(is_zero(cas - via_lax));
}

TEST_CASE("homogeneous recursion matches the Lenard-built hatted quantities") {
    const HomogeneousSeq s = homogeneous_recursion(3);
    CHECK(s.F[0] == u);
    CHECK(s.H[0] == v);
    CHECK(s.G[0] == w);
    CHECK(s.F[1] == q(1, 2) * (w * ux - wx * u));
    CHECK(s.G[1] == q(1, 4) * (u * vx - ux * v));
    const FGH hat = hatted_coefficients(chain(), 3);
    for (int k = -1; k <= 3; ++k) {
        CAPTURE(k);
        CHECK(s.F[k + 1] == hat.F[k + 1]);
        CHECK(s.H[k + 1] == hat.H[k + 1]);
        CHECK(s.G[k + 1] == hat.G[k + 1]);
        CHECK(degree(hat.F[k + 1]) == k + 1);
        CHECK(degree(hat.H[k + 1]) == k + 1);
        CHECK(degree(hat.G[k + 1]) == k + 1);
    }
    CHECK(homogeneous_relations_hold(s));
}

TEST_CASE("conversion between hatted and full coefficients") {
    const std::vector<Rational> lam{1, 2, 3, 4};
    CHECK(series_c(lam, 0)[1] == -5);
    for (int k = -1; k <= 1; ++k) CHECK(convert_homogeneous(chain(), k, lam));
    const std::vector<Rational> lam2{Rational(1, 2), -3, 2, Rational(7, 3), 5, -1};
    for (int k = -1; k <= 2; ++k) CHECK(convert_homogeneous(chain(), k, lam2));
}
