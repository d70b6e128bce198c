#ifndef HFGI_JET_HPP
#define HFGI_JET_HPP

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace hfgi {

using Rational = mpq_class;

/// Highest x-derivative order representable for each of u and v.
inline constexpr int kMaxJetOrder = 16;

/// Exponent vector over the jet alphabet u, u_x, ..., v, v_x, ...
/// Slot i < kMaxJetOrder holds the exponent of u^(i); slot kMaxJetOrder + i that of v^(i).
struct Monomial {
    std::array<std::uint8_t, 2 * kMaxJetOrder> e{};

    static int u_slot(int order) { return order; }
    static int v_slot(int order) { return kMaxJetOrder + order; }

    int total_degree() const;
    /// Grading with deg(u) = deg(v) = 0 and deg(d/dx) = 1.
    int weight() const;
    bool operator==(const Monomial &o) const { return e == o.e; }
};

/// Degree-reverse-lexicographic order on the jet alphabet.
struct DegRevLex {
    bool operator()(const Monomial &a, const Monomial &b) const;
};

/// Polynomial in jet variables (no w) with exact rational coefficients.
class Poly {
public:
    using Terms = std::map<Monomial, Rational, DegRevLex>;

    Poly() = default;
    explicit Poly(const Rational &c);
    static Poly var(int slot);

    const Terms &terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    Rational constant_term() const;

    Poly &operator+=(const Poly &o);
    Poly &operator-=(const Poly &o);
    Poly &operator*=(const Rational &c);
    friend Poly operator+(Poly a, const Poly &b) { return a += b; }
    friend Poly operator-(Poly a, const Poly &b) { return a -= b; }
    friend Poly operator*(const Poly &a, const Poly &b);
    friend Poly operator*(Poly a, const Rational &c) { return a *= c; }
    Poly operator-() const;
    bool operator==(const Poly &o) const { return terms_ == o.terms_; }

    void add_term(const Monomial &m, const Rational &c);

    /// Partial derivative with respect to one jet slot.
    Poly partial(int slot) const;
    /// Formal antiderivative with respect to one jet slot.
    Poly integrate(int slot) const;
    /// Total x-derivative of a w-free polynomial.
    Poly total_derivative() const;

    /// Exact division by the jet variable in `slot`; nullopt when not divisible.
    std::optional<Poly> divide_by_var(int slot) const;
    /// Exact division by (1 - u v); nullopt when not divisible.
    std::optional<Poly> divide_by_one_minus_uv() const;

    /// Highest jet order present among u-slots (resp. v-slots), -1 if none.
    int max_u_order() const;
    int max_v_order() const;
    /// Largest exponent of `slot` over all terms.
    int max_exponent(int slot) const;
    /// Coefficient of slot^power (as a polynomial in the remaining variables).
    Poly coefficient(int slot, int power) const;

    /// Single-valued weight if homogeneous, nullopt if mixed; requires non-zero.
    std::optional<int> weight() const;

private:
    Terms terms_;
};

Poly one_minus_uv();
Poly pow(const Poly &p, int k);

/// Exact differential rational function N / D in u, v, their jets, and w with w^2 = 1 - u v.
///
/// N = n0 + w n1 with n0, n1 w-free; D = u^du v^dv (1 - u v)^dc. The representation is
/// canonical: no factor u, v or (1 - u v) of D divides both n0 and n1, so structural
/// equality coincides with equality of functions.
class JetExpr {
public:
    JetExpr() = default;
    JetExpr(const Rational &c);  // NOLINT(google-explicit-constructor)
    JetExpr(long c) : JetExpr(Rational(c)) {}  // NOLINT(google-explicit-constructor)
    JetExpr(int c) : JetExpr(Rational(c)) {}  // NOLINT(google-explicit-constructor)
    JetExpr(Poly n0, Poly n1, int du, int dv, int dc);

    static JetExpr u(int order = 0);
    static JetExpr v(int order = 0);
    static JetExpr w();

    const Poly &n0() const { return n0_; }
    const Poly &n1() const { return n1_; }
    int du() const { return du_; }
    int dv() const { return dv_; }
    int dc() const { return dc_; }

    bool is_zero() const { return n0_.is_zero() && n1_.is_zero(); }
    bool is_constant() const;

    JetExpr &operator+=(const JetExpr &o);
    JetExpr &operator-=(const JetExpr &o);
    JetExpr &operator*=(const JetExpr &o);
    friend JetExpr operator+(JetExpr a, const JetExpr &b) { return a += b; }
    friend JetExpr operator-(JetExpr a, const JetExpr &b) { return a -= b; }
    friend JetExpr operator*(JetExpr a, const JetExpr &b) { return a *= b; }
    JetExpr operator-() const;
    bool operator==(const JetExpr &o) const;
    bool operator!=(const JetExpr &o) const { return !(*this == o); }

    /// Division restricted to divisors of the form c u^a v^b w^e (1 - u v)^k.
    friend JetExpr operator/(const JetExpr &a, const JetExpr &b);

    /// Multiplicative inverse of c u^a v^b w^e (1 - u v)^k; throws std::domain_error otherwise.
    JetExpr inverse() const;

private:
    void normalize();

    Poly n0_, n1_;
    int du_ = 0, dv_ = 0, dc_ = 0;
};

/// Total x-derivative; derivatives of w are eliminated through w_x = -(u_x v + u v_x) / (2 w).
JetExpr jet_derive(const JetExpr &e);
JetExpr jet_derive(const JetExpr &e, int times);

/// Partial derivative in u^(k) (or v^(k)) with w = w(u, v) eliminated by the chain rule.
JetExpr partial_u(const JetExpr &e, int order);
JetExpr partial_v(const JetExpr &e, int order);

enum class Field { U, V };

/// Euler operator sum_k (-D)^k d/d(field^(k)).
JetExpr variational_derivative(const JetExpr &h, Field field);

/// Homogeneous grading or nullopt when inhomogeneous; throws std::domain_error on zero.
std::optional<int> degree(const JetExpr &e);

/// Formal x-antiderivative of a total derivative with zero constant of integration.
/// Throws std::logic_error when the integrand is not exact.
JetExpr antiderivative(const JetExpr &e);

/// Highest jet order of u and v appearing in e (-1 when absent).
int max_jet_order(const JetExpr &e);

std::string to_string(const JetExpr &e);
std::string to_latex(const JetExpr &e);
std::string to_string(const Poly &p);

/// Numeric jets: u[i] = u^(i), v[i] = v^(i), and w.
struct JetValues {
    std::vector<std::complex<double>> u, v;
    std::complex<double> w;
};

/// Value of e at the given jets; throws std::out_of_range if e needs a jet not supplied.
std::complex<double> evaluate(const Poly &p, const JetValues &at);
std::complex<double> evaluate(const JetExpr &e, const JetValues &at);

}  // namespace hfgi

#endif  // HFGI_JET_HPP
