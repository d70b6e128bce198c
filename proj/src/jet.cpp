#include "hfgi/jet.hpp"

#include <algorithm>
#include <sstream>
#include <vector>

namespace hfgi {

namespace {

constexpr int kU0 = 0;
constexpr int kV0 = kMaxJetOrder;

bool is_u_slot(int slot) { return slot < kMaxJetOrder; }
int slot_order(int slot) { return is_u_slot(slot) ? slot : slot - kMaxJetOrder; }

int next_slot(int slot) {
    if (slot_order(slot) + 1 >= kMaxJetOrder) {
        throw std::overflow_error("jet order exceeds kMaxJetOrder");
    }
    return slot + 1;
}

Poly mul_pow(const Poly &p, const Poly &f, int k) {
    Poly r = p;
    for (int i = 0; i < k; ++i) r = r * f;
    return r;
}

}  // namespace

// ---------------------------------------------------------------- Monomial

int Monomial::total_degree() const {
    int d = 0;
    for (auto x : e) d += x;
    return d;
}

int Monomial::weight() const {
    int d = 0;
    for (int i = 0; i < 2 * kMaxJetOrder; ++i) d += slot_order(i) * e[i];
    return d;
}

bool DegRevLex::operator()(const Monomial &a, const Monomial &b) const {
    const int da = a.total_degree(), db = b.total_degree();
    if (da != db) return da < db;
    for (int i = 2 * kMaxJetOrder - 1; i >= 0; --i) {
        if (a.e[i] != b.e[i]) return a.e[i] > b.e[i];
    }
    return false;
}

// ---------------------------------------------------------------- Poly

Poly::Poly(const Rational &c) {
    if (c != 0) terms_.emplace(Monomial{}, c);
}

Poly Poly::var(int slot) {
    Poly p;
    Monomial m;
    m.e[slot] = 1;
    p.terms_.emplace(m, Rational(1));
    return p;
}

bool Poly::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.total_degree() == 0);
}

Rational Poly::constant_term() const {
    auto it = terms_.find(Monomial{});
    return it == terms_.end() ? Rational(0) : it->second;
}

void Poly::add_term(const Monomial &m, const Rational &c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Poly &Poly::operator+=(const Poly &o) {
    for (const auto &[m, c] : o.terms_) add_term(m, c);
    return *this;
}

Poly &Poly::operator-=(const Poly &o) {
    for (const auto &[m, c] : o.terms_) add_term(m, -c);
    return *this;
}

Poly &Poly::operator*=(const Rational &c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto &[m, x] : terms_) x *= c;
    return *this;
}

Poly operator*(const Poly &a, const Poly &b) {
    Poly r;
    for (const auto &[ma, ca] : a.terms_) {
        for (const auto &[mb, cb] : b.terms_) {
            Monomial m;
            for (int i = 0; i < 2 * kMaxJetOrder; ++i) {
                const int s = ma.e[i] + mb.e[i];
                if (s > 255) throw std::overflow_error("monomial exponent overflow");
                m.e[i] = static_cast<std::uint8_t>(s);
            }
            r.add_term(m, ca * cb);
        }
    }
    return r;
}

Poly Poly::operator-() const {
    Poly r = *this;
    r *= Rational(-1);
    return r;
}

Poly Poly::partial(int slot) const {
    Poly r;
    for (const auto &[m, c] : terms_) {
        if (m.e[slot] == 0) continue;
        Monomial mm = m;
        mm.e[slot] -= 1;
        r.add_term(mm, c * m.e[slot]);
    }
    return r;
}

Poly Poly::integrate(int slot) const {
    Poly r;
    for (const auto &[m, c] : terms_) {
        Monomial mm = m;
        mm.e[slot] += 1;
        r.add_term(mm, c / Rational(mm.e[slot]));
    }
    return r;
}

Poly Poly::total_derivative() const {
    Poly r;
    for (const auto &[m, c] : terms_) {
        for (int s = 0; s < 2 * kMaxJetOrder; ++s) {
            if (m.e[s] == 0) continue;
            Monomial mm = m;
            mm.e[s] -= 1;
            mm.e[next_slot(s)] += 1;
            r.add_term(mm, c * m.e[s]);
        }
    }
    return r;
}

std::optional<Poly> Poly::divide_by_var(int slot) const {
    Poly r;
    for (const auto &[m, c] : terms_) {
        if (m.e[slot] == 0) return std::nullopt;
        Monomial mm = m;
        mm.e[slot] -= 1;
        r.terms_.emplace(mm, c);
    }
    return r;
}

std::optional<Poly> Poly::divide_by_one_minus_uv() const {
    // Write each monomial as s^k * r with s = u v and min(exp_u(r), exp_v(r)) = 0; the
    // polynomial is divisible by (1 - s) iff every fibre polynomial P_r(s) vanishes at s = 1.
    std::map<Monomial, std::map<int, Rational>, DegRevLex> fibres;
    for (const auto &[m, c] : terms_) {
        const int k = std::min(m.e[kU0], m.e[kV0]);
        Monomial r = m;
        r.e[kU0] -= k;
        r.e[kV0] -= k;
        fibres[r][k] += c;
    }
    Poly q;
    for (const auto &[r, coeffs] : fibres) {
        const int kmax = coeffs.rbegin()->first;
        Rational carry = 0;
        for (int k = 0; k <= kmax; ++k) {
            auto it = coeffs.find(k);
            const Rational pk = it == coeffs.end() ? Rational(0) : it->second;
            carry += pk;  // q_k = p_k + q_{k-1}
            if (k == kmax) {
                if (carry != 0) return std::nullopt;
            } else if (carry != 0) {
                Monomial mm = r;
                mm.e[kU0] += k;
                mm.e[kV0] += k;
                q.add_term(mm, carry);
            }
        }
    }
    return q;
}

int Poly::max_u_order() const {
    int best = -1;
    for (const auto &[m, c] : terms_) {
        for (int i = kMaxJetOrder - 1; i > best; --i) {
            if (m.e[i]) {
                best = i;
                break;
            }
        }
    }
    return best;
}

int Poly::max_v_order() const {
    int best = -1;
    for (const auto &[m, c] : terms_) {
        for (int i = kMaxJetOrder - 1; i > best; --i) {
            if (m.e[kMaxJetOrder + i]) {
                best = i;
                break;
            }
        }
    }
    return best;
}

int Poly::max_exponent(int slot) const {
    int best = 0;
    for (const auto &[m, c] : terms_) best = std::max<int>(best, m.e[slot]);
    return best;
}

Poly Poly::coefficient(int slot, int power) const {
    Poly r;
    for (const auto &[m, c] : terms_) {
        if (m.e[slot] != power) continue;
        Monomial mm = m;
        mm.e[slot] = 0;
        r.terms_.emplace(mm, c);
    }
    return r;
}

std::optional<int> Poly::weight() const {
    if (terms_.empty()) throw std::domain_error("weight of zero polynomial");
    const int w0 = terms_.begin()->first.weight();
    for (const auto &[m, c] : terms_) {
        if (m.weight() != w0) return std::nullopt;
    }
    return w0;
}

Poly one_minus_uv() {
    Poly p(Rational(1));
    Monomial m;
    m.e[kU0] = 1;
    m.e[kV0] = 1;
    p.add_term(m, Rational(-1));
    return p;
}

Poly pow(const Poly &p, int k) {
    Poly r(Rational(1));
    for (int i = 0; i < k; ++i) r = r * p;
    return r;
}

// ---------------------------------------------------------------- JetExpr

JetExpr::JetExpr(const Rational &c) : n0_(c) {}

JetExpr::JetExpr(Poly n0, Poly n1, int du, int dv, int dc)
    : n0_(std::move(n0)), n1_(std::move(n1)), du_(du), dv_(dv), dc_(dc) {
    normalize();
}

JetExpr JetExpr::u(int order) { return JetExpr(Poly::var(Monomial::u_slot(order)), Poly(), 0, 0, 0); }
JetExpr JetExpr::v(int order) { return JetExpr(Poly::var(Monomial::v_slot(order)), Poly(), 0, 0, 0); }
JetExpr JetExpr::w() { return JetExpr(Poly(), Poly(Rational(1)), 0, 0, 0); }

bool JetExpr::is_constant() const {
    return n1_.is_zero() && n0_.is_constant() && du_ == 0 && dv_ == 0 && dc_ == 0;
}

void JetExpr::normalize() {
    if (is_zero()) {
        du_ = dv_ = dc_ = 0;
        return;
    }
    while (du_ > 0) {
        auto a = n0_.divide_by_var(kU0);
        if (!a && !n0_.is_zero()) break;
        auto b = n1_.divide_by_var(kU0);
        if (!b && !n1_.is_zero()) break;
        if (a) n0_ = std::move(*a);
        if (b) n1_ = std::move(*b);
        --du_;
    }
    while (dv_ > 0) {
        auto a = n0_.divide_by_var(kV0);
        if (!a && !n0_.is_zero()) break;
        auto b = n1_.divide_by_var(kV0);
        if (!b && !n1_.is_zero()) break;
        if (a) n0_ = std::move(*a);
        if (b) n1_ = std::move(*b);
        --dv_;
    }
    while (dc_ > 0) {
        auto a = n0_.is_zero() ? std::optional<Poly>(Poly()) : n0_.divide_by_one_minus_uv();
        if (!a) break;
        auto b = n1_.is_zero() ? std::optional<Poly>(Poly()) : n1_.divide_by_one_minus_uv();
        if (!b) break;
        n0_ = std::move(*a);
        n1_ = std::move(*b);
        --dc_;
    }
}

namespace {

Poly scale_up(const Poly &p, int du, int dv, int dc) {
    Poly r = p;
    if (du) r = mul_pow(r, Poly::var(kU0), du);
    if (dv) r = mul_pow(r, Poly::var(kV0), dv);
    if (dc) r = mul_pow(r, one_minus_uv(), dc);
    return r;
}

}  // namespace

JetExpr &JetExpr::operator+=(const JetExpr &o) {
    if (o.is_zero()) return *this;
    if (is_zero()) return *this = o;
    const int du = std::max(du_, o.du_), dv = std::max(dv_, o.dv_), dc = std::max(dc_, o.dc_);
    Poly a0 = scale_up(n0_, du - du_, dv - dv_, dc - dc_);
    Poly a1 = scale_up(n1_, du - du_, dv - dv_, dc - dc_);
    a0 += scale_up(o.n0_, du - o.du_, dv - o.dv_, dc - o.dc_);
    a1 += scale_up(o.n1_, du - o.du_, dv - o.dv_, dc - o.dc_);
    *this = JetExpr(std::move(a0), std::move(a1), du, dv, dc);
    return *this;
}

JetExpr &JetExpr::operator-=(const JetExpr &o) { return *this += -o; }

JetExpr &JetExpr::operator*=(const JetExpr &o) {
    // (a0 + w a1)(b0 + w b1) = a0 b0 + (1 - uv) a1 b1 + w (a0 b1 + a1 b0)
    Poly c0 = n0_ * o.n0_;
    if (!n1_.is_zero() && !o.n1_.is_zero()) c0 += one_minus_uv() * (n1_ * o.n1_);
    Poly c1 = n0_ * o.n1_ + n1_ * o.n0_;
    *this = JetExpr(std::move(c0), std::move(c1), du_ + o.du_, dv_ + o.dv_, dc_ + o.dc_);
    return *this;
}

JetExpr JetExpr::operator-() const {
    JetExpr r = *this;
    r.n0_ *= Rational(-1);
    r.n1_ *= Rational(-1);
    return r;
}

bool JetExpr::operator==(const JetExpr &o) const {
    return du_ == o.du_ && dv_ == o.dv_ && dc_ == o.dc_ && n0_ == o.n0_ && n1_ == o.n1_;
}

JetExpr JetExpr::inverse() const {
    if (is_zero()) throw std::domain_error("inverse of zero JetExpr");
    // Accept c m(u, v) or c w m(u, v) with m a monomial in u, v only.
    const bool plain = n1_.is_zero();
    Poly p = plain ? n0_ : n1_;
    int k = 0;
    while (p.terms().size() > 1) {
        auto q = p.divide_by_one_minus_uv();
        if (!q) break;
        p = std::move(*q);
        ++k;
    }
    if ((!plain && !n0_.is_zero()) || p.terms().size() != 1) {
        throw std::domain_error("JetExpr::inverse: divisor must be c u^a v^b w^e (1-uv)^k");
    }
    const auto &[m, c] = *p.terms().begin();
    for (int i = 0; i < 2 * kMaxJetOrder; ++i) {
        if (i != kU0 && i != kV0 && m.e[i] != 0) {
            throw std::domain_error("JetExpr::inverse: divisor contains derivative jets");
        }
    }
    const int a = m.e[kU0], b = m.e[kV0];
    // 1 / (c u^a v^b (1 - uv)^k [w] / D) = D [w / (1 - uv)] / (c u^a v^b (1 - uv)^k)
    Poly num = scale_up(Poly(Rational(1) / c), du_, dv_, dc_);
    if (plain) return JetExpr(std::move(num), Poly(), a, b, k);
    return JetExpr(Poly(), std::move(num), a, b, k + 1);
}

JetExpr operator/(const JetExpr &a, const JetExpr &b) { return a * b.inverse(); }

// ---------------------------------------------------------------- calculus

namespace {

JetExpr from_poly(const Poly &p) { return JetExpr(p, Poly(), 0, 0, 0); }

JetExpr denominator_inverse(const JetExpr &e) {
    return JetExpr(Poly(Rational(1)), Poly(), e.du(), e.dv(), e.dc());
}

/// w_x = -w (u_x v + u v_x) / (2 (1 - uv))
JetExpr w_derivative() {
    Poly s = Poly::var(Monomial::u_slot(1)) * Poly::var(kV0) + Poly::var(kU0) * Poly::var(Monomial::v_slot(1));
    return JetExpr(Poly(), s * Rational(-1, 2), 0, 0, 1);
}

}  // namespace

JetExpr jet_derive(const JetExpr &e) {
    if (e.is_zero()) return e;
    const JetExpr inv_d = denominator_inverse(e);
    JetExpr r = JetExpr(e.n0().total_derivative(), e.n1().total_derivative(), e.du(), e.dv(), e.dc());
    if (!e.n1().is_zero()) r += from_poly(e.n1()) * w_derivative() * inv_d;
    if (e.du() || e.dv() || e.dc()) {
        // d/dx D^{-1} = -D^{-1} (a u_x/u + b v_x/v - c (u_x v + u v_x)/(1 - uv))
        const Poly ux = Poly::var(Monomial::u_slot(1)), vx = Poly::var(Monomial::v_slot(1));
        JetExpr log_d;
        if (e.du()) log_d += JetExpr(ux * Rational(e.du()), Poly(), 1, 0, 0);
        if (e.dv()) log_d += JetExpr(vx * Rational(e.dv()), Poly(), 0, 1, 0);
        if (e.dc()) log_d += JetExpr((ux * Poly::var(kV0) + Poly::var(kU0) * vx) * Rational(-e.dc()), Poly(), 0, 0, 1);
        r -= e * log_d;
    }
    return r;
}

JetExpr jet_derive(const JetExpr &e, int times) {
    JetExpr r = e;
    for (int i = 0; i < times; ++i) r = jet_derive(r);
    return r;
}

namespace {

JetExpr partial_slot(const JetExpr &e, int slot) {
    if (e.is_zero()) return e;
    JetExpr r(e.n0().partial(slot), e.n1().partial(slot), e.du(), e.dv(), e.dc());
    if (slot != kU0 && slot != kV0) return r;
    const JetExpr inv_d = denominator_inverse(e);
    const bool is_u = slot == kU0;
    const Poly other = Poly::var(is_u ? kV0 : kU0);
    if (!e.n1().is_zero()) {
        // dw/du = -v w / (2 (1 - uv)), dw/dv = -u w / (2 (1 - uv))
        JetExpr dw(Poly(), other * Rational(-1, 2), 0, 0, 1);
        r += from_poly(e.n1()) * dw * inv_d;
    }
    const int a = is_u ? e.du() : e.dv();
    JetExpr log_d;
    if (a) log_d += JetExpr(Poly(Rational(a)), Poly(), is_u ? 1 : 0, is_u ? 0 : 1, 0);
    if (e.dc()) log_d += JetExpr(other * Rational(-e.dc()), Poly(), 0, 0, 1);
    if (!log_d.is_zero()) r -= e * log_d;
    return r;
}

}  // namespace

JetExpr partial_u(const JetExpr &e, int order) { return partial_slot(e, Monomial::u_slot(order)); }
JetExpr partial_v(const JetExpr &e, int order) { return partial_slot(e, Monomial::v_slot(order)); }

int max_jet_order(const JetExpr &e) {
    return std::max({e.n0().max_u_order(), e.n0().max_v_order(), e.n1().max_u_order(), e.n1().max_v_order()});
}

JetExpr variational_derivative(const JetExpr &h, Field field) {
    const int top = max_jet_order(h);
    JetExpr r;
    for (int k = std::max(top, 0); k >= 0; --k) {
        JetExpr p = field == Field::U ? partial_u(h, k) : partial_v(h, k);
        if (p.is_zero()) continue;
        p = jet_derive(p, k);
        if (k % 2) p = -p;
        r += p;
    }
    return r;
}

std::optional<int> degree(const JetExpr &e) {
    if (e.is_zero()) throw std::domain_error("degree of the zero expression is undefined");
    std::optional<int> w0, w1;
    if (!e.n0().is_zero()) {
        w0 = e.n0().weight();
        if (!w0) return std::nullopt;
    }
    if (!e.n1().is_zero()) {
        w1 = e.n1().weight();
        if (!w1) return std::nullopt;
    }
    if (w0 && w1 && *w0 != *w1) return std::nullopt;
    return w0 ? w0 : w1;
}

JetExpr antiderivative(const JetExpr &integrand) {
    JetExpr rest = integrand;
    JetExpr result;
    int guard = 4 * kMaxJetOrder;
    while (!rest.is_zero()) {
        if (--guard < 0) throw std::logic_error("antiderivative: no progress");
        const int k = max_jet_order(rest);
        if (k <= 1) {
            throw std::logic_error("antiderivative: integrand is not an exact x-derivative");
        }
        const int us = Monomial::u_slot(k), vs = Monomial::v_slot(k);
        for (const Poly *p : {&rest.n0(), &rest.n1()}) {
            if (p->max_exponent(us) > 1 || p->max_exponent(vs) > 1) {
                throw std::logic_error("antiderivative: integrand nonlinear in top jet, not exact");
            }
            for (const auto &[m, c] : p->terms()) {
                if (m.e[us] && m.e[vs]) throw std::logic_error("antiderivative: mixed top jets, not exact");
            }
        }
        auto coef = [&](int slot) {
            return JetExpr(rest.n0().coefficient(slot, 1), rest.n1().coefficient(slot, 1), rest.du(), rest.dv(),
                           rest.dc());
        };
        const JetExpr pu = coef(us);
        const JetExpr pv = coef(vs);
        const int us1 = Monomial::u_slot(k - 1), vs1 = Monomial::v_slot(k - 1);
        JetExpr a1(pu.n0().integrate(us1), pu.n1().integrate(us1), pu.du(), pu.dv(), pu.dc());
        if (pu.is_zero()) a1 = JetExpr();
        JetExpr pv_rest = pv - partial_v(a1, k - 1);
        JetExpr a2;
        if (!pv_rest.is_zero()) {
            if (pv_rest.n0().max_exponent(us1) || pv_rest.n1().max_exponent(us1)) {
                throw std::logic_error("antiderivative: integrability condition violated");
            }
            a2 = JetExpr(pv_rest.n0().integrate(vs1), pv_rest.n1().integrate(vs1), pv_rest.du(), pv_rest.dv(),
                         pv_rest.dc());
        }
        const JetExpr piece = a1 + a2;
        rest -= jet_derive(piece);
        result += piece;
        if (!rest.is_zero() && max_jet_order(rest) >= k) {
            throw std::logic_error("antiderivative: top jet did not cancel, integrand not exact");
        }
    }
    return result;
}

// ---------------------------------------------------------------- printing

namespace {

std::string jet_name(int slot, bool latex) {
    const char base = is_u_slot(slot) ? 'u' : 'v';
    const int k = slot_order(slot);
    std::string s(1, base);
    if (k == 0) return s;
    if (k <= 3) return s + (latex ? "_{" + std::string(k, 'x') + "}" : "_" + std::string(k, 'x'));
    return s + (latex ? "_{" + std::to_string(k) + "x}" : "_" + std::to_string(k) + "x");
}

std::string monomial_string(const Monomial &m, bool latex) {
    std::string s;
    for (int i = 0; i < 2 * kMaxJetOrder; ++i) {
        if (!m.e[i]) continue;
        if (!s.empty()) s += latex ? " " : "*";
        s += jet_name(i, latex);
        if (m.e[i] > 1) s += latex ? "^{" + std::to_string(m.e[i]) + "}" : "^" + std::to_string(m.e[i]);
    }
    return s;
}

std::string rational_string(const Rational &c, bool latex) {
    if (latex && c.get_den() != 1) {
        return "\\frac{" + c.get_num().get_str() + "}{" + c.get_den().get_str() + "}";
    }
    return c.get_str();
}

std::string poly_string(const Poly &p, bool latex) {
    if (p.is_zero()) return "0";
    std::string s;
    bool first = true;
    // Highest-degree terms first.
    for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
        Rational c = it->second;
        const std::string mono = monomial_string(it->first, latex);
        const bool neg = c < 0;
        if (neg) c = -c;
        if (first) {
            if (neg) s += "-";
        } else {
            s += neg ? " - " : " + ";
        }
        if (mono.empty()) {
            s += rational_string(c, latex);
        } else {
            if (c != 1) s += rational_string(c, latex) + (latex ? " " : "*");
            s += mono;
        }
        first = false;
    }
    return s;
}

std::string jet_string(const JetExpr &e, bool latex) {
    if (e.is_zero()) return "0";
    std::string num;
    const bool has0 = !e.n0().is_zero(), has1 = !e.n1().is_zero();
    if (has0) num = has1 ? "(" + poly_string(e.n0(), latex) + ")" : poly_string(e.n0(), latex);
    if (has1) {
        if (has0) num += " + ";
        num += (latex ? "w\\left(" : "w*(") + poly_string(e.n1(), latex) + (latex ? "\\right)" : ")");
    }
    if (!e.du() && !e.dv() && !e.dc()) return num;
    std::string den;
    auto add = [&](const std::string &f, int k) {
        if (!k) return;
        if (!den.empty()) den += latex ? " " : "*";
        den += f;
        if (k > 1) den += latex ? "^{" + std::to_string(k) + "}" : "^" + std::to_string(k);
    };
    add("u", e.du());
    add("v", e.dv());
    add(latex ? "(1-uv)" : "(1-u*v)", e.dc());
    if (latex) return "\\frac{" + num + "}{" + den + "}";
    return "(" + num + ")/(" + den + ")";
}

}  // namespace

std::string to_string(const JetExpr &e) { return jet_string(e, false); }
std::string to_latex(const JetExpr &e) { return jet_string(e, true); }
std::string to_string(const Poly &p) { return poly_string(p, false); }

std::complex<double> evaluate(const Poly &p, const JetValues &at) {
    std::complex<double> sum = 0;
    for (const auto &[mono, coef] : p.terms()) {
        std::complex<double> term = coef.get_d();
        for (int slot = 0; slot < 2 * kMaxJetOrder; ++slot) {
            const int e = mono.e[slot];
            if (e == 0) continue;
            const bool is_u = slot < kMaxJetOrder;
            const auto &jets = is_u ? at.u : at.v;
            const auto order = static_cast<std::size_t>(is_u ? slot : slot - kMaxJetOrder);
            if (order >= jets.size()) throw std::out_of_range("evaluate: jet order not supplied");
            for (int k = 0; k < e; ++k) term *= jets[order];
        }
        sum += term;
    }
    return sum;
}

std::complex<double> evaluate(const JetExpr &e, const JetValues &at) {
    const std::complex<double> u = at.u.at(0), v = at.v.at(0);
    std::complex<double> den = 1;
    for (int k = 0; k < e.du(); ++k) den *= u;
    for (int k = 0; k < e.dv(); ++k) den *= v;
    for (int k = 0; k < e.dc(); ++k) den *= 1.0 - u * v;
    return (evaluate(e.n0(), at) + at.w * evaluate(e.n1(), at)) / den;
}

}  // namespace hfgi
