#ifndef BCLAB_GAUGE_HPP
#define BCLAB_GAUGE_HPP

#include <functional>

#include "xyz.hpp"

namespace bclab {

// Gauge matrix of theta functions with modulus 2 tau; eta_shift moves z.
inline Matrix2 xi_matrix(cplx z, cplx q, const Torus& t, cplx eta_shift = 0.0)
{
    const cplx x = z + eta_shift;
    const Matrix2 m{t.theta_2tau(3, x - 2.0 * q), -t.theta_2tau(3, x + 2.0 * q), -t.theta_2tau(2, x - 2.0 * q),
        t.theta_2tau(2, x + 2.0 * q)};
    const double n = m.norm();
    if (std::abs(m.det()) < 1e-10 * n * n)
        throw Singular("gauge matrix is degenerate");
    return m;
}

inline Matrix2 gauge_conjugate(const Matrix2& xi, const Matrix2& a)
{
    const cplx d = xi.det();
    const Matrix2 inv{xi.a22 / d, -xi.a12 / d, -xi.a21 / d, xi.a11 / d};
    return xi * a * inv;
}

struct SpinMap {
    SpinState spin;
    std::array<cplx, 4> lambda{}; // index 0 unused

    GyrostatParams params(cplx c, const Torus& t) const { return {lambda, c, t}; }
};

namespace detail {
    // shared tail of both maps: bracket * varphi_a + nu0 varphi_b varphi_g + varphi_a sum nu_k varphi_k, all at 2q
    inline SpinMap spin_map(cplx bracket_term, cplx s0, cplx q, const CouplingSet& nd, const Torus& t)
    {
        const auto cc = theta_constants(t);
        const std::array<cplx, 4> ph{0.0, varphi(1, 2.0 * q, t), varphi(2, 2.0 * q, t), varphi(3, 2.0 * q, t)};
        const cplx sum = nd[1] * ph[1] + nd[2] * ph[2] + nd[3] * ph[3];
        SpinMap r;
        r.spin[0] = s0;
        for (int a = 1; a <= 3; ++a) {
            const auto [b, g] = cyclic_rest(a);
            r.spin[a] = cc[a] * (bracket_term * ph[a] + nd[0] * ph[b] * ph[g] + ph[a] * sum);
            r.lambda[a] = nd[a] / cc[a];
        }
        return r;
    }
}

inline SpinMap spin_from_phase(const PhaseState& s, cplx eta, const CouplingSet& nu, cplx c, const Torus& t)
{
    const CouplingSet nd = dual_transform(nu);
    const cplx e = std::exp(s.p / (2.0 * c));
    const cplx a = v_dual(s.q, eta, nu, t) * e, b = v_dual(-s.q, eta, nu, t) / e;
    return detail::spin_map(0.5 * (a - b), 0.5 * (a + b), s.q, nd, t);
}

// non-relativistic map; S_0 is absent
inline SpinMap spin_nonrel(const PhaseState& s, const CouplingSet& nu, const Torus& t)
{
    return detail::spin_map(s.p / 2.0, 0.0, s.q, dual_transform(nu), t);
}

// |Xi L Xi^-1 - L_zhv(S(p,q), lambda)|, relative
inline double verify_theorem1(cplx z, const PhaseState& s, const ModelParams& m)
{
    const Matrix2 xi = xi_matrix(z, s.q, m.torus);
    const Matrix2 l = lax_factor(z, s, m.c, m.eta, m.nu, m.torus);
    const SpinMap sm = spin_from_phase(s, m.eta, m.nu, m.c, m.torus);
    return matrix_residual(gauge_conjugate(xi, l), lax_zhv(z, sm.spin, sm.params(m.c, m.torus)));
}

struct SpectralGap {
    double trace = 0.0, det = 0.0;
};

// tr and det of L against tr and det of its gyrostat image
inline SpectralGap gauge_invariance(cplx z, const PhaseState& s, const ModelParams& m)
{
    const Matrix2 l = lax_factor(z, s, m.c, m.eta, m.nu, m.torus);
    const SpinMap sm = spin_from_phase(s, m.eta, m.nu, m.c, m.torus);
    const Matrix2 g = lax_zhv(z, sm.spin, sm.params(m.c, m.torus));
    return {residual(l.trace(), g.trace()), det_residual(l, g)};
}

using ObservableFn = std::function<cplx(const PhaseState&)>;

// {F,G} = dF/dp dG/dq - dF/dq dG/dp
inline cplx numeric_poisson_bracket(const ObservableFn& f, const ObservableFn& g, const PhaseState& s,
    FdOptions fd = {})
{
    auto dp = [&](const ObservableFn& h) { return derivative([&](cplx x) { return h({x, s.q}); }, s.p, fd); };
    auto dq = [&](const ObservableFn& h) { return derivative([&](cplx x) { return h({s.p, x}); }, s.q, fd); };
    return dp(f) * dq(g) - dq(f) * dp(g);
}

struct BracketTable {
    std::array<std::array<cplx, 4>, 4> numeric{}, exact{};
    double max_residual = 0.0;
};

// numeric brackets of the spin map against the quadratic structure
inline BracketTable theorem2_table(const PhaseState& s, cplx eta, const CouplingSet& nu, cplx c, const Torus& t,
    FdOptions fd = {})
{
    const SpinMap sm = spin_from_phase(s, eta, nu, c, t);
    const GyrostatParams g = sm.params(c, t);
    // one partial-derivative pass per generator
    std::array<cplx, 4> dp{}, dq{};
    for (int a = 0; a < 4; ++a) {
        auto comp = [&](const PhaseState& x) { return spin_from_phase(x, eta, nu, c, t).spin[a]; };
        dp[a] = derivative([&](cplx x) { return comp({x, s.q}); }, s.p, fd);
        dq[a] = derivative([&](cplx x) { return comp({s.p, x}); }, s.q, fd);
    }
    BracketTable r;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            r.numeric[a][b] = dp[a] * dq[b] - dq[a] * dp[b];
            r.exact[a][b] = bracket(Structure::Quadratic, a, b, sm.spin, g);
            r.max_residual = std::max(r.max_residual, residual(r.numeric[a][b], r.exact[a][b]));
        }
    return r;
}

// Casimir values on the image of the map: C1 = nu0^2, C2 = sum nu_a^2 wp(eta + w_a) - sum_{a>0} nu_a^2 wp_a
inline double casimir_map_residual(const PhaseState& s, cplx eta, const CouplingSet& nu, cplx c, const Torus& t)
{
    const SpinMap sm = spin_from_phase(s, eta, nu, c, t);
    const Casimirs cas = casimirs(sm.spin, sm.params(c, t));
    const CouplingSet nd = dual_transform(nu);
    cplx c2 = nd[0] * nd[0] * wp(eta, t);
    for (int a = 1; a <= 3; ++a)
        c2 += nd[a] * nd[a] * (wp(eta + t.omega(a), t) - t.wp_half(a));
    return std::max(residual(cas.c1, nd[0] * nd[0]), residual(cas.c2, c2));
}

// |Xi L Lbar Xi^-1 - L_zhv(S) Lbar_zhv(Sbar)|, relative
inline double verify_coupled(cplx z, const PhaseState& s, const ModelParams& m)
{
    const Matrix2 xi = xi_matrix(z, s.q, m.torus);
    const Matrix2 prod = lax_symmetric(z, s, m).product();
    const SpinMap a = spin_from_phase(s, m.eta, m.nu, m.c, m.torus);
    const SpinMap b = spin_from_phase(s, m.eta_bar, m.nu_bar, m.c, m.torus);
    const Matrix2 rhs = lax_zhv(z, a.spin, a.params(m.c, m.torus)) * lax_zhv(z, b.spin, b.params(m.c, m.torus));
    return matrix_residual(gauge_conjugate(xi, prod), rhs);
}

// {S_a, Sbar_b}, numeric only
inline std::array<std::array<cplx, 4>, 4> mixed_brackets(const PhaseState& s, const ModelParams& m, FdOptions fd = {})
{
    std::array<std::array<cplx, 4>, 4> r{};
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            r[a][b] = numeric_poisson_bracket(
                [&](const PhaseState& x) { return spin_from_phase(x, m.eta, m.nu, m.c, m.torus).spin[a]; },
                [&](const PhaseState& x) { return spin_from_phase(x, m.eta_bar, m.nu_bar, m.c, m.torus).spin[b]; },
                s, fd);
    return r;
}

inline double verify_inozemtsev_gauge(cplx z, const PhaseState& s, const CouplingSet& nu, const Torus& t)
{
    const Matrix2 xi = xi_matrix(z, s.q, t);
    const SpinMap sm = spin_nonrel(s, nu, t);
    return matrix_residual(
        gauge_conjugate(xi, inozemtsev_lax(z, s, nu, t)), lax_zhv(z, sm.spin, sm.params(1.0, t), false));
}

// linear-structure brackets of the non-relativistic map, max residual
inline double nonrel_bracket_residual(const PhaseState& s, const CouplingSet& nu, const Torus& t, FdOptions fd = {})
{
    const SpinMap sm = spin_nonrel(s, nu, t);
    const GyrostatParams g = sm.params(1.0, t);
    double worst = 0.0;
    for (int a = 1; a <= 3; ++a)
        for (int b = 1; b <= 3; ++b) {
            const cplx num = numeric_poisson_bracket([&](const PhaseState& x) { return spin_nonrel(x, nu, t).spin[a]; },
                [&](const PhaseState& x) { return spin_nonrel(x, nu, t).spin[b]; }, s, fd);
            worst = std::max(worst, residual(num, bracket(Structure::Linear, a, b, sm.spin, g)));
        }
    return worst;
}

// [[v(eta,q)e, -v(z,q)/e], [-v(z,-q)e, v(eta,-q)/e]], e = exp(p/2c)
inline Matrix2 bold_lax(cplx z, const PhaseState& s, cplx c, cplx eta, const CouplingSet& nu, const Torus& t)
{
    const cplx e = std::exp(s.p / (2.0 * c));
    return {v(eta, s.q, nu, t) * e, -v(z, s.q, nu, t) / e, -v(z, -s.q, nu, t) * e, v(eta, -s.q, nu, t) / e};
}

// the gauge image of bold_lax written through the bold generators
inline Matrix2 theorem3_closed_form(cplx z, const PhaseState& s, cplx c, cplx eta, const CouplingSet& nu,
    const Torus& t)
{
    const CouplingSet n = dual_transform(nu);
    const SpinState b = sklyanin_generators(GeneratorStyle::Bold, s, eta, c, t);
    std::array<cplx, 5> th{};
    for (int k = 1; k <= 4; ++k)
        th[k] = t.theta(k, eta) * t.theta(k, z);
    auto r = [&](int x, int y) { return th[x] / th[y]; };
    const cplx base = n[0] * b[0] + n[1] * b[1] + n[2] * b[2] + n[3] * b[3];
    const cplx x = n[0] * b[1] * r(2, 1) + n[1] * b[0] * r(1, 2) + n[2] * b[3] * r(4, 3) + n[3] * b[2] * r(3, 4);
    const cplx p1 = -n[0] * b[2] * r(3, 1) + n[1] * b[3] * r(4, 2) + n[2] * b[0] * r(1, 3) - n[3] * b[1] * r(2, 4);
    const cplx p2 = -n[0] * b[3] * r(4, 1) + n[1] * b[2] * r(3, 2) + n[2] * b[1] * r(2, 3) - n[3] * b[0] * r(1, 4);
    return {base - x, p1 + p2, -p1 + p2, base + x};
}

enum class Theorem3Side { L, Lbar };

namespace detail {
    inline std::pair<cplx, const CouplingSet*> side_constants(const ModelParams& m, Theorem3Side side)
    {
        return side == Theorem3Side::L ? std::pair{m.eta, &m.nu} : std::pair{m.eta_bar, &m.nu_bar};
    }
}

// max entry residual of Xi_eta L Xi_eta^-1 against the closed form
inline double verify_theorem3(cplx z, const PhaseState& s, const ModelParams& m, Theorem3Side side = Theorem3Side::L)
{
    const auto [eta, nu] = detail::side_constants(m, side);
    const Matrix2 xi = xi_matrix(z, s.q, m.torus, eta);
    const Matrix2 lhs = gauge_conjugate(xi, bold_lax(z, s, m.c, eta, *nu, m.torus));
    const Matrix2 rhs = theorem3_closed_form(z, s, m.c, eta, *nu, m.torus);
    double worst = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            worst = std::max(worst, residual(lhs.at(i, j), rhs.at(i, j)));
    return worst;
}

// the same comparison with the two-sided product Xi L Xi; diagnostic only
inline double theorem3_product_residual(cplx z, const PhaseState& s, const ModelParams& m)
{
    const Matrix2 xi = xi_matrix(z, s.q, m.torus, m.eta);
    return matrix_residual(xi * bold_lax(z, s, m.c, m.eta, m.nu, m.torus) * xi,
        theorem3_closed_form(z, s, m.c, m.eta, m.nu, m.torus));
}

// A = [[a(q,p), b(q,p)], [b(-q,-p), a(-q,-p)]]
using SymmetricEntry = std::function<cplx(cplx q, cplx p)>;

inline Matrix2 symmetric_form(const SymmetricEntry& a, const SymmetricEntry& b, cplx q, cplx p)
{
    return {a(q, p), b(q, p), b(-q, -p), a(-q, -p)};
}

// Xi A Xi^-1 from theta-function closed forms (no matrix inversion)
inline Matrix2 conjugate_symmetric(cplx z, cplx q, cplx p, const SymmetricEntry& a, const SymmetricEntry& b,
    const Torus& t)
{
    auto th = [&](int k, cplx x) { return t.theta(k, x); };
    Matrix2 r;
    for (double sg : {1.0, -1.0}) {
        const cplx qq = sg * q, pp = sg * p;
        const cplx av = a(qq, pp), bv = b(qq, pp);
        const cplx den = 2.0 * th(1, z) * th(1, 2.0 * qq);
        const cplx d = (av * th(2, z) * th(2, 2.0 * qq) + bv * th(2, 0.0) * th(2, z - 2.0 * qq)) / den;
        const cplx t3 = av * th(3, z) * th(3, 2.0 * qq) + bv * th(3, 0.0) * th(3, z - 2.0 * qq);
        const cplx t4 = av * th(4, z) * th(4, 2.0 * qq) + bv * th(4, 0.0) * th(4, z - 2.0 * qq);
        r.a11 += -d + av / 2.0;
        r.a22 += d + av / 2.0;
        r.a12 += -(t3 + t4) / den;
        r.a21 += -(t4 - t3) / den;
    }
    return r;
}

} // namespace bclab

#endif
