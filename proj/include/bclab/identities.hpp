#ifndef BCLAB_IDENTITIES_HPP
#define BCLAB_IDENTITIES_HPP

#include <functional>
#include <initializer_list>
#include <optional>
#include <string_view>
#include <vector>

#include "gauge.hpp"
#include "record.hpp"

namespace bclab {

// One tag per appendix identity; see identity_statement() for the equation checked.
enum class IdentityId {
    // elliptic functions
    A03, A031, A04, A06, A10, A11, A12, A13, A14, A141,
    A15, A16, A17, A18, A19, A20,
    A222, A223, A23, A24, A25, A26, A261, A28, A291,
    A30, A31, A32, A33, A34, A36, A361, A37, A38,
    A58, A59, A60, A61,
    W623, W624, W625, W626, W627,
    A62, A621, A63, A64,
    // the potential v
    W211, A50, A51, A52, A54, A55, A551, A56, A57, W370, W378, VBARV, VBARV2,
};

struct IdentityInfo {
    IdentityId id;
    std::string_view tag;
    std::string_view statement;
    bool uses_couplings;
};

inline const std::vector<IdentityInfo>& identity_table()
{
    static const std::vector<IdentityInfo> table = {
        {IdentityId::A03, "A03", "phi(z,u) = phi(u,z)", false},
        {IdentityId::A031, "A031", "phi(-z,-u) = -phi(z,u)", false},
        {IdentityId::A04, "A04", "f(-z,-u) = f(z,u); f = phi (E1(z+u) - E1(u)) = d_u phi from theta derivatives", false},
        {IdentityId::A06, "A06", "E1(-z) = -E1(z), E2(-z) = E2(z)", false},
        {IdentityId::A10, "A10", "phi(z+1,u) = phi(z,u), phi(z+tau,u) = exp(-2 pi i u) phi(z,u)", false},
        {IdentityId::A11, "A11", "phi(z +- 2 w_a, u) = exp(-+ 4 pi i d_tau w_a u) phi(z,u)", false},
        {IdentityId::A12, "A12", "theta(z + 2 w_a) and theta(z + w_a) quasi-periodicity factors", false},
        {IdentityId::A13, "A13", "E2(z + 2 w_a) = E2(z), E1(z + 2 w_a) = E1(z) - 4 pi i d_tau w_a", false},
        {IdentityId::A14, "A14", "E1(w_a) = -2 pi i d_tau w_a, a = 1,2,3", false},
        {IdentityId::A141, "A141", "E1(w_a + w_b) = E1(w_a) + E1(w_b), a != b nonzero", false},
        {IdentityId::A15, "A15", "phi(z1,u1) phi(z2,u2) addition formula", false},
        {IdentityId::A16, "A16", "phi f - f phi addition formula", false},
        {IdentityId::A17, "A17", "phi(z,u1) phi(z,u2) = phi(z,u1+u2)(E1(z)+E1(u1)+E1(u2)-E1(z+u1+u2))", false},
        {IdentityId::A18, "A18", "phi(z,u1) f(z,u2) - phi(z,u2) f(z,u1) = phi(z,u1+u2)(wp(u1)-wp(u2))", false},
        {IdentityId::A19, "A19", "phi(z,u) phi(z,-u) = wp(z) - wp(u)", false},
        {IdentityId::A20, "A20", "phi(z,u) f(z,-u) - phi(z,-u) f(z,u) = wp'(u)", false},
        {IdentityId::A222, "A222", "exp(2 pi i z d_tau w_k) phi(z, x + w_k) = theta-ratio form, k = 0..3", false},
        {IdentityId::A223, "A223", "varphi_k(-z, x + w_k) = -varphi_k(z, -x + w_k)", false},
        {IdentityId::A23, "A23", "varphi_k(2z, u + w_k) = sum_m I_km varphi_m(2u, z + w_m)", false},
        {IdentityId::A24, "A24", "exponential form of I_km equals the sign matrix / 2", false},
        {IdentityId::A25, "A25", "I^2 = 1 on random couplings", false},
        {IdentityId::A26, "A26", "sum_a wp(z + w_a) = 4 wp(2z)", false},
        {IdentityId::A261, "A261", "wp(z + w_a) - wp_a = wp''(w_a) / (2 (wp(z) - wp_a))", false},
        {IdentityId::A28, "A28", "varphi_k(-z) = -varphi_k(z)", false},
        {IdentityId::A291, "A291", "wp_1 + wp_2 + wp_3 = 0", false},
        {IdentityId::A30, "A30", "varphi_k(z)^2 = wp(z) - wp_k", false},
        {IdentityId::A31, "A31", "varphi_a^2 - varphi_b^2 = wp_b - wp_a", false},
        {IdentityId::A32, "A32", "varphi_a' = varphi_a (E1(z+w_a) - E1(z) - E1(w_a)) = -varphi_b varphi_g", false},
        {IdentityId::A33, "A33", "wp'(z) = -2 varphi_1 varphi_2 varphi_3", false},
        {IdentityId::A34, "A34", "wp'^2 = 4 (wp - wp_1)(wp - wp_2)(wp - wp_3)", false},
        {IdentityId::A36, "A36", "theta constants via varphi values and theta(w_k)", false},
        {IdentityId::A361, "A361", "varphi_k(z + w_k) = +-1 / (c_k varphi_k(z))", false},
        {IdentityId::A37, "A37", "sum c^2 = 0, sum c^2 wp = 0, sum c^2 wp^2 = 1, c1^2 wp2 wp3 + ... = 1", false},
        {IdentityId::A38, "A38", "c_a c_b = -i eps_abg c_g / (wp_a - wp_b)", false},
        {IdentityId::A58, "A58", "theta(x+y|2tau) theta(x-y|2tau) product relations", false},
        {IdentityId::A59, "A59", "det Xi(z) = -theta(z) theta(2q)", false},
        {IdentityId::A60, "A60", "Riemann identity for distinct (a,b,g) in {2,3,4}", false},
        {IdentityId::A61, "A61", "theta_a(z-2q) phi(2q,z) - theta_a(z+2q) phi(-2q,z) closed form", false},
        {IdentityId::W623, "W623", "Weierstrass identity with theta_1 and theta_r, r = 1..4", false},
        {IdentityId::W624, "W624", "Weierstrass identity (2,3 | 4)", false},
        {IdentityId::W625, "W625", "Weierstrass identity (2,4 | 3)", false},
        {IdentityId::W626, "W626", "Weierstrass identity (3,4 | 2)", false},
        {IdentityId::W627, "W627", "Weierstrass identity theta_r^4 products, r = 1..4", false},
        {IdentityId::A62, "A62", "three-term phi product identity", false},
        {IdentityId::A621, "A621", "z = w limit of A62 with d_z phi", false},
        {IdentityId::A63, "A63", "varphi_k varphi_j' - varphi_k' varphi_j at 2q", false},
        {IdentityId::A64, "A64", "phi varphi_k' - phi' varphi_k at 2q", false},
        {IdentityId::W211, "W211", "v(z,u|nu) = v(u,z|dual nu)", true},
        {IdentityId::A50, "A50", "v(z,u) v(z,-u) = sum (dual nu_a^2 wp(z+w_a) - nu_a^2 wp(u+w_a))", true},
        {IdentityId::A51, "A51", "v(-z,-u) = -v(z,u)", true},
        {IdentityId::A52, "A52", "v(z,u) v(-z,u) = -v(z,u) v(z,-u)", true},
        {IdentityId::A54, "A54", "v(z,u) v'(z,-u) - v(z,-u) v'(z,u) = sum nu_a^2 wp'(u+w_a)", true},
        {IdentityId::A55, "A55", "-sum nu_a E2(u+w_a) = -sum nu_a wp(u+w_a) + theta'''/(3 theta') sum nu_a", true},
        {IdentityId::A551, "A551", "sum nu_k^2 wp(q+w_k) through dual couplings and varphi(2q)", true},
        {IdentityId::A56, "A56", "summation formula for v and phi", true},
        {IdentityId::A57, "A57", "summation formula for v, v' and v'(0,.)", true},
        {IdentityId::W370, "W370", "v(eta,q) v(eta,-q) through dual couplings and varphi(2q)", true},
        {IdentityId::W378, "W378", "q-derivative of W370: Wronskian of v(eta,.) through varphi(2q)", true},
        {IdentityId::VBARV, "VBARV", "v(z,q) vbar(z,-q) expansion", true},
        {IdentityId::VBARV2, "VBARV2", "v(z,q) vbar(z,-q) + v(z,-q) vbar(z,q) expansion", true},
    };
    return table;
}

inline const IdentityInfo& identity_info(IdentityId id)
{
    for (const auto& x : identity_table())
        if (x.id == id)
            return x;
    throw std::invalid_argument("unknown identity id");
}

inline std::optional<IdentityId> identity_from_tag(std::string_view tag)
{
    for (const auto& x : identity_table())
        if (x.tag == tag)
            return x.id;
    return std::nullopt;
}

inline constexpr double identity_tolerance = 1e-10;
// sampled arguments closer than this to a lattice point are redrawn
inline constexpr double identity_margin = 0.05;

namespace detail {
    inline cplx torus_point(Rng& r, const Torus& t) { return r.uniform(-0.5, 0.5) + r.uniform(-0.5, 0.5) * t.tau(); }

    inline bool clear(const Torus& t, std::initializer_list<cplx> xs)
    {
        for (cplx x : xs)
            if (t.lattice_distance(x) < identity_margin)
                return false;
        return true;
    }

    inline double worst(std::initializer_list<std::pair<cplx, cplx>> pairs)
    {
        double r = 0.0;
        for (const auto& [a, b] : pairs)
            r = std::max(r, residual(a, b));
        return r;
    }

    // wp'' = -E1''' from theta derivatives up to order 4
    inline cplx wp_second(cplx z, const Torus& t)
    {
        const cplx t0 = t.theta(1, z);
        const cplx a = t.theta(1, z, 1) / t0, b = t.theta(1, z, 2) / t0, c = t.theta(1, z, 3) / t0,
                   d = t.theta(1, z, 4) / t0;
        return -(d - 4.0 * a * c - 3.0 * b * b + 12.0 * a * a * b - 6.0 * a * a * a * a);
    }

    // d/dz phi(z,u)
    inline cplx phi_dz(cplx z, cplx u, const Torus& t) { return kronecker_phi(z, u, t) * (E1(z + u, t) - E1(z, t)); }

    // exponential form of varphi_k(z, x + w_k)
    inline cplx varphi_exp(int k, cplx z, cplx x, const Torus& t)
    {
        return std::exp(2.0 * pi * I * z * t.dtau_omega(k)) * kronecker_phi(z, x + t.omega(k), t);
    }

    inline cplx t4(const Torus& t, int r, cplx a, cplx b) { return t.theta(r, a + b) * t.theta(r, a - b); }

    using Check = std::function<std::optional<double>(Rng&)>;

    inline Check elliptic_check(IdentityId id, const Torus& t)
    {
        using R = std::optional<double>;
        auto pt = [&t](Rng& r) { return torus_point(r, t); };
        const auto cc = theta_constants(t);
        switch (id) {
        case IdentityId::A03:
            return [=](Rng& r) -> R {
                const cplx z = pt(r), u = pt(r);
                if (!clear(t, {z, u, z + u}))
                    return {};
                return residual(kronecker_phi(z, u, t), kronecker_phi(u, z, t));
            };
        case IdentityId::A031:
            return [=](Rng& r) -> R {
                const cplx z = pt(r), u = pt(r);
                if (!clear(t, {z, u, z + u}))
                    return {};
                return residual(kronecker_phi(-z, -u, t), -kronecker_phi(z, u, t));
            };
        case IdentityId::A04:
            return [=](Rng& r) -> R {
                const cplx z = pt(r), u = pt(r);
                if (!clear(t, {z, u, z + u}))
                    return {};
                // d_u of theta'(0) theta(z+u) / (theta(z) theta(u)) by the quotient rule
                const cplx num = t.theta(1, z + u), den = t.theta(1, z) * t.theta(1, u);
                const cplx du = t.theta1_prime0()
                    * (t.theta(1, z + u, 1) * den - num * t.theta(1, z) * t.theta(1, u, 1)) / (den * den);
                return worst({{kronecker_f(-z, -u, t), kronecker_f(z, u, t)}, {kronecker_f(z, u, t), du}});
            };
        case IdentityId::A06:
            return [=](Rng& r) -> R {
                const cplx z = pt(r);
                if (!clear(t, {z}))
                    return {};
                return worst({{E1(-z, t), -E1(z, t)}, {E2(-z, t), E2(z, t)}});
            };
        case IdentityId::A10:
            return [=](Rng& r) -> R {
                const cplx z = pt(r), u = pt(r);
                if (!clear(t, {z, u, z + u}))
                    return {};
                const cplx base = kronecker_phi(z, u, t);
                return worst({{kronecker_phi(z + 1.0, u, t), base},
                    {kronecker_phi(z + t.tau(), u, t), std::exp(-2.0 * pi * I * u) * base}});
            };
        case IdentityId::A11:
            return [=](Rng& r) -> R {
                const cplx z = pt(r), u = pt(r);
                if (!clear(t, {z, u, z + u}))
                    return {};
                const cplx base = kronecker_phi(z, u, t);
                double w = 0.0;
                for (int a = 1; a <= 3; ++a) {
                    const cplx k = 4.0 * pi * I * t.dtau_omega(a) * u;
                    w = std::max(w,
                        worst({{kronecker_phi(z + 2.0 * t.omega(a), u, t), std::exp(-k) * base},
                            {kronecker_phi(z - 2.0 * t.omega(a), u, t), std::exp(k) * base}}));
                }
                return w;
            };
        case IdentityId::A12:
            return [=](Rng& r) -> R {
                const cplx z = pt(r);
                double w = 0.0;
                for (int a = 1; a <= 3; ++a) {
                    const cplx om = t.omega(a);
                    const double d = t.dtau_omega(a);
                    w = std::max(w,
                        worst({{t.theta(1, z + 2.0 * om), -std::exp(-4.0 * pi * I * (z + om) * d) * t.theta(1, z)},
                            {t.theta(1, z + om), -std::exp(-4.0 * pi * I * z * d) * t.theta(1, z - om)}}));
                }
                return w;
            };
        case IdentityId::A13:
            return [=](Rng& r) -> R {
                const cplx z = pt(r);
                if (!clear(t, {z}))
                    return {};
                double w = 0.0;
                for (int a = 1; a <= 3; ++a) {
                    const cplx s = z + 2.0 * t.omega(a);
                    w = std::max(w,
                        worst({{E2(s, t), E2(z, t)}, {E1(s, t), E1(z, t) - 4.0 * pi * I * t.dtau_omega(a)}}));
                }
                return w;
            };
        case IdentityId::A14:
            return [=](Rng&) -> R {
                double w = 0.0;
                for (int a = 1; a <= 3; ++a)
                    w = std::max(w, residual(E1(t.omega(a), t), -2.0 * pi * I * t.dtau_omega(a)));
                return w;
            };
        case IdentityId::A141:
            return [=](Rng&) -> R {
                double w = 0.0;
                for (int a = 1; a <= 3; ++a)
                    for (int b = 1; b <= 3; ++b) {
                        if (a == b)
                            continue;
                        const cplx s = t.omega(a) + t.omega(b);
                        w = std::max(w,
                            worst({{E1(s, t), E1(t.omega(a), t) + E1(t.omega(b), t)},
                                {E1(s, t), -2.0 * pi * I * (t.dtau_omega(a) + t.dtau_omega(b))}}));
                    }
                return w;
            };
        case IdentityId::A15:
            return [=](Rng& r) -> R {
                const cplx z1 = pt(r), u1 = pt(r), z2 = pt(r), u2 = pt(r);
                if (!clear(t, {z1, u1, z2, u2, z1 + u1, z2 + u2, u1 + u2, z2 - z1, z1 + u1 + u2, z2 + u1 + u2,
                        z2 - z1 + u2, z1 - z2 + u1}))
                    return {};
                auto P = [&](cplx a, cplx b) { return kronecker_phi(a, b, t); };
                return residual(P(z1, u1) * P(z2, u2),
                    P(z1, u1 + u2) * P(z2 - z1, u2) + P(z2, u1 + u2) * P(z1 - z2, u1));
            };
        case IdentityId::A16:
            return [=](Rng& r) -> R {
                const cplx z1 = pt(r), u1 = pt(r), z2 = pt(r), u2 = pt(r);
                if (!clear(t, {z1, u1, z2, u2, z1 + u1, z2 + u2, u1 + u2, z2 - z1, z1 + u1 + u2, z2 + u1 + u2,
                        z2 - z1 + u2, z1 - z2 + u1}))
                    return {};
                auto P = [&](cplx a, cplx b) { return kronecker_phi(a, b, t); };
                auto F = [&](cplx a, cplx b) { return kronecker_f(a, b, t); };
                return residual(P(z1, u1) * F(z2, u2) - F(z1, u1) * P(z2, u2),
                    P(z1, u1 + u2) * F(z2 - z1, u2) - P(z2, u1 + u2) * F(z1 - z2, u1));
            };
        case IdentityId::A17:
            return [=](Rng& r) -> R {
                const cplx z = pt(r), u1 = pt(r), u2 = pt(r);
                if (!clear(t, {z, u1, u2, z + u1, z + u2, u1 + u2, z + u1 + u2}))
                    return {};
                return residual(kronecker_phi(z, u1, t) * kronecker_phi(z, u2, t),
                    kronecker_phi(z, u1 + u2, t) * (E1(z, t) + E1(u1, t) + E1(u2, t) - E1(z + u1 + u2, t)));
            };
        case IdentityId::A18:
            return [=](Rng& r) -> R {
                const cplx z = pt(r), u1 = pt(r), u2 = pt(r);
                if (!clear(t, {z, u1, u2, z + u1, z + u2, u1 + u2, z + u1 + u2}))
                    return {};
                return residual(
                    kronecker_phi(z, u1, t) * kronecker_f(z, u2, t) - kronecker_phi(z, u2, t) * kronecker_f(z, u1, t),
                    kronecker_phi(z, u1 + u2, t) * (wp(u1, t) - wp(u2, t)));
            };
        case IdentityId::A19:
            return [=](Rng& r) -> R {
                const cplx z = pt(r), u = pt(r);
                if (!clear(t, {z, u, z + u, z - u}))
                    return {};
                return residual(kronecker_phi(z, u, t) * kronecker_phi(z, -u, t), wp(z, t) - wp(u, t));
            };
        case IdentityId::A20:
            return [=](Rng& r) -> R {
                const cplx z = pt(r), u = pt(r);
                if (!clear(t, {z, u, z + u, z - u}))
                    return {};
                return residual(
                    kronecker_phi(z, u, t) * kronecker_f(z, -u, t) - kronecker_phi(z, -u, t) * kronecker_f(z, u, t),
                    wp_prime(u, t));
            };
        case IdentityId::A222:
            return [=](Rng& r) -> R {
                const cplx z = pt(r), x = pt(r);
                double w = 0.0;
                for (int k = 0; k < 4; ++k) {
                    if (!clear(t, {z, x + t.omega(k), z + x + t.omega(k)}))
                        return {};
                    w = std::max(w, residual(varphi_exp(k, z, x, t), varphi(k, z, x, t)));
                }
                return w;
            };
        case IdentityId::A223:
            return [=](Rng& r) -> R {
                const cplx z = pt(r), x = pt(r);
                double w = 0.0;
                for (int k = 0; k < 4; ++k) {
                    if (!clear(t, {z, x + t.omega(k), -x + t.omega(k)}))
                        return {};
                    w = std::max(w, residual(varphi(k, -z, x, t), -varphi(k, z, -x, t)));
                }
                return w;
            };
        case IdentityId::A23:
            return [=](Rng& r) -> R {
                const cplx z = pt(r), u = pt(r);
                double w = 0.0;
                for (int k = 0; k < 4; ++k)
                    if (!clear(t, {2.0 * z, 2.0 * u, u + t.omega(k), z + t.omega(k)}))
                        return {};
                for (int k = 0; k < 4; ++k) {
                    cplx rhs{0.0};
                    for (int m = 0; m < 4; ++m)
                        rhs += 0.5 * double(dual_sign[k][m]) * varphi(m, 2.0 * u, z, t);
                    w = std::max(w, residual(varphi(k, 2.0 * z, u, t), rhs));
                }
                return w;
            };
        case IdentityId::A24:
            return [=](Rng&) -> R {
                double w = 0.0;
                for (int k = 0; k < 4; ++k)
                    for (int m = 0; m < 4; ++m) {
                        const cplx e = 0.5
                            * std::exp(4.0 * pi * I
                                * (t.omega(m) * t.dtau_omega(k) - t.omega(k) * t.dtau_omega(m)));
                        w = std::max(w, residual(e, 0.5 * double(dual_sign[k][m])));
                    }
                return w;
            };
        case IdentityId::A25:
            return [=](Rng& r) -> R {
                CouplingSet nu;
                for (auto& x : nu.nu)
                    x = r.box(1.0);
                const CouplingSet back = dual_transform(dual_transform(nu));
                double w = 0.0;
                for (int a = 0; a < 4; ++a)
                    w = std::max(w, residual(back[a], nu[a]));
                return w;
            };
        case IdentityId::A26:
            return [=](Rng& r) -> R {
                const cplx z = pt(r);
                if (!clear(t, {2.0 * z}))
                    return {};
                cplx s{0.0};
                for (int a = 0; a < 4; ++a)
                    s += wp(z + t.omega(a), t);
                return residual(s, 4.0 * wp(2.0 * z, t));
            };
        case IdentityId::A261:
            return [=](Rng& r) -> R {
                const cplx z = pt(r);
                double w = 0.0;
                for (int a = 1; a <= 3; ++a) {
                    if (!clear(t, {z, z + t.omega(a), z - t.omega(a)}))
                        return {};
                    const cplx wa = t.wp_half(a);
                    w = std::max(w,
                        residual(wp(z + t.omega(a), t) - wa, 0.5 * wp_second(t.omega(a), t) / (wp(z, t) - wa)));
                }
                return w;
            };
        case IdentityId::A28:
            return [=](Rng& r) -> R {
                const cplx z = pt(r);
                if (!clear(t, {z}))
                    return {};
                double w = 0.0;
                for (int k = 1; k <= 3; ++k)
                    w = std::max(w, residual(varphi(k, -z, t), -varphi(k, z, t)));
                return w;
            };
        case IdentityId::A291:
            return [=](Rng&) -> R { return residual(t.wp_half(1) + t.wp_half(2) + t.wp_half(3), 0.0); };
        case IdentityId::A30:
            return [=](Rng& r) -> R {
                const cplx z = pt(r);
                if (!clear(t, {z}))
                    return {};
                double w = 0.0;
                for (int k = 1; k <= 3; ++k) {
                    const cplx f = varphi(k, z, t);
                    w = std::max(w, residual(f * f, wp(z, t) - t.wp_half(k)));
                }
                return w;
            };
        case IdentityId::A31:
            return [=](Rng& r) -> R {
                const cplx z = pt(r);
                if (!clear(t, {z}))
                    return {};
                double w = 0.0;
                for (int a = 1; a <= 3; ++a)
                    for (int b = 1; b <= 3; ++b) {
                        const cplx fa = varphi(a, z, t), fb = varphi(b, z, t);
                        w = std::max(w, residual(fa * fa - fb * fb, t.wp_half(b) - t.wp_half(a)));
                    }
                return w;
            };
        case IdentityId::A32:
            return [=](Rng& r) -> R {
                const cplx z = pt(r);
                double w = 0.0;
                for (int a = 1; a <= 3; ++a) {
                    if (!clear(t, {z, z + t.omega(a)}))
                        return {};
                    const auto [b, g] = cyclic_rest(a);
                    const cplx d = varphi_dz(a, z, 0.0, t);
                    const cplx mid = varphi(a, z, t) * (E1(z + t.omega(a), t) - E1(z, t) - E1(t.omega(a), t));
                    w = std::max(w, worst({{d, mid}, {d, -varphi(b, z, t) * varphi(g, z, t)}}));
                }
                return w;
            };
        case IdentityId::A33:
            return [=](Rng& r) -> R {
                const cplx z = pt(r);
                if (!clear(t, {z}))
                    return {};
                return residual(wp_prime(z, t), -2.0 * varphi(1, z, t) * varphi(2, z, t) * varphi(3, z, t));
            };
        case IdentityId::A34:
            return [=](Rng& r) -> R {
                const cplx z = pt(r);
                if (!clear(t, {z}))
                    return {};
                const cplx d = wp_prime(z, t), x = wp(z, t);
                return residual(d * d, 4.0 * (x - t.wp_half(1)) * (x - t.wp_half(2)) * (x - t.wp_half(3)));
            };
        case IdentityId::A36:
            return [=](Rng&) -> R {
                const auto& om = t.omega();
                auto sq = [&](int k) {
                    const cplx x = t.theta(1, om[k]) / t.theta1_prime0();
                    return x * x;
                };
                return worst({{cc[1], -1.0 / (varphi(2, om[1], t) * varphi(3, om[1], t))},
                    {cc[2], -1.0 / (varphi(1, om[2], t) * varphi(3, om[2], t))},
                    {cc[3], 1.0 / (varphi(1, om[3], t) * varphi(2, om[3], t))}, {cc[1], -sq(1)},
                    {cc[2], -std::exp(pi * I * om[2]) * sq(2)}, {cc[3], std::exp(pi * I * om[3]) * sq(3)}});
            };
        case IdentityId::A361:
            return [=](Rng& r) -> R {
                const cplx z = pt(r);
                double w = 0.0;
                for (int k = 1; k <= 3; ++k) {
                    if (!clear(t, {z, z + t.omega(k)}))
                        return {};
                    const double s = k == 3 ? -1.0 : 1.0;
                    w = std::max(w, residual(varphi(k, z + t.omega(k), t), s / (cc[k] * varphi(k, z, t))));
                }
                return w;
            };
        case IdentityId::A37:
            return [=](Rng&) -> R {
                const cplx w1 = t.wp_half(1), w2 = t.wp_half(2), w3 = t.wp_half(3);
                const cplx a = cc[1] * cc[1], b = cc[2] * cc[2], c = cc[3] * cc[3];
                return worst({{a + b + c, 0.0}, {a * w1 + b * w2 + c * w3, 0.0},
                    {a * w1 * w1 + b * w2 * w2 + c * w3 * w3, 1.0}, {a * w2 * w3 + b * w1 * w3 + c * w1 * w2, 1.0}});
            };
        case IdentityId::A38:
            return [=](Rng&) -> R {
                double w = 0.0;
                for (int a = 1; a <= 3; ++a)
                    for (int b = 1; b <= 3; ++b) {
                        if (a == b)
                            continue;
                        const int g = 6 - a - b;
                        w = std::max(w,
                            residual(cc[a] * cc[b],
                                -I * double(levi(a, b, g)) * cc[g] / (t.wp_half(a) - t.wp_half(b))));
                    }
                return w;
            };
        case IdentityId::A58:
            return [=](Rng& r) -> R {
                const cplx x = pt(r), y = pt(r);
                auto th = [&](int k, cplx z) { return t.theta(k, z); };
                return worst({{t.theta_2tau(2, x + y) * t.theta_2tau(2, x - y),
                                  0.5 * (th(3, x) * th(3, y) - th(4, x) * th(4, y))},
                    {t.theta_2tau(2, x + y) * t.theta_2tau(3, x - y), 0.5 * (th(2, x) * th(2, y) - th(1, x) * th(1, y))},
                    {t.theta_2tau(3, x + y) * t.theta_2tau(3, x - y),
                        0.5 * (th(3, x) * th(3, y) + th(4, x) * th(4, y))}});
            };
        case IdentityId::A59:
            return [=](Rng& r) -> R {
                const cplx z = pt(r), q = pt(r);
                if (!clear(t, {z, 2.0 * q}))
                    return {};
                return residual(xi_matrix(z, q, t).det(), -t.theta(1, z) * t.theta(1, 2.0 * q));
            };
        case IdentityId::A60:
            return [=](Rng& r) -> R {
                const cplx z = pt(r), q = pt(r);
                const cplx q2 = 2.0 * q;
                double w = 0.0;
                for (auto [a, b, g] : {std::array{2, 3, 4}, {2, 4, 3}, {3, 2, 4}, {3, 4, 2}, {4, 2, 3}, {4, 3, 2}}) {
                    auto th = [&](int k, cplx x) { return t.theta(k, x); };
                    w = std::max(w,
                        residual(th(a, z - q2) * th(1, q2 + z) * th(b, 0.0) * th(g, 0.0),
                            th(1, q2) * th(a, q2) * th(b, z) * th(g, z) + th(1, z) * th(a, z) * th(b, q2) * th(g, q2)));
                }
                return w;
            };
        case IdentityId::A61:
            return [=](Rng& r) -> R {
                const cplx z = pt(r), q = pt(r);
                const cplx q2 = 2.0 * q;
                if (!clear(t, {z, q2, z + q2, z - q2}))
                    return {};
                auto th = [&](int k, cplx x) { return t.theta(k, x); };
                double w = 0.0;
                for (auto [a, b, g] : {std::array{2, 3, 4}, {3, 2, 4}, {4, 2, 3}}) {
                    const cplx lhs = th(a, z - q2) * kronecker_phi(q2, z, t) - th(a, z + q2) * kronecker_phi(-q2, z, t);
                    const cplx rhs = 2.0 * t.theta1_prime0() * th(a, z) * th(b, q2) * th(g, q2)
                        / (th(b, 0.0) * th(g, 0.0) * th(1, q2));
                    w = std::max(w, residual(lhs, rhs));
                }
                return w;
            };
        case IdentityId::W623:
        case IdentityId::W624:
        case IdentityId::W625:
        case IdentityId::W626:
        case IdentityId::W627:
            return [=](Rng& r) -> R {
                const cplx u = pt(r), x = pt(r), v = pt(r), y = pt(r);
                auto T = [&](int k, cplx a, cplx b) { return t4(t, k, a, b); };
                double w = 0.0;
                switch (id) {
                case IdentityId::W623:
                    for (int k = 1; k <= 4; ++k)
                        w = std::max(w,
                            residual(T(1, u, x) * T(k, v, y) - T(1, v, x) * T(k, u, y), T(1, u, v) * T(k, x, y)));
                    return w;
                case IdentityId::W624:
                    return residual(T(2, u, x) * T(3, v, y) - T(2, v, x) * T(3, u, y), -T(1, u, v) * T(4, x, y));
                case IdentityId::W625:
                    return residual(T(2, u, x) * T(4, v, y) - T(2, v, x) * T(4, u, y), -T(1, u, v) * T(3, x, y));
                case IdentityId::W626:
                    return residual(T(3, u, x) * T(4, v, y) - T(3, v, x) * T(4, u, y), -T(1, u, v) * T(2, x, y));
                default:
                    for (int k = 1; k <= 4; ++k) {
                        const double s = (k % 2 == 1) ? 1.0 : -1.0;
                        w = std::max(w,
                            residual(T(k, u, x) * T(k, v, y) - T(k, u, y) * T(k, v, x), s * T(1, u, v) * T(1, x, y)));
                    }
                    return w;
                }
            };
        case IdentityId::A62:
            return [=](Rng& r) -> R {
                const cplx z = pt(r), w = pt(r), u1 = pt(r), u2 = pt(r), v = pt(r);
                if (!clear(t, {z, w, z - w, v, u1, u2, u1 - v, u2 + v, u1 - u2 - v, z + u1, w + u2, z - w + v,
                        z + u1 - v, w + u2 + v, z - w + u1 - u2 - v, z + u2 + v, w + u1 - v}))
                    return {};
                auto P = [&](cplx a, cplx b) { return kronecker_phi(a, b, t); };
                return residual(P(z - w, v) * P(z, u1 - v) * P(w, u2 + v) - P(z - w, u1 - u2 - v) * P(z, u2 + v) * P(w, u1 - v),
                    P(z, u1) * P(w, u2) * (E1(v, t) - E1(u1 - u2 - v, t) + E1(u1 - v, t) - E1(u2 + v, t)));
            };
        case IdentityId::A621:
            return [=](Rng& r) -> R {
                const cplx z = pt(r), u1 = pt(r), u2 = pt(r), v = pt(r);
                if (!clear(t, {z, v, u1, u2, u1 - v, u2 + v, u1 - u2 - v, z + u1, z + u2, z + u1 - v, z + u2 + v}))
                    return {};
                auto P = [&](cplx a, cplx b) { return kronecker_phi(a, b, t); };
                auto Pd = [&](cplx a, cplx b) { return phi_dz(a, b, t); };
                const cplx e = E1(v, t) - E1(u1 - u2 - v, t);
                return residual(
                    -P(z, u1 - v) * Pd(z, u2 + v) + P(z, u2 + v) * Pd(z, u1 - v) + P(z, u2 + v) * P(z, u1 - v) * e,
                    P(z, u1) * P(z, u2) * (e + E1(u1 - v, t) - E1(u2 + v, t)));
            };
        case IdentityId::A63:
        case IdentityId::A64:
            return [=](Rng& r) -> R {
                const cplx eta = pt(r), q = pt(r);
                const cplx q2 = 2.0 * q;
                for (int k = 0; k < 4; ++k)
                    if (!clear(t, {q2, eta + t.omega(k), q2 + eta + t.omega(k)}))
                        return {};
                auto V = [&](int k) { return varphi(k, q2, eta, t); };
                auto Vd = [&](int k) { return varphi_dz(k, q2, eta, t); };
                double w = 0.0;
                for (auto [i, j, k] : {std::array{1, 2, 3}, {1, 3, 2}, {2, 1, 3}, {2, 3, 1}, {3, 1, 2}, {3, 2, 1}}) {
                    if (id == IdentityId::A63) {
                        const cplx rhs = V(0) * V(i)
                            * (E1(eta + t.omega(j), t) - E1(eta + t.omega(k), t) + E1(t.omega(k), t)
                                - E1(t.omega(j), t));
                        w = std::max(w, residual(V(k) * Vd(j) - Vd(k) * V(j), rhs));
                    } else {
                        const cplx rhs = V(j) * V(i) * (E1(eta + t.omega(k), t) - E1(eta, t) - E1(t.omega(k), t));
                        w = std::max(w, residual(V(0) * Vd(k) - Vd(0) * V(k), rhs));
                    }
                }
                return w;
            };
        default:
            throw std::invalid_argument("identity needs couplings; use evaluate_v_identity");
        }
    }

    inline Check potential_check(IdentityId id, const CouplingSet& nu, const CouplingSet& nb, const Torus& t)
    {
        using R = std::optional<double>;
        auto pt = [&t](Rng& r) { return torus_point(r, t); };
        const CouplingSet nd = dual_transform(nu);
        // every varphi / phi argument of v(z,u) is 2z and u + w_a
        auto v_clear = [&t](cplx z, cplx u) {
            if (!clear(t, {2.0 * z}))
                return false;
            for (int a = 0; a < 4; ++a)
                if (!clear(t, {u + t.omega(a), 2.0 * z + u + t.omega(a)}))
                    return false;
            return true;
        };
        auto vv = [&t](cplx z, cplx u, const CouplingSet& n) { return v(z, u, n, t); };
        auto vp = [&t](cplx z, cplx u, const CouplingSet& n) { return v_prime(z, u, n, t); };
        // varphi_1..3 at 2q
        auto phis = [&t](cplx q) {
            return std::array<cplx, 4>{
                0.0, varphi(1, 2.0 * q, t), varphi(2, 2.0 * q, t), varphi(3, 2.0 * q, t)};
        };
        switch (id) {
        case IdentityId::W211:
            return [=](Rng& r) -> R {
                const cplx z = pt(r), u = pt(r);
                if (!v_clear(z, u) || !v_clear(u, z))
                    return {};
                return residual(vv(z, u, nu), vv(u, z, nd));
            };
        case IdentityId::A50:
        case IdentityId::A52:
            return [=](Rng& r) -> R {
                const cplx z = pt(r), u = pt(r);
                if (!v_clear(z, u) || !v_clear(z, -u))
                    return {};
                cplx rhs{0.0};
                for (int a = 0; a < 4; ++a)
                    rhs += nd[a] * nd[a] * wp(z + t.omega(a), t) - nu[a] * nu[a] * wp(u + t.omega(a), t);
                const cplx prod = vv(z, u, nu) * vv(z, -u, nu);
                if (id == IdentityId::A50)
                    return residual(prod, rhs);
                return worst({{vv(z, u, nu) * vv(-z, u, nu), -rhs}, {vv(z, u, nu) * vv(-z, u, nu), -prod}});
            };
        case IdentityId::A51:
            return [=](Rng& r) -> R {
                const cplx z = pt(r), u = pt(r);
                if (!v_clear(z, u))
                    return {};
                return residual(vv(-z, -u, nu), -vv(z, u, nu));
            };
        case IdentityId::A54:
            return [=](Rng& r) -> R {
                const cplx z = pt(r), u = pt(r);
                if (!v_clear(z, u) || !v_clear(z, -u))
                    return {};
                cplx rhs{0.0};
                for (int a = 0; a < 4; ++a)
                    rhs += nu[a] * nu[a] * wp_prime(u + t.omega(a), t);
                return residual(vv(z, u, nu) * vp(z, -u, nu) - vv(z, -u, nu) * vp(z, u, nu), rhs);
            };
        case IdentityId::A55:
            return [=](Rng& r) -> R {
                const cplx u = pt(r);
                for (int a = 0; a < 4; ++a)
                    if (!clear(t, {u + t.omega(a)}))
                        return {};
                cplx rhs{0.0}, sum{0.0};
                for (int a = 0; a < 4; ++a) {
                    rhs -= nu[a] * wp(u + t.omega(a), t);
                    sum += nu[a];
                }
                rhs += t.theta1_triple0() / (3.0 * t.theta1_prime0()) * sum;
                return residual(v_prime_at_zero(u, nu, t), rhs);
            };
        case IdentityId::A551:
        case IdentityId::W370:
        case IdentityId::W378:
            return [=](Rng& r) -> R {
                const cplx eta = pt(r), q = pt(r);
                if (!v_clear(eta, q) || !v_clear(eta, -q) || !clear(t, {2.0 * q}))
                    return {};
                for (int a = 0; a < 4; ++a)
                    if (!clear(t, {eta + t.omega(a)}))
                        return {};
                const auto ph = phis(q);
                const cplx mixed = nd[0] * (nd[1] * ph[2] * ph[3] + nd[2] * ph[1] * ph[3] + nd[3] * ph[1] * ph[2])
                    + nd[1] * nd[2] * ph[1] * ph[2] + nd[2] * nd[3] * ph[2] * ph[3] + nd[1] * nd[3] * ph[1] * ph[3];
                const cplx nsq = nd[0] * nd[0] + nd[1] * nd[1] + nd[2] * nd[2] + nd[3] * nd[3];
                if (id == IdentityId::A551) {
                    cplx lhs{0.0};
                    for (int k = 0; k < 4; ++k)
                        lhs += nu[k] * nu[k] * wp(q + t.omega(k), t);
                    return residual(lhs, nsq * wp(2.0 * q, t) + 2.0 * mixed);
                }
                if (id == IdentityId::W370) {
                    cplx rhs = -2.0 * mixed;
                    for (int k = 0; k < 4; ++k)
                        rhs += nd[k] * nd[k] * (wp(eta + t.omega(k), t) - wp(2.0 * q, t));
                    return residual(vv(eta, q, nu) * vv(eta, -q, nu), rhs);
                }
                cplx rhs = nsq * ph[1] * ph[2] * ph[3];
                for (int a = 1; a <= 3; ++a) {
                    const auto [b, g] = cyclic_rest(a);
                    rhs += (nd[0] * nd[a] + nd[b] * nd[g]) * (ph[b] * ph[b] + ph[g] * ph[g]) * ph[a];
                }
                const cplx lhs = -0.25 * (vv(eta, q, nu) * vp(eta, -q, nu) - vp(eta, q, nu) * vv(eta, -q, nu));
                return residual(lhs, rhs);
            };
        case IdentityId::A56:
            return [=](Rng& r) -> R {
                const cplx x = pt(r), y = pt(r), u = pt(r), w = pt(r);
                if (!v_clear(x, u) || !v_clear(x, w) || !v_clear(y, -u) || !v_clear(y, w)
                    || !clear(t, {x + y, x - y, w - u, u + w, x + y + w - u, x - y + u - w, x + y + u + w, x - y + u + w}))
                    return {};
                auto P = [&](cplx a, cplx b) { return kronecker_phi(a, b, t); };
                return residual(vv(x, u, nu) * P(x + y, w - u) + vv(x, w, nu) * P(x - y, u - w)
                        + vv(y, -u, nu) * P(x + y, u + w),
                    vv(y, w, nu) * P(x - y, u + w));
            };
        case IdentityId::A57:
            return [=](Rng& r) -> R {
                const cplx z = pt(r), u = pt(r), w = pt(r);
                if (!v_clear(z, u) || !v_clear(-z, w) || !clear(t, {z, u - w, u + w, z + u - w, z + u + w, -z + u + w}))
                    return {};
                for (int a = 0; a < 4; ++a)
                    if (!clear(t, {u + t.omega(a), w + t.omega(a)}))
                        return {};
                auto P = [&](cplx a, cplx b) { return kronecker_phi(a, b, t); };
                auto F = [&](cplx a, cplx b) { return kronecker_f(a, b, t); };
                const cplx lhs = P(z, u - w) * (v_prime_at_zero(w, nu, t) - v_prime_at_zero(u, nu, t));
                const cplx rhs = 2.0 * vv(-z, w, nu) * F(z, u + w) + 2.0 * vv(z, u, nu) * F(-z, u + w)
                    + vp(-z, w, nu) * P(z, u + w) + vp(z, u, nu) * P(-z, u + w);
                return residual(lhs, rhs);
            };
        case IdentityId::VBARV:
        case IdentityId::VBARV2:
            return [=](Rng& r) -> R {
                const cplx z = pt(r), q = pt(r);
                if (!v_clear(z, q) || !v_clear(z, -q))
                    return {};
                for (int a = 0; a < 4; ++a)
                    for (int b = 0; b < 4; ++b)
                        if (!clear(t, {2.0 * z + t.omega(a) + t.omega(b), t.omega(a) + t.omega(b) + (a == b ? 0.5 : 0.0)}))
                            return {};
                const cplx z2 = 2.0 * z;
                cplx diag{0.0};
                for (int a = 0; a < 4; ++a)
                    diag += nu[a] * nb[a] * (wp(z2, t) - wp(q + t.omega(a), t));
                if (id == IdentityId::VBARV) {
                    cplx off{0.0};
                    for (int a = 0; a < 4; ++a)
                        for (int b = 0; b < 4; ++b) {
                            if (a == b)
                                continue;
                            const cplx s = t.omega(a) + t.omega(b);
                            const double ds = t.dtau_omega(a) + t.dtau_omega(b);
                            const cplx pre = std::exp(2.0 * pi * I * z2 * ds) * kronecker_phi(z2, s, t);
                            off += nu[a] * nb[b] * pre
                                * (E1(z2, t) + E1(q + t.omega(a), t) + E1(-q + t.omega(b), t) - E1(z2 + s, t));
                        }
                    return residual(vv(z, q, nu) * vv(z, -q, nb), diag + off);
                }
                const auto ph = phis(z);
                // pairs (0, g) use the complementary product
                auto pair = [&](int a, int b) {
                    if (a == 0 || b == 0) {
                        const auto [x, y] = cyclic_rest(a + b);
                        return ph[x] * ph[y];
                    }
                    return ph[a] * ph[b];
                };
                cplx off{0.0};
                for (int a = 0; a < 4; ++a)
                    for (int b = 0; b < 4; ++b)
                        if (a != b)
                            off += nu[a] * nb[b] * pair(a, b);
                return residual(vv(z, q, nu) * vv(z, -q, nb) + vv(z, -q, nu) * vv(z, q, nb), 2.0 * diag + 2.0 * off);
            };
        default:
            return elliptic_check(id, t);
        }
    }
} // namespace detail

inline VerificationRecord verify_identity(IdentityId id, int sample_count, std::uint64_t seed, const Torus& t,
    double tol = identity_tolerance)
{
    const auto& info = identity_info(id);
    if (info.uses_couplings)
        throw std::invalid_argument("identity needs couplings; use evaluate_v_identity");
    return run_samples("elliptic_core", std::string(info.tag), sample_count, seed, tol, detail::elliptic_check(id, t));
}

inline VerificationRecord evaluate_v_identity(IdentityId id, int sample_count, std::uint64_t seed,
    const CouplingSet& nu, const CouplingSet& nu_bar, const Torus& t, double tol = identity_tolerance)
{
    const auto& info = identity_info(id);
    if (!info.uses_couplings)
        throw std::invalid_argument("identity does not involve couplings; use verify_identity");
    return run_samples(
        "potential_v", std::string(info.tag), sample_count, seed, tol, detail::potential_check(id, nu, nu_bar, t));
}

} // namespace bclab

#endif
