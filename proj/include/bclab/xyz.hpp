#ifndef BCLAB_XYZ_HPP
#define BCLAB_XYZ_HPP

#include "gyrostat.hpp"
#include "vandiejen.hpp"

namespace bclab {

enum class GeneratorStyle { Standard, Bold };

// d_0 = 1, d_alpha = -1 / varphi_alpha(eta - omega_alpha)
inline cplx d_coefficient(int a, cplx eta, const Torus& t)
{
    if (a == 0)
        return 1.0;
    return -1.0 / varphi(a, eta - t.omega(a), t);
}

namespace detail {
    // varphi_a(2q, eta + omega_a) e^{p/2c} + varphi_a(-2q, eta + omega_a) e^{-p/2c}
    inline cplx generator_core(int a, const PhaseState& s, cplx eta, cplx c, const Torus& t)
    {
        const cplx e = std::exp(s.p / (2.0 * c));
        return varphi(a, 2.0 * s.q, eta, t) * e + varphi(a, -2.0 * s.q, eta, t) / e;
    }
}

inline cplx sklyanin_generator(GeneratorStyle style, int a, const PhaseState& s, cplx eta, cplx c, const Torus& t)
{
    if (a < 0 || a > 3)
        throw std::invalid_argument("generator index must be 0..3");
    const cplx core = detail::generator_core(a, s, eta, c, t);
    return style == GeneratorStyle::Standard ? d_coefficient(a, eta, t) * core : 0.5 * core;
}

inline SpinState sklyanin_generators(GeneratorStyle style, const PhaseState& s, cplx eta, cplx c, const Torus& t)
{
    SpinState r;
    for (int a = 0; a < 4; ++a)
        r[a] = sklyanin_generator(style, a, s, eta, c, t);
    return r;
}

// I_alpha = E1(eta + omega_alpha) - E1(omega_alpha) - E1(eta)
inline cplx bold_structure_constant(int alpha, cplx eta, const Torus& t)
{
    return E1(eta + t.omega(alpha), t) - E1(t.omega(alpha), t) - E1(eta, t);
}

// brackets of the bold generators
inline cplx bold_bracket(int a, int b, const SpinState& s, cplx eta, cplx c, const Torus& t)
{
    if (a == b)
        return 0.0;
    if (b == 0)
        return -bold_bracket(b, a, s, eta, c, t);
    if (a == 0) {
        const auto [be, ga] = detail::cyclic_rest(b);
        return bold_structure_constant(b, eta, t) * s[be] * s[ga] / c;
    }
    const int g = 6 - a - b;
    const double sign = detail::levi(a, b, g);
    // the table is given for cyclic (a, b, g); anticyclic order flips the sign
    const int x = sign > 0 ? a : b, y = sign > 0 ? b : a;
    const cplx v = -(bold_structure_constant(x, eta, t) - bold_structure_constant(y, eta, t)) * s[0] * s[g] / c;
    return sign > 0 ? v : -v;
}

inline GyrostatParams sklyanin_params(cplx c, const Torus& t) { return GyrostatParams{{}, c, t}; }

inline Matrix2 lax_xyz(cplx z, const PhaseState& s, cplx eta, cplx c, const Torus& t)
{
    return lax_zhv(z, sklyanin_generators(GeneratorStyle::Standard, s, eta, c, t), sklyanin_params(c, t));
}

struct BoundaryParams {
    std::array<cplx, 4> rho_plus{}, rho_minus{}; // tilde form, index 0 unused
};

// rho~_1 = rho_1/c_1, rho~_2 = rho_2/c_2, rho~_3 = -rho_3/c_3
inline std::array<cplx, 4> rho_tilde_from_rho(const std::array<cplx, 4>& rho, const Torus& t)
{
    const auto cc = theta_constants(t);
    return {0.0, rho[1] / cc[1], rho[2] / cc[2], -rho[3] / cc[3]};
}

inline std::array<cplx, 4> rho_from_rho_tilde(const std::array<cplx, 4>& rt, const Torus& t)
{
    const auto cc = theta_constants(t);
    return {0.0, rt[1] * cc[1], rt[2] * cc[2], -rt[3] * cc[3]};
}

// sigma_0 + sum rho~_alpha sigma_{4-alpha} / varphi_alpha(z)
inline Matrix2 k_matrix_tilde(cplx z, const std::array<cplx, 4>& rt, const Torus& t)
{
    Matrix2 k = Matrix2::identity();
    for (int a = 1; a <= 3; ++a) {
        const cplx ph = varphi(a, z, t);
        if (std::abs(ph) < pole_tolerance)
            throw ZeroDenominator("varphi_alpha(z) vanishes");
        k += (rt[a] / ph) * pauli_flip(a);
    }
    return k;
}

// sigma_0 + sum rho_alpha varphi_alpha(z + omega_alpha) sigma_{4-alpha}
inline Matrix2 k_matrix_rho(cplx z, const std::array<cplx, 4>& rho, const Torus& t)
{
    Matrix2 k = Matrix2::identity();
    for (int a = 1; a <= 3; ++a)
        k += (rho[a] * varphi(a, z + t.omega(a), t)) * pauli_flip(a);
    return k;
}

inline Matrix2 k_matrix(char sign, cplx z, const BoundaryParams& b, const Torus& t)
{
    if (sign != '+' && sign != '-')
        throw std::invalid_argument("K-matrix sign must be + or -");
    return k_matrix_tilde(z, sign == '+' ? b.rho_plus : b.rho_minus, t);
}

// [K1 K2, r(z-w)] + K2 r(z+w) K1 - K1 r(z+w) K2
inline double k_reflection_residual(cplx z, cplx w, const std::array<cplx, 4>& rt, const Torus& t)
{
    const Matrix4 k1 = leg1(k_matrix_tilde(z, rt, t)), k2 = leg2(k_matrix_tilde(w, rt, t));
    const Matrix4 rp = r_matrix(z + w, t);
    return (commutator(k1 * k2, r_matrix(z - w, t)) + k2 * rp * k1 - k1 * rp * k2).norm();
}

// the K-matrix as the gyrostat Lax matrix with spin (1,0,0,0) and lambda = -rho~
inline double k_reflection_residual_via_gyrostat(
    cplx z, cplx w, const std::array<cplx, 4>& rt, cplx c, const Torus& t)
{
    GyrostatParams g{{0.0, -rt[1], -rt[2], -rt[3]}, c, t};
    SpinState unit;
    unit[0] = 1.0;
    return reflection_residual(Structure::Quadratic, z, w, unit, g);
}

// 1/2 tr(K+ L K- L)
inline cplx transfer_matrix(cplx z, const PhaseState& s, cplx eta, cplx c, const BoundaryParams& b, const Torus& t)
{
    const Matrix2 l = lax_xyz(z, s, eta, c, t);
    return 0.5 * (k_matrix('+', z, b, t) * l * k_matrix('-', z, b, t) * l).trace();
}

namespace detail {
    inline cplx boundary_dot(const SpinState& s, const std::array<cplx, 4>& rt)
    {
        return s[0] + rt[1] * s[1] + rt[2] * s[2] + rt[3] * s[3];
    }
}

inline Casimirs xyz_casimirs(const SpinState& s, const Torus& t) { return casimirs(s, GyrostatParams{{}, 1.0, t}); }

// 2AB - (1 - sum rho+ rho- / varphi^2)(C2 - C1 wp(z))
inline cplx transfer_closed_form(cplx z, const PhaseState& s, cplx eta, cplx c, const BoundaryParams& b, const Torus& t)
{
    const SpinState g = sklyanin_generators(GeneratorStyle::Standard, s, eta, c, t);
    const Casimirs cas = xyz_casimirs(g, t);
    cplx f = 1.0;
    for (int a = 1; a <= 3; ++a) {
        const cplx ph = varphi(a, z, t);
        f -= b.rho_plus[a] * b.rho_minus[a] / (ph * ph);
    }
    return 2.0 * detail::boundary_dot(g, b.rho_plus) * detail::boundary_dot(g, b.rho_minus)
        - f * (cas.c2 - cas.c1 * wp(z, t));
}

inline cplx hamiltonian_xyz(const PhaseState& s, cplx eta, cplx c, const BoundaryParams& b, const Torus& t)
{
    const SpinState g = sklyanin_generators(GeneratorStyle::Standard, s, eta, c, t);
    return detail::boundary_dot(g, b.rho_plus) * detail::boundary_dot(g, b.rho_minus);
}

// rho~+_alpha = dual(nu)_alpha / (dual(nu)_0 d_alpha), rho~- likewise from nu_bar
inline BoundaryParams boundary_from_couplings(const ModelParams& m)
{
    const CouplingSet nd = dual_transform(m.nu), ndb = dual_transform(m.nu_bar);
    if (std::abs(nd[0]) < pole_tolerance || std::abs(ndb[0]) < pole_tolerance)
        throw ZeroCoupling("dual coupling nu_0 vanishes");
    BoundaryParams b;
    for (int a = 1; a <= 3; ++a) {
        const cplx d = d_coefficient(a, m.eta, m.torus);
        b.rho_plus[a] = nd[a] / (nd[0] * d);
        b.rho_minus[a] = ndb[a] / (ndb[0] * d);
    }
    return b;
}

// residual of (nu0 nubar0 / d0^2) H_xyz = H1 Hbar1; needs eta_bar = eta
inline double vd_match_residual(const PhaseState& s, const ModelParams& m)
{
    if (std::abs(m.eta - m.eta_bar) > 1e-14 * std::max(1.0, std::abs(m.eta)))
        throw std::invalid_argument("the XYZ match requires eta_bar = eta");
    const BoundaryParams b = boundary_from_couplings(m);
    const CouplingSet nd = dual_transform(m.nu), ndb = dual_transform(m.nu_bar);
    const cplx lhs = nd[0] * ndb[0] * hamiltonian_xyz(s, m.eta, m.c, b, m.torus);
    const cplx rhs = hamiltonian_vd4_1(s, m.c, m.eta, m.nu, m.torus)
        * hamiltonian_vd4_1(s, m.c, m.eta_bar, m.nu_bar, m.torus);
    return residual(lhs, rhs);
}

// sum_a (dual(nu)_a / d_a) S_a (standard generators); equals H1 of the 4-constant model
inline cplx h1_from_generators(const PhaseState& s, cplx eta, cplx c, const CouplingSet& nu, const Torus& t)
{
    const CouplingSet nd = dual_transform(nu);
    cplx h{0.0};
    for (int a = 0; a < 4; ++a)
        h += nd[a] / d_coefficient(a, eta, t) * sklyanin_generator(GeneratorStyle::Standard, a, s, eta, c, t);
    return h;
}

} // namespace bclab

#endif
