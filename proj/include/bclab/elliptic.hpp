#ifndef BCLAB_ELLIPTIC_HPP
#define BCLAB_ELLIPTIC_HPP

#include <array>

#include "torus.hpp"

namespace bclab {

inline cplx theta(int kind, cplx z, const Torus& t) { return t.theta(kind, z); }

inline cplx theta_z_derivative(int kind, cplx z, const Torus& t, int order)
{
    if (order < 0 || order > 3)
        throw std::invalid_argument("order must be 0..3");
    return t.theta(kind, z, order);
}

// theta_kind(z | 2 tau); only kinds 2 and 3 are used by the gauge matrices
inline cplx theta_2tau(int kind, cplx z, const Torus& t)
{
    if (kind != 2 && kind != 3)
        throw std::invalid_argument("theta_2tau supports kinds 2 and 3");
    return t.theta_2tau(kind, z);
}

// phi(z,u) = theta'(0) theta(z+u) / (theta(z) theta(u))
inline cplx kronecker_phi(cplx z, cplx u, const Torus& t)
{
    t.require_regular(z, "phi z");
    t.require_regular(u, "phi u");
    t.require_regular(z + u, "phi z+u");
    return t.theta1_prime0() * t.theta(1, z + u) / (t.theta(1, z) * t.theta(1, u));
}

// E1 = theta'/theta, E2 = -E1'
inline cplx eisenstein(int order, cplx z, const Torus& t)
{
    t.require_regular(z, "eisenstein");
    const cplx t0 = t.theta(1, z), t1 = t.theta(1, z, 1);
    if (order == 1)
        return t1 / t0;
    if (order == 2) {
        const cplx t2 = t.theta(1, z, 2);
        const cplx r = t1 / t0;
        return -(t2 / t0 - r * r);
    }
    throw std::invalid_argument("eisenstein order must be 1 or 2");
}

inline cplx E1(cplx z, const Torus& t) { return eisenstein(1, z, t); }
inline cplx E2(cplx z, const Torus& t) { return eisenstein(2, z, t); }

// f(z,u) = d/du phi(z,u) = phi(z,u) (E1(z+u) - E1(u))
inline cplx kronecker_f(cplx z, cplx u, const Torus& t)
{
    return kronecker_phi(z, u, t) * (E1(z + u, t) - E1(u, t));
}

inline cplx weierstrass_p(cplx z, const Torus& t, bool derivative = false)
{
    t.require_regular(z, "wp");
    const cplx t0 = t.theta(1, z), t1 = t.theta(1, z, 1), t2 = t.theta(1, z, 2);
    const cplx a = t1 / t0, b = t2 / t0;
    if (!derivative)
        return -(b - a * a) + t.theta1_triple0() / (3.0 * t.theta1_prime0());
    const cplx c = t.theta(1, z, 3) / t0;
    // wp' = -E1''
    return -(c - 3.0 * b * a + 2.0 * a * a * a);
}

inline cplx wp(cplx z, const Torus& t) { return weierstrass_p(z, t, false); }
inline cplx wp_prime(cplx z, const Torus& t) { return weierstrass_p(z, t, true); }

// varphi_a(z, x + omega_a) = theta'(0) theta_{a+1}(z+x) / (theta(z) theta_{a+1}(x))
inline cplx varphi(int a, cplx z, cplx x, const Torus& t)
{
    if (a < 0 || a > 3)
        throw std::invalid_argument("varphi index must be 0..3");
    t.require_regular(z, "varphi z");
    t.require_regular(x + t.omega(a), "varphi x+omega");
    return t.theta1_prime0() * t.theta(a + 1, z + x) / (t.theta(1, z) * t.theta(a + 1, x));
}

// single-argument family varphi_alpha(z) = varphi_alpha(z, omega_alpha), alpha = 1..3
inline cplx varphi(int alpha, cplx z, const Torus& t)
{
    if (alpha < 1 || alpha > 3)
        throw std::invalid_argument("single-argument varphi index must be 1..3");
    t.require_regular(z, "varphi z");
    return t.theta1_prime0() * t.theta(alpha + 1, z) / (t.theta(1, z) * t.theta_zero(alpha + 1));
}

// z-derivative of varphi_a(z, x + omega_a), analytic
inline cplx varphi_dz(int a, cplx z, cplx x, const Torus& t)
{
    const cplx v = varphi(a, z, x, t);
    const cplx num = t.theta(a + 1, z + x, 1) / t.theta(a + 1, z + x);
    return v * (num - E1(z, t));
}

// c1, c2, c3 (index 0 unused)
inline std::array<cplx, 4> theta_constants(const Torus& t)
{
    const cplx d = t.theta1_prime0();
    const cplx r2 = t.theta_zero(2) / d, r3 = t.theta_zero(3) / d, r4 = t.theta_zero(4) / d;
    return {cplx{0.0}, -r2 * r2, -I * r3 * r3, -r4 * r4};
}

} // namespace bclab

#endif
