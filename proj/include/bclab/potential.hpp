#ifndef BCLAB_POTENTIAL_HPP
#define BCLAB_POTENTIAL_HPP

#include <array>

#include "elliptic.hpp"

namespace bclab {

struct CouplingSet {
    std::array<cplx, 4> nu{};

    cplx operator[](int a) const { return nu.at(a); }
    cplx& operator[](int a) { return nu.at(a); }
};

// 4x4 sign matrix of the dual transform; H*H = 4
inline constexpr int dual_sign[4][4] = {{1, 1, 1, 1}, {1, 1, -1, -1}, {1, -1, 1, -1}, {1, -1, -1, 1}};

inline CouplingSet dual_transform(const CouplingSet& c)
{
    CouplingSet r;
    for (int k = 0; k < 4; ++k) {
        cplx s{0.0};
        for (int m = 0; m < 4; ++m)
            s += double(dual_sign[k][m]) * c.nu[m];
        r.nu[k] = 0.5 * s;
    }
    return r;
}

namespace detail {
    inline cplx v_exp(cplx z, int a, const Torus& t) { return std::exp(4.0 * pi * I * z * t.dtau_omega(a)); }
}

// v(z,u|nu) = sum_a nu_a exp(4 pi i z d_tau omega_a) phi(2z, u + omega_a)
inline cplx v(cplx z, cplx u, const CouplingSet& nu, const Torus& t)
{
    cplx s{0.0};
    for (int a = 0; a < 4; ++a)
        if (nu.nu[a] != cplx{})
            s += nu.nu[a] * detail::v_exp(z, a, t) * kronecker_phi(2.0 * z, u + t.omega(a), t);
    return s;
}

// d/du v(z,u)
inline cplx v_prime(cplx z, cplx u, const CouplingSet& nu, const Torus& t)
{
    cplx s{0.0};
    for (int a = 0; a < 4; ++a)
        if (nu.nu[a] != cplx{})
            s += nu.nu[a] * detail::v_exp(z, a, t) * kronecker_f(2.0 * z, u + t.omega(a), t);
    return s;
}

// the z -> 0 limit of v'(z,u): -sum_a nu_a E2(u + omega_a)
inline cplx v_prime_at_zero(cplx u, const CouplingSet& nu, const Torus& t)
{
    cplx s{0.0};
    for (int a = 0; a < 4; ++a)
        s -= nu.nu[a] * E2(u + t.omega(a), t);
    return s;
}

// dual function v^(x,y) = v(y,x|nu)
inline cplx v_dual(cplx x, cplx y, const CouplingSet& nu, const Torus& t) { return v(y, x, nu, t); }

} // namespace bclab

#endif
