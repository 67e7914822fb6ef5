#include <gtest/gtest.h>

#include "bclab/fd.hpp"
#include "bclab/potential.hpp"
#include "bclab/rng.hpp"

using namespace bclab;

namespace {

cplx torus_point(Rng& r, const Torus& t) { return r.uniform(-0.5, 0.5) + r.uniform(-0.5, 0.5) * t.tau(); }

CouplingSet random_couplings(Rng& r)
{
    CouplingSet c;
    for (auto& x : c.nu)
        x = r.box(1.0);
    return c;
}

} // namespace

TEST(DualTransform, RowSumsFirstColumnInvolution)
{
    const CouplingSet ones{{1.0, 1.0, 1.0, 1.0}};
    const auto d = dual_transform(ones);
    EXPECT_EQ(d.nu, (std::array<cplx, 4>{2.0, 0.0, 0.0, 0.0}));
    const auto e = dual_transform(CouplingSet{{1.0, 0.0, 0.0, 0.0}});
    EXPECT_EQ(e.nu, (std::array<cplx, 4>{0.5, 0.5, 0.5, 0.5}));
    Rng r(1);
    for (int k = 0; k < 10; ++k) {
        const CouplingSet c = random_couplings(r);
        const CouplingSet back = dual_transform(dual_transform(c));
        for (int a = 0; a < 4; ++a)
            EXPECT_LE(residual(back[a], c[a]), 1e-15);
    }
}

TEST(PotentialV, DualityOddnessSingleTerm)
{
    const Torus t(cplx{0.2, 1.1});
    Rng r(2);
    const CouplingSet single{{1.0, 0.0, 0.0, 0.0}};
    for (int k = 0; k < 30; ++k) {
        const CouplingSet nu = random_couplings(r);
        const CouplingSet dual = dual_transform(nu);
        const cplx z = torus_point(r, t), u = torus_point(r, t);
        EXPECT_LE(residual(v(z, u, nu, t), v(u, z, dual, t)), 1e-10);
        EXPECT_LE(residual(v(-z, -u, nu, t), -v(z, u, nu, t)), 1e-11);
        EXPECT_LE(residual(v(z, u, nu, t), -v(-u, -z, dual, t)), 1e-10);
        EXPECT_LE(residual(v(z, u, single, t), kronecker_phi(2.0 * z, u, t)), 1e-15);
        EXPECT_LE(residual(v_dual(u, z, nu, t), v(z, u, nu, t)), 0.0);
    }
}

TEST(PotentialV, DerivativeWronskianAndLimit)
{
    const Torus t(I);
    Rng r(3);
    for (int k = 0; k < 30; ++k) {
        const CouplingSet nu = random_couplings(r);
        const cplx z = torus_point(r, t), u = torus_point(r, t);
        const cplx fd = derivative([&](cplx x) { return v(z, x, nu, t); }, u);
        EXPECT_LE(residual(v_prime(z, u, nu, t), fd), 1e-8);
        cplx rhs{};
        for (int a = 0; a < 4; ++a)
            rhs += nu[a] * nu[a] * wp_prime(u + t.omega(a), t);
        const cplx lhs = v(z, u, nu, t) * v_prime(z, -u, nu, t) - v(z, -u, nu, t) * v_prime(z, u, nu, t);
        EXPECT_LE(residual(lhs, rhs), 1e-10);
    }
    // v'(0+, u): the O(z) term is removed by linear extrapolation
    const CouplingSet nu{{0.3, -0.7, 0.2, 0.9}};
    const cplx u{0.13, 0.27};
    const cplx a = v_prime(1e-4, u, nu, t), b = v_prime(5e-5, u, nu, t);
    EXPECT_LE(residual(2.0 * b - a, v_prime_at_zero(u, nu, t)), 1e-6);
}

// d/dq (v(z,q) v(z,-q)) does not depend on z
TEST(PotentialV, ProductDerivativeIndependentOfZ)
{
    const Torus t(cplx{-0.15, 0.95});
    Rng r(6);
    for (int k = 0; k < 20; ++k) {
        const CouplingSet nu = random_couplings(r);
        const cplx z1 = torus_point(r, t), z2 = torus_point(r, t), q = torus_point(r, t);
        auto dq = [&](cplx z) { return derivative([&](cplx x) { return v(z, x, nu, t) * v(z, -x, nu, t); }, q); };
        EXPECT_LE(residual(dq(z1), dq(z2)), 1e-8);
    }
}
