#include <gtest/gtest.h>

#include "bclab/gauge.hpp"
#include "bclab/rng.hpp"
#include "bclab/xyz.hpp"

using namespace bclab;

namespace {

cplx torus_point(Rng& r, const Torus& t) { return r.uniform(-0.5, 0.5) + r.uniform(-0.5, 0.5) * t.tau(); }

std::array<cplx, 4> random_rho(Rng& r)
{
    std::array<cplx, 4> rt{};
    for (int a = 1; a <= 3; ++a)
        rt[a] = r.box(1.0);
    return rt;
}

ModelParams model(Rng& r, const Torus& t)
{
    ModelParams m;
    m.torus = t;
    m.c = {r.uniform(0.8, 1.6), r.uniform(-0.3, 0.3)};
    m.eta = m.eta_bar = 0.8 * torus_point(r, t);
    for (int a = 0; a < 4; ++a) {
        m.nu[a] = r.box(1.0);
        m.nu_bar[a] = r.box(1.0);
    }
    return m;
}

bool clear(const Torus& t, std::initializer_list<cplx> xs)
{
    for (cplx x : xs)
        if (t.lattice_distance(x) < 0.05)
            return false;
    return true;
}

const Torus torus{cplx{0.12, 0.97}};

// fixed sample for the bracket checks
struct Fixture : ::testing::Test {
    PhaseState s{{0.13, -0.07}, {0.19, 0.11}};
    cplx eta{0.21, 0.17}, c{1.2, 0.1};
    BoundaryParams b{{0.0, {0.3, 0.1}, {-0.2, 0.4}, {0.5, -0.1}}, {0.0, {0.1, -0.3}, {0.4, 0.2}, {-0.3, 0.1}}};
};

} // namespace

TEST(KMatrix, ReflectionEquation)
{
    Rng r(1);
    int accepted = 0;
    while (accepted < 50) {
        const cplx z = torus_point(r, torus), w = torus_point(r, torus);
        const auto rt = random_rho(r);
        if (!clear(torus, {z, w, z + w, z - w}))
            continue;
        try {
            EXPECT_LE(k_reflection_residual(z, w, rt, torus), 1e-10);
            EXPECT_LE(k_reflection_residual_via_gyrostat(z, w, rt, {1.1, 0.2}, torus), 1e-10);
            ++accepted;
        } catch (const ZeroDenominator&) {
        } catch (const NearPole&) {
        }
    }
}

TEST(KMatrix, TrivialBoundaryAndRhoForms)
{
    const cplx z{0.23, 0.19};
    EXPECT_EQ(matrix_residual(k_matrix_tilde(z, {}, torus), Matrix2::identity()), 0.0);
    Rng r(2);
    for (int k = 0; k < 20; ++k) {
        const auto rt = random_rho(r);
        const cplx x = torus_point(r, torus);
        if (!clear(torus, {x}))
            continue;
        const auto rho = rho_from_rho_tilde(rt, torus);
        EXPECT_LE(matrix_residual(k_matrix_tilde(x, rt, torus), k_matrix_rho(x, rho, torus)), 1e-12);
        const auto back = rho_tilde_from_rho(rho, torus);
        for (int a = 1; a <= 3; ++a)
            EXPECT_LE(residual(back[a], rt[a]), 1e-15);
    }
    EXPECT_THROW(k_matrix('x', z, BoundaryParams{}, torus), std::invalid_argument);
}

TEST(Transfer, ClosedFormAndEvenness)
{
    Rng r(3);
    int accepted = 0;
    while (accepted < 50) {
        const ModelParams m = model(r, torus);
        const PhaseState s{r.box(0.6), torus_point(r, torus)};
        const cplx z = torus_point(r, torus);
        const BoundaryParams b{random_rho(r), random_rho(r)};
        if (!clear(torus, {z, m.eta, 2.0 * s.q}))
            continue;
        try {
            const cplx t1 = transfer_matrix(z, s, m.eta, m.c, b, torus);
            EXPECT_LE(residual(t1, transfer_closed_form(z, s, m.eta, m.c, b, torus)), 1e-9);
            EXPECT_LE(residual(t1, transfer_matrix(-z, s, m.eta, m.c, b, torus)), 1e-10);
            ++accepted;
        } catch (const NearPole&) {
        } catch (const ZeroDenominator&) {
        }
    }
}

TEST_F(Fixture, ZeroBoundaryTransfer)
{
    const cplx z{0.27, -0.14};
    const SpinState g = sklyanin_generators(GeneratorStyle::Standard, s, eta, c, torus);
    const Casimirs cs = xyz_casimirs(g, torus);
    const cplx expect = 2.0 * g[0] * g[0] - (cs.c2 - cs.c1 * wp(z, torus));
    EXPECT_LE(residual(transfer_matrix(z, s, eta, c, BoundaryParams{}, torus), expect), 1e-10);
    EXPECT_LE(residual(hamiltonian_xyz(s, eta, c, BoundaryParams{}, torus), g[0] * g[0]), 1e-15);
}

TEST_F(Fixture, TransferMatricesCommute)
{
    const cplx z{0.27, -0.14}, w{-0.11, 0.31};
    const ObservableFn tz = [&](const PhaseState& x) { return transfer_matrix(z, x, eta, c, b, torus); };
    const ObservableFn tw = [&](const PhaseState& x) { return transfer_matrix(w, x, eta, c, b, torus); };
    EXPECT_LE(std::abs(numeric_poisson_bracket(tz, tw, s)), 1e-6);
    const ObservableFn h = [&](const PhaseState& x) { return hamiltonian_xyz(x, eta, c, b, torus); };
    EXPECT_LE(std::abs(numeric_poisson_bracket(tz, h, s)), 1e-6);
}

TEST(VanDiejenMatch, BoundaryHamiltonianAndH1)
{
    Rng r(4);
    int accepted = 0;
    while (accepted < 50) {
        const ModelParams m = model(r, torus);
        const PhaseState s{r.box(0.6), torus_point(r, torus)};
        if (!clear(torus, {m.eta, 2.0 * s.q}))
            continue;
        try {
            EXPECT_LE(vd_match_residual(s, m), 1e-9);
            EXPECT_LE(residual(h1_from_generators(s, m.eta, m.c, m.nu, torus),
                          hamiltonian_vd4_1(s, m.c, m.eta, m.nu, torus)),
                1e-11);
            ++accepted;
        } catch (const NearPole&) {
        } catch (const ZeroCoupling&) {
        }
    }
    Rng q(5);
    ModelParams m = model(q, torus);
    m.eta_bar = m.eta + 0.1;
    EXPECT_THROW(vd_match_residual({0.1, 0.2}, m), std::invalid_argument);
}

TEST(XyzLax, InverseAtReflectedArgument)
{
    Rng r(6);
    for (int k = 0; k < 30; ++k) {
        const ModelParams m = model(r, torus);
        const PhaseState s{r.box(0.6), torus_point(r, torus)};
        const cplx z = torus_point(r, torus);
        if (!clear(torus, {z, m.eta, 2.0 * s.q}))
            continue;
        const Matrix2 l = lax_xyz(z, s, m.eta, m.c, torus);
        EXPECT_LE(matrix_residual(lax_xyz(-z, s, m.eta, m.c, torus).inverse(), l / l.det()), 1e-10);
    }
}

TEST_F(Fixture, StandardGeneratorsFollowQuadraticBrackets)
{
    const GyrostatParams g = sklyanin_params(c, torus);
    const SpinState x = sklyanin_generators(GeneratorStyle::Standard, s, eta, c, torus);
    for (int a = 0; a < 4; ++a)
        for (int b2 = a + 1; b2 < 4; ++b2) {
            const cplx num = numeric_poisson_bracket(
                [&](const PhaseState& y) { return sklyanin_generator(GeneratorStyle::Standard, a, y, eta, c, torus); },
                [&](const PhaseState& y) { return sklyanin_generator(GeneratorStyle::Standard, b2, y, eta, c, torus); }, s);
            EXPECT_LE(residual(num, bracket(Structure::Quadratic, a, b2, x, g)), 1e-6) << a << b2;
        }
}

TEST_F(Fixture, BoldGeneratorBrackets)
{
    const SpinState x = sklyanin_generators(GeneratorStyle::Bold, s, eta, c, torus);
    for (int a = 0; a < 4; ++a)
        for (int b2 = 0; b2 < 4; ++b2) {
            const cplx num = numeric_poisson_bracket(
                [&](const PhaseState& y) { return sklyanin_generator(GeneratorStyle::Bold, a, y, eta, c, torus); },
                [&](const PhaseState& y) { return sklyanin_generator(GeneratorStyle::Bold, b2, y, eta, c, torus); }, s);
            EXPECT_LE(residual(num, bold_bracket(a, b2, x, eta, c, torus)), 1e-6) << a << b2;
        }
}

TEST_F(Fixture, GeneratorCasimirsAreCentral)
{
    auto casimir = [&](int which) {
        return [&, which](const PhaseState& y) {
            const Casimirs cs = xyz_casimirs(sklyanin_generators(GeneratorStyle::Standard, y, eta, c, torus), torus);
            return which == 1 ? cs.c1 : cs.c2;
        };
    };
    for (int which : {1, 2})
        for (int a = 0; a < 4; ++a)
            EXPECT_LE(std::abs(numeric_poisson_bracket(casimir(which),
                          [&](const PhaseState& y) {
                              return sklyanin_generator(GeneratorStyle::Standard, a, y, eta, c, torus);
                          },
                          s)),
                1e-6);
    EXPECT_THROW(sklyanin_generator(GeneratorStyle::Standard, 4, s, eta, c, torus), std::invalid_argument);
    EXPECT_EQ(d_coefficient(0, eta, torus), cplx{1.0});
}
