#include <gtest/gtest.h>

#include "bclab/gauge.hpp"
#include "bclab/rng.hpp"

using namespace bclab;

namespace {

cplx torus_point(Rng& r, const Torus& t) { return r.uniform(-0.5, 0.5) + r.uniform(-0.5, 0.5) * t.tau(); }

ModelParams model(Rng& r, const Torus& t)
{
    ModelParams m;
    m.torus = t;
    m.c = {r.uniform(0.8, 1.6), r.uniform(-0.3, 0.3)};
    m.eta = 0.8 * torus_point(r, t);
    m.eta_bar = 0.8 * torus_point(r, t);
    for (int a = 0; a < 4; ++a) {
        m.nu[a] = r.box(1.0);
        m.nu_bar[a] = r.box(1.0);
    }
    return m;
}

// draws until `check` runs without hitting a pole; returns the worst value
template <class F>
double worst_over(int n, std::uint64_t seed, const Torus& t, F&& check)
{
    Rng r(seed);
    double worst = 0.0;
    for (int accepted = 0, tries = 0; accepted < n && tries < 20 * n; ++tries) {
        const ModelParams m = model(r, t);
        const PhaseState s{r.box(0.6), torus_point(r, t)};
        const cplx z = torus_point(r, t);
        if (t.lattice_distance(2.0 * s.q) < 0.05 || t.lattice_distance(z) < 0.05)
            continue;
        try {
            worst = std::max(worst, check(z, s, m));
            ++accepted;
        } catch (const NearPole&) {
        } catch (const Singular&) {
        }
    }
    return worst;
}

const Torus torus{cplx{0.0, 1.0}};
const Torus skew{cplx{0.3, 0.87}};

} // namespace

TEST(XiMatrix, DeterminantsAndReflection)
{
    Rng r(1);
    for (int k = 0; k < 20; ++k) {
        const cplx z = torus_point(r, skew), q = torus_point(r, skew), eta = torus_point(r, skew);
        EXPECT_LE(residual(xi_matrix(z, q, skew).det(), -skew.theta(1, z) * skew.theta(1, 2.0 * q)), 1e-10);
        EXPECT_LE(residual(xi_matrix(z, q, skew, eta).det(), -skew.theta(1, z + eta) * skew.theta(1, 2.0 * q)), 1e-10);
        // q -> -q exchanges the columns and flips their sign
        const Matrix2 a = xi_matrix(z, q, skew), b = xi_matrix(z, -q, skew);
        const Matrix2 swap{0.0, 1.0, 1.0, 0.0};
        EXPECT_LE(matrix_residual(b, -1.0 * (a * swap)), 1e-15);
    }
    EXPECT_THROW(xi_matrix(0.3, 0.0, skew), Singular);
}

TEST(SpinMap, ZeroComponentAndCasimirs)
{
    EXPECT_LE(worst_over(50, 2, skew, [](cplx, const PhaseState& s, const ModelParams& m) {
        const SpinMap sm = spin_from_phase(s, m.eta, m.nu, m.c, m.torus);
        return residual(sm.spin[0], 0.5 * hamiltonian_vd4_1(s, m.c, m.eta, m.nu, m.torus));
    }), 1e-14);
    EXPECT_LE(worst_over(50, 3, skew, [](cplx, const PhaseState& s, const ModelParams& m) {
        return casimir_map_residual(s, m.eta, m.nu, m.c, m.torus);
    }), 1e-9);
}

TEST(Theorem1, GaugeResidualAndSpectrum)
{
    EXPECT_LE(worst_over(100, 4, torus, [](cplx z, const PhaseState& s, const ModelParams& m) {
        return verify_theorem1(z, s, m);
    }), 1e-10);
    EXPECT_LE(worst_over(100, 5, skew, [](cplx z, const PhaseState& s, const ModelParams& m) {
        const SpectralGap g = gauge_invariance(z, s, m);
        const Matrix2 l = lax_factor(z, s, m.c, m.eta, m.nu, m.torus);
        const Matrix2 c = gauge_conjugate(xi_matrix(z, s.q, m.torus), l);
        return std::max({g.trace, g.det, residual(c.trace(), l.trace())});
    }), 1e-12);
}

TEST(Theorem1, SingleDualCouplingGivesPureSklyanin)
{
    Rng r(6);
    ModelParams m = model(r, torus);
    m.nu.nu = {0.5, 0.5, 0.5, 0.5}; // dual (1, 0, 0, 0)
    const PhaseState s{{0.1, 0.2}, {0.13, 0.21}};
    const SpinMap sm = spin_from_phase(s, m.eta, m.nu, m.c, torus);
    for (int a = 1; a <= 3; ++a)
        EXPECT_EQ(sm.lambda[a], cplx{});
    EXPECT_LE(verify_theorem1({0.2, 0.3}, s, m), 1e-10);
}

TEST(PoissonBracket, CanonicalAntisymmetricCommuting)
{
    const PhaseState s{{0.2, -0.1}, {0.17, 0.12}};
    const ObservableFn p = [](const PhaseState& x) { return x.p; };
    const ObservableFn q = [](const PhaseState& x) { return x.q; };
    EXPECT_LE(residual(numeric_poisson_bracket(p, q, s), 1.0), 1e-10);
    const ObservableFn f = [](const PhaseState& x) { return std::exp(x.p) * std::sin(x.q) + x.q * x.q * x.p; };
    EXPECT_EQ(numeric_poisson_bracket(f, f, s), cplx{});
    Rng r(7);
    const ModelParams m = model(r, torus);
    const ObservableFn h1 = [&](const PhaseState& x) { return hamiltonian(FlowId::VD4_1, x, m); };
    const ObservableFn h2 = [&](const PhaseState& x) { return hamiltonian(FlowId::VD4_2, x, m); };
    EXPECT_LE(std::abs(numeric_poisson_bracket(h1, h2, s)), 1e-7);
}

TEST(Theorem2, BracketTableAndCasimirBrackets)
{
    EXPECT_LE(worst_over(5, 8, skew, [](cplx, const PhaseState& s, const ModelParams& m) {
        const BracketTable b = theorem2_table(s, m.eta, m.nu, m.c, m.torus);
        const SpinMap sm = spin_from_phase(s, m.eta, m.nu, m.c, m.torus);
        const cplx x = m.c * b.numeric[1][2] + I * sm.spin[0] * sm.spin[3];
        // C1 is the constant nu0^2 on the image, so its brackets vanish
        double c1 = 0.0;
        for (int a = 0; a < 4; ++a)
            c1 = std::max(c1, std::abs(numeric_poisson_bracket(
                                  [&](const PhaseState& y) {
                                      return casimirs(spin_from_phase(y, m.eta, m.nu, m.c, m.torus).spin, {}).c1;
                                  },
                                  [&](const PhaseState& y) { return spin_from_phase(y, m.eta, m.nu, m.c, m.torus).spin[a]; },
                                  s)));
        return std::max({b.max_residual, residual(x, 0.0), c1});
    }), 1e-6);
}

TEST(Theorem2, FourthOrderConvergence)
{
    Rng r(9);
    const ModelParams m = model(r, torus);
    const PhaseState s{{0.11, 0.05}, {0.19, 0.16}};
    auto err = [&](double h) {
        const BracketTable b = theorem2_table(s, m.eta, m.nu, m.c, torus, {h, false});
        double e = 0.0;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                e = std::max(e, std::abs(b.numeric[i][j] - b.exact[i][j]));
        return e;
    };
    EXPECT_GE(err(0.05) / err(0.025), 8.0);
}

TEST(CoupledGyrostats, ProductGaugeAndMixedTable)
{
    EXPECT_LE(worst_over(30, 10, skew, [](cplx z, const PhaseState& s, const ModelParams& m) {
        return verify_coupled(z, s, m);
    }), 1e-10);
    Rng r(11);
    ModelParams m = model(r, torus);
    m.eta_bar = m.eta;
    m.nu_bar = m.nu;
    const PhaseState s{{0.1, 0.0}, {0.2, 0.1}};
    const SpinMap a = spin_from_phase(s, m.eta, m.nu, m.c, torus), b = spin_from_phase(s, m.eta_bar, m.nu_bar, m.c, torus);
    EXPECT_EQ(a.spin.s, b.spin.s);
    const auto mixed = mixed_brackets(s, m);
    for (const auto& row : mixed)
        for (cplx x : row)
            EXPECT_TRUE(finite(x));
}

TEST(Inozemtsev, GaugeCasimirLinearBrackets)
{
    Rng r(12);
    for (int k = 0; k < 20; ++k) {
        CouplingSet nu;
        for (auto& x : nu.nu)
            x = r.box(1.0);
        const PhaseState s{r.box(0.6), torus_point(r, skew)};
        const cplx z = torus_point(r, skew);
        if (skew.lattice_distance(2.0 * s.q) < 0.05 || skew.lattice_distance(z) < 0.05)
            continue;
        EXPECT_LE(verify_inozemtsev_gauge(z, s, nu, skew), 1e-10);
        const SpinMap sm = spin_nonrel(s, nu, skew);
        const cplx n0 = dual_transform(nu)[0];
        EXPECT_LE(residual(sm.spin[1] * sm.spin[1] + sm.spin[2] * sm.spin[2] + sm.spin[3] * sm.spin[3], n0 * n0), 1e-10);
        EXPECT_LE(nonrel_bracket_residual(s, nu, skew), 1e-6);
    }
}

TEST(Theorem3, ConjugationClosedForm)
{
    for (Theorem3Side side : {Theorem3Side::L, Theorem3Side::Lbar})
        EXPECT_LE(worst_over(50, 13, skew, [side](cplx z, const PhaseState& s, const ModelParams& m) {
            return verify_theorem3(z, s, m, side);
        }), 1e-10);
    Rng r(14);
    const ModelParams m = model(r, torus);
    const PhaseState s{{0.1, 0.2}, {0.14, 0.18}};
    const cplx z{0.27, 0.11};
    const Matrix2 c = theorem3_closed_form(z, s, m.c, m.eta, m.nu, torus);
    const CouplingSet n = dual_transform(m.nu);
    const SpinState b = sklyanin_generators(GeneratorStyle::Bold, s, m.eta, m.c, torus);
    EXPECT_LE(residual(c.a11 + c.a22, 2.0 * (n[0] * b[0] + n[1] * b[1] + n[2] * b[2] + n[3] * b[3])), 1e-14);
}

TEST(Theorem3, GenericConjugationFormula)
{
    Rng r(15);
    for (int k = 0; k < 30; ++k) {
        const cplx z = torus_point(r, skew), q = torus_point(r, skew), p = r.box(0.6);
        if (skew.lattice_distance(z) < 0.05 || skew.lattice_distance(2.0 * q) < 0.05)
            continue;
        std::array<cplx, 3> ca, cb;
        for (auto& x : ca)
            x = r.box(1.0);
        for (auto& x : cb)
            x = r.box(1.0);
        const SymmetricEntry a = [ca](cplx x, cplx y) { return ca[0] + ca[1] * std::exp(x) + ca[2] * y; };
        const SymmetricEntry b = [cb](cplx x, cplx y) { return cb[0] * x + cb[1] * std::sin(y) + cb[2]; };
        const Matrix2 direct = gauge_conjugate(xi_matrix(z, q, skew), symmetric_form(a, b, q, p));
        EXPECT_LE(matrix_residual(conjugate_symmetric(z, q, p, a, b, skew), direct), 1e-11);
    }
}
