#ifndef BCLAB_GYROSTAT_HPP
#define BCLAB_GYROSTAT_HPP

#include <array>
#include <string>
#include <vector>

#include "elliptic.hpp"
#include "matrix.hpp"

namespace bclab {

struct SpinState {
    std::array<cplx, 4> s{};

    cplx operator[](int a) const { return s.at(a); }
    cplx& operator[](int a) { return s.at(a); }
};

struct GyrostatParams {
    std::array<cplx, 4> lambda{}; // index 0 unused
    cplx c{1.0};
    Torus torus{I};
};

enum class Structure { Linear, Quadratic };

namespace detail {
    // Levi-Civita on {1,2,3}
    inline int levi(int a, int b, int g)
    {
        if (a == b || b == g || a == g)
            return 0;
        return ((a == 1 && b == 2) || (a == 2 && b == 3) || (a == 3 && b == 1)) ? 1 : -1;
    }
    // (beta, gamma) such that (alpha, beta, gamma) is a cyclic permutation
    inline std::pair<int, int> cyclic_rest(int alpha) { return {alpha % 3 + 1, (alpha + 1) % 3 + 1}; }

    // dL/dS_a: sigma_0 for a = 0, varphi_a(z) sigma_{4-a} otherwise
    inline Matrix2 generator_slot(int a, cplx z, const Torus& t)
    {
        return a == 0 ? Matrix2::identity() : varphi(a, z, t) * pauli_flip(a);
    }
}

inline Matrix2 lax_zhv(cplx z, const SpinState& spin, const GyrostatParams& g, bool include_s0 = true)
{
    const Torus& t = g.torus;
    Matrix2 l = include_s0 ? spin[0] * Matrix2::identity() : Matrix2{};
    for (int a = 1; a <= 3; ++a) {
        const cplx ph = varphi(a, z, t);
        if (std::abs(ph) < pole_tolerance)
            throw ZeroDenominator("varphi_alpha(z) vanishes");
        l += (spin[a] * ph - g.lambda[a] / ph) * pauli_flip(a);
    }
    return l;
}

// r(x) = 1/2 sum_alpha varphi_alpha(x) sigma_{4-alpha} (x) sigma_{4-alpha}
inline Matrix4 r_matrix(cplx x, const Torus& t)
{
    Matrix4 r;
    for (int a = 1; a <= 3; ++a)
        r += (0.5 * varphi(a, x, t)) * kron(pauli_flip(a), pauli_flip(a));
    return r;
}

// {S_a, S_b}. Quadratic values include the 1/c factor.
inline cplx bracket(Structure st, int a, int b, const SpinState& spin, const GyrostatParams& g)
{
    if (a < 0 || a > 3 || b < 0 || b > 3)
        throw std::invalid_argument("generator index must be 0..3");
    if (a == b)
        return 0.0;
    if (st == Structure::Linear) {
        if (a == 0 || b == 0)
            return 0.0;
        const int c = 6 - a - b;
        return -I * double(detail::levi(a, b, c)) * spin[c];
    }
    if (a != 0 && b != 0) {
        const int c = 6 - a - b;
        return -I * double(detail::levi(a, b, c)) * spin[0] * spin[c] / g.c;
    }
    if (b == 0)
        return -bracket(st, b, a, spin, g);
    const auto [be, ga] = detail::cyclic_rest(b);
    const Torus& t = g.torus;
    return (-I * spin[be] * spin[ga] * (t.wp_half(be) - t.wp_half(ga))
               + I * (spin[be] * g.lambda[ga] - g.lambda[be] * spin[ga]))
        / g.c;
}

// {L_1(z), L_2(w)} assembled exactly from the structure constants
inline Matrix4 bracket_matrix(Structure st, cplx z, cplx w, const SpinState& spin, const GyrostatParams& g)
{
    std::array<Matrix2, 4> dz, dw;
    for (int a = 0; a < 4; ++a) {
        dz[a] = detail::generator_slot(a, z, g.torus);
        dw[a] = detail::generator_slot(a, w, g.torus);
    }
    Matrix4 r;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            const cplx x = bracket(st, a, b, spin, g);
            if (x != cplx{})
                r += x * kron(dz[a], dw[b]);
        }
    return r;
}

inline Matrix4 reflection_rhs(Structure st, cplx z, cplx w, const SpinState& spin, const GyrostatParams& g,
    bool include_s0 = true)
{
    const Matrix4 l1 = leg1(lax_zhv(z, spin, g, include_s0));
    const Matrix4 l2 = leg2(lax_zhv(w, spin, g, include_s0));
    const Matrix4 rm = r_matrix(z - w, g.torus), rp = r_matrix(z + w, g.torus);
    if (st == Structure::Linear)
        return 0.5 * commutator(l1 + l2, rm) - 0.5 * commutator(l1 - l2, rp);
    return (1.0 / (2.0 * g.c)) * (commutator(l1 * l2, rm) + l2 * rp * l1 - l1 * rp * l2);
}

inline double reflection_residual(Structure st, cplx z, cplx w, const SpinState& spin, const GyrostatParams& g,
    bool include_s0 = true)
{
    return (bracket_matrix(st, z, w, spin, g) - reflection_rhs(st, z, w, spin, g, include_s0)).norm();
}

struct Casimirs {
    cplx c1, c2;
};

inline Casimirs casimirs(const SpinState& spin, const GyrostatParams& g)
{
    Casimirs r{0.0, spin[0] * spin[0]};
    for (int k = 1; k <= 3; ++k) {
        r.c1 += spin[k] * spin[k];
        r.c2 += spin[k] * spin[k] * g.torus.wp_half(k) + 2.0 * spin[k] * g.lambda[k];
    }
    return r;
}

inline cplx hamiltonian_zhv(const SpinState& spin, const GyrostatParams& g)
{
    cplx h{0.0};
    for (int a = 1; a <= 3; ++a)
        h -= 0.5 * spin[a] * spin[a] * g.torus.wp_half(a) + spin[a] * g.lambda[a];
    return h;
}

// S' = [S, wp(S)] + [S, lambda] with S = sum S_alpha sigma_{4-alpha}; S_0 is constant.
inline SpinState gyrostat_eom(const SpinState& spin, const GyrostatParams& g)
{
    Matrix2 s, w, l;
    for (int a = 1; a <= 3; ++a) {
        s += spin[a] * pauli_flip(a);
        w += (spin[a] * g.torus.wp_half(a)) * pauli_flip(a);
        l += g.lambda[a] * pauli_flip(a);
    }
    const Matrix2 d = commutator(s, w) + commutator(s, l);
    SpinState r;
    for (int a = 1; a <= 3; ++a)
        r[a] = flip_component(d, a);
    return r;
}

// Twice the matrix printed next to the equations of motion, so that L' = L M - M L.
inline Matrix2 m_zhv(cplx z, const SpinState& spin, const Torus& t)
{
    const cplx p1 = varphi(1, z, t), p2 = varphi(2, z, t), p3 = varphi(3, z, t);
    const std::array<cplx, 4> ph{1.0, p1, p2, p3};
    Matrix2 m;
    for (int a = 1; a <= 3; ++a)
        m += (spin[a] * p1 * p2 * p3 / ph[a]) * pauli_flip(a);
    return m;
}

// |L' - (L M - M L)|, relative, with L' = sum_a S'_a dL/dS_a (exact, L is linear in S)
inline double gyrostat_lax_residual(cplx z, const SpinState& spin, const GyrostatParams& g)
{
    const SpinState sd = gyrostat_eom(spin, g);
    Matrix2 ldot;
    for (int a = 1; a <= 3; ++a)
        ldot += (sd[a] * varphi(a, z, g.torus)) * pauli_flip(a);
    const Matrix2 l = lax_zhv(z, spin, g);
    return matrix_residual(ldot, commutator(l, m_zhv(z, spin, g.torus)));
}

struct GyroPoint {
    double t = 0.0;
    SpinState spin;
    Casimirs cas;
    cplx energy;
    cplx det_lax;
};

struct GyroTrajectory {
    std::vector<GyroPoint> points;
    bool aborted = false;
    std::string message;
};

inline GyroTrajectory integrate_gyrostat(const SpinState& s0, const GyrostatParams& g, double dt, long steps,
    cplx z_probe = {0.17, 0.23})
{
    GyroTrajectory tr;
    auto sample = [&](double time, const SpinState& s) {
        return GyroPoint{time, s, casimirs(s, g), hamiltonian_zhv(s, g), lax_zhv(z_probe, s, g).det()};
    };
    auto axpy = [](const SpinState& s, double h, const SpinState& k) {
        SpinState r = s;
        for (int a = 1; a <= 3; ++a)
            r[a] += h * k[a];
        return r;
    };
    SpinState s = s0;
    tr.points.push_back(sample(0.0, s));
    for (long i = 0; i < steps; ++i) {
        const SpinState k1 = gyrostat_eom(s, g);
        const SpinState k2 = gyrostat_eom(axpy(s, dt / 2, k1), g);
        const SpinState k3 = gyrostat_eom(axpy(s, dt / 2, k2), g);
        const SpinState k4 = gyrostat_eom(axpy(s, dt, k3), g);
        for (int a = 1; a <= 3; ++a)
            s[a] += dt / 6 * (k1[a] + 2.0 * k2[a] + 2.0 * k3[a] + k4[a]);
        if (!finite(s[1]) || !finite(s[2]) || !finite(s[3])) {
            tr.aborted = true;
            tr.message = "non-finite spin";
            break;
        }
        tr.points.push_back(sample(double(i + 1) * dt, s));
    }
    return tr;
}

} // namespace bclab

#endif
