#ifndef BCLAB_VANDIEJEN_HPP
#define BCLAB_VANDIEJEN_HPP

#include <string>
#include <vector>

#include "fd.hpp"
#include "matrix.hpp"
#include "potential.hpp"

namespace bclab {

struct PhaseState {
    cplx p{}, q{};
};

struct ModelParams {
    cplx c{1.0};
    cplx eta{}, eta_bar{};
    CouplingSet nu, nu_bar;
    Torus torus{I};

    void validate() const
    {
        if (c == cplx{})
            throw std::invalid_argument("relativistic parameter c must be nonzero");
        torus.require_regular(2.0 * eta, "2 eta");
        torus.require_regular(2.0 * eta_bar, "2 eta_bar");
    }

    // the barred copy as an unbarred parameter set
    ModelParams barred() const
    {
        ModelParams b = *this;
        b.eta = eta_bar;
        b.nu = nu_bar;
        return b;
    }
};

enum class FlowId { VD8, VD4_1, VD4_2, INOZ };

inline const char* flow_name(FlowId f)
{
    switch (f) {
    case FlowId::VD8: return "vd8";
    case FlowId::VD4_1: return "vd4-1";
    case FlowId::VD4_2: return "vd4-2";
    case FlowId::INOZ: return "inoz";
    }
    return "?";
}

namespace detail {
    inline cplx wp_sum(const CouplingSet& x, const CouplingSet& y, cplx q, const Torus& t, bool derivative)
    {
        cplx s{0.0};
        for (int a = 0; a < 4; ++a)
            if (x[a] * y[a] != cplx{})
                s += x[a] * y[a] * weierstrass_p(q + t.omega(a), t, derivative);
        return s;
    }
}

// Two-factor product form; A carries (eta, nu), B carries (eta_bar, nu_bar).
inline Matrix2 lax_chalykh(cplx z, const PhaseState& s, const ModelParams& m)
{
    const Torus& t = m.torus;
    const cplx q = s.q;
    const cplx e = std::exp(s.p / m.c);
    const Matrix2 a{v(m.eta, q, m.nu, t), -v(z, q, m.nu, t), -v(z, -q, m.nu, t), v(m.eta, -q, m.nu, t)};
    const Matrix2 b{v(m.eta_bar, q, m.nu_bar, t) * e, -v(z, q, m.nu_bar, t), -v(z, -q, m.nu_bar, t),
        v(m.eta_bar, -q, m.nu_bar, t) / e};
    return a * b;
}

// Single factor of the symmetric form with constants (eta, nu).
inline Matrix2 lax_factor(cplx z, const PhaseState& s, cplx c, cplx eta, const CouplingSet& nu, const Torus& t)
{
    const cplx e = std::exp(s.p / (2.0 * c));
    return {v(eta, s.q, nu, t) * e, v(z, s.q, nu, t), v(z, -s.q, nu, t), v(eta, -s.q, nu, t) / e};
}

struct LaxFactors {
    Matrix2 L, Lbar;
    Matrix2 product() const { return L * Lbar; }
};

inline LaxFactors lax_symmetric(cplx z, const PhaseState& s, const ModelParams& m)
{
    return {lax_factor(z, s, m.c, m.eta, m.nu, m.torus), lax_factor(z, s, m.c, m.eta_bar, m.nu_bar, m.torus)};
}

// diag(e^{p/4c}, -e^{-p/4c}); lax_chalykh = D^{-1} L Lbar D
inline Matrix2 chalykh_gauge(const PhaseState& s, cplx c)
{
    return Matrix2::diag(std::exp(s.p / (4.0 * c)), -std::exp(-s.p / (4.0 * c)));
}

inline cplx hamiltonian_vd4_1(const PhaseState& s, cplx c, cplx eta, const CouplingSet& nu, const Torus& t)
{
    const cplx e = std::exp(s.p / (2.0 * c));
    return v(eta, s.q, nu, t) * e + v(eta, -s.q, nu, t) / e;
}

inline cplx hamiltonian(FlowId flow, const PhaseState& s, const ModelParams& m)
{
    const Torus& t = m.torus;
    const cplx q = s.q;
    switch (flow) {
    case FlowId::VD8: {
        const cplx e = std::exp(s.p / m.c);
        return v(m.eta, q, m.nu, t) * v(m.eta_bar, q, m.nu_bar, t) * e
            + v(m.eta, -q, m.nu, t) * v(m.eta_bar, -q, m.nu_bar, t) / e
            - 2.0 * detail::wp_sum(m.nu, m.nu_bar, q, t, false);
    }
    case FlowId::VD4_1:
        return hamiltonian_vd4_1(s, m.c, m.eta, m.nu, t);
    case FlowId::VD4_2: {
        const cplx e = std::exp(s.p / m.c);
        const cplx a = v(m.eta, q, m.nu, t), b = v(m.eta, -q, m.nu, t);
        return 0.5 * a * a * e + 0.5 * b * b / e - detail::wp_sum(m.nu, m.nu, q, t, false);
    }
    case FlowId::INOZ:
        return 0.5 * s.p * s.p - detail::wp_sum(m.nu, m.nu, q, t, false);
    }
    throw std::invalid_argument("unknown flow");
}

// closed-form dH8/dq
inline cplx dq_hamiltonian_vd8(const PhaseState& s, const ModelParams& m)
{
    const Torus& t = m.torus;
    const cplx q = s.q;
    const cplx e = std::exp(s.p / m.c);
    const cplx a = v(m.eta, q, m.nu, t), ap = v_prime(m.eta, q, m.nu, t);
    const cplx b = v(m.eta_bar, q, m.nu_bar, t), bp = v_prime(m.eta_bar, q, m.nu_bar, t);
    const cplx am = v(m.eta, -q, m.nu, t), amp = v_prime(m.eta, -q, m.nu, t);
    const cplx bm = v(m.eta_bar, -q, m.nu_bar, t), bmp = v_prime(m.eta_bar, -q, m.nu_bar, t);
    return (ap * b + a * bp) * e - (amp * bm + am * bmp) / e - 2.0 * detail::wp_sum(m.nu, m.nu_bar, q, t, true);
}

struct PhaseVelocity {
    cplx q_dot{}, p_dot{};
};

// q' = dH/dp, p' = -dH/dq
inline PhaseVelocity equations_of_motion(FlowId flow, const PhaseState& s, const ModelParams& m)
{
    const Torus& t = m.torus;
    const cplx q = s.q, c = m.c;
    switch (flow) {
    case FlowId::VD8: {
        const cplx e = std::exp(s.p / c);
        const cplx qd = (v(m.eta, q, m.nu, t) * v(m.eta_bar, q, m.nu_bar, t) * e
                            - v(m.eta, -q, m.nu, t) * v(m.eta_bar, -q, m.nu_bar, t) / e)
            / c;
        return {qd, -dq_hamiltonian_vd8(s, m)};
    }
    case FlowId::VD4_1: {
        const cplx e = std::exp(s.p / (2.0 * c));
        const cplx a = v(m.eta, q, m.nu, t), b = v(m.eta, -q, m.nu, t);
        return {(a * e - b / e) / (2.0 * c), -v_prime(m.eta, q, m.nu, t) * e + v_prime(m.eta, -q, m.nu, t) / e};
    }
    case FlowId::VD4_2: {
        const cplx e2 = std::exp(s.p / c);
        const cplx a = v(m.eta, q, m.nu, t), b = v(m.eta, -q, m.nu, t);
        const cplx ap = v_prime(m.eta, q, m.nu, t), bp = v_prime(m.eta, -q, m.nu, t);
        return {(a * a * e2 - b * b / e2) / (2.0 * c),
            -a * ap * e2 + b * bp / e2 + detail::wp_sum(m.nu, m.nu, q, t, true)};
    }
    case FlowId::INOZ:
        return {s.p, detail::wp_sum(m.nu, m.nu, q, t, true)};
    }
    throw std::invalid_argument("unknown flow");
}

inline Matrix2 inozemtsev_lax(cplx z, const PhaseState& s, const CouplingSet& nu, const Torus& t)
{
    return {s.p / 2.0, v(z, s.q, nu, t), v(z, -s.q, nu, t), -s.p / 2.0};
}

// The Lax matrix whose isospectral evolution describes `flow`.
inline Matrix2 lax_matrix(FlowId flow, cplx z, const PhaseState& s, const ModelParams& m)
{
    switch (flow) {
    case FlowId::VD8: return lax_symmetric(z, s, m).product();
    case FlowId::VD4_1:
    case FlowId::VD4_2: return lax_factor(z, s, m.c, m.eta, m.nu, m.torus);
    case FlowId::INOZ: {
        // 1/2 tr L^2 of inozemtsev_lax generates p^2/2 - 2 sum nu^2 wp(q + w_a); the
        // Hamiltonian above uses the couplings rescaled by 1/sqrt 2
        CouplingSet n = m.nu;
        for (auto& x : n.nu)
            x /= std::sqrt(2.0);
        return inozemtsev_lax(z, s, n, m.torus);
    }
    }
    throw std::invalid_argument("unknown flow");
}

inline Matrix2 m_matrix(FlowId flow, cplx z, const PhaseState& s, const ModelParams& m)
{
    const Torus& t = m.torus;
    const cplx q = s.q, c = m.c;
    switch (flow) {
    case FlowId::VD8: {
        const cplx e = std::exp(s.p / (2.0 * c)), e2 = e * e;
        const cplx dh = dq_hamiltonian_vd8(s, m) / 4.0;
        const cplx m11 = -v_prime(m.eta, q, m.nu, t) * v(m.eta_bar, q, m.nu_bar, t) * e2
            + v_prime(z, -q, m.nu_bar, t) * v(z, q, m.nu, t) + dh;
        const cplx m12 = v(m.eta, q, m.nu, t) * v_prime(z, q, m.nu_bar, t) * e
            + v(m.eta_bar, -q, m.nu_bar, t) * v_prime(z, q, m.nu, t) / e;
        const cplx m21 = v(m.eta, -q, m.nu, t) * v_prime(z, -q, m.nu_bar, t) / e
            + v(m.eta_bar, q, m.nu_bar, t) * v_prime(z, -q, m.nu, t) * e;
        const cplx m22 = -v_prime(m.eta, -q, m.nu, t) * v(m.eta_bar, -q, m.nu_bar, t) / e2
            + v_prime(z, q, m.nu_bar, t) * v(z, -q, m.nu, t) - dh;
        return Matrix2{m11, m12, m21, m22} / c;
    }
    case FlowId::VD4_1:
    case FlowId::VD4_2: {
        const Matrix2 m1 = Matrix2{0.0, v_prime(z, q, m.nu, t), v_prime(z, -q, m.nu, t), 0.0} / (2.0 * c);
        if (flow == FlowId::VD4_1)
            return m1;
        return hamiltonian_vd4_1(s, c, m.eta, m.nu, t) * m1;
    }
    case FlowId::INOZ:
        break;
    }
    throw std::invalid_argument("no M-matrix is defined for the Inozemtsev flow");
}

// |dL/dt - (L M - M L)| in the max-entry norm, relative; dL/dt from finite differences along the flow
inline double lax_residual(FlowId flow, cplx z, const PhaseState& s, const ModelParams& m, FdOptions fd = {})
{
    const PhaseVelocity vel = equations_of_motion(flow, s, m);
    const Matrix2 dq = derivative([&](cplx x) { return lax_matrix(flow, z, {s.p, x}, m); }, s.q, fd);
    const Matrix2 dp = derivative([&](cplx x) { return lax_matrix(flow, z, {x, s.q}, m); }, s.p, fd);
    const Matrix2 ldot = vel.q_dot * dq + vel.p_dot * dp;
    const Matrix2 l = lax_matrix(flow, z, s, m);
    const Matrix2 mm = m_matrix(flow, z, s, m);
    return matrix_residual(ldot, commutator(l, mm));
}

struct TrajectoryPoint {
    double t = 0.0;
    PhaseState state;
    cplx energy;
    cplx det_lax;
};

struct Trajectory {
    std::vector<TrajectoryPoint> points;
    bool aborted = false; // pole approach
    std::string message;
};

// Fixed-step RK4 on the holomorphic vector field; the trajectory is cut at the
// first step that comes within the pole tolerance.
inline Trajectory integrate(FlowId flow, const PhaseState& s0, const ModelParams& m, double dt, long steps,
    cplx z_probe = {0.17, 0.23})
{
    Trajectory tr;
    auto sample = [&](double time, const PhaseState& s) {
        return TrajectoryPoint{time, s, hamiltonian(flow, s, m), lax_matrix(flow, z_probe, s, m).det()};
    };
    auto rhs = [&](const PhaseState& s) {
        const PhaseVelocity v = equations_of_motion(flow, s, m);
        return PhaseState{v.p_dot, v.q_dot};
    };
    auto axpy = [](const PhaseState& s, double h, const PhaseState& k) {
        return PhaseState{s.p + h * k.p, s.q + h * k.q};
    };
    PhaseState s = s0;
    try {
        tr.points.push_back(sample(0.0, s));
        for (long i = 0; i < steps; ++i) {
            const PhaseState k1 = rhs(s);
            const PhaseState k2 = rhs(axpy(s, dt / 2, k1));
            const PhaseState k3 = rhs(axpy(s, dt / 2, k2));
            const PhaseState k4 = rhs(axpy(s, dt, k3));
            s.p += dt / 6 * (k1.p + 2.0 * k2.p + 2.0 * k3.p + k4.p);
            s.q += dt / 6 * (k1.q + 2.0 * k2.q + 2.0 * k3.q + k4.q);
            if (!finite(s.p) || !finite(s.q))
                throw NearPole("non-finite state");
            tr.points.push_back(sample(double(i + 1) * dt, s));
        }
    } catch (const NearPole& e) {
        tr.aborted = true;
        tr.message = e.what();
    }
    return tr;
}

// Center-of-mass reduced two-particle matrix. Coincides with lax_factor for
// dual couplings (1,0,0,0) when c_rs = 2c.
inline Matrix2 rs_lax_reduced(cplx z, const PhaseState& s, cplx c_rs, cplx eta, const Torus& t)
{
    const cplx e = std::exp(s.p / c_rs);
    const cplx q2 = 2.0 * s.q;
    return {kronecker_phi(eta, q2, t) * e, kronecker_phi(z, q2, t), kronecker_phi(z, -q2, t),
        kronecker_phi(eta, -q2, t) / e};
}

struct LimitRow {
    double c = 0.0;
    double residual = 0.0;
};

// r(c) = |L(z; p_rs, q | eta = kappa/c) - c 1 - L_inoz(z; p, q)| with kappa = dual(nu)[0]
// and p_rs = p - 2 kappa E1(2q) - 2 sum_k dual(nu)_k varphi_k(2q).
inline std::vector<LimitRow> limit_check(const std::vector<double>& c_values, cplx z, const PhaseState& s,
    const CouplingSet& nu, const Torus& t)
{
    const CouplingSet nd = dual_transform(nu);
    const cplx kappa = nd[0];
    if (kappa == cplx{})
        throw ZeroCoupling("limit protocol needs a nonzero dual coupling nu_0");
    cplx shift = 2.0 * kappa * E1(2.0 * s.q, t);
    for (int k = 1; k <= 3; ++k)
        shift += 2.0 * nd[k] * varphi(k, 2.0 * s.q, t);
    const Matrix2 li = inozemtsev_lax(z, s, nu, t);
    std::vector<LimitRow> rows;
    for (double c : c_values) {
        const PhaseState rs{s.p - shift, s.q};
        const Matrix2 l = lax_factor(z, rs, c, kappa / c, nu, t);
        rows.push_back({c, (l - c * Matrix2::identity() - li).norm()});
    }
    return rows;
}

} // namespace bclab

#endif
