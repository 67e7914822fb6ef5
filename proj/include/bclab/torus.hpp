#ifndef BCLAB_TORUS_HPP
#define BCLAB_TORUS_HPP

#include <array>
#include <cmath>
#include <cstdlib>

#include "core.hpp"

namespace bclab {

namespace detail {

    inline constexpr int theta_tail_cap = 64;
    inline constexpr double theta_rel_stop = 1e-16;

    // n-th derivative of sin / cos: sin(x + n*pi/2), cos(x + n*pi/2)
    inline cplx dsin(cplx x, int n)
    {
        switch (n & 3) {
        case 0: return std::sin(x);
        case 1: return std::cos(x);
        case 2: return -std::sin(x);
        default: return -std::cos(x);
        }
    }
    inline cplx dcos(cplx x, int n) { return dsin(x, n + 1); }

    // Plain q-series for u already reduced to |Re u| <= 1/2, |Im u| <= Im(tau)/2.
    inline cplx theta_series(int kind, cplx u, int order, cplx tau)
    {
        const double aq = std::exp(-pi * tau.imag()); // |q|
        const double grow = std::exp(pi * std::abs(u.imag()));
        const bool half = (kind == 1 || kind == 2);
        cplx sum = (!half && order == 0) ? cplx{1.0} : cplx{0.0};
        double env_max = (!half && order == 0) ? 1.0 : 0.0;
        const int k0 = half ? 0 : 1;
        for (int k = k0; k < k0 + theta_tail_cap; ++k) {
            const double m = half ? (k + 0.5) : double(k);
            const double freq = 2.0 * m * pi; // (2k+1)pi or 2k*pi
            const double env = std::pow(aq, m * m) * std::pow(grow, 2.0 * m) * std::pow(freq, order);
            if (k > k0 && env < theta_rel_stop * env_max)
                return sum;
            env_max = std::max(env_max, env);
            const cplx qm = std::exp(I * pi * tau * (m * m));
            const double sgn = ((kind == 1 || kind == 4) && (k & 1)) ? -1.0 : 1.0;
            const cplx arg = freq * u;
            const cplx trig = (kind == 1) ? dsin(arg, order) : dcos(arg, order);
            sum += 2.0 * sgn * qm * std::pow(freq, order) * trig;
        }
        throw NonConvergent("theta series did not converge within 64 terms");
    }

    inline double binom(int n, int k)
    {
        double r = 1.0;
        for (int i = 1; i <= k; ++i)
            r = r * (n - k + i) / i;
        return r;
    }

    // theta_kind^(order)(z | tau) with argument reduction into the fundamental cell.
    inline cplx theta_any(int kind, cplx z, int order, cplx tau)
    {
        if (kind < 1 || kind > 4)
            throw std::invalid_argument("theta kind must be 1..4");
        if (order < 0 || order > 5)
            throw std::invalid_argument("theta derivative order out of range");
        const long n = std::lround(z.imag() / tau.imag());
        const cplx u0 = z - double(n) * tau;
        const long s = std::lround(u0.real());
        const cplx u1 = u0 - double(s);
        // shift by integers: theta_1, theta_2 flip sign
        const double sign_s = ((kind == 1 || kind == 2) && (s & 1)) ? -1.0 : 1.0;
        if (n == 0)
            return sign_s * theta_series(kind, u1, order, tau);
        // shift by n*tau: theta(u0 + n tau) = eps^n q^{-n^2} e^{-2 pi i n u0} theta(u0)
        const double eps = ((kind == 1 || kind == 4) && (n & 1)) ? -1.0 : 1.0;
        const double dn = double(n);
        const cplx pref = eps * sign_s * std::exp(-I * pi * tau * (dn * dn) - 2.0 * pi * I * dn * u0);
        const cplx lam = -2.0 * pi * I * dn;
        cplx acc{0.0};
        for (int j = 0; j <= order; ++j)
            acc += binom(order, j) * std::pow(lam, order - j) * theta_series(kind, u1, j, tau);
        return pref * acc;
    }

} // namespace detail

// The elliptic curve C/(Z + tau Z) with cached constants.
class Torus {
public:
    static constexpr double min_imag_tau = 0.05;

    explicit Torus(cplx tau)
        : tau_(tau)
    {
        if (!(tau.imag() >= min_imag_tau))
            throw std::domain_error("Torus requires Im(tau) >= 0.05");
        nome_ = std::exp(I * pi * tau);
        omega_ = {cplx{0.0}, cplx{0.5}, (1.0 + tau) / 2.0, tau / 2.0};
        dtau_omega_ = {0.0, 0.0, 0.5, 0.5};
        th1p0_ = theta(1, 0.0, 1);
        th1ppp0_ = theta(1, 0.0, 3);
        for (int k = 1; k <= 4; ++k)
            th0_[k - 1] = theta(k, 0.0);
        for (int a = 1; a <= 3; ++a) {
            const cplx w = omega_[a];
            const cplx t0 = theta(1, w), t1 = theta(1, w, 1), t2 = theta(1, w, 2);
            const cplx e2 = -(t2 / t0 - (t1 / t0) * (t1 / t0));
            wp_half_[a] = e2 + th1ppp0_ / (3.0 * th1p0_);
        }
        wp_half_[0] = 0.0;
    }

    cplx tau() const { return tau_; }
    cplx nome() const { return nome_; }
    const std::array<cplx, 4>& omega() const { return omega_; }
    const std::array<double, 4>& dtau_omega() const { return dtau_omega_; }
    cplx omega(int a) const { return omega_.at(a); }
    double dtau_omega(int a) const { return dtau_omega_.at(a); }

    cplx theta(int kind, cplx z, int order = 0) const { return detail::theta_any(kind, z, order, tau_); }
    cplx theta_2tau(int kind, cplx z) const { return detail::theta_any(kind, z, 0, 2.0 * tau_); }

    cplx theta1_prime0() const { return th1p0_; }
    cplx theta1_triple0() const { return th1ppp0_; }
    cplx theta_zero(int kind) const { return th0_.at(kind - 1); }
    // wp(omega_k), k = 1..3
    cplx wp_half(int k) const { return wp_half_.at(k); }

    double lattice_distance(cplx z) const
    {
        const double b = z.imag() / tau_.imag();
        const double a = z.real() - b * tau_.real();
        const double a0 = std::round(a), b0 = std::round(b);
        double best = INFINITY;
        for (int i = -1; i <= 1; ++i)
            for (int j = -1; j <= 1; ++j)
                best = std::min(best, std::abs(z - (a0 + i) - (b0 + j) * tau_));
        return best;
    }

    void require_regular(cplx z, const char* what) const
    {
        if (!finite(z) || lattice_distance(z) < pole_tolerance)
            throw NearPole(std::string("argument near lattice point: ") + what);
    }

private:
    cplx tau_;
    cplx nome_;
    std::array<cplx, 4> omega_;
    std::array<double, 4> dtau_omega_;
    cplx th1p0_, th1ppp0_;
    std::array<cplx, 4> th0_{};
    std::array<cplx, 4> wp_half_{};
};

} // namespace bclab

#endif
