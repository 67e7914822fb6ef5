#ifndef BCLAB_SUITES_HPP
#define BCLAB_SUITES_HPP

#include <chrono>
#include <cstdio>

#include "config.hpp"
#include "identities.hpp"

namespace bclab {

// built-in tolerances, keyed like RunConfig::tolerances
namespace tolerance {
    inline constexpr double identity = 1e-10;
    inline constexpr double exact = 1e-12;
    inline constexpr double lax = 1e-7;
    inline constexpr double eom = 1e-8;
    inline constexpr double theorem = 1e-10;
    inline constexpr double bracket = 1e-6;
    inline constexpr double casimir = 1e-9;
    inline constexpr double conjugation = 1e-11;
    inline constexpr double xyz = 1e-9;
    inline constexpr double conservation = 1e-8;
    inline constexpr double limit = 0.1; // |r(2c)/r(c) - 1/2|
    inline constexpr double commuting = 1e-7;
}

using RecordList = std::vector<VerificationRecord>;

namespace detail {
    inline constexpr double sample_margin = 0.05;

    inline ModelParams random_model(Rng& r, const Torus& t, bool eta_equal)
    {
        ModelParams m;
        m.torus = t;
        m.c = {r.uniform(0.8, 1.6), r.uniform(-0.3, 0.3)};
        m.eta = 0.8 * torus_point(r, t);
        m.eta_bar = eta_equal ? m.eta : 0.8 * torus_point(r, t);
        for (auto& x : m.nu.nu)
            x = r.box(1.0);
        for (auto& x : m.nu_bar.nu)
            x = r.box(1.0);
        return m;
    }

    inline PhaseState random_state(Rng& r, const Torus& t) { return {r.box(0.6), torus_point(r, t)}; }

    inline SpinState random_spin(Rng& r)
    {
        SpinState s;
        for (auto& x : s.s)
            x = r.box(1.0);
        return s;
    }

    // every elliptic argument that enters the Lax, M and gauge matrices stays off the lattice
    inline bool model_clear(const Torus& t, cplx z, const PhaseState& s, const ModelParams& m,
        double margin = sample_margin)
    {
        std::vector<cplx> xs{z, 2.0 * z, 2.0 * s.q, 2.0 * m.eta, 2.0 * m.eta_bar, z + m.eta, z + m.eta_bar};
        for (int a = 0; a < 4; ++a) {
            const cplx w = t.omega(a);
            xs.insert(xs.end(), {z + w, 2.0 * s.q + w, m.eta + w, m.eta_bar + w, m.eta - w});
            for (cplx x : {s.q, -s.q})
                xs.insert(xs.end(), {x + w, 2.0 * z + x + w, 2.0 * m.eta + x + w, 2.0 * m.eta_bar + x + w});
        }
        for (cplx x : xs)
            if (t.lattice_distance(x) < margin)
                return false;
        return true;
    }

    inline bool spectral_clear(const Torus& t, std::initializer_list<cplx> zs)
    {
        for (cplx z : zs) {
            if (t.lattice_distance(z) < sample_margin)
                return false;
            for (int a = 1; a <= 3; ++a)
                if (t.lattice_distance(z + t.omega(a)) < sample_margin)
                    return false;
        }
        return true;
    }

    struct Sample {
        cplx z;
        PhaseState s;
        ModelParams m;
    };

    inline std::optional<Sample> draw_sample(Rng& r, const Torus& t, bool eta_equal = false)
    {
        Sample x{torus_point(r, t), random_state(r, t), random_model(r, t, eta_equal)};
        if (!model_clear(t, x.z, x.s, x.m))
            return std::nullopt;
        return x;
    }

    inline std::string fmt(const char* f, double x)
    {
        char buf[64];
        std::snprintf(buf, sizeof buf, f, x);
        return buf;
    }

    // {C, S_a} for a function C of the spin, by Leibniz over the structure constants
    template <class Grad>
    cplx leibniz(Grad&& grad, int a, Structure st, const SpinState& s, const GyrostatParams& g)
    {
        cplx r{0.0};
        for (int k = 0; k < 4; ++k)
            r += grad(k) * bracket(st, k, a, s, g);
        return r;
    }

    // d/dS_k of a quadratic polynomial; a central difference is exact up to rounding
    template <class F>
    cplx spin_partial(F&& f, const SpinState& s, int k)
    {
        constexpr double h = 1e-2;
        SpinState a = s, b = s;
        a[k] += h;
        b[k] -= h;
        return (f(a) - f(b)) / (2.0 * h);
    }

    inline double drift(cplx x, cplx x0) { return residual(x, x0); }
}

class SuiteRunner {
public:
    explicit SuiteRunner(RunConfig cfg) : cfg_(std::move(cfg)), torus_(cfg_.tau), digest_(params_digest(cfg_)) {}

    const RunConfig& config() const { return cfg_; }

    RecordList elliptic() const
    {
        RecordList out;
        for (const auto& info : identity_table())
            if (!info.uses_couplings)
                out.push_back(stamp(verify_identity(
                    info.id, cfg_.samples.identity, cfg_.seed, torus_, tol("identity", tolerance::identity))));
        return out;
    }

    RecordList potential() const
    {
        Rng r(cfg_.seed, 0xC0u);
        CouplingSet nu, nb;
        for (auto& x : nu.nu)
            x = r.box(1.0);
        for (auto& x : nb.nu)
            x = r.box(1.0);
        RecordList out;
        for (const auto& info : identity_table())
            if (info.uses_couplings)
                out.push_back(stamp(evaluate_v_identity(
                    info.id, cfg_.samples.identity, cfg_.seed, nu, nb, torus_, tol("identity", tolerance::identity))));
        return out;
    }

    RecordList vandiejen() const
    {
        RecordList out;
        const Torus& t = torus_;
        for (FlowId f : {FlowId::VD8, FlowId::VD4_1, FlowId::VD4_2}) {
            out.push_back(sampled("vandiejen", std::string("lax/") + flow_name(f), cfg_.samples.lax,
                tol("lax", tolerance::lax), [&, f](Rng& r) -> std::optional<double> {
                    auto x = detail::draw_sample(r, t);
                    if (!x)
                        return {};
                    return lax_residual(f, x->z, x->s, x->m);
                }));
        }
        for (FlowId f : {FlowId::VD8, FlowId::VD4_1, FlowId::VD4_2, FlowId::INOZ}) {
            out.push_back(sampled("vandiejen", std::string("eom/") + flow_name(f), cfg_.samples.lax,
                tol("eom", tolerance::eom), [&, f](Rng& r) -> std::optional<double> {
                    auto x = detail::draw_sample(r, t);
                    if (!x)
                        return {};
                    const ModelParams& m = x->m;
                    const PhaseState s = x->s;
                    const PhaseVelocity v = equations_of_motion(f, s, m);
                    const cplx dp = derivative([&](cplx y) { return hamiltonian(f, {y, s.q}, m); }, s.p);
                    const cplx dq = derivative([&](cplx y) { return hamiltonian(f, {s.p, y}, m); }, s.q);
                    return std::max(residual(v.q_dot, dp), residual(v.p_dot, -dq));
                }));
        }
        out.push_back(sampled("vandiejen", "chalykh_factorization", cfg_.samples.lax, tol("exact", tolerance::exact),
            [&](Rng& r) -> std::optional<double> {
                auto x = detail::draw_sample(r, t);
                if (!x)
                    return {};
                const Matrix2 d = chalykh_gauge(x->s, x->m.c);
                return matrix_residual(lax_chalykh(x->z, x->s, x->m),
                    d.inverse() * lax_symmetric(x->z, x->s, x->m).product() * d);
            }));
        // state independence: the same quantity at two states with shared (z, params)
        auto two_states = [&](const char* tag, bool eta_equal, auto&& quantity) {
            out.push_back(sampled("vandiejen", tag, cfg_.samples.lax, tol("xyz", tolerance::xyz),
                [&, eta_equal](Rng& r) -> std::optional<double> {
                    auto x = detail::draw_sample(r, t, eta_equal);
                    const PhaseState s2 = detail::random_state(r, t);
                    if (!x || !detail::model_clear(t, x->z, s2, x->m))
                        return {};
                    return residual(quantity(x->z, x->s, x->m), quantity(x->z, s2, x->m));
                }));
        };
        two_states("trace_minus_h8", false, [](cplx z, const PhaseState& s, const ModelParams& m) {
            return lax_chalykh(z, s, m).trace() - hamiltonian(FlowId::VD8, s, m);
        });
        two_states("h1_h1bar_minus_h8", true, [](cplx, const PhaseState& s, const ModelParams& m) {
            return hamiltonian_vd4_1(s, m.c, m.eta, m.nu, m.torus) * hamiltonian_vd4_1(s, m.c, m.eta_bar, m.nu_bar, m.torus)
                - hamiltonian(FlowId::VD8, s, m);
        });
        two_states("half_trace_l2_minus_h2", false, [](cplx z, const PhaseState& s, const ModelParams& m) {
            const Matrix2 l = lax_factor(z, s, m.c, m.eta, m.nu, m.torus);
            return 0.5 * (l * l).trace() - hamiltonian(FlowId::VD4_2, s, m);
        });
        out.push_back(sampled("vandiejen", "det_lax_factor", cfg_.samples.lax, tol("identity", tolerance::identity),
            [&](Rng& r) -> std::optional<double> {
                auto x = detail::draw_sample(r, t);
                if (!x)
                    return {};
                const ModelParams& m = x->m;
                const CouplingSet nd = dual_transform(m.nu);
                cplx rhs{0.0};
                for (int a = 0; a < 4; ++a)
                    rhs += nd[a] * nd[a] * (wp(m.eta + t.omega(a), t) - wp(x->z + t.omega(a), t));
                return residual(lax_factor(x->z, x->s, m.c, m.eta, m.nu, t).det(), rhs);
            }));
        out.push_back(sampled("vandiejen", "rs_reduction", cfg_.samples.lax, tol("exact", tolerance::exact),
            [&](Rng& r) -> std::optional<double> {
                auto x = detail::draw_sample(r, t);
                if (!x)
                    return {};
                CouplingSet unit;
                unit.nu = {0.5, 0.5, 0.5, 0.5}; // dual (1, 0, 0, 0)
                const ModelParams& m = x->m;
                return matrix_residual(rs_lax_reduced(x->z, x->s, 2.0 * m.c, m.eta, t),
                    lax_factor(x->z, x->s, m.c, m.eta, unit, t));
            }));
        out.push_back(sampled("vandiejen", "m2_over_m1", cfg_.samples.lax, tol("identity", tolerance::identity),
            [&](Rng& r) -> std::optional<double> {
                auto x = detail::draw_sample(r, t);
                if (!x)
                    return {};
                const ModelParams& m = x->m;
                return matrix_residual(m_matrix(FlowId::VD4_2, x->z, x->s, m),
                    hamiltonian_vd4_1(x->s, m.c, m.eta, m.nu, t) * m_matrix(FlowId::VD4_1, x->z, x->s, m));
            }));
        out.push_back(limit_record());
        return out;
    }

    // r(2c)/r(c) for c in {100, 1000}
    VerificationRecord limit_record() const
    {
        Rng r(cfg_.seed, 0x11u);
        const Torus& t = torus_;
        for (int attempt = 0; attempt < max_redraws; ++attempt) {
            const cplx z = detail::torus_point(r, t);
            const PhaseState s = detail::random_state(r, t);
            CouplingSet nu;
            for (auto& x : nu.nu)
                x = r.box(1.0);
            bool ok = detail::clear(t, {z, 2.0 * z, 2.0 * s.q});
            for (int a = 0; a < 4; ++a)
                for (cplx x : {s.q, -s.q})
                    ok = ok && detail::clear(t, {x + t.omega(a), 2.0 * z + x + t.omega(a), 2.0 * s.q + t.omega(a)});
            if (!ok)
                continue;
            try {
                const auto rows = limit_check({100.0, 200.0, 1000.0, 2000.0}, z, s, nu, t);
                const double r1 = rows[1].residual / rows[0].residual, r2 = rows[3].residual / rows[2].residual;
                auto rec = single_record("vandiejen", "nonrel_limit_ratio",
                    std::max(std::abs(r1 - 0.5), std::abs(r2 - 0.5)), tol("limit", tolerance::limit), cfg_.seed,
                    "r(200)/r(100)=" + detail::fmt("%.4f", r1) + " r(2000)/r(1000)=" + detail::fmt("%.4f", r2));
                rec.attempted = attempt + 1;
                return stamp(rec);
            } catch (const NearPole&) {
            }
        }
        auto rec = single_record("vandiejen", "nonrel_limit_ratio", INFINITY, tol("limit", tolerance::limit), cfg_.seed,
            "no admissible sample");
        rec.accepted = 0;
        return stamp(rec);
    }

    RecordList gyrostat() const
    {
        RecordList out;
        const Torus& t = torus_;
        auto random_params = [&](Rng& r) {
            GyrostatParams g;
            g.torus = t;
            g.c = {r.uniform(0.8, 1.6), r.uniform(-0.3, 0.3)};
            for (int a = 1; a <= 3; ++a)
                g.lambda[a] = r.box(1.0);
            return g;
        };
        for (Structure st : {Structure::Linear, Structure::Quadratic}) {
            const char* tag = st == Structure::Linear ? "reflection/linear" : "reflection/quadratic";
            out.push_back(sampled("gyrostat_sklyanin", tag, cfg_.samples.reflection,
                tol("reflection", tolerance::theorem), [&, st](Rng& r) -> std::optional<double> {
                    const cplx z = detail::torus_point(r, t), w = detail::torus_point(r, t);
                    const SpinState s = detail::random_spin(r);
                    const GyrostatParams g = random_params(r);
                    if (!detail::spectral_clear(t, {z, w, z + w, z - w}))
                        return {};
                    return reflection_residual(st, z, w, s, g);
                }));
        }
        out.push_back(sampled("gyrostat_sklyanin", "lax/gyrostat", cfg_.samples.lax, tol("lax", tolerance::lax),
            [&](Rng& r) -> std::optional<double> {
                const cplx z = detail::torus_point(r, t);
                const SpinState s = detail::random_spin(r);
                const GyrostatParams g = random_params(r);
                if (!detail::spectral_clear(t, {z}))
                    return {};
                return gyrostat_lax_residual(z, s, g);
            }));
        out.push_back(sampled("gyrostat_sklyanin", "casimirs_central", cfg_.samples.reflection,
            tol("exact", tolerance::exact), [&](Rng& r) -> std::optional<double> {
                const SpinState s = detail::random_spin(r);
                const GyrostatParams g = random_params(r);
                // gradients of C1 = sum S_k^2 and C2 = S0^2 + sum (S_k^2 wp_k + 2 S_k lambda_k)
                auto g1 = [&](int k) { return k == 0 ? cplx{0.0} : 2.0 * s[k]; };
                auto g2 = [&](int k) {
                    return k == 0 ? 2.0 * s[0] : 2.0 * s[k] * t.wp_half(k) + 2.0 * g.lambda[k];
                };
                double w = 0.0;
                for (int a = 0; a < 4; ++a)
                    w = std::max({w, residual(detail::leibniz(g1, a, Structure::Quadratic, s, g), 0.0),
                        residual(detail::leibniz(g2, a, Structure::Quadratic, s, g), 0.0)});
                return w;
            }));
        out.push_back(sampled("gyrostat_sklyanin", "jacobi/quadratic", cfg_.samples.reflection,
            tol("identity", tolerance::identity), [&](Rng& r) -> std::optional<double> {
                const SpinState s = detail::random_spin(r);
                const GyrostatParams g = random_params(r);
                double w = 0.0;
                // {S_a, {S_b, S_c}} + cyclic, inner bracket differentiated through the spin
                auto nested = [&](int a, int b, int c) {
                    auto inner = [&](const SpinState& x) { return bracket(Structure::Quadratic, b, c, x, g); };
                    return -detail::leibniz([&](int k) { return detail::spin_partial(inner, s, k); }, a,
                        Structure::Quadratic, s, g);
                };
                for (int a = 0; a < 4; ++a)
                    for (int b = a + 1; b < 4; ++b)
                        for (int c = b + 1; c < 4; ++c)
                            w = std::max(w, residual(nested(a, b, c) + nested(b, c, a) + nested(c, a, b), 0.0));
                return w;
            }));
        out.push_back(sampled("gyrostat_sklyanin", "det_lax", cfg_.samples.reflection,
            tol("identity", tolerance::identity), [&](Rng& r) -> std::optional<double> {
                const cplx z = detail::torus_point(r, t);
                const SpinState s = detail::random_spin(r);
                const GyrostatParams g = random_params(r);
                if (!detail::spectral_clear(t, {z}))
                    return {};
                const Casimirs c = casimirs(s, g);
                cplx rhs = -wp(z, t) * c.c1 + c.c2;
                for (int k = 1; k <= 3; ++k) {
                    const cplx ph = varphi(k, z, t);
                    rhs -= g.lambda[k] * g.lambda[k] / (ph * ph);
                }
                return residual(lax_zhv(z, s, g).det(), rhs);
            }));
        out.push_back(sampled("gyrostat_sklyanin", "quarter_trace_l2", cfg_.samples.reflection,
            tol("identity", tolerance::identity), [&](Rng& r) -> std::optional<double> {
                const cplx z = detail::torus_point(r, t);
                const SpinState s = detail::random_spin(r);
                const GyrostatParams g = random_params(r);
                if (!detail::spectral_clear(t, {z}))
                    return {};
                const Matrix2 l = lax_zhv(z, s, g, false);
                cplx tail{0.0}, cc{0.0};
                for (int k = 1; k <= 3; ++k) {
                    const cplx ph = varphi(k, z, t);
                    tail += 0.5 * g.lambda[k] * g.lambda[k] / (ph * ph);
                    cc += 0.5 * s[k] * s[k];
                }
                return residual(0.25 * (l * l).trace() - tail, cc * wp(z, t) + hamiltonian_zhv(s, g));
            }));
        return out;
    }

    RecordList gauge() const
    {
        RecordList out;
        const Torus& t = torus_;
        out.push_back(sampled("gauge_maps", "theorem1", cfg_.samples.theorem1, tol("theorem1", tolerance::theorem),
            [&](Rng& r) -> std::optional<double> {
                auto x = detail::draw_sample(r, t);
                if (!x)
                    return {};
                return verify_theorem1(x->z, x->s, x->m);
            }));
        out.push_back(sampled("gauge_maps", "theorem1/trace_det", cfg_.samples.theorem1,
            tol("exact", tolerance::exact), [&](Rng& r) -> std::optional<double> {
                auto x = detail::draw_sample(r, t);
                if (!x)
                    return {};
                const SpectralGap g = gauge_invariance(x->z, x->s, x->m);
                return std::max(g.trace, g.det);
            }));
        out.push_back(sampled("gauge_maps", "theorem2/brackets", cfg_.samples.theorem2,
            tol("theorem2", tolerance::bracket), [&](Rng& r) -> std::optional<double> {
                auto x = detail::draw_sample(r, t);
                if (!x)
                    return {};
                return theorem2_table(x->s, x->m.eta, x->m.nu, x->m.c, t).max_residual;
            }));
        out.push_back(sampled("gauge_maps", "theorem2/casimirs", cfg_.samples.lax, tol("casimir", tolerance::casimir),
            [&](Rng& r) -> std::optional<double> {
                auto x = detail::draw_sample(r, t);
                if (!x)
                    return {};
                return casimir_map_residual(x->s, x->m.eta, x->m.nu, x->m.c, t);
            }));
        out.push_back(fd_ratio_record());
        out.push_back(sampled("gauge_maps", "coupled_gyrostats", cfg_.samples.theorem1,
            tol("theorem1", tolerance::theorem), [&](Rng& r) -> std::optional<double> {
                auto x = detail::draw_sample(r, t);
                if (!x)
                    return {};
                return verify_coupled(x->z, x->s, x->m);
            }));
        out.push_back(sampled("gauge_maps", "inozemtsev_gauge", cfg_.samples.theorem1,
            tol("theorem1", tolerance::theorem), [&](Rng& r) -> std::optional<double> {
                auto x = detail::draw_sample(r, t);
                if (!x)
                    return {};
                return verify_inozemtsev_gauge(x->z, x->s, x->m.nu, t);
            }));
        out.push_back(sampled("gauge_maps", "nonrel/casimir", cfg_.samples.lax, tol("identity", tolerance::identity),
            [&](Rng& r) -> std::optional<double> {
                auto x = detail::draw_sample(r, t);
                if (!x)
                    return {};
                const SpinMap sm = spin_nonrel(x->s, x->m.nu, t);
                const cplx n0 = dual_transform(x->m.nu)[0];
                return residual(sm.spin[1] * sm.spin[1] + sm.spin[2] * sm.spin[2] + sm.spin[3] * sm.spin[3], n0 * n0);
            }));
        out.push_back(sampled("gauge_maps", "nonrel/brackets", cfg_.samples.theorem2,
            tol("theorem2", tolerance::bracket), [&](Rng& r) -> std::optional<double> {
                auto x = detail::draw_sample(r, t);
                if (!x)
                    return {};
                return nonrel_bracket_residual(x->s, x->m.nu, t);
            }));
        out.push_back(sampled("gauge_maps", "spin_map_period", cfg_.samples.lax, tol("identity", tolerance::identity),
            [&](Rng& r) -> std::optional<double> {
                auto x = detail::draw_sample(r, t);
                if (!x)
                    return {};
                const ModelParams& m = x->m;
                const SpinMap a = spin_from_phase(x->s, m.eta, m.nu, m.c, t);
                const SpinMap b = spin_from_phase({x->s.p + 4.0 * pi * I * m.c, x->s.q}, m.eta, m.nu, m.c, t);
                double w = 0.0;
                for (int k = 0; k < 4; ++k)
                    w = std::max(w, residual(a.spin[k], b.spin[k]));
                return w;
            }));
        for (Theorem3Side side : {Theorem3Side::L, Theorem3Side::Lbar}) {
            double product = 0.0;
            auto rec = sampled("gauge_maps", side == Theorem3Side::L ? "theorem3/L" : "theorem3/Lbar",
                cfg_.samples.theorem3, tol("theorem3", tolerance::theorem), [&, side](Rng& r) -> std::optional<double> {
                    auto x = detail::draw_sample(r, t);
                    if (!x)
                        return {};
                    if (side == Theorem3Side::L)
                        product = std::max(product, theorem3_product_residual(x->z, x->s, x->m));
                    return verify_theorem3(x->z, x->s, x->m, side);
                });
            rec.note = side == Theorem3Side::L
                ? "conjugation Xi L Xi^-1; two-sided product Xi L Xi residual " + detail::fmt("%.3e", product)
                : "conjugation Xi Lbar Xi^-1 with barred constants";
            out.push_back(rec);
        }
        out.push_back(sampled("gauge_maps", "conjugation_formula", cfg_.samples.theorem3,
            tol("conjugation", tolerance::conjugation), [&](Rng& r) -> std::optional<double> {
                const cplx z = detail::torus_point(r, t), q = detail::torus_point(r, t), p = r.box(0.6);
                std::array<cplx, 4> ca, cb;
                for (auto& x : ca)
                    x = r.box(1.0);
                for (auto& x : cb)
                    x = r.box(1.0);
                if (!detail::clear(t, {z, 2.0 * q}))
                    return {};
                SymmetricEntry a = [ca](cplx q, cplx p) { return ca[0] + ca[1] * q + ca[2] * p + ca[3] * q * p; };
                SymmetricEntry b = [cb](cplx q, cplx p) { return cb[0] + cb[1] * q + cb[2] * p + cb[3] * q * p * q; };
                const Matrix2 direct = gauge_conjugate(xi_matrix(z, q, t), symmetric_form(a, b, q, p));
                return matrix_residual(conjugate_symmetric(z, q, p, a, b, t), direct);
            }));
        out.push_back(sampled("gauge_maps", "xi_det_shifted", cfg_.samples.theorem3,
            tol("identity", tolerance::identity), [&](Rng& r) -> std::optional<double> {
                const cplx z = detail::torus_point(r, t), q = detail::torus_point(r, t),
                           eta = detail::torus_point(r, t);
                if (!detail::clear(t, {z + eta, 2.0 * q}))
                    return {};
                return residual(xi_matrix(z, q, t, eta).det(), -t.theta(1, z + eta) * t.theta(1, 2.0 * q));
            }));
        return out;
    }

    // Theorem-2 bracket error under step halving, plain 4th-order stencil
    VerificationRecord fd_ratio_record() const
    {
        Rng r(cfg_.seed, 0xFDu);
        const Torus& t = torus_;
        // relative steps h and h/2; the coarse stencil moves q by up to 2h and 2q by 4h,
        // so the q-dependent singularities are kept twice that far away
        constexpr double h = 0.02;
        auto stencil_clear = [&](const detail::Sample& x) {
            for (int a = 0; a < 4; ++a) {
                const cplx w = t.omega(a);
                if (t.lattice_distance(2.0 * x.s.q + w) < 8.0 * h)
                    return false;
                for (cplx q : {x.s.q, -x.s.q})
                    for (cplx y : {q + w, 2.0 * x.m.eta + q + w, 2.0 * x.m.eta_bar + q + w})
                        if (t.lattice_distance(y) < 4.0 * h)
                            return false;
            }
            return true;
        };
        for (int attempt = 0; attempt < 10 * max_redraws; ++attempt) {
            auto x = detail::draw_sample(r, t);
            if (!x || !stencil_clear(*x))
                continue;
            try {
                auto err = [&](double h) {
                    const BracketTable b = theorem2_table(x->s, x->m.eta, x->m.nu, x->m.c, t, {h, false});
                    double e = 0.0;
                    for (int i = 0; i < 4; ++i)
                        for (int j = 0; j < 4; ++j)
                            e = std::max(e, std::abs(b.numeric[i][j] - b.exact[i][j]));
                    return e;
                };
                const double e1 = err(h), e2 = err(h / 2.0);
                const double ratio = e1 / e2;
                auto rec = single_record("gauge_maps", "theorem2/fd_ratio", 8.0 / ratio, tol("fd_ratio", 1.0),
                    cfg_.seed, "ratio " + detail::fmt("%.3f", ratio) + "; residual is 8/ratio");
                rec.attempted = attempt + 1;
                return stamp(rec);
            } catch (const NearPole&) {
            } catch (const Singular&) {
            }
        }
        auto rec = single_record("gauge_maps", "theorem2/fd_ratio", INFINITY, tol("fd_ratio", 1.0), cfg_.seed,
            "no admissible sample");
        rec.accepted = 0;
        return stamp(rec);
    }

    RecordList xyz() const
    {
        RecordList out;
        const Torus& t = torus_;
        auto random_rho = [](Rng& r) {
            std::array<cplx, 4> rt{};
            for (int a = 1; a <= 3; ++a)
                rt[a] = r.box(1.0);
            return rt;
        };
        out.push_back(sampled("xyz_boundary", "k_reflection", cfg_.samples.reflection,
            tol("reflection", tolerance::theorem), [&](Rng& r) -> std::optional<double> {
                const cplx z = detail::torus_point(r, t), w = detail::torus_point(r, t);
                const auto rt = random_rho(r);
                if (!detail::spectral_clear(t, {z, w, z + w, z - w}))
                    return {};
                return std::max(k_reflection_residual(z, w, rt, t), k_reflection_residual_via_gyrostat(z, w, rt, 1.0, t));
            }));
        out.push_back(sampled("xyz_boundary", "k_rho_conversion", cfg_.samples.reflection,
            tol("exact", tolerance::exact), [&](Rng& r) -> std::optional<double> {
                const cplx z = detail::torus_point(r, t);
                const auto rt = random_rho(r);
                if (!detail::spectral_clear(t, {z}))
                    return {};
                return matrix_residual(k_matrix_tilde(z, rt, t), k_matrix_rho(z, rho_from_rho_tilde(rt, t), t));
            }));
        auto random_boundary = [&](Rng& r) { return BoundaryParams{random_rho(r), random_rho(r)}; };
        out.push_back(sampled("xyz_boundary", "transfer_closed_form", cfg_.samples.xyz, tol("xyz", tolerance::xyz),
            [&](Rng& r) -> std::optional<double> {
                auto x = detail::draw_sample(r, t);
                const BoundaryParams b = random_boundary(r);
                if (!x || !detail::spectral_clear(t, {x->z, x->m.eta}))
                    return {};
                const ModelParams& m = x->m;
                return residual(transfer_matrix(x->z, x->s, m.eta, m.c, b, t),
                    transfer_closed_form(x->z, x->s, m.eta, m.c, b, t));
            }));
        out.push_back(sampled("xyz_boundary", "transfer_even", cfg_.samples.xyz, tol("identity", tolerance::identity),
            [&](Rng& r) -> std::optional<double> {
                auto x = detail::draw_sample(r, t);
                const BoundaryParams b = random_boundary(r);
                if (!x || !detail::spectral_clear(t, {x->z, x->m.eta}))
                    return {};
                const ModelParams& m = x->m;
                return residual(transfer_matrix(x->z, x->s, m.eta, m.c, b, t),
                    transfer_matrix(-x->z, x->s, m.eta, m.c, b, t));
            }));
        out.push_back(sampled("xyz_boundary", "lax_inverse", cfg_.samples.xyz, tol("identity", tolerance::identity),
            [&](Rng& r) -> std::optional<double> {
                auto x = detail::draw_sample(r, t);
                if (!x || !detail::spectral_clear(t, {x->z, x->m.eta}))
                    return {};
                const ModelParams& m = x->m;
                const Matrix2 l = lax_xyz(x->z, x->s, m.eta, m.c, t);
                return matrix_residual(lax_xyz(-x->z, x->s, m.eta, m.c, t).inverse(), l / l.det());
            }));
        out.push_back(sampled("xyz_boundary", "vd_match", cfg_.samples.xyz, tol("xyz", tolerance::xyz),
            [&](Rng& r) -> std::optional<double> {
                auto x = detail::draw_sample(r, t, true);
                if (!x || !detail::spectral_clear(t, {x->m.eta}))
                    return {};
                return vd_match_residual(x->s, x->m);
            }));
        out.push_back(sampled("xyz_boundary", "h1_from_generators", cfg_.samples.xyz,
            tol("h1_linear", tolerance::conjugation), [&](Rng& r) -> std::optional<double> {
                auto x = detail::draw_sample(r, t);
                if (!x || !detail::spectral_clear(t, {x->m.eta}))
                    return {};
                const ModelParams& m = x->m;
                return residual(h1_from_generators(x->s, m.eta, m.c, m.nu, t),
                    hamiltonian_vd4_1(x->s, m.c, m.eta, m.nu, t));
            }));
        out.push_back(state_independence_record());
        out.push_back(sampled("xyz_boundary", "brackets/standard", cfg_.samples.theorem2,
            tol("theorem2", tolerance::bracket), [&](Rng& r) -> std::optional<double> {
                auto x = detail::draw_sample(r, t);
                if (!x || !detail::spectral_clear(t, {x->m.eta}))
                    return {};
                return generator_bracket_residual(GeneratorStyle::Standard, x->s, x->m.eta, x->m.c);
            }));
        out.push_back(sampled("xyz_boundary", "brackets/bold", cfg_.samples.theorem2,
            tol("theorem2", tolerance::bracket), [&](Rng& r) -> std::optional<double> {
                auto x = detail::draw_sample(r, t);
                if (!x || !detail::spectral_clear(t, {x->m.eta}))
                    return {};
                return generator_bracket_residual(GeneratorStyle::Bold, x->s, x->m.eta, x->m.c);
            }));
        return out;
    }

    // H1 Hbar1 - H8 across cfg.samples.states states at one parameter point
    VerificationRecord state_independence_record() const
    {
        const auto t0 = std::chrono::steady_clock::now();
        Rng r(cfg_.seed, 0x57u);
        const Torus& t = torus_;
        const int n = cfg_.samples.states;
        VerificationRecord rec;
        rec.suite = "xyz_boundary";
        rec.theorem = "h1_h1bar_minus_h8/states";
        rec.samples = n;
        rec.tolerance = tol("xyz", tolerance::xyz);
        rec.seed = cfg_.seed;
        std::optional<ModelParams> m;
        std::optional<cplx> first;
        const int cap = n * max_redraws;
        while (rec.accepted < n && rec.attempted < cap) {
            ++rec.attempted;
            if (!m) {
                auto x = detail::draw_sample(r, t, true);
                if (!x)
                    continue;
                m = x->m;
            }
            const PhaseState s = detail::random_state(r, t);
            if (!detail::model_clear(t, 0.25, s, *m))
                continue;
            try {
                const cplx d = hamiltonian_vd4_1(s, m->c, m->eta, m->nu, t)
                        * hamiltonian_vd4_1(s, m->c, m->eta_bar, m->nu_bar, t)
                    - hamiltonian(FlowId::VD8, s, *m);
                if (!first)
                    first = d;
                rec.max_residual = std::max(rec.max_residual, residual(d, *first));
                ++rec.accepted;
            } catch (const NearPole&) {
            }
        }
        rec.finish();
        rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return stamp(rec);
    }

    // numeric {S_a, S_b} of the (p, q) generators against the structure constants
    double generator_bracket_residual(GeneratorStyle style, const PhaseState& s, cplx eta, cplx c) const
    {
        const Torus& t = torus_;
        const SpinState g = sklyanin_generators(style, s, eta, c, t);
        std::array<cplx, 4> dp{}, dq{};
        for (int a = 0; a < 4; ++a) {
            dp[a] = derivative([&](cplx x) { return sklyanin_generator(style, a, {x, s.q}, eta, c, t); }, s.p);
            dq[a] = derivative([&](cplx x) { return sklyanin_generator(style, a, {s.p, x}, eta, c, t); }, s.q);
        }
        double w = 0.0;
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) {
                const cplx num = dp[a] * dq[b] - dq[a] * dp[b];
                const cplx exact = style == GeneratorStyle::Standard
                    ? bracket(Structure::Quadratic, a, b, g, sklyanin_params(c, t))
                    : bold_bracket(a, b, g, eta, c, t);
                w = std::max(w, residual(num, exact));
            }
        return w;
    }

    struct FlowSummary {
        std::string flow;
        bool aborted = false;
        std::string message;
        long completed = 0;
        std::map<std::string, double> drift;
        double wall_time = 0.0;
    };

    FlowSummary simulate_flow(FlowId f, double dt, long steps, Trajectory* keep = nullptr) const
    {
        const auto t0 = std::chrono::steady_clock::now();
        const ModelParams m = cfg_.model();
        const Trajectory tr = integrate(f, {cfg_.p0, cfg_.q0}, m, dt, steps, cfg_.z_probe);
        FlowSummary s;
        s.flow = flow_name(f);
        s.aborted = tr.aborted;
        s.message = tr.message;
        s.completed = tr.points.empty() ? 0 : long(tr.points.size()) - 1;
        double dh = 0.0, dd = 0.0, dt1 = 0.0, dt2 = 0.0;
        if (!tr.points.empty()) {
            const auto& a = tr.points.front();
            const Matrix2 l0 = lax_matrix(f, cfg_.z_probe, a.state, m);
            for (const auto& p : tr.points) {
                dh = std::max(dh, detail::drift(p.energy, a.energy));
                dd = std::max(dd, detail::drift(p.det_lax, a.det_lax));
                if (f == FlowId::VD8) {
                    const Matrix2 l = lax_matrix(f, cfg_.z_probe, p.state, m);
                    dt1 = std::max(dt1, detail::drift(l.trace(), l0.trace()));
                    dt2 = std::max(dt2, detail::drift((l * l).trace(), (l0 * l0).trace()));
                }
            }
        }
        s.drift = {{"H", dh}, {"det_lax", dd}};
        if (f == FlowId::VD8) {
            s.drift["trace_lax"] = dt1;
            s.drift["trace_lax2"] = dt2;
        }
        s.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (keep)
            *keep = tr;
        return s;
    }

    FlowSummary simulate_gyrostat(double dt, long steps, GyroTrajectory* keep = nullptr) const
    {
        const auto t0 = std::chrono::steady_clock::now();
        SpinState s0;
        s0.s = cfg_.spin0;
        const GyroTrajectory tr = integrate_gyrostat(s0, cfg_.gyrostat(), dt, steps, cfg_.z_probe);
        FlowSummary s;
        s.flow = "gyrostat";
        s.aborted = tr.aborted;
        s.message = tr.message;
        s.completed = tr.points.empty() ? 0 : long(tr.points.size()) - 1;
        double d1 = 0.0, d2 = 0.0, dh = 0.0, dd = 0.0;
        if (!tr.points.empty()) {
            const auto& a = tr.points.front();
            for (const auto& p : tr.points) {
                d1 = std::max(d1, detail::drift(p.cas.c1, a.cas.c1));
                d2 = std::max(d2, detail::drift(p.cas.c2, a.cas.c2));
                dh = std::max(dh, detail::drift(p.energy, a.energy));
                dd = std::max(dd, detail::drift(p.det_lax, a.det_lax));
            }
        }
        s.drift = {{"C1", d1}, {"C2", d2}, {"H", dh}, {"det_lax", dd}};
        s.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (keep)
            *keep = tr;
        return s;
    }

    RecordList conservation() const
    {
        RecordList out;
        auto add = [&](const FlowSummary& s) {
            double worst = 0.0;
            std::string note;
            for (const auto& [k, v] : s.drift) {
                worst = std::max(worst, v);
                note += (note.empty() ? "" : " ") + k + "=" + detail::fmt("%.2e", v);
            }
            if (s.aborted) {
                worst = INFINITY;
                note += " aborted: " + s.message;
            }
            auto rec = single_record(
                "simulate", "conservation/" + s.flow, worst, tol("conservation", tolerance::conservation), cfg_.seed, note);
            rec.wall_time = s.wall_time;
            out.push_back(stamp(rec));
        };
        for (FlowId f : {FlowId::VD8, FlowId::VD4_1, FlowId::VD4_2, FlowId::INOZ})
            add(simulate_flow(f, cfg_.dt, cfg_.steps));
        add(simulate_gyrostat(cfg_.dt, cfg_.steps));
        return out;
    }

    RecordList verify_all() const
    {
        RecordList out;
        for (RecordList part : {elliptic(), potential(), vandiejen(), gyrostat(), gauge(), xyz(), conservation()})
            out.insert(out.end(), part.begin(), part.end());
        return out;
    }

    // poisson command: bracket tables at the configured state plus smoke records
    json poisson() const
    {
        const Torus& t = torus_;
        const ModelParams m = cfg_.model();
        const PhaseState s{cfg_.p0, cfg_.q0};
        auto table = [](const std::array<std::array<cplx, 4>, 4>& a) {
            json j = json::array();
            for (const auto& row : a) {
                json jr = json::array();
                for (cplx x : row)
                    jr.push_back(to_json_c(x));
                j.push_back(jr);
            }
            return j;
        };
        json out;
        RecordList recs;

        const ObservableFn p_fn = [](const PhaseState& x) { return x.p; };
        const ObservableFn q_fn = [](const PhaseState& x) { return x.q; };
        recs.push_back(stamp(single_record("gauge_maps", "canonical/p_q",
            residual(numeric_poisson_bracket(p_fn, q_fn, s), 1.0), tol("identity", tolerance::identity), cfg_.seed)));

        const BracketTable t2 = theorem2_table(s, m.eta, m.nu, m.c, t);
        out["theorem2"] = {{"numeric", table(t2.numeric)}, {"exact", table(t2.exact)}, {"max_residual", t2.max_residual}};
        recs.push_back(stamp(single_record(
            "gauge_maps", "theorem2/brackets", t2.max_residual, tol("theorem2", tolerance::bracket), cfg_.seed)));

        for (GeneratorStyle style : {GeneratorStyle::Standard, GeneratorStyle::Bold}) {
            const char* name = style == GeneratorStyle::Standard ? "standard_generators" : "bold_generators";
            const SpinState g = sklyanin_generators(style, s, m.eta, m.c, t);
            std::array<std::array<cplx, 4>, 4> num{}, ex{};
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b) {
                    num[a][b] = numeric_poisson_bracket(
                        [&](const PhaseState& x) { return sklyanin_generator(style, a, x, m.eta, m.c, t); },
                        [&](const PhaseState& x) { return sklyanin_generator(style, b, x, m.eta, m.c, t); }, s);
                    ex[a][b] = style == GeneratorStyle::Standard
                        ? bracket(Structure::Quadratic, a, b, g, sklyanin_params(m.c, t))
                        : bold_bracket(a, b, g, m.eta, m.c, t);
                }
            const double res = generator_bracket_residual(style, s, m.eta, m.c);
            out[name] = {{"numeric", table(num)}, {"exact", table(ex)}, {"max_residual", res}};
            recs.push_back(stamp(single_record("xyz_boundary", std::string("brackets/") + (name[0] == 's' ? "standard" : "bold"),
                res, tol("theorem2", tolerance::bracket), cfg_.seed)));
        }

        out["mixed_brackets"] = {{"numeric", table(mixed_brackets(s, m))},
            {"note", "numeric {S_a, Sbar_b}; no closed form is asserted"}};

        const ObservableFn h1 = [&](const PhaseState& x) { return hamiltonian(FlowId::VD4_1, x, m); };
        const ObservableFn h2 = [&](const PhaseState& x) { return hamiltonian(FlowId::VD4_2, x, m); };
        recs.push_back(stamp(single_record("vandiejen", "commuting/h1_h2",
            residual(numeric_poisson_bracket(h1, h2, s), 0.0), tol("commuting", tolerance::commuting), cfg_.seed)));

        BoundaryParams b{cfg_.rho_plus, cfg_.rho_minus};
        const cplx z1 = cfg_.z_probe, z2 = cfg_.z_probe + cplx{0.11, 0.07};
        const ObservableFn tz = [&](const PhaseState& x) { return transfer_matrix(z1, x, m.eta, m.c, b, t); };
        const ObservableFn tw = [&](const PhaseState& x) { return transfer_matrix(z2, x, m.eta, m.c, b, t); };
        recs.push_back(stamp(single_record("xyz_boundary", "commuting/transfer",
            residual(numeric_poisson_bracket(tz, tw, s), 0.0), tol("theorem2", tolerance::bracket), cfg_.seed)));

        out["records"] = to_json(recs);
        return out;
    }

private:
    double tol(const std::string& key, double fallback) const { return cfg_.tol(key, fallback); }

    VerificationRecord stamp(VerificationRecord r) const
    {
        r.params_digest = digest_;
        return r;
    }

    template <class Check>
    VerificationRecord sampled(const char* suite, std::string tag, int n, double tol_, Check&& check) const
    {
        return stamp(run_samples(suite, std::move(tag), n, cfg_.seed, tol_, std::forward<Check>(check)));
    }

    RunConfig cfg_;
    Torus torus_;
    std::string digest_;
};

inline json to_json(const SuiteRunner::FlowSummary& s)
{
    json j;
    j["flow"] = s.flow;
    j["aborted"] = s.aborted;
    if (!s.message.empty())
        j["message"] = s.message;
    j["steps_completed"] = s.completed;
    j["max_relative_drift"] = s.drift;
    j["wall_time"] = s.wall_time;
    return j;
}

inline std::string trajectory_csv(const Trajectory& tr)
{
    std::string out = csv_row({"t", "re_p", "im_p", "re_q", "im_q", "re_H", "im_H", "re_det_L", "im_det_L"});
    for (const auto& p : tr.points)
        out += csv_row({csv_number(p.t), csv_number(p.state.p.real()), csv_number(p.state.p.imag()),
            csv_number(p.state.q.real()), csv_number(p.state.q.imag()), csv_number(p.energy.real()),
            csv_number(p.energy.imag()), csv_number(p.det_lax.real()), csv_number(p.det_lax.imag())});
    return out;
}

inline std::string trajectory_csv(const GyroTrajectory& tr)
{
    std::vector<std::string> head{"t"};
    for (int a = 0; a < 4; ++a) {
        head.push_back("re_S" + std::to_string(a));
        head.push_back("im_S" + std::to_string(a));
    }
    for (const char* k : {"C1", "C2", "H"}) {
        head.push_back(std::string("re_") + k);
        head.push_back(std::string("im_") + k);
    }
    std::string out = csv_row(head);
    for (const auto& p : tr.points) {
        std::vector<std::string> row{csv_number(p.t)};
        auto put = [&](cplx z) {
            row.push_back(csv_number(z.real()));
            row.push_back(csv_number(z.imag()));
        };
        for (int a = 0; a < 4; ++a)
            put(p.spin[a]);
        put(p.cas.c1);
        put(p.cas.c2);
        put(p.energy);
        out += csv_row(row);
    }
    return out;
}

inline bool all_pass(const RecordList& rs)
{
    return std::all_of(rs.begin(), rs.end(), [](const VerificationRecord& r) { return r.pass; });
}

// report text with timing fields zeroed, for determinism comparisons
inline std::string without_timing(json j)
{
    if (j.is_array())
        for (auto& r : j)
            if (r.is_object() && r.contains("wall_time"))
                r["wall_time"] = 0.0;
    return j.dump();
}

} // namespace bclab

#endif
