#ifndef BCLAB_CORE_HPP
#define BCLAB_CORE_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace bclab {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

// Distance (in lattice-reduced coordinates) below which an argument counts as a pole.
inline constexpr double pole_tolerance = 1e-6;

struct NearPole : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonConvergent : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct Singular : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ZeroDenominator : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ZeroCoupling : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// |a-b| / max(1, |a|, |b|), used by every check in the library.
inline double residual(cplx a, cplx b)
{
    return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

inline bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

} // namespace bclab

#endif
