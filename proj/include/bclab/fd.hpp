#ifndef BCLAB_FD_HPP
#define BCLAB_FD_HPP

#include <type_traits>

#include "core.hpp"
#include "matrix.hpp"

namespace bclab {

struct FdOptions {
    double rel_step = 1e-4; // h = rel_step * max(1, |x|)
    bool richardson = true; // one halving, combines two 4th-order estimates
};

namespace detail {
    template <class F, class T = std::invoke_result_t<F, cplx>>
    T central4(F&& f, cplx x, double h)
    {
        return (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) * (1.0 / (12.0 * h));
    }
}

// Derivative of a holomorphic function along the real direction.
// Works for any value type with +, - and scalar *, e.g. cplx or Matrix2.
template <class F>
auto derivative(F&& f, cplx x, FdOptions opt = {})
{
    const double h = opt.rel_step * std::max(1.0, std::abs(x));
    auto d1 = detail::central4(f, x, h);
    if (!opt.richardson)
        return d1;
    auto d2 = detail::central4(f, x, h / 2.0);
    return (16.0 * d2 - d1) * (1.0 / 15.0);
}

} // namespace bclab

#endif
