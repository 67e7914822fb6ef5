#ifndef BCLAB_RNG_HPP
#define BCLAB_RNG_HPP

#include <cstdint>

#include "core.hpp"

namespace bclab {

// splitmix64 counter generator. Bit-exact on every platform; the std::
// distributions are avoided on purpose since their output is library specific.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
        : state_(mix(seed ^ mix(stream + 0x632BE59BD9B4E019ull)))
    {
    }

    std::uint64_t next()
    {
        state_ += 0x9E3779B97F4A7C15ull;
        return mix(state_);
    }

    // uniform in [0, 1) with 53 random bits
    double uniform() { return double(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    cplx box(double r) { return {uniform(-r, r), uniform(-r, r)}; }

    // independent child stream, e.g. one per suite
    Rng split(std::uint64_t tag) { return Rng(next(), tag); }

private:
    static std::uint64_t mix(std::uint64_t z)
    {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    std::uint64_t state_;
};

} // namespace bclab

#endif
