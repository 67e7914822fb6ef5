#ifndef BCLAB_RECORD_HPP
#define BCLAB_RECORD_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rng.hpp"

namespace bclab {

struct VerificationRecord {
    std::string suite;
    std::string theorem;
    int samples = 0;   // requested
    int attempted = 0; // draws including rejected ones
    int accepted = 0;
    double max_residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::uint64_t seed = 0;
    std::string params_digest;
    double wall_time = 0.0;
    std::string note;

    void finish()
    {
        pass = accepted >= samples && max_residual <= tolerance;
    }
};

// Pole-adjacent draws are redrawn, at most this many times per requested sample.
inline constexpr int max_redraws = 20;

// Draw `samples` points; `check` returns the residual, or nullopt to reject the draw.
// A NearPole/Singular exception also rejects the draw.
template <class Check>
VerificationRecord run_samples(std::string suite, std::string theorem, int samples, std::uint64_t seed, double tol,
    Check&& check)
{
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    VerificationRecord r;
    r.suite = std::move(suite);
    r.theorem = std::move(theorem);
    r.samples = samples;
    r.tolerance = tol;
    r.seed = seed;
    std::uint64_t tag = 0;
    for (char ch : r.theorem)
        tag = tag * 131 + std::uint8_t(ch);
    Rng rng(seed, tag);
    const int cap = samples * max_redraws;
    while (r.accepted < samples && r.attempted < cap) {
        ++r.attempted;
        std::optional<double> res;
        try {
            res = check(rng);
        } catch (const NearPole&) {
            res.reset();
        } catch (const Singular&) {
            res.reset();
        } catch (const ZeroDenominator&) {
            res.reset();
        }
        if (!res)
            continue;
        if (!std::isfinite(*res)) {
            r.max_residual = INFINITY;
            ++r.accepted;
            continue;
        }
        ++r.accepted;
        r.max_residual = std::max(r.max_residual, *res);
    }
    r.finish();
    r.wall_time = std::chrono::duration<double>(clock::now() - t0).count();
    return r;
}

// Single deterministic evaluation wrapped as a record.
inline VerificationRecord single_record(std::string suite, std::string theorem, double residual, double tol,
    std::uint64_t seed, std::string note = {})
{
    VerificationRecord r;
    r.suite = std::move(suite);
    r.theorem = std::move(theorem);
    r.samples = r.attempted = r.accepted = 1;
    r.max_residual = std::isfinite(residual) ? residual : INFINITY;
    r.tolerance = tol;
    r.seed = seed;
    r.note = std::move(note);
    r.finish();
    return r;
}

// FNV-1a, hex
inline std::string digest(const std::string& s)
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    static const char* hex = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i, h >>= 4)
        out[i] = hex[h & 15];
    return out;
}

} // namespace bclab

#endif
