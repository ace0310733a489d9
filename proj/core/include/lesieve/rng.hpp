#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

#include "lesieve/errors.hpp"

namespace lesieve {

// Deterministic random stream with counter-based substream derivation.
//
// A stream is identified by a master seed plus a path of indices
// (e.g. {replica, round}).  Derivation hashes the path into the seed with
// splitmix64, so distinct paths give statistically independent streams and
// workers never share state.  Uniform doubles are produced from the raw
// 64-bit output directly, keeping draw sequences identical across platforms
// for a fixed seed.
class RandomStream {
public:
    // Unseeded stream; any draw faults.  Exists so containers can hold
    // streams before assignment.
    RandomStream() = default;

    explicit RandomStream(std::uint64_t seed) : engine_(mix(seed)), seeded_(true) {}

    // Substream at `path` under `master`.  Documented splitting function:
    //   state = mix(master); for each p in path: state = mix(state ^ mix(p + GOLDEN))
    static RandomStream derive(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
        std::uint64_t state = mix(master);
        for (std::uint64_t p : path)
            state = mix(state ^ mix(p + 0x9e3779b97f4a7c15ULL));
        return RandomStream(state);
    }

    std::uint64_t next_u64() {
        if (!seeded_)
            throw ValidationError("RandomStream: draw from unseeded stream");
        return engine_();
    }

    // Uniform on the open interval (0,1); never returns 0 or 1.
    double uniform01() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
    }

    // Standard exponential.
    double exponential() { return -std::log(uniform01()); }

    // Standard normal (Box-Muller, one fresh pair per call).
    double normal() {
        double u1 = uniform01();
        double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    bool seeded() const { return seeded_; }

private:
    static std::uint64_t mix(std::uint64_t x) {
        // splitmix64 finalizer
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    std::mt19937_64 engine_;
    bool seeded_ = false;
};

} // namespace lesieve
