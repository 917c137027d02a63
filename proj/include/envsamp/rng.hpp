// envsamp is Copyright(c) 2026 the envsamp authors.
// The envsamp source code is licensed under the Apache License, Version 2.0.
// SPDX: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "envsamp/geometry.hpp"

namespace envsamp {

/// Source of uniform variates in [0, 1). Implementations are seeded and
/// reproduce the same stream for the same seed on every platform. A source
/// is owned by one caller; it is not shareable across threads.
class RandomSource {
public:
    virtual ~RandomSource() = default;
    virtual double next_uniform() = 0;
};

/// splitmix64 finalizer; decorrelates related seed values.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t x = seed + (stream + 1) * 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// mt19937_64-backed source. The engine is fully specified by the standard,
/// so streams are identical across platforms and standard libraries.
class Mt64RandomSource final : public RandomSource {
public:
    explicit Mt64RandomSource(std::uint64_t seed) : engine_(seed) {}

    /// Independent per-trial stream derived from (seed, trial index).
    static Mt64RandomSource for_trial(std::uint64_t seed, std::uint64_t trial) {
        return Mt64RandomSource(mix_seed(seed, trial));
    }

    double next_uniform() override {
        // Top 53 bits give a uniform double in [0, 1).
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

private:
    std::mt19937_64 engine_;
};

/// Uniform direction on the sphere via the standard (z, phi) construction.
inline Direction uniform_direction(RandomSource& rng) {
    const double z = 1.0 - 2.0 * rng.next_uniform();
    const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = kTwoPi * rng.next_uniform();
    return Direction(s * std::cos(phi), s * std::sin(phi), z);
}

}  // namespace envsamp
