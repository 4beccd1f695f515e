#pragma once

#include <cstdint>

namespace pulsebench {

/// Independent sub-stream seeds derived from one scenario seed.
enum class SeedStream : std::uint64_t {
    Noise = 1,
    PulseError = 2,
    InitialState = 3,
    Correction = 4,
    Disorder = 5,
    Trials = 6,
    Optimizer = 7,
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t seed, SeedStream stream, std::uint64_t index = 0);

}  // namespace pulsebench
