#pragma once

#include <cstdint>
#include <random>

namespace qwalk {

// Random source for disorder sampling.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard. Uniform doubles take the top 53 bits of one engine output, so the
// stream is reproducible across compilers and easy to replicate elsewhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

// SplitMix64 output function.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Seed of realization `index` under `master_seed`: the (index+1)-th output of
// a SplitMix64 stream started at master_seed.
constexpr std::uint64_t child_seed(std::uint64_t master_seed, std::uint64_t index) noexcept {
    return mix64(master_seed + (index + 1) * 0x9e3779b97f4a7c15ULL);
}

}  // namespace qwalk
