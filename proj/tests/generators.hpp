#pragma once

// Hand-rolled random generators for property tests.

#include <cmath>
#include <random>

#include "qwalk/core_state.hpp"

namespace gen {

inline qwalk::Complex gaussian_complex(std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    const double re = n(rng);
    return {re, n(rng)};
}

// Random unit-norm state on a lattice of half-width T, support within |x| <= support.
inline qwalk::WalkState random_state(int T, int support, std::mt19937_64& rng) {
    qwalk::WalkState s(T);
    for (int x = -support; x <= support; ++x) {
        s.set_amplitude(qwalk::Coin::up, x, gaussian_complex(rng));
        s.set_amplitude(qwalk::Coin::down, x, gaussian_complex(rng));
    }
    const double norm = std::sqrt(s.norm_squared());
    for (auto& a : s.amplitudes()) a /= norm;
    return s;
}

// Random qubit density matrix: mixture of a random pure state with the maximally
// mixed state, or a rank-1 projector when mix is 0.
inline qwalk::Matrix2 random_density(std::mt19937_64& rng) {
    const qwalk::Complex a = gaussian_complex(rng);
    const qwalk::Complex b = gaussian_complex(rng);
    const double n = std::sqrt(std::norm(a) + std::norm(b));
    const qwalk::Complex u = a / n;
    const qwalk::Complex v = b / n;
    const double mix = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const double w = 1.0 - mix;
    return {w * std::norm(u) + mix / 2, w * u * std::conj(v), w * v * std::conj(u),
            w * std::norm(v) + mix / 2};
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace gen
