#include "qwalk/core_state.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "qwalk/errors.hpp"

namespace qwalk {

WalkState::WalkState(int steps_capacity) : capacity_(steps_capacity) {
    if (steps_capacity < 0) {
        throw DomainError("WalkState: steps capacity must be non-negative, got " +
                          std::to_string(steps_capacity));
    }
    amps_.assign(2 * site_count(), Complex{});
}

std::size_t WalkState::offset(Coin c, int x) const {
    if (!contains(x)) {
        throw DomainError("WalkState: site " + std::to_string(x) + " outside [-" +
                          std::to_string(capacity_) + ", " + std::to_string(capacity_) + "]");
    }
    const auto site = static_cast<std::size_t>(x + capacity_);
    return c == Coin::up ? site : site_count() + site;
}

Complex WalkState::amplitude(Coin c, int x) const { return amps_[offset(c, x)]; }

void WalkState::set_amplitude(Coin c, int x, Complex value) { amps_[offset(c, x)] = value; }

double WalkState::norm_squared() const noexcept {
    return std::accumulate(amps_.begin(), amps_.end(), 0.0,
                           [](double acc, const Complex& a) { return acc + std::norm(a); });
}

ReducedCoinState::ReducedCoinState(const Matrix2& rho) : rho_(rho) {
    const double hermitian_error =
        std::max({std::abs(rho.m00.imag()), std::abs(rho.m11.imag()),
                  std::abs(rho.m10 - std::conj(rho.m01))});
    if (hermitian_error > kNormTolerance) {
        throw ValidationError("ReducedCoinState: matrix is not Hermitian (deviation " +
                              std::to_string(hermitian_error) + ")");
    }
    const double trace = rho.m00.real() + rho.m11.real();
    if (std::abs(trace - 1.0) > kNormTolerance) {
        throw ValidationError("ReducedCoinState: trace " + std::to_string(trace) + " != 1");
    }
    if (eig_hermitian_2x2(rho).smaller < -kEigenFloor) {
        throw ValidationError("ReducedCoinState: matrix has a negative eigenvalue");
    }
}

WalkState make_initial_state(const InitialStateSpec& spec, int steps_capacity) {
    WalkState state(steps_capacity);
    if (!state.contains(spec.origin)) {
        throw DomainError("make_initial_state: origin " + std::to_string(spec.origin) +
                          " outside lattice of capacity " + std::to_string(steps_capacity));
    }
    state.set_amplitude(Coin::up, spec.origin, Complex{std::cos(spec.delta), 0.0});
    state.set_amplitude(Coin::down, spec.origin,
                        std::polar(1.0, -spec.eta) * std::sin(spec.delta));
    return state;
}

ReducedCoinState partial_trace_coin(const WalkState& state) {
    const double norm = state.norm_squared();
    if (std::abs(norm - 1.0) > kInputNormTolerance) {
        throw ValidationError("partial_trace_coin: state norm^2 is " + std::to_string(norm));
    }
    const auto up = state.up();
    const auto down = state.down();
    double rho00 = 0.0;
    double rho11 = 0.0;
    Complex rho01{};
    for (std::size_t i = 0; i < up.size(); ++i) {
        rho00 += std::norm(up[i]);
        rho11 += std::norm(down[i]);
        rho01 += up[i] * std::conj(down[i]);
    }
    return ReducedCoinState(Matrix2{rho00, rho01, std::conj(rho01), rho11});
}

Eigenvalues2 eig_hermitian_2x2(const Matrix2& m) {
    const double hermitian_error = std::max(
        {std::abs(m.m00.imag()), std::abs(m.m11.imag()), std::abs(m.m10 - std::conj(m.m01))});
    if (hermitian_error > 1e-8) {
        throw ValidationError("eig_hermitian_2x2: matrix is not Hermitian (deviation " +
                              std::to_string(hermitian_error) + ")");
    }
    // tr^2 - 4 det written as (a - d)^2 + 4|b|^2, which cannot go negative.
    const double a = m.m00.real();
    const double d = m.m11.real();
    const double half_trace = 0.5 * (a + d);
    const double half_gap = std::hypot(0.5 * (a - d), std::abs(m.m01));
    return {half_trace + half_gap, half_trace - half_gap};
}

}  // namespace qwalk
