#pragma once

#include "qwalk/core_state.hpp"

namespace qwalk::detail {

// Rows of exp(-i theta sigma_x) applied to (u, d), in explicit real arithmetic
// so the fused kernel and the reference agree bit for bit.
inline Complex coin_row_up(double c, double s, const Complex& u, const Complex& d) noexcept {
    return {c * u.real() + s * d.imag(), c * u.imag() - s * d.real()};
}

inline Complex coin_row_down(double c, double s, const Complex& u, const Complex& d) noexcept {
    return {s * u.imag() + c * d.real(), c * d.imag() - s * u.real()};
}

}  // namespace qwalk::detail
