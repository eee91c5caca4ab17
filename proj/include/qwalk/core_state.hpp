#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace qwalk {

using Complex = std::complex<double>;

enum class Coin : int { up = 0, down = 1 };

// Tolerances shared by the invariant checks.
inline constexpr double kNormTolerance = 1e-10;
inline constexpr double kInputNormTolerance = 1e-6;
inline constexpr double kEigenFloor = 1e-10;

// Pure state of a walker on the sites -T..T of a line, coin in {up, down}.
//
// Storage is coin-major: all up amplitudes (site offset x+T), followed by all
// down amplitudes. The lattice is exactly wide enough that T steps from the
// origin never reach past the edge, so there is no wraparound.
class WalkState {
public:
    WalkState() = default;
    explicit WalkState(int steps_capacity);

    int steps_capacity() const noexcept { return capacity_; }
    int lattice_size() const noexcept { return 2 * capacity_ + 1; }
    int min_site() const noexcept { return -capacity_; }
    int max_site() const noexcept { return capacity_; }
    bool contains(int x) const noexcept { return x >= -capacity_ && x <= capacity_; }

    // Throws DomainError for sites off the lattice.
    Complex amplitude(Coin c, int x) const;
    void set_amplitude(Coin c, int x, Complex value);

    std::span<Complex> up() noexcept { return {amps_.data(), site_count()}; }
    std::span<Complex> down() noexcept { return {amps_.data() + site_count(), site_count()}; }
    std::span<const Complex> up() const noexcept { return {amps_.data(), site_count()}; }
    std::span<const Complex> down() const noexcept {
        return {amps_.data() + site_count(), site_count()};
    }
    std::span<const Complex> amplitudes() const noexcept { return amps_; }
    std::span<Complex> amplitudes() noexcept { return amps_; }

    double norm_squared() const noexcept;

    friend bool operator==(const WalkState&, const WalkState&) = default;

private:
    std::size_t site_count() const noexcept { return static_cast<std::size_t>(lattice_size()); }
    std::size_t offset(Coin c, int x) const;

    int capacity_ = 0;
    std::vector<Complex> amps_ = std::vector<Complex>(2);
};

// Plain 2x2 complex matrix, row-major.
struct Matrix2 {
    Complex m00{}, m01{}, m10{}, m11{};

    Complex trace() const noexcept { return m00 + m11; }
    Complex determinant() const noexcept { return m00 * m11 - m01 * m10; }
    friend Matrix2 operator-(const Matrix2& a, const Matrix2& b) noexcept {
        return {a.m00 - b.m00, a.m01 - b.m01, a.m10 - b.m10, a.m11 - b.m11};
    }
    friend bool operator==(const Matrix2&, const Matrix2&) = default;
};

// Density matrix of the coin after the position has been traced out.
// Construction validates Hermiticity, unit trace and positivity to 1e-10.
class ReducedCoinState {
public:
    explicit ReducedCoinState(const Matrix2& rho);

    const Matrix2& matrix() const noexcept { return rho_; }
    double population_up() const noexcept { return rho_.m00.real(); }
    double population_down() const noexcept { return rho_.m11.real(); }
    Complex off_diagonal() const noexcept { return rho_.m01; }

private:
    Matrix2 rho_;
};

// Coin state cos(delta)|up> + exp(-i eta) sin(delta)|down> placed at `origin`.
struct InitialStateSpec {
    double delta = 0.0;
    double eta = 0.0;
    int origin = 0;
};

struct Eigenvalues2 {
    double larger;
    double smaller;
};

WalkState make_initial_state(const InitialStateSpec& spec, int steps_capacity);

// rho_cc' = sum_x a(c,x) conj(a(c',x)). Rejects states whose norm is off by more than 1e-6.
ReducedCoinState partial_trace_coin(const WalkState& state);

// Closed-form eigenvalues of a Hermitian 2x2 matrix, descending.
Eigenvalues2 eig_hermitian_2x2(const Matrix2& m);

}  // namespace qwalk
