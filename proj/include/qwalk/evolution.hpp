#pragma once

#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "qwalk/core_state.hpp"
#include "qwalk/rng.hpp"

namespace qwalk {

inline constexpr double kMaxCoinAngle = std::numbers::pi / 2;
inline constexpr double kDefaultBaseTheta = std::numbers::pi / 4;

enum class FieldKind { uniform, temporal, spatial };

// One realization of coin angles: a single angle, one angle per step, or one
// angle per lattice site (quenched, reused at every step).
class CoinField {
public:
    static CoinField uniform(double theta);
    static CoinField temporal(std::vector<double> theta_per_step);
    // Index i holds the angle of site i - T, where the vector has 2T+1 entries.
    static CoinField spatial(std::vector<double> theta_per_site);

    FieldKind kind() const noexcept { return kind_; }
    std::span<const double> angles() const noexcept { return angles_; }
    // cos and sin of each angle, computed once at construction.
    std::span<const double> cosines() const noexcept { return cos_; }
    std::span<const double> sines() const noexcept { return sin_; }

    // Number of steps a temporal field covers.
    int steps() const noexcept;
    // Half-width T of the lattice a spatial field covers.
    int steps_capacity() const noexcept;

    // Coin angle acting on site x at step t. Throws DomainError when t or x
    // fall outside the field.
    double angle_at(int t, int x) const;

    friend bool operator==(const CoinField&, const CoinField&) = default;

private:
    CoinField(FieldKind kind, std::vector<double> angles);

    FieldKind kind_ = FieldKind::uniform;
    std::vector<double> angles_;
    std::vector<double> cos_;
    std::vector<double> sin_;
};

enum class DisorderKind { none, temporal, spatial };

enum class AngleDistribution { uniform };

struct DisorderConfig {
    DisorderKind kind = DisorderKind::none;
    double strength = 0.0;
    double base_theta = kDefaultBaseTheta;
    AngleDistribution distribution = AngleDistribution::uniform;
    std::uint64_t seed = 0;

    // Throws ValidationError naming the bad field.
    void validate() const;
};

std::string_view to_string(DisorderKind kind) noexcept;
std::optional<DisorderKind> parse_disorder_kind(std::string_view name) noexcept;

// Coin: new(up) = cos*up - i sin*down, new(down) = -i sin*up + cos*down at each site.
WalkState apply_coin(WalkState state, const CoinField& field, int t);

// Up moves x -> x+1, down moves x -> x-1. Throws OverflowError when any
// amplitude sits on the edge sites +-T.
WalkState apply_shift(const WalkState& state);

// apply_shift(apply_coin(state, field, t)), fused into one pass.
WalkState step(const WalkState& state, const CoinField& field, int t);

// In-place variant of step; `scratch` is resized as needed and swapped in.
void step_into(WalkState& state, WalkState& scratch, const CoinField& field, int t);

// For each of the T (temporal) or 2T+1 (spatial) slots two uniforms u, v are
// drawn in order; the slot angle is v * pi/2 when u < strength, otherwise
// base_theta. Kind none draws nothing and returns uniform(base_theta).
CoinField sample_coin_field(const DisorderConfig& cfg, int steps, Rng& rng);

using Trajectory = std::vector<WalkState>;

// Full trajectory t = 0..steps under one field sampled from `rng`.
Trajectory evolve(const InitialStateSpec& spec, const DisorderConfig& cfg, int steps, Rng& rng);
// Same, with the generator seeded from cfg.seed.
Trajectory evolve(const InitialStateSpec& spec, const DisorderConfig& cfg, int steps);
// Trajectory under a given field.
Trajectory evolve(const InitialStateSpec& spec, const CoinField& field, int steps);

// Streaming evolution: holds only the current state.
class Walker {
public:
    Walker(const InitialStateSpec& spec, CoinField field, int steps);

    const WalkState& state() const noexcept { return state_; }
    int time() const noexcept { return t_; }
    int total_steps() const noexcept { return steps_; }
    bool done() const noexcept { return t_ >= steps_; }
    const CoinField& field() const noexcept { return field_; }

    // Throws DomainError once all steps are taken.
    void advance();

private:
    CoinField field_;
    int steps_;
    int t_ = 0;
    WalkState state_;
    WalkState scratch_;
};

namespace reference {

// Straightforward serial coin-then-shift, kept as the baseline the parallel
// kernel is checked and benchmarked against.
WalkState step(const WalkState& state, const CoinField& field, int t);

}  // namespace reference

}  // namespace qwalk
