#include "qwalk/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "kernel.hpp"
#include "qwalk/errors.hpp"

namespace qwalk {

namespace {

// Below this many sites a parallel region costs more than it saves.
constexpr int kParallelSiteThreshold = 4096;

void check_angle(double theta, const char* what) {
    if (!(theta >= 0.0 && theta <= kMaxCoinAngle)) {
        throw ValidationError(std::string(what) + ": coin angle " + std::to_string(theta) +
                              " outside [0, pi/2]");
    }
}

// Edge sites must be empty before a shift; a step from the origin never fills them early.
void check_no_edge_support(const WalkState& state) {
    const auto up = state.up();
    const auto down = state.down();
    const auto last = up.size() - 1;
    if (up[0] != Complex{} || up[last] != Complex{} || down[0] != Complex{} ||
        down[last] != Complex{}) {
        throw OverflowError("shift: state has support on the lattice edge |x| = " +
                            std::to_string(state.steps_capacity()));
    }
}

void check_field_covers(const CoinField& field, const WalkState& state, int t) {
    switch (field.kind()) {
    case FieldKind::uniform:
        if (t < 0) throw DomainError("coin: negative step index " + std::to_string(t));
        break;
    case FieldKind::temporal:
        if (t < 0 || t >= field.steps()) {
            throw DomainError("coin: step " + std::to_string(t) + " outside temporal field of " +
                              std::to_string(field.steps()) + " steps");
        }
        break;
    case FieldKind::spatial:
        if (field.steps_capacity() < state.steps_capacity()) {
            throw DomainError("coin: spatial field covers |x| <= " +
                              std::to_string(field.steps_capacity()) + " but lattice has |x| <= " +
                              std::to_string(state.steps_capacity()));
        }
        break;
    }
}

}  // namespace

CoinField::CoinField(FieldKind kind, std::vector<double> angles)
    : kind_(kind), angles_(std::move(angles)) {
    cos_.reserve(angles_.size());
    sin_.reserve(angles_.size());
    for (double theta : angles_) {
        check_angle(theta, "CoinField");
        cos_.push_back(std::cos(theta));
        sin_.push_back(std::sin(theta));
    }
}

CoinField CoinField::uniform(double theta) { return CoinField(FieldKind::uniform, {theta}); }

CoinField CoinField::temporal(std::vector<double> theta_per_step) {
    return CoinField(FieldKind::temporal, std::move(theta_per_step));
}

CoinField CoinField::spatial(std::vector<double> theta_per_site) {
    if (theta_per_site.size() % 2 == 0) {
        throw ValidationError("CoinField: spatial field needs an odd number of sites, got " +
                              std::to_string(theta_per_site.size()));
    }
    return CoinField(FieldKind::spatial, std::move(theta_per_site));
}

int CoinField::steps() const noexcept {
    return kind_ == FieldKind::temporal ? static_cast<int>(angles_.size()) : 0;
}

int CoinField::steps_capacity() const noexcept {
    return kind_ == FieldKind::spatial ? static_cast<int>(angles_.size() / 2) : 0;
}

double CoinField::angle_at(int t, int x) const {
    switch (kind_) {
    case FieldKind::uniform:
        return angles_.front();
    case FieldKind::temporal:
        if (t < 0 || t >= steps()) {
            throw DomainError("CoinField: step " + std::to_string(t) + " out of range");
        }
        return angles_[static_cast<std::size_t>(t)];
    case FieldKind::spatial: {
        const int capacity = steps_capacity();
        if (x < -capacity || x > capacity) {
            throw DomainError("CoinField: site " + std::to_string(x) + " out of range");
        }
        return angles_[static_cast<std::size_t>(x + capacity)];
    }
    }
    return angles_.front();
}

void DisorderConfig::validate() const {
    if (!(strength >= 0.0 && strength <= 1.0)) {
        throw ValidationError("disorder.strength must lie in [0, 1], got " +
                              std::to_string(strength));
    }
    if (!(base_theta >= 0.0 && base_theta <= kMaxCoinAngle)) {
        throw ValidationError("disorder.base_theta must lie in [0, pi/2], got " +
                              std::to_string(base_theta));
    }
}

std::string_view to_string(DisorderKind kind) noexcept {
    switch (kind) {
    case DisorderKind::none: return "none";
    case DisorderKind::temporal: return "temporal";
    case DisorderKind::spatial: return "spatial";
    }
    return "none";
}

std::optional<DisorderKind> parse_disorder_kind(std::string_view name) noexcept {
    if (name == "none") return DisorderKind::none;
    if (name == "temporal") return DisorderKind::temporal;
    if (name == "spatial") return DisorderKind::spatial;
    return std::nullopt;
}

WalkState apply_coin(WalkState state, const CoinField& field, int t) {
    check_field_covers(field, state, t);
    auto up = state.up();
    auto down = state.down();
    const int n = state.lattice_size();
    const int capacity = state.steps_capacity();
    for (int i = 0; i < n; ++i) {
        const double theta = field.angle_at(t, i - capacity);
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        const Complex u = up[i];
        const Complex d = down[i];
        up[i] = detail::coin_row_up(c, s, u, d);
        down[i] = detail::coin_row_down(c, s, u, d);
    }
    return state;
}

WalkState apply_shift(const WalkState& state) {
    check_no_edge_support(state);
    WalkState out(state.steps_capacity());
    const auto up = state.up();
    const auto down = state.down();
    auto new_up = out.up();
    auto new_down = out.down();
    std::copy(up.begin(), up.end() - 1, new_up.begin() + 1);
    std::copy(down.begin() + 1, down.end(), new_down.begin());
    return out;
}

void step_into(WalkState& state, WalkState& scratch, const CoinField& field, int t) {
    check_field_covers(field, state, t);
    check_no_edge_support(state);
    if (scratch.steps_capacity() != state.steps_capacity()) {
        scratch = WalkState(state.steps_capacity());
    }
    const auto up = state.up();
    const auto down = state.down();
    auto new_up = scratch.up();
    auto new_down = scratch.down();
    const int n = state.lattice_size();
    new_up[0] = Complex{};
    new_down[n - 1] = Complex{};

    if (field.kind() == FieldKind::spatial) {
        // Site angles are offset when the field is wider than the lattice.
        const auto offset = static_cast<std::size_t>(field.steps_capacity() - state.steps_capacity());
        const auto cs = field.cosines().subspan(offset, static_cast<std::size_t>(n));
        const auto sn = field.sines().subspan(offset, static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static) if (n >= kParallelSiteThreshold)
        for (int i = 1; i < n; ++i) {
            new_up[i] = detail::coin_row_up(cs[i - 1], sn[i - 1], up[i - 1], down[i - 1]);
            new_down[i - 1] = detail::coin_row_down(cs[i], sn[i], up[i], down[i]);
        }
    } else {
        const double theta = field.angle_at(t, 0);
        const double c = std::cos(theta);
        const double s = std::sin(theta);
#pragma omp parallel for schedule(static) if (n >= kParallelSiteThreshold)
        for (int i = 1; i < n; ++i) {
            new_up[i] = detail::coin_row_up(c, s, up[i - 1], down[i - 1]);
            new_down[i - 1] = detail::coin_row_down(c, s, up[i], down[i]);
        }
    }
    std::swap(state, scratch);
}

WalkState step(const WalkState& state, const CoinField& field, int t) {
    WalkState next = state;
    WalkState scratch(state.steps_capacity());
    step_into(next, scratch, field, t);
    return next;
}

CoinField sample_coin_field(const DisorderConfig& cfg, int steps, Rng& rng) {
    cfg.validate();
    if (steps < 0) {
        throw DomainError("sample_coin_field: negative step count " + std::to_string(steps));
    }
    if (cfg.kind == DisorderKind::none) return CoinField::uniform(cfg.base_theta);

    const std::size_t slots = cfg.kind == DisorderKind::temporal
                                  ? static_cast<std::size_t>(steps)
                                  : static_cast<std::size_t>(2 * steps + 1);
    std::vector<double> angles(slots);
    for (double& theta : angles) {
        const double selector = rng.uniform();
        const double draw = rng.uniform();
        switch (cfg.distribution) {
        case AngleDistribution::uniform:
            theta = selector < cfg.strength ? draw * kMaxCoinAngle : cfg.base_theta;
            break;
        }
    }
    return cfg.kind == DisorderKind::temporal ? CoinField::temporal(std::move(angles))
                                              : CoinField::spatial(std::move(angles));
}

Trajectory evolve(const InitialStateSpec& spec, const CoinField& field, int steps) {
    Walker walker(spec, field, steps);
    Trajectory trajectory;
    trajectory.reserve(static_cast<std::size_t>(steps) + 1);
    trajectory.push_back(walker.state());
    while (!walker.done()) {
        walker.advance();
        trajectory.push_back(walker.state());
    }
    return trajectory;
}

Trajectory evolve(const InitialStateSpec& spec, const DisorderConfig& cfg, int steps, Rng& rng) {
    return evolve(spec, sample_coin_field(cfg, steps, rng), steps);
}

Trajectory evolve(const InitialStateSpec& spec, const DisorderConfig& cfg, int steps) {
    Rng rng(cfg.seed);
    return evolve(spec, cfg, steps, rng);
}

Walker::Walker(const InitialStateSpec& spec, CoinField field, int steps)
    : field_(std::move(field)),
      steps_(steps),
      state_(make_initial_state(spec, steps)),
      scratch_(steps) {
    if (field_.kind() == FieldKind::temporal && field_.steps() < steps) {
        throw DomainError("Walker: temporal field has " + std::to_string(field_.steps()) +
                          " steps, need " + std::to_string(steps));
    }
    if (field_.kind() == FieldKind::spatial && field_.steps_capacity() < steps) {
        throw DomainError("Walker: spatial field too narrow for " + std::to_string(steps) +
                          " steps");
    }
}

void Walker::advance() {
    if (done()) throw DomainError("Walker: all " + std::to_string(steps_) + " steps taken");
    step_into(state_, scratch_, field_, t_);
    ++t_;
}

namespace reference {

WalkState step(const WalkState& state, const CoinField& field, int t) {
    return apply_shift(apply_coin(state, field, t));
}

}  // namespace reference

}  // namespace qwalk
