#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qwalk/core_state.hpp"
#include "qwalk/evolution.hpp"

namespace qwalk {

// A per-step quantity, values[t] for t = 0..T.
struct MeasureSeries {
    std::string name;
    std::vector<double> values;
};

// Von Neumann entropy of the coin in bits, -sum lambda log2 lambda.
double entropy(const ReducedCoinState& rho);

// l1 coherence, |rho01| + |rho10|.
double coherence(const ReducedCoinState& rho);

// Half the trace norm of rho1 - rho2.
double trace_distance(const ReducedCoinState& rho1, const ReducedCoinState& rho2);

// Summed positive increments of a trace-distance series.
double blp_measure(std::span<const double> distance);

// Running total of the positive increments; entry t covers steps up to t and
// the last entry equals blp_measure.
std::vector<double> cumulative_backflow(std::span<const double> distance);

// P(x) over sites -T..T.
std::vector<double> position_distribution(const WalkState& state);

// Spread of a distribution over sites -T..T, sqrt(<x^2> - <x>^2).
double std_dev(std::span<const double> probabilities);

// Full-state trace distance sqrt(1 - |<a|b>|^2) between two pure states.
double pure_state_distance(const WalkState& a, const WalkState& b);

struct TrajectoryMeasures {
    MeasureSeries entropy;
    MeasureSeries coherence;
    MeasureSeries std_dev;
    std::vector<double> final_distribution;
    // Present only when a second trajectory was supplied.
    std::optional<MeasureSeries> trace_distance;
    std::optional<MeasureSeries> backflow;
    std::optional<double> blp;
};

// Diagnostics of `trajectory`, plus trace distance and backflow against
// `pair` when given. Both must be evolved under the same coin field.
TrajectoryMeasures measure_trajectory(const Trajectory& trajectory,
                                      const Trajectory* pair = nullptr);

}  // namespace qwalk
