#include "qwalk/measures.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qwalk/errors.hpp"

namespace qwalk {

namespace {

double clamp_floor(double lambda) {
    if (lambda < -1e-8) {
        throw ValidationError("entropy: eigenvalue " + std::to_string(lambda) +
                              " is negative, not a density matrix");
    }
    return lambda < 0.0 ? 0.0 : lambda;
}

double plogp(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

}  // namespace

double entropy(const ReducedCoinState& rho) {
    const auto [larger, smaller] = eig_hermitian_2x2(rho.matrix());
    const double s = -(plogp(clamp_floor(larger)) + plogp(clamp_floor(smaller)));
    return std::clamp(s, 0.0, 1.0);
}

double coherence(const ReducedCoinState& rho) {
    const Matrix2& m = rho.matrix();
    return std::abs(m.m01) + std::abs(m.m10);
}

double trace_distance(const ReducedCoinState& rho1, const ReducedCoinState& rho2) {
    // Delta is traceless Hermitian with eigenvalues +-sqrt(a^2 + |b|^2).
    const Matrix2 delta = rho1.matrix() - rho2.matrix();
    const double a = 0.5 * (delta.m00.real() - delta.m11.real());
    const Complex b = 0.5 * (delta.m01 + std::conj(delta.m10));
    return std::hypot(a, std::abs(b));
}

double blp_measure(std::span<const double> distance) {
    if (distance.size() < 2) {
        throw DomainError("blp_measure: need at least 2 samples, got " +
                          std::to_string(distance.size()));
    }
    double total = 0.0;
    for (std::size_t t = 1; t < distance.size(); ++t) {
        total += std::max(0.0, distance[t] - distance[t - 1]);
    }
    return total;
}

std::vector<double> cumulative_backflow(std::span<const double> distance) {
    if (distance.size() < 2) {
        throw DomainError("cumulative_backflow: need at least 2 samples, got " +
                          std::to_string(distance.size()));
    }
    std::vector<double> out(distance.size(), 0.0);
    for (std::size_t t = 1; t < distance.size(); ++t) {
        out[t] = out[t - 1] + std::max(0.0, distance[t] - distance[t - 1]);
    }
    return out;
}

std::vector<double> position_distribution(const WalkState& state) {
    const auto up = state.up();
    const auto down = state.down();
    std::vector<double> p(up.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::norm(up[i]) + std::norm(down[i]);
    return p;
}

double std_dev(std::span<const double> probabilities) {
    if (probabilities.size() % 2 == 0) {
        throw DomainError("std_dev: distribution must span an odd number of sites");
    }
    const int capacity = static_cast<int>(probabilities.size() / 2);
    double total = 0.0;
    double first = 0.0;
    double second = 0.0;
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
        const double x = static_cast<double>(static_cast<int>(i) - capacity);
        total += probabilities[i];
        first += x * probabilities[i];
        second += x * x * probabilities[i];
    }
    if (std::abs(total - 1.0) > 1e-8) {
        throw ValidationError("std_dev: probabilities sum to " + std::to_string(total));
    }
    const double variance = second - first * first;
    if (variance < -1e-12) {
        throw NumericalError("std_dev: negative variance " + std::to_string(variance));
    }
    return variance > 0.0 ? std::sqrt(variance) : 0.0;
}

double pure_state_distance(const WalkState& a, const WalkState& b) {
    if (a.steps_capacity() != b.steps_capacity()) {
        throw DomainError("pure_state_distance: lattices differ");
    }
    const auto x = a.amplitudes();
    const auto y = b.amplitudes();
    Complex overlap{};
    for (std::size_t i = 0; i < x.size(); ++i) overlap += std::conj(x[i]) * y[i];
    return std::sqrt(std::max(0.0, 1.0 - std::norm(overlap)));
}

TrajectoryMeasures measure_trajectory(const Trajectory& trajectory, const Trajectory* pair) {
    if (trajectory.empty()) throw DomainError("measure_trajectory: empty trajectory");
    if (pair != nullptr && pair->size() != trajectory.size()) {
        throw DomainError("measure_trajectory: trajectories have " +
                          std::to_string(trajectory.size()) + " and " +
                          std::to_string(pair->size()) + " states");
    }
    const std::size_t count = trajectory.size();
    TrajectoryMeasures out{{"entropy", {}}, {"coherence", {}}, {"std_dev", {}}, {}, {}, {}, {}};
    out.entropy.values.reserve(count);
    out.coherence.values.reserve(count);
    out.std_dev.values.reserve(count);
    std::vector<double> distance;
    if (pair != nullptr) distance.reserve(count);

    for (std::size_t t = 0; t < count; ++t) {
        const auto rho = partial_trace_coin(trajectory[t]);
        out.entropy.values.push_back(entropy(rho));
        out.coherence.values.push_back(coherence(rho));
        out.std_dev.values.push_back(std_dev(position_distribution(trajectory[t])));
        if (pair != nullptr) {
            distance.push_back(trace_distance(rho, partial_trace_coin((*pair)[t])));
        }
    }
    out.final_distribution = position_distribution(trajectory.back());
    if (pair != nullptr) {
        if (count >= 2) {
            out.backflow = MeasureSeries{"backflow", cumulative_backflow(distance)};
            out.blp = out.backflow->values.back();
        } else {
            out.backflow = MeasureSeries{"backflow", {0.0}};
            out.blp = 0.0;
        }
        out.trace_distance = MeasureSeries{"trace_distance", std::move(distance)};
    }
    return out;
}

}  // namespace qwalk
