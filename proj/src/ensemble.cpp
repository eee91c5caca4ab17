#include "qwalk/ensemble.hpp"

#include <cmath>
#include <exception>
#include <string>

#include "qwalk/errors.hpp"
#include "qwalk/measures.hpp"

namespace qwalk {

std::string_view to_string(Measure m) noexcept {
    switch (m) {
    case Measure::entropy: return "entropy";
    case Measure::coherence: return "coherence";
    case Measure::trace_distance: return "trace_distance";
    case Measure::blp: return "blp";
    case Measure::std_dev: return "std_dev";
    case Measure::distribution: return "distribution";
    }
    return "entropy";
}

std::optional<Measure> parse_measure(std::string_view name) noexcept {
    for (Measure m : kAllMeasures) {
        if (to_string(m) == name) return m;
    }
    return std::nullopt;
}

void ExperimentConfig::validate() const {
    if (steps < 1) throw ValidationError("steps must be >= 1, got " + std::to_string(steps));
    if (realizations < 1) {
        throw ValidationError("realizations must be >= 1, got " + std::to_string(realizations));
    }
    if (measures.empty()) throw ValidationError("measures must not be empty");
    if (initial.origin != 0 || initial2.origin != 0) {
        throw ValidationError("initial states must start at the origin");
    }
    disorder.validate();
}

CoinField realization_field(const ExperimentConfig& cfg, int index) {
    if (index < 0 || index >= cfg.realizations) {
        throw DomainError("realization index " + std::to_string(index) + " outside [0, " +
                          std::to_string(cfg.realizations) + ")");
    }
    Rng rng(child_seed(cfg.master_seed, static_cast<std::uint64_t>(index)));
    return sample_coin_field(cfg.disorder, cfg.steps, rng);
}

RealizationResult run_trajectory_pair(const ExperimentConfig& cfg, int index) {
    cfg.validate();
    const MeasureSet& want = cfg.measures;
    const bool paired = want.needs_pair();
    CoinField field = realization_field(cfg, index);

    // Both walkers stream the same field; nothing but the current states is kept.
    std::optional<Walker> second;
    if (paired) second.emplace(cfg.initial2, field, cfg.steps);
    Walker first(cfg.initial, std::move(field), cfg.steps);

    RealizationResult out;
    const auto count = static_cast<std::size_t>(cfg.steps) + 1;
    std::vector<double> distance;
    if (paired) distance.reserve(count);
    for (;;) {
        const auto rho = partial_trace_coin(first.state());
        if (want.contains(Measure::entropy)) out.entropy.push_back(entropy(rho));
        if (want.contains(Measure::coherence)) out.coherence.push_back(coherence(rho));
        if (want.contains(Measure::std_dev)) {
            out.std_dev.push_back(std_dev(position_distribution(first.state())));
        }
        if (paired) distance.push_back(trace_distance(rho, partial_trace_coin(second->state())));
        if (first.done()) break;
        first.advance();
        if (paired) second->advance();
    }
    if (want.contains(Measure::distribution)) out.distribution = position_distribution(first.state());
    if (want.contains(Measure::blp)) {
        out.backflow = cumulative_backflow(distance);
        out.blp = out.backflow.back();
    }
    if (want.contains(Measure::trace_distance)) out.trace_distance = std::move(distance);
    return out;
}

ScalarStats summarize(std::span<const double> values) {
    if (values.empty()) return {};
    // Shifted by the first sample so that a constant column is reproduced exactly.
    const double shift = values.front();
    double offset_sum = 0.0;
    for (double v : values) offset_sum += v - shift;
    const auto n = static_cast<double>(values.size());
    const double mean = shift + offset_sum / n;
    if (values.size() < 2) return {mean, 0.0};
    double squares = 0.0;
    for (double v : values) squares += (v - mean) * (v - mean);
    return {mean, std::sqrt(squares / (n - 1.0) / n)};
}

namespace {

SeriesStats summarize_series(const std::vector<RealizationResult>& results,
                             std::vector<double> RealizationResult::*member) {
    const std::size_t length = (results.front().*member).size();
    SeriesStats stats{std::vector<double>(length), std::vector<double>(length)};
    std::vector<double> column(results.size());
    for (std::size_t t = 0; t < length; ++t) {
        for (std::size_t r = 0; r < results.size(); ++r) column[r] = (results[r].*member)[t];
        const ScalarStats s = summarize(column);
        stats.mean[t] = s.mean;
        stats.std_error[t] = s.std_error;
    }
    return stats;
}

}  // namespace

EnsembleStats run_ensemble(const ExperimentConfig& cfg, int workers) {
    cfg.validate();
    if (workers < 1) throw ValidationError("workers must be >= 1, got " + std::to_string(workers));

    const int count = cfg.realizations;
    std::vector<RealizationResult> results(static_cast<std::size_t>(count));
    std::vector<std::string> failures(static_cast<std::size_t>(count));

#pragma omp parallel for schedule(dynamic) num_threads(workers)
    for (int i = 0; i < count; ++i) {
        try {
            results[static_cast<std::size_t>(i)] = run_trajectory_pair(cfg, i);
        } catch (const std::exception& e) {
            failures[static_cast<std::size_t>(i)] = e.what();
        }
    }
    for (int i = 0; i < count; ++i) {
        if (!failures[static_cast<std::size_t>(i)].empty()) {
            throw NumericalError("realization " + std::to_string(i) + " failed: " +
                                 failures[static_cast<std::size_t>(i)]);
        }
    }

    EnsembleStats stats;
    stats.realizations = count;
    const MeasureSet& want = cfg.measures;
    if (want.contains(Measure::entropy)) {
        stats.entropy = summarize_series(results, &RealizationResult::entropy);
    }
    if (want.contains(Measure::coherence)) {
        stats.coherence = summarize_series(results, &RealizationResult::coherence);
    }
    if (want.contains(Measure::trace_distance)) {
        stats.trace_distance = summarize_series(results, &RealizationResult::trace_distance);
    }
    if (want.contains(Measure::std_dev)) {
        stats.std_dev = summarize_series(results, &RealizationResult::std_dev);
    }
    if (want.contains(Measure::distribution)) {
        stats.distribution = summarize_series(results, &RealizationResult::distribution);
    }
    if (want.contains(Measure::blp)) {
        stats.backflow = summarize_series(results, &RealizationResult::backflow);
        std::vector<double> scalar(results.size());
        for (std::size_t r = 0; r < results.size(); ++r) scalar[r] = results[r].blp;
        stats.blp = summarize(scalar);
    }
    return stats;
}

std::vector<SweepPoint> make_grid(const ExperimentConfig& base, SweepParameter parameter,
                                  std::span<const double> values) {
    std::vector<SweepPoint> grid;
    grid.reserve(values.size());
    for (double value : values) {
        SweepPoint point{{}, base};
        switch (parameter) {
        case SweepParameter::theta:
            point.keys.emplace_back("theta", value);
            point.config.disorder.base_theta = value;
            break;
        case SweepParameter::strength:
            point.keys.emplace_back("p", value);
            point.config.disorder.strength = value;
            break;
        case SweepParameter::steps:
            point.keys.emplace_back("steps", value);
            point.config.steps = static_cast<int>(value);
            break;
        }
        grid.push_back(std::move(point));
    }
    return grid;
}

std::vector<SweepRow> sweep(std::span<const SweepPoint> grid, int workers) {
    if (grid.empty()) throw DomainError("sweep: empty grid");
    std::vector<SweepRow> rows;
    rows.reserve(grid.size());
    for (const SweepPoint& point : grid) rows.push_back({point.keys, run_ensemble(point.config, workers)});
    return rows;
}

}  // namespace qwalk
