#pragma once

#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qwalk/core_state.hpp"
#include "qwalk/evolution.hpp"

namespace qwalk {

enum class Measure { entropy, coherence, trace_distance, blp, std_dev, distribution };

inline constexpr Measure kAllMeasures[] = {Measure::entropy,  Measure::coherence,
                                           Measure::trace_distance, Measure::blp,
                                           Measure::std_dev,  Measure::distribution};

std::string_view to_string(Measure m) noexcept;
std::optional<Measure> parse_measure(std::string_view name) noexcept;

class MeasureSet {
public:
    MeasureSet() = default;
    MeasureSet(std::initializer_list<Measure> measures) {
        for (Measure m : measures) insert(m);
    }
    static MeasureSet all() {
        MeasureSet s;
        for (Measure m : kAllMeasures) s.insert(m);
        return s;
    }

    void insert(Measure m) noexcept { bits_ |= bit(m); }
    bool contains(Measure m) const noexcept { return (bits_ & bit(m)) != 0; }
    bool empty() const noexcept { return bits_ == 0; }
    // Trace distance and BLP both need the second trajectory.
    bool needs_pair() const noexcept {
        return contains(Measure::trace_distance) || contains(Measure::blp);
    }

    friend bool operator==(const MeasureSet&, const MeasureSet&) = default;

private:
    static unsigned bit(Measure m) noexcept { return 1U << static_cast<unsigned>(m); }
    unsigned bits_ = 0;
};

inline constexpr int kDefaultSteps = 200;
inline constexpr int kDefaultRealizations = 1000;

// Initial coin state psi(delta, eta) = cos(delta)|up> + exp(-i eta) sin(delta)|down>.
inline InitialStateSpec psi(double delta, double eta) { return {delta, eta, 0}; }

struct ExperimentConfig {
    InitialStateSpec initial = psi(std::numbers::pi / 4, std::numbers::pi / 2);
    InitialStateSpec initial2 = psi(-std::numbers::pi / 4, std::numbers::pi / 2);
    DisorderConfig disorder;
    int steps = kDefaultSteps;
    int realizations = kDefaultRealizations;
    std::uint64_t master_seed = 0;
    MeasureSet measures = MeasureSet::all();

    void validate() const;
};

// Values from one disorder realization. Series hold T+1 entries; unselected
// measures are left empty.
struct RealizationResult {
    std::vector<double> entropy;
    std::vector<double> coherence;
    std::vector<double> trace_distance;
    std::vector<double> backflow;
    std::vector<double> std_dev;
    std::vector<double> distribution;
    double blp = 0.0;
};

struct SeriesStats {
    std::vector<double> mean;
    std::vector<double> std_error;
};

struct ScalarStats {
    double mean = 0.0;
    double std_error = 0.0;
};

struct EnsembleStats {
    int realizations = 0;
    std::optional<SeriesStats> entropy;
    std::optional<SeriesStats> coherence;
    std::optional<SeriesStats> trace_distance;
    // Cumulative backflow N(t); the last mean equals blp.mean.
    std::optional<SeriesStats> backflow;
    std::optional<SeriesStats> std_dev;
    // Mean P(x, T) over sites -T..T.
    std::optional<SeriesStats> distribution;
    std::optional<ScalarStats> blp;
};

// Evolves both initial states under the field of realization `index`, whose
// generator is seeded with child_seed(master_seed, index).
RealizationResult run_trajectory_pair(const ExperimentConfig& cfg, int index);

// Coin field used by realization `index`.
CoinField realization_field(const ExperimentConfig& cfg, int index);

// Averages `cfg.realizations` realizations using up to `workers` threads.
// Results are reduced in index order, so they do not depend on `workers`.
EnsembleStats run_ensemble(const ExperimentConfig& cfg, int workers = 1);

// Mean and standard error (sample std / sqrt(n)) of values in index order.
// Identical inputs give their common value and exactly zero error.
ScalarStats summarize(std::span<const double> values);

struct SweepPoint {
    std::vector<std::pair<std::string, double>> keys;
    ExperimentConfig config;
};

struct SweepRow {
    std::vector<std::pair<std::string, double>> keys;
    EnsembleStats stats;
};

enum class SweepParameter { theta, strength, steps };

// One point per value, each a copy of `base` with the parameter replaced.
std::vector<SweepPoint> make_grid(const ExperimentConfig& base, SweepParameter parameter,
                                  std::span<const double> values);

std::vector<SweepRow> sweep(std::span<const SweepPoint> grid, int workers = 1);

}  // namespace qwalk
