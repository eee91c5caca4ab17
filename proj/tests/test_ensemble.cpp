#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>
#include <vector>

#include "qwalk/ensemble.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/measures.hpp"

using namespace qwalk;
using std::numbers::pi;

namespace {

ExperimentConfig small_config(DisorderKind kind, double p, int realizations = 20) {
    ExperimentConfig cfg;
    cfg.disorder.kind = kind;
    cfg.disorder.strength = p;
    cfg.steps = 30;
    cfg.realizations = realizations;
    cfg.master_seed = 4242;
    return cfg;
}

void check_identical(const std::optional<SeriesStats>& a, const std::optional<SeriesStats>& b) {
    REQUIRE(a.has_value() == b.has_value());
    if (!a) return;
    CHECK(a->mean == b->mean);
    CHECK(a->std_error == b->std_error);
}

void check_identical(const EnsembleStats& a, const EnsembleStats& b) {
    CHECK(a.realizations == b.realizations);
    check_identical(a.entropy, b.entropy);
    check_identical(a.coherence, b.coherence);
    check_identical(a.trace_distance, b.trace_distance);
    check_identical(a.backflow, b.backflow);
    check_identical(a.std_dev, b.std_dev);
    check_identical(a.distribution, b.distribution);
    REQUIRE(a.blp.has_value() == b.blp.has_value());
    if (a.blp) {
        CHECK(a.blp->mean == b.blp->mean);
        CHECK(a.blp->std_error == b.blp->std_error);
    }
}

}  // namespace

TEST_CASE("measure names round-trip") {
    for (Measure m : kAllMeasures) CHECK(parse_measure(to_string(m)) == m);
    CHECK_FALSE(parse_measure("purity").has_value());
}

TEST_CASE("ExperimentConfig validation") {
    ExperimentConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.realizations = 0;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg = {};
    cfg.steps = 0;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg = {};
    cfg.measures = {};
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg = {};
    cfg.disorder.strength = 1.5;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
}

TEST_CASE("run_trajectory_pair") {
    SUBCASE("no disorder: every index gives the same result") {
        const ExperimentConfig cfg = small_config(DisorderKind::spatial, 0.0);
        const RealizationResult first = run_trajectory_pair(cfg, 0);
        for (int i = 1; i < cfg.realizations; ++i) {
            const RealizationResult r = run_trajectory_pair(cfg, i);
            CHECK(r.trace_distance == first.trace_distance);
            CHECK(r.entropy == first.entropy);
            CHECK(r.blp == first.blp);
        }
    }
    SUBCASE("matches materialized trajectories and measure_trajectory") {
        const ExperimentConfig cfg = small_config(DisorderKind::temporal, 0.6);
        const RealizationResult r = run_trajectory_pair(cfg, 3);
        const CoinField field = realization_field(cfg, 3);
        const Trajectory a = evolve(cfg.initial, field, cfg.steps);
        const Trajectory b = evolve(cfg.initial2, field, cfg.steps);
        const TrajectoryMeasures m = measure_trajectory(a, &b);
        CHECK(r.entropy == m.entropy.values);
        CHECK(r.coherence == m.coherence.values);
        CHECK(r.std_dev == m.std_dev.values);
        CHECK(r.trace_distance == m.trace_distance->values);
        CHECK(r.backflow == m.backflow->values);
        CHECK(r.blp == *m.blp);
        CHECK(r.distribution == m.final_distribution);
    }
    SUBCASE("deterministic per index") {
        const ExperimentConfig cfg = small_config(DisorderKind::spatial, 1.0);
        const RealizationResult a = run_trajectory_pair(cfg, 5);
        const RealizationResult b = run_trajectory_pair(cfg, 5);
        CHECK(a.trace_distance == b.trace_distance);
        CHECK(a.std_dev == b.std_dev);
    }
    SUBCASE("unselected measures stay empty") {
        ExperimentConfig cfg = small_config(DisorderKind::spatial, 1.0);
        cfg.measures = {Measure::std_dev};
        const RealizationResult r = run_trajectory_pair(cfg, 0);
        CHECK(r.std_dev.size() == 31);
        CHECK(r.entropy.empty());
        CHECK(r.trace_distance.empty());
        CHECK(r.backflow.empty());
    }
    SUBCASE("index out of range") {
        const ExperimentConfig cfg = small_config(DisorderKind::spatial, 1.0, 3);
        CHECK_THROWS_AS(run_trajectory_pair(cfg, 3), DomainError);
        CHECK_THROWS_AS(run_trajectory_pair(cfg, -1), DomainError);
    }
}

TEST_CASE("seed splitting gives distinct fields across 10^4 realizations") {
    ExperimentConfig cfg = small_config(DisorderKind::spatial, 1.0, 10000);
    cfg.steps = 2;
    std::set<std::vector<double>> fields;
    std::set<std::uint64_t> seeds;
    for (int i = 0; i < cfg.realizations; ++i) {
        const CoinField field = realization_field(cfg, i);
        const auto angles = field.angles();
        fields.emplace(angles.begin(), angles.end());
        seeds.insert(child_seed(cfg.master_seed, static_cast<std::uint64_t>(i)));
    }
    CHECK(fields.size() == 10000);
    CHECK(seeds.size() == 10000);
}

TEST_CASE("summarize") {
    const ScalarStats constant = summarize(std::vector<double>(100, 0.1));
    CHECK(constant.mean == 0.1);
    CHECK(constant.std_error == 0.0);
    const ScalarStats single = summarize(std::vector<double>{3.5});
    CHECK(single.mean == 3.5);
    CHECK(single.std_error == 0.0);
    const ScalarStats s = summarize(std::vector<double>{1.0, 2.0, 3.0, 4.0});
    CHECK(s.mean == doctest::Approx(2.5));
    CHECK(s.std_error == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
}

TEST_CASE("run_ensemble") {
    SUBCASE("one realization equals that realization") {
        const ExperimentConfig cfg = small_config(DisorderKind::temporal, 1.0, 1);
        const EnsembleStats stats = run_ensemble(cfg);
        const RealizationResult r = run_trajectory_pair(cfg, 0);
        CHECK(stats.realizations == 1);
        CHECK(stats.entropy->mean == r.entropy);
        CHECK(stats.blp->mean == r.blp);
        CHECK(stats.blp->std_error == 0.0);
        for (double e : stats.std_dev->std_error) CHECK(e == 0.0);
    }
    SUBCASE("no disorder: mean is the ordered value with zero error") {
        const ExperimentConfig cfg = small_config(DisorderKind::spatial, 0.0, 100);
        const EnsembleStats stats = run_ensemble(cfg);
        const RealizationResult ordered = run_trajectory_pair(cfg, 0);
        CHECK(stats.blp->mean == ordered.blp);
        CHECK(stats.blp->std_error == 0.0);
        CHECK(stats.std_dev->mean == ordered.std_dev);
        for (double e : stats.trace_distance->std_error) CHECK(e == 0.0);
    }
    SUBCASE("worker count does not change results") {
        const ExperimentConfig cfg = small_config(DisorderKind::spatial, 0.7, 37);
        check_identical(run_ensemble(cfg, 1), run_ensemble(cfg, 4));
        check_identical(run_ensemble(cfg, 3), run_ensemble(cfg, 8));
    }
    SUBCASE("backflow series ends at the BLP mean") {
        const EnsembleStats stats = run_ensemble(small_config(DisorderKind::temporal, 0.5));
        CHECK(stats.backflow->mean.back() == doctest::Approx(stats.blp->mean).epsilon(1e-14));
    }
    SUBCASE("bad worker count") {
        CHECK_THROWS_AS(run_ensemble(small_config(DisorderKind::none, 0.0), 0), ValidationError);
    }
}

TEST_CASE("standard error shrinks as 1/sqrt(R)") {
    const EnsembleStats small = run_ensemble(small_config(DisorderKind::temporal, 1.0, 200));
    const EnsembleStats large = run_ensemble(small_config(DisorderKind::temporal, 1.0, 800));
    const double ratio = small.blp->std_error / large.blp->std_error;
    CHECK(ratio > 1.6);
    CHECK(ratio < 2.5);
    const double sigma_ratio = small.std_dev->std_error.back() / large.std_dev->std_error.back();
    CHECK(sigma_ratio > 1.6);
    CHECK(sigma_ratio < 2.5);
}

TEST_CASE("sweep") {
    SUBCASE("single point equals run_ensemble") {
        const ExperimentConfig cfg = small_config(DisorderKind::spatial, 0.4);
        const std::vector<SweepPoint> grid{{{}, cfg}};
        const auto rows = sweep(grid);
        REQUIRE(rows.size() == 1);
        check_identical(rows[0].stats, run_ensemble(cfg));
    }
    SUBCASE("zero-strength rows equal the ordered walk") {
        const ExperimentConfig base = small_config(DisorderKind::temporal, 0.0, 10);
        const std::vector<double> strengths{0.0, 0.5, 1.0};
        const auto rows = sweep(make_grid(base, SweepParameter::strength, strengths));
        REQUIRE(rows.size() == 3);
        CHECK(rows[0].keys.front().first == "p");
        ExperimentConfig ordered = base;
        ordered.disorder.kind = DisorderKind::none;
        ordered.realizations = 1;
        const EnsembleStats reference = run_ensemble(ordered);
        CHECK(rows[0].stats.blp->mean == reference.blp->mean);
        CHECK(rows[0].stats.std_dev->mean == reference.std_dev->mean);
        CHECK(rows[0].stats.blp->std_error == 0.0);
        CHECK(rows[2].stats.blp->std_error > 0.0);
    }
    SUBCASE("theta and steps grids") {
        ExperimentConfig base = small_config(DisorderKind::none, 0.0, 1);
        const std::vector<double> thetas{pi / 12, pi / 6};
        const auto rows = sweep(make_grid(base, SweepParameter::theta, thetas));
        CHECK(rows[1].keys.front() == std::pair<std::string, double>{"theta", pi / 6});
        const std::vector<double> steps{5, 9};
        const auto by_steps = sweep(make_grid(base, SweepParameter::steps, steps));
        CHECK(by_steps[1].stats.entropy->mean.size() == 10);
    }
    SUBCASE("schedule independence") {
        const ExperimentConfig base = small_config(DisorderKind::spatial, 0.0, 12);
        const std::vector<double> strengths{0.2, 0.9};
        const auto a = sweep(make_grid(base, SweepParameter::strength, strengths), 1);
        const auto b = sweep(make_grid(base, SweepParameter::strength, strengths), 5);
        for (std::size_t i = 0; i < a.size(); ++i) check_identical(a[i].stats, b[i].stats);
    }
    SUBCASE("empty grid") {
        CHECK_THROWS_AS(sweep(std::vector<SweepPoint>{}), DomainError);
    }
}
