#include "qwalk/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <numbers>
#include <sstream>

#include "qwalk/measures.hpp"
#include "qwalk/output.hpp"

namespace qwalk {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr double kPi = std::numbers::pi;

constexpr PresetInfo kPresets[] = {
    {"fig1a", "ordered walk, S(t), I(t) of psi(pi/4,0) and D(t) of psi(+-pi/4,0)"},
    {"fig1b", "ordered walk, S(t), I(t) of psi(pi/4,pi/2) and D(t) of psi(+-pi/4,pi/2)"},
    {"fig2", "ordered walk, BLP measure and interference at T versus coin angle"},
    {"fig3a", "cumulative backflow N(t), ordered/temporal/spatial, pair psi(+-pi/4,0)"},
    {"fig3b", "cumulative backflow N(t), ordered/temporal/spatial, pair psi(+-pi/4,pi/2)"},
    {"fig4", "position spread and BLP measure at T versus disorder strength"},
    {"fig5", "coin entropy at T versus disorder strength"},
    {"pdist", "position distributions at T and histograms of sampled coin angles"},
};

std::string hex64(std::uint64_t v) {
    char buffer[20];
    std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(v));
    return buffer;
}

std::string utc_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buffer[32];
    std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buffer;
}

std::string label_number(double v) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%g", v);
    return buffer;
}

std::vector<double> index_column(std::size_t count, int first = 0) {
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = static_cast<double>(first + static_cast<int>(i));
    return out;
}

// Output sink for one run: writes files and keeps the manifest in step.
class Session {
public:
    Session(RunManifest& manifest, const fs::path& outdir) : manifest_(manifest) {
        std::error_code ec;
        fs::create_directories(outdir, ec);
        if (ec || !fs::is_directory(outdir)) {
            throw std::runtime_error("cannot create output directory " + outdir.string() +
                                     (ec ? ": " + ec.message() : ""));
        }
        manifest_.output_dir = outdir;
        manifest_.started_at = utc_now();
        start_ = std::chrono::steady_clock::now();
    }

    void record(const std::string& label, const ExperimentConfig& cfg) {
        manifest_.resolved.push_back({{"label", label}, {"config", to_json(RunConfig{cfg, {}})}});
    }

    void csv(const std::string& name, const Table& table) { emit(name, to_csv(table)); }

    void svg(const std::string& name, std::span<const PlotSeries> series, const PlotStyle& style) {
        emit(name, render_svg(series, style));
    }

    void finish() {
        manifest_.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        write_text(manifest_.output_dir / "manifest.json", manifest_.to_json().dump(2) + "\n");
    }

private:
    void emit(const std::string& name, const std::string& contents) {
        write_text(manifest_.output_dir / name, contents);
        manifest_.files.push_back(name);
        manifest_.checksums.push_back(hex64(fnv1a64(contents)));
    }

    RunManifest& manifest_;
    std::chrono::steady_clock::time_point start_;
};

struct PresetContext {
    const Overrides& overrides;
    Session& session;
    RunManifest& manifest;

    int steps() const { return overrides.steps.value_or(kDefaultSteps); }
    int realizations() const { return overrides.realizations.value_or(kDefaultRealizations); }
    std::uint64_t seed() const { return overrides.seed.value_or(kDefaultSeed); }
    double theta() const {
        return overrides.theta ? overrides.theta->front() : kDefaultBaseTheta;
    }
    std::vector<double> strength_grid(std::vector<double> fallback) const {
        return overrides.strength ? *overrides.strength : std::move(fallback);
    }

    ExperimentConfig base(double eta, MeasureSet measures) const {
        ExperimentConfig cfg;
        cfg.initial = psi(kPi / 4, eta);
        cfg.initial2 = psi(-kPi / 4, eta);
        cfg.disorder.base_theta = theta();
        cfg.steps = steps();
        cfg.realizations = realizations();
        cfg.master_seed = seed();
        cfg.measures = measures;
        return cfg;
    }

    ExperimentConfig ordered(double eta, MeasureSet measures) const {
        ExperimentConfig cfg = base(eta, measures);
        cfg.realizations = 1;
        return cfg;
    }

    ExperimentConfig disordered(double eta, MeasureSet measures, DisorderKind kind,
                                double strength) const {
        ExperimentConfig cfg = base(eta, measures);
        cfg.disorder.kind = kind;
        cfg.disorder.strength = strength;
        return cfg;
    }

    EnsembleStats run(const std::string& label, const ExperimentConfig& cfg) const {
        session.record(label, cfg);
        return run_ensemble(cfg, overrides.workers);
    }

    std::vector<double> time_axis() const { return index_column(static_cast<std::size_t>(steps()) + 1); }
};

void fig1(PresetContext& ctx, const std::string& name, double eta) {
    const ExperimentConfig cfg =
        ctx.ordered(eta, {Measure::entropy, Measure::coherence, Measure::trace_distance,
                          Measure::blp});
    const EnsembleStats stats = ctx.run(name, cfg);
    const Table table{{{"t", ctx.time_axis(), true},
                       {"S", stats.entropy->mean},
                       {"I", stats.coherence->mean},
                       {"D", stats.trace_distance->mean}}};
    ctx.session.csv(name + ".csv", table);
    ctx.manifest.summary = {{"blp", stats.blp->mean}};
    if (ctx.overrides.svg) {
        const std::vector<PlotSeries> series{{"S(t)", table.columns[0].values, stats.entropy->mean, {}},
                                             {"I(t)", table.columns[0].values, stats.coherence->mean, {}},
                                             {"D(t)", table.columns[0].values, stats.trace_distance->mean, {}}};
        ctx.session.svg(name + ".svg", series, {name + ": ordered walk", "t", "value"});
    }
}

void fig2(PresetContext& ctx) {
    std::vector<double> grid;
    if (ctx.overrides.theta) {
        grid = *ctx.overrides.theta;
    } else {
        for (int k = 1; k <= 10; ++k) grid.push_back(k * kPi / 24);
    }
    Table table{{{"theta", {}}, {"N", {}}, {"I", {}}}};
    for (double theta : grid) {
        ExperimentConfig cfg = ctx.ordered(0.0, {Measure::coherence, Measure::blp});
        cfg.disorder.base_theta = theta;
        const EnsembleStats stats = ctx.run("fig2/theta=" + label_number(theta), cfg);
        table.columns[0].values.push_back(theta);
        table.columns[1].values.push_back(stats.blp->mean);
        table.columns[2].values.push_back(stats.coherence->mean.back());
    }
    ctx.session.csv("fig2.csv", table);
    if (ctx.overrides.svg) {
        const std::vector<PlotSeries> series{{"N", grid, table.columns[1].values, {}},
                                             {"I(T)", grid, table.columns[2].values, {}}};
        ctx.session.svg("fig2.svg", series, {"fig2: ordered walk at T", "theta", "value"});
    }
}

void fig3(PresetContext& ctx, const std::string& name, double eta) {
    const double strength = ctx.overrides.strength ? ctx.overrides.strength->front() : 1.0;
    const MeasureSet measures{Measure::blp};
    const EnsembleStats ordered = ctx.run(name + "/ordered", ctx.ordered(eta, measures));
    const EnsembleStats temporal =
        ctx.run(name + "/temporal", ctx.disordered(eta, measures, DisorderKind::temporal, strength));
    const EnsembleStats spatial =
        ctx.run(name + "/spatial", ctx.disordered(eta, measures, DisorderKind::spatial, strength));
    const Table table{{{"t", ctx.time_axis(), true},
                       {"ordered", ordered.backflow->mean},
                       {"temporal_mean", temporal.backflow->mean},
                       {"temporal_stderr", temporal.backflow->std_error},
                       {"spatial_mean", spatial.backflow->mean},
                       {"spatial_stderr", spatial.backflow->std_error}}};
    ctx.session.csv(name + ".csv", table);
    ctx.manifest.summary = {
        {"ordered", ordered.blp->mean},
        {"temporal", {{"mean", temporal.blp->mean}, {"stderr", temporal.blp->std_error}}},
        {"spatial", {{"mean", spatial.blp->mean}, {"stderr", spatial.blp->std_error}}}};
    if (ctx.overrides.svg) {
        const auto& t = table.columns[0].values;
        const std::vector<PlotSeries> series{
            {"ordered", t, ordered.backflow->mean, {}},
            {"temporal", t, temporal.backflow->mean, temporal.backflow->std_error},
            {"spatial", t, spatial.backflow->mean, spatial.backflow->std_error}};
        ctx.session.svg(name + ".svg", series, {name + ": cumulative backflow", "t", "N(t)"});
    }
}

// Disorder-strength sweep for both kinds; `pick` reduces a row to one scalar.
template <typename Pick>
void strength_table(PresetContext& ctx, const std::string& name, const ExperimentConfig& base,
                     std::span<const double> grid, const std::vector<Pick>& picks,
                     std::vector<Table>& out_tables) {
    out_tables.assign(picks.size(), Table{{{"p", {}},
                                           {"temporal_mean", {}},
                                           {"temporal_stderr", {}},
                                           {"spatial_mean", {}},
                                           {"spatial_stderr", {}}}});
    for (double p : grid) {
        for (auto& table : out_tables) table.columns[0].values.push_back(p);
        int column = 1;
        for (DisorderKind kind : {DisorderKind::temporal, DisorderKind::spatial}) {
            ExperimentConfig cfg = base;
            cfg.disorder.kind = kind;
            cfg.disorder.strength = p;
            const EnsembleStats stats = ctx.run(
                name + "/" + std::string(to_string(kind)) + "/p=" + label_number(p), cfg);
            for (std::size_t k = 0; k < picks.size(); ++k) {
                const ScalarStats s = picks[k](stats);
                out_tables[k].columns[column].values.push_back(s.mean);
                out_tables[k].columns[column + 1].values.push_back(s.std_error);
            }
            column += 2;
        }
    }
}

void strength_svg(PresetContext& ctx, const std::string& file, const Table& table,
                  const std::string& title, const std::string& y_label) {
    const auto& p = table.columns[0].values;
    const std::vector<PlotSeries> series{
        {"temporal", p, table.columns[1].values, table.columns[2].values},
        {"spatial", p, table.columns[3].values, table.columns[4].values}};
    PlotStyle style{title, "disorder strength p", y_label};
    style.error_bar_stride = 1;
    ctx.session.svg(file, series, style);
}

std::vector<double> tenths() {
    std::vector<double> grid;
    for (int k = 0; k <= 10; ++k) grid.push_back(k / 10.0);
    return grid;
}

using Pick = ScalarStats (*)(const EnsembleStats&);

ScalarStats final_value(const SeriesStats& s) { return {s.mean.back(), s.std_error.back()}; }

void fig4(PresetContext& ctx) {
    const std::vector<double> grid = ctx.strength_grid(tenths());
    const ExperimentConfig base = ctx.base(0.0, {Measure::std_dev, Measure::blp});
    const std::vector<Pick> picks{[](const EnsembleStats& s) { return final_value(*s.std_dev); },
                                  [](const EnsembleStats& s) { return *s.blp; }};
    std::vector<Table> tables;
    strength_table(ctx, "fig4", base, grid, picks, tables);
    ctx.session.csv("fig4_sigma.csv", tables[0]);
    ctx.session.csv("fig4_blp.csv", tables[1]);
    if (ctx.overrides.svg) {
        strength_svg(ctx, "fig4_sigma.svg", tables[0], "fig4: position spread at T", "sigma");
        strength_svg(ctx, "fig4_blp.svg", tables[1], "fig4: BLP measure", "N");
    }
}

void fig5(PresetContext& ctx) {
    const std::vector<double> grid = ctx.strength_grid(tenths());
    const ExperimentConfig base = ctx.base(0.0, {Measure::entropy});
    const std::vector<Pick> picks{[](const EnsembleStats& s) { return final_value(*s.entropy); }};
    std::vector<Table> tables;
    strength_table(ctx, "fig5", base, grid, picks, tables);
    ctx.session.csv("fig5.csv", tables[0]);
    if (ctx.overrides.svg) {
        strength_svg(ctx, "fig5.svg", tables[0], "fig5: coin entropy at T", "S");
    }
}

void pdist(PresetContext& ctx) {
    const std::vector<double> strengths = ctx.strength_grid({0.5, 1.0});
    constexpr int kBins = 25;
    const double eta = kPi / 2;
    const MeasureSet measures{Measure::distribution};

    const EnsembleStats ordered = ctx.run("pdist/ordered", ctx.ordered(eta, measures));
    Table distribution{{{"x", index_column(ordered.distribution->mean.size(), -ctx.steps()), true},
                        {"ordered", ordered.distribution->mean}}};
    Table histogram{{{"bin_lo", {}}, {"bin_hi", {}}}};
    for (int b = 0; b < kBins; ++b) {
        histogram.columns[0].values.push_back(kMaxCoinAngle * b / kBins);
        histogram.columns[1].values.push_back(kMaxCoinAngle * (b + 1) / kBins);
    }
    std::vector<PlotSeries> plots{{"ordered", distribution.columns[0].values,
                                   ordered.distribution->mean, {}}};

    for (double p : strengths) {
        for (DisorderKind kind : {DisorderKind::temporal, DisorderKind::spatial}) {
            const std::string column = std::string(to_string(kind)) + "_p" + label_number(p);
            const ExperimentConfig cfg = ctx.disordered(eta, measures, kind, p);
            const EnsembleStats stats = ctx.run("pdist/" + column, cfg);
            distribution.columns.push_back({column, stats.distribution->mean});
            plots.push_back({column, distribution.columns[0].values, stats.distribution->mean, {}});

            std::vector<double> counts(kBins, 0.0);
            double total = 0.0;
            for (int r = 0; r < cfg.realizations; ++r) {
                const CoinField field = realization_field(cfg, r);
                for (double theta : field.angles()) {
                    const int bin = std::min(kBins - 1, static_cast<int>(theta / kMaxCoinAngle * kBins));
                    counts[static_cast<std::size_t>(bin)] += 1.0;
                    total += 1.0;
                }
            }
            for (double& c : counts) c /= total;
            histogram.columns.push_back({column, std::move(counts)});
        }
    }
    ctx.session.csv("pdist_distribution.csv", distribution);
    ctx.session.csv("pdist_theta_histogram.csv", histogram);
    if (ctx.overrides.svg) {
        ctx.session.svg("pdist_distribution.svg", plots, {"pdist: P(x) at T", "x", "P(x)"});
    }
}

std::vector<double> doubles(const json& j) { return j.get<std::vector<double>>(); }

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

void Overrides::validate() const {
    if (steps && *steps < 1) throw ValidationError("--steps must be >= 1");
    if (realizations && *realizations < 1) throw ValidationError("--realizations must be >= 1");
    if (workers < 1) throw ValidationError("--workers must be >= 1");
    if (theta) {
        if (theta->empty()) throw ValidationError("--theta needs at least one value");
        for (double t : *theta) {
            if (!(t >= 0.0 && t <= kMaxCoinAngle)) {
                throw ValidationError("--theta value " + format_double(t) + " outside [0, pi/2]");
            }
        }
    }
    if (strength) {
        if (strength->empty()) throw ValidationError("--strength needs at least one value");
        for (double p : *strength) {
            if (!(p >= 0.0 && p <= 1.0)) {
                throw ValidationError("--strength value " + format_double(p) + " outside [0, 1]");
            }
        }
    }
}

json Overrides::to_json() const {
    json j = json::object();
    if (steps) j["steps"] = *steps;
    if (realizations) j["realizations"] = *realizations;
    if (seed) j["seed"] = *seed;
    if (theta) j["theta"] = *theta;
    if (strength) j["strength"] = *strength;
    j["workers"] = workers;
    j["svg"] = svg;
    return j;
}

Overrides Overrides::from_json(const json& j) {
    Overrides o;
    if (j.contains("steps")) o.steps = j.at("steps").get<int>();
    if (j.contains("realizations")) o.realizations = j.at("realizations").get<int>();
    if (j.contains("seed")) o.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("theta")) o.theta = doubles(j.at("theta"));
    if (j.contains("strength")) o.strength = doubles(j.at("strength"));
    if (j.contains("workers")) o.workers = j.at("workers").get<int>();
    if (j.contains("svg")) o.svg = j.at("svg").get<bool>();
    return o;
}

std::span<const PresetInfo> presets() { return kPresets; }

json RunManifest::to_json() const {
    json files_json = json::array();
    for (std::size_t i = 0; i < files.size(); ++i) {
        files_json.push_back({{"path", files[i]}, {"fnv1a64", checksums[i]}});
    }
    json j{{"tool", "qwalk"},
           {"command", command},
           {"overrides", overrides.to_json()},
           {"seed", seed},
           {"rng", "mt19937_64, child seed = splitmix64(master + (index+1)*0x9e3779b97f4a7c15)"},
           {"resolved", resolved},
           {"output_dir", output_dir.string()},
           {"files", files_json},
           {"started_at", started_at},
           {"wall_seconds", wall_seconds},
           {"summary", summary}};
    if (command == "run") j["preset"] = preset;
    if (command == "config") {
        j["config_path"] = config_path;
        j["config"] = config_document;
    }
    return j;
}

RunManifest run_preset(std::string_view name, const fs::path& outdir, const Overrides& overrides) {
    const auto& list = presets();
    if (std::none_of(list.begin(), list.end(), [&](const PresetInfo& p) { return p.name == name; })) {
        throw UsageError("unknown preset '" + std::string(name) + "' (see list-presets)");
    }
    overrides.validate();

    RunManifest manifest;
    manifest.command = "run";
    manifest.preset = std::string(name);
    manifest.overrides = overrides;
    manifest.seed = overrides.seed.value_or(kDefaultSeed);
    Session session(manifest, outdir);
    PresetContext ctx{overrides, session, manifest};

    if (name == "fig1a") fig1(ctx, "fig1a", 0.0);
    else if (name == "fig1b") fig1(ctx, "fig1b", kPi / 2);
    else if (name == "fig2") fig2(ctx);
    else if (name == "fig3a") fig3(ctx, "fig3a", 0.0);
    else if (name == "fig3b") fig3(ctx, "fig3b", kPi / 2);
    else if (name == "fig4") fig4(ctx);
    else if (name == "fig5") fig5(ctx);
    else pdist(ctx);

    session.finish();
    return manifest;
}

RunManifest run_config_document(const json& document, const std::string& source,
                                const fs::path& outdir, const Overrides& overrides) {
    overrides.validate();
    RunConfig cfg = parse_config(document);
    ExperimentConfig& e = cfg.experiment;
    if (overrides.steps) e.steps = *overrides.steps;
    if (overrides.realizations) e.realizations = *overrides.realizations;
    if (overrides.seed) e.master_seed = *overrides.seed;
    if (overrides.theta) e.disorder.base_theta = overrides.theta->front();
    if (overrides.strength) e.disorder.strength = overrides.strength->front();
    if (overrides.svg) cfg.output.svg = true;
    e.validate();

    RunManifest manifest;
    manifest.command = "config";
    manifest.config_path = source;
    manifest.config_document = document;
    manifest.overrides = overrides;
    manifest.seed = e.master_seed;
    Session session(manifest, outdir);
    session.record("config", e);
    const EnsembleStats stats = run_ensemble(e, overrides.workers);

    const std::vector<double> t = index_column(static_cast<std::size_t>(e.steps) + 1);
    Table series{{{"t", t, true}}};
    std::vector<PlotSeries> plots;
    auto add = [&](const char* name, const std::optional<SeriesStats>& s) {
        if (!s) return;
        series.columns.push_back({std::string(name) + "_mean", s->mean});
        series.columns.push_back({std::string(name) + "_stderr", s->std_error});
        plots.push_back({name, t, s->mean, stats.realizations > 1 ? s->std_error : std::vector<double>{}});
    };
    add("entropy", stats.entropy);
    add("coherence", stats.coherence);
    add("trace_distance", stats.trace_distance);
    add("backflow", stats.backflow);
    add("std_dev", stats.std_dev);

    if (cfg.output.csv) {
        if (series.columns.size() > 1) session.csv("series.csv", series);
        if (stats.blp) {
            session.csv("summary.csv", Table{{{"N_mean", {stats.blp->mean}},
                                              {"N_stderr", {stats.blp->std_error}},
                                              {"realizations", {double(stats.realizations)}, true}}});
        }
        if (stats.distribution) {
            session.csv("distribution.csv",
                        Table{{{"x", index_column(stats.distribution->mean.size(), -e.steps), true},
                               {"mean", stats.distribution->mean},
                               {"stderr", stats.distribution->std_error}}});
        }
    }
    if (cfg.output.svg && !plots.empty()) {
        session.svg("series.svg", plots, {"config run", "t", "value"});
    }
    if (stats.blp) manifest.summary = {{"blp", {{"mean", stats.blp->mean}, {"stderr", stats.blp->std_error}}}};
    session.finish();
    return manifest;
}

RunManifest run_config(const fs::path& path, const fs::path& outdir, const Overrides& overrides) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw ConfigError("", "cannot read config file " + path.string());
    std::ostringstream buffer;
    buffer << file.rdbuf();
    const std::string text = buffer.str();
    json document;
    try {
        document = json::parse(text, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ConfigError("", path.string() + ": parse error: " + e.what());
    }
    return run_config_document(document, path.string(), outdir, overrides);
}

RunManifest replay(const fs::path& manifest_path, const fs::path& outdir) {
    std::ifstream file(manifest_path, std::ios::binary);
    if (!file) throw UsageError("cannot read manifest " + manifest_path.string());
    json manifest;
    try {
        manifest = json::parse(file);
    } catch (const json::exception& e) {
        throw UsageError("malformed manifest " + manifest_path.string() + ": " + e.what());
    }
    try {
        const Overrides overrides = Overrides::from_json(manifest.at("overrides"));
        const std::string command = manifest.at("command").get<std::string>();
        if (command == "run") {
            return run_preset(manifest.at("preset").get<std::string>(), outdir, overrides);
        }
        if (command == "config") {
            return run_config_document(manifest.at("config"),
                                       manifest.at("config_path").get<std::string>(), outdir,
                                       overrides);
        }
        throw UsageError("manifest has unknown command '" + command + "'");
    } catch (const json::exception& e) {
        throw UsageError("malformed manifest " + manifest_path.string() + ": " + e.what());
    }
}

}  // namespace qwalk
