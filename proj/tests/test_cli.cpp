#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "qwalk/config.hpp"
#include "qwalk/output.hpp"
#include "qwalk/runner.hpp"

using namespace qwalk;
namespace fs = std::filesystem;
using std::numbers::pi;

namespace {

fs::path scratch_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("qwalk_test_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string read_file(const fs::path& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    for (std::string cell; std::getline(in, cell, ',');) out.push_back(cell);
    return out;
}

std::vector<std::string> column(const std::string& csv, const std::string& name) {
    const auto rows = lines(csv);
    const auto header = split(rows.at(0));
    const auto at = std::find(header.begin(), header.end(), name) - header.begin();
    std::vector<std::string> out;
    for (std::size_t r = 1; r < rows.size(); ++r) out.push_back(split(rows[r]).at(at));
    return out;
}

void write(const fs::path& path, const std::string& text) {
    fs::create_directories(path.parent_path());
    std::ofstream(path, std::ios::binary) << text;
}

int run_cli(const std::string& args) {
    const std::string command = std::string(QWALK_BINARY) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(command.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const fs::path kGolden = fs::path(QWALK_GOLDEN_DIR);

}  // namespace

TEST_CASE("format_double round-trips") {
    for (double v : {0.1, 1.0 / 3.0, pi, 1e-300, -2.5e17, 0.0}) {
        CHECK(std::stod(format_double(v)) == v);
    }
    CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("to_csv layout") {
    const Table t{{{"t", {0, 1}, true}, {"v", {0.25, 1.0 / 3.0}}}};
    CHECK(to_csv(t) == "t,v\n0,0.25\n1,0.33333333333333331\n");
    const Table bad{{{"a", {1, 2}}, {"b", {1}}}};
    CHECK_THROWS_AS(to_csv(bad), DomainError);
}

TEST_CASE("render_svg") {
    std::vector<double> x(201), y(201), e(201, 0.01);
    for (int i = 0; i <= 200; ++i) {
        x[i] = i;
        y[i] = std::sin(i / 10.0);
    }
    SUBCASE("one series") {
        const std::vector<PlotSeries> s{{"S(t)", x, y, {}}};
        const std::string svg = render_svg(s, {"title", "t", "S"});
        CHECK(svg.rfind("<svg", 0) == 0);
        CHECK(svg.find("</svg>") != std::string::npos);
        CHECK(std::count(svg.begin(), svg.end(), '\n') > 5);
        auto count = [&](const std::string& needle) {
            std::size_t n = 0;
            for (auto p = svg.find(needle); p != std::string::npos; p = svg.find(needle, p + 1)) ++n;
            return n;
        };
        CHECK(count("<polyline") == 1);
        CHECK(count("class=\"x-label\"") == 1);
        CHECK(count("class=\"y-label\"") == 1);
        CHECK(count("class=\"error-bar\"") == 0);
    }
    SUBCASE("three series with legend") {
        const std::vector<PlotSeries> s{{"a", x, y, {}}, {"b", x, y, {}}, {"c", x, y, {}}};
        const std::string svg = render_svg(s, {});
        std::size_t polylines = 0, legends = 0;
        for (auto p = svg.find("<polyline"); p != std::string::npos; p = svg.find("<polyline", p + 1)) ++polylines;
        for (auto p = svg.find("class=\"legend\""); p != std::string::npos; p = svg.find("class=\"legend\"", p + 1)) ++legends;
        CHECK(polylines == 3);
        CHECK(legends == 3);
    }
    SUBCASE("error bars every 10th point") {
        const std::vector<PlotSeries> s{{"m", x, y, e}};
        const std::string svg = render_svg(s, {});
        std::size_t bars = 0;
        for (auto p = svg.find("class=\"error-bar\""); p != std::string::npos; p = svg.find("class=\"error-bar\"", p + 1)) ++bars;
        CHECK(bars == 21);
    }
    SUBCASE("empty table") {
        CHECK_THROWS_AS(render_svg(std::vector<PlotSeries>{}, {}), DomainError);
        const std::vector<PlotSeries> s{{"empty", {}, {}, {}}};
        CHECK_THROWS_AS(render_svg(s, {}), DomainError);
    }
}

TEST_CASE("parse_config") {
    SUBCASE("minimal document with dotted keys") {
        const RunConfig c =
            parse_config_text(R"({"steps": 10, "disorder.kind": "none", "measures": ["std_dev"]})");
        CHECK(c.experiment.steps == 10);
        CHECK(c.experiment.disorder.kind == DisorderKind::none);
        CHECK(c.experiment.measures == MeasureSet{Measure::std_dev});
        CHECK(c.output.csv);
    }
    SUBCASE("nested document and defaults for the second state") {
        const RunConfig c = parse_config_text(R"({
            "initial": {"delta": 0.5, "eta": 1.0},
            "disorder": {"kind": "spatial", "strength": 0.25, "base_theta": 0.3},
            "seed": 18446744073709551615,
            "output": {"formats": ["svg"]}})");
        CHECK(c.experiment.initial2.delta == -0.5);
        CHECK(c.experiment.initial2.eta == 1.0);
        CHECK(c.experiment.disorder.strength == 0.25);
        CHECK(c.experiment.master_seed == 18446744073709551615ULL);
        CHECK_FALSE(c.output.csv);
        CHECK(c.output.svg);
    }
    SUBCASE("errors name the offending key") {
        auto key_of = [](const std::string& text) {
            try {
                parse_config_text(text);
            } catch (const ConfigError& e) {
                return e.key();
            }
            return std::string("<accepted>");
        };
        CHECK(key_of(R"({"disorder": {"strength": 1.5}})") == "disorder.strength");
        CHECK(key_of(R"({"disorder": {"stregth": 0.5}})") == "disorder.stregth");
        CHECK(key_of(R"({"steps": 0})") == "steps");
        CHECK(key_of(R"({"steps": 2.5})") == "steps");
        CHECK(key_of(R"({"seed": -1})") == "seed");
        CHECK(key_of(R"({"disorder.kind": "both"})") == "disorder.kind");
        CHECK(key_of(R"({"measures": ["entropy", "purity"]})") == "measures[1]");
        CHECK(key_of(R"({"measures": []})") == "measures");
        CHECK(key_of(R"({"output": {"formats": ["png"]}})") == "output.formats[0]");
        CHECK(key_of(R"({"steps": 3, "steps": 4})") == "<accepted>");
        CHECK(key_of(R"({"disorder": {"kind": "none"}, "disorder.kind": "none"})") == "disorder.kind");
        CHECK(key_of(R"({"steps": )") == "");
    }
    SUBCASE("to_json round-trips") {
        RunConfig c;
        c.experiment.disorder = {DisorderKind::temporal, 0.3, 0.2};
        c.experiment.steps = 17;
        c.experiment.master_seed = 99;
        c.experiment.measures = {Measure::entropy, Measure::blp};
        c.output.svg = true;
        const RunConfig back = parse_config(to_json(c));
        CHECK(to_json(back) == to_json(c));
    }
}

TEST_CASE("fig1a writes 201 rows of t,S,I,D") {
    const fs::path out = scratch_dir("fig1a");
    const RunManifest m = run_preset("fig1a", out);
    const auto rows = lines(read_file(out / "fig1a.csv"));
    CHECK(rows.size() == 202);
    CHECK(rows[0] == "t,S,I,D");
    CHECK(m.files == std::vector<std::string>{"fig1a.csv"});
    CHECK(fs::exists(out / "manifest.json"));
    // Golden prefix: ordered dynamics are deterministic.
    const auto golden = lines(read_file(kGolden / "fig1a_head.csv"));
    REQUIRE(golden.size() == 6);
    for (std::size_t i = 0; i < golden.size(); ++i) CHECK(rows[i] == golden[i]);
}

TEST_CASE("fig2 with a nine-point grid") {
    const fs::path out = scratch_dir("fig2");
    Overrides o;
    o.theta = std::vector<double>{};
    for (int k = 1; k <= 9; ++k) o.theta->push_back(k * pi / 20);
    run_preset("fig2", out, o);
    const auto rows = lines(read_file(out / "fig2.csv"));
    CHECK(rows.size() == 10);
    CHECK(rows[0] == "theta,N,I");
}

TEST_CASE("fig3 and fig4 column schema") {
    Overrides o;
    o.steps = 12;
    o.realizations = 5;
    o.svg = true;
    const fs::path out3 = scratch_dir("fig3a");
    run_preset("fig3a", out3, o);
    CHECK(lines(read_file(out3 / "fig3a.csv"))[0] ==
          "t,ordered,temporal_mean,temporal_stderr,spatial_mean,spatial_stderr");
    CHECK(lines(read_file(out3 / "fig3a.csv")).size() == 14);
    CHECK(fs::exists(out3 / "fig3a.svg"));

    const fs::path out4 = scratch_dir("fig4");
    const RunManifest m = run_preset("fig4", out4, o);
    for (const char* name : {"fig4_sigma.csv", "fig4_blp.csv"}) {
        const auto rows = lines(read_file(out4 / name));
        CHECK(rows[0] == "p,temporal_mean,temporal_stderr,spatial_mean,spatial_stderr");
        CHECK(rows.size() == 12);
    }
    CHECK(m.resolved.size() == 22);
}

TEST_CASE("fig5 and pdist outputs") {
    Overrides o;
    o.steps = 10;
    o.realizations = 4;
    const fs::path out5 = scratch_dir("fig5");
    run_preset("fig5", out5, o);
    CHECK(lines(read_file(out5 / "fig5.csv"))[0] ==
          "p,temporal_mean,temporal_stderr,spatial_mean,spatial_stderr");

    const fs::path outp = scratch_dir("pdist");
    o.realizations = 60;
    run_preset("pdist", outp, o);
    const auto dist = lines(read_file(outp / "pdist_distribution.csv"));
    CHECK(dist[0] == "x,ordered,temporal_p0.5,spatial_p0.5,temporal_p1,spatial_p1");
    CHECK(dist.size() == 22);
    CHECK(dist[1].rfind("-10,", 0) == 0);
    const auto hist = read_file(outp / "pdist_theta_histogram.csv");
    CHECK(lines(hist).size() == 26);
    // Half-strength fields put about half their mass in the bin holding pi/4.
    const auto half = column(hist, "temporal_p0.5");
    CHECK(std::stod(half[12]) > 0.4);
}

TEST_CASE("unknown preset and invalid override") {
    CHECK_THROWS_AS(run_preset("fig9", scratch_dir("bad")), UsageError);
    Overrides o;
    o.strength = std::vector<double>{1.5};
    CHECK_THROWS_AS(run_preset("fig4", scratch_dir("bad"), o), ValidationError);
}

TEST_CASE("run_config") {
    const fs::path dir = scratch_dir("config");
    SUBCASE("minimal config gives sigma(t) over 11 rows") {
        write(dir / "min.json", R"({"steps": 10, "disorder.kind": "none", "measures": ["std_dev"]})");
        run_config(dir / "min.json", dir / "out");
        const std::string csv = read_file(dir / "out" / "series.csv");
        CHECK(csv == read_file(kGolden / "config_minimal_series.csv"));
        CHECK(lines(csv).size() == 12);
        CHECK_FALSE(fs::exists(dir / "out" / "summary.csv"));
    }
    SUBCASE("strength out of range names the key") {
        write(dir / "bad.json", R"({"disorder": {"kind": "spatial", "strength": 1.5}})");
        try {
            run_config(dir / "bad.json", dir / "out");
            FAIL("accepted an invalid strength");
        } catch (const ConfigError& e) {
            CHECK(e.key() == "disorder.strength");
            CHECK(std::string(e.what()).find("disorder.strength") != std::string::npos);
        }
    }
    SUBCASE("preset config replayed through run_config gives the same numbers") {
        Overrides o;
        o.steps = 20;
        o.realizations = 6;
        const RunManifest preset = run_preset("fig3a", dir / "preset", o);
        const std::string fig3a = read_file(dir / "preset" / "fig3a.csv");
        for (const auto& entry : preset.resolved) {
            const std::string label = entry.at("label");
            const std::string kind = label.substr(label.find('/') + 1);
            write(dir / (kind + ".json"), entry.at("config").dump());
            run_config(dir / (kind + ".json"), dir / kind);
            const std::string series = read_file(dir / kind / "series.csv");
            const std::string preset_column = kind == "ordered" ? "ordered" : kind + "_mean";
            CHECK(column(series, "backflow_mean") == column(fig3a, preset_column));
            if (kind != "ordered") {
                CHECK(column(series, "backflow_stderr") == column(fig3a, kind + "_stderr"));
            }
        }
    }
    SUBCASE("blp and distribution outputs") {
        write(dir / "all.json", R"({"steps": 8, "realizations": 3, "disorder": {"kind": "temporal", "strength": 1.0},
                                    "output": {"formats": ["csv", "svg"]}})");
        const RunManifest m = run_config(dir / "all.json", dir / "all");
        CHECK(lines(read_file(dir / "all" / "series.csv"))[0] ==
              "t,entropy_mean,entropy_stderr,coherence_mean,coherence_stderr,trace_distance_mean,"
              "trace_distance_stderr,backflow_mean,backflow_stderr,std_dev_mean,std_dev_stderr");
        CHECK(lines(read_file(dir / "all" / "summary.csv"))[0] == "N_mean,N_stderr,realizations");
        CHECK(lines(read_file(dir / "all" / "distribution.csv")).size() == 18);
        CHECK(fs::exists(dir / "all" / "series.svg"));
        CHECK(m.files.size() == 4);
    }
}

TEST_CASE("manifest replay reproduces every CSV byte for byte") {
    Overrides o;
    o.steps = 15;
    o.realizations = 7;
    o.seed = 5;
    const fs::path first = scratch_dir("replay_a");
    const RunManifest m = run_preset("fig4", first, o);
    const RunManifest again = replay(first / "manifest.json", scratch_dir("replay_b"));
    REQUIRE(again.files == m.files);
    CHECK(again.checksums == m.checksums);
    for (const auto& f : m.files) CHECK(read_file(first / f) == read_file(again.output_dir / f));

    const fs::path cdir = scratch_dir("replay_config");
    write(cdir / "c.json", R"({"steps": 9, "realizations": 4, "disorder": {"kind": "spatial", "strength": 0.5}})");
    const RunManifest c = run_config(cdir / "c.json", cdir / "a");
    fs::remove(cdir / "c.json");
    const RunManifest c2 = replay(cdir / "a" / "manifest.json", cdir / "b");
    CHECK(c2.checksums == c.checksums);
}

TEST_CASE("worker count leaves preset output unchanged") {
    Overrides o;
    o.steps = 25;
    o.realizations = 9;
    const fs::path a = scratch_dir("workers_a");
    const fs::path b = scratch_dir("workers_b");
    run_preset("fig3b", a, o);
    o.workers = 4;
    run_preset("fig3b", b, o);
    CHECK(read_file(a / "fig3b.csv") == read_file(b / "fig3b.csv"));
}

TEST_CASE("command-line exit codes") {
    const fs::path dir = scratch_dir("exit");
    fs::create_directories(dir);
    CHECK(run_cli("list-presets") == 0);
    CHECK(run_cli("") == 1);
    CHECK(run_cli("run") == 1);
    CHECK(run_cli("run fig9 --out " + (dir / "x").string()) == 1);
    CHECK(run_cli("run fig1a --bogus") == 1);
    CHECK(run_cli("run fig1a --steps 5 --out " + (dir / "ok").string()) == 0);
    CHECK(fs::exists(dir / "ok" / "fig1a.csv"));
    CHECK(run_cli("run fig4 --strength 1.5 --out " + (dir / "y").string()) == 2);
    write(dir / "bad.json", R"({"disorder": {"strength": 1.5}})");
    CHECK(run_cli("config " + (dir / "bad.json").string() + " --out " + (dir / "z").string()) == 2);
    CHECK(run_cli("config " + (dir / "missing.json").string()) == 2);
    write(dir / "file", "not a directory");
    CHECK(run_cli("run fig1a --steps 3 --out " + (dir / "file").string()) == 3);
    CHECK(run_cli("replay " + (dir / "bad.json").string()) == 1);
}
