#include "qwalk/config.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace qwalk {

namespace {

using nlohmann::json;

constexpr const char* kKnownKeys[] = {
    "initial.delta",     "initial.eta",        "initial2.delta",       "initial2.eta",
    "disorder.kind",     "disorder.strength",  "disorder.base_theta",  "disorder.distribution",
    "steps",             "realizations",       "seed",                 "measures",
    "output.formats"};

bool known(const std::string& key) {
    for (const char* k : kKnownKeys) {
        if (key == k) return true;
    }
    return false;
}

void flatten(const json& node, const std::string& prefix, std::map<std::string, json>& out) {
    for (const auto& [name, value] : node.items()) {
        const std::string key = prefix.empty() ? name : prefix + "." + name;
        if (value.is_object()) {
            flatten(value, key, out);
            continue;
        }
        if (!known(key)) throw ConfigError(key, "unknown key");
        if (!out.emplace(key, value).second) throw ConfigError(key, "given more than once");
    }
}

double number(const std::string& key, const json& value) {
    if (!value.is_number()) throw ConfigError(key, "expected a number, got " + value.dump());
    return value.get<double>();
}

std::int64_t integer(const std::string& key, const json& value) {
    if (!value.is_number_integer()) {
        throw ConfigError(key, "expected an integer, got " + value.dump());
    }
    return value.get<std::int64_t>();
}

std::string text(const std::string& key, const json& value) {
    if (!value.is_string()) throw ConfigError(key, "expected a string, got " + value.dump());
    return value.get<std::string>();
}

std::vector<std::string> text_list(const std::string& key, const json& value) {
    if (!value.is_array()) throw ConfigError(key, "expected a list, got " + value.dump());
    std::vector<std::string> out;
    for (std::size_t i = 0; i < value.size(); ++i) {
        out.push_back(text(key + "[" + std::to_string(i) + "]", value[i]));
    }
    return out;
}

}  // namespace

RunConfig parse_config(const json& document) {
    if (!document.is_object()) throw ConfigError("", "config must be a JSON object");
    std::map<std::string, json> entries;
    flatten(document, "", entries);

    RunConfig cfg;
    ExperimentConfig& e = cfg.experiment;
    auto get = [&](const char* key) -> const json* {
        const auto it = entries.find(key);
        return it == entries.end() ? nullptr : &it->second;
    };

    if (auto* v = get("initial.delta")) e.initial.delta = number("initial.delta", *v);
    if (auto* v = get("initial.eta")) e.initial.eta = number("initial.eta", *v);
    e.initial2 = psi(-e.initial.delta, e.initial.eta);
    if (auto* v = get("initial2.delta")) e.initial2.delta = number("initial2.delta", *v);
    if (auto* v = get("initial2.eta")) e.initial2.eta = number("initial2.eta", *v);

    if (auto* v = get("disorder.kind")) {
        const auto kind = parse_disorder_kind(text("disorder.kind", *v));
        if (!kind) throw ConfigError("disorder.kind", "expected none, temporal or spatial");
        e.disorder.kind = *kind;
    }
    if (auto* v = get("disorder.strength")) {
        e.disorder.strength = number("disorder.strength", *v);
        if (!(e.disorder.strength >= 0.0 && e.disorder.strength <= 1.0)) {
            throw ConfigError("disorder.strength", "must lie in [0, 1], got " + v->dump());
        }
    }
    if (auto* v = get("disorder.base_theta")) {
        e.disorder.base_theta = number("disorder.base_theta", *v);
        if (!(e.disorder.base_theta >= 0.0 && e.disorder.base_theta <= kMaxCoinAngle)) {
            throw ConfigError("disorder.base_theta", "must lie in [0, pi/2], got " + v->dump());
        }
    }
    if (auto* v = get("disorder.distribution")) {
        if (text("disorder.distribution", *v) != "uniform") {
            throw ConfigError("disorder.distribution", "only 'uniform' is supported");
        }
    }
    if (auto* v = get("steps")) {
        const auto steps = integer("steps", *v);
        if (steps < 1 || steps > 1'000'000) throw ConfigError("steps", "must lie in [1, 1000000], got " + v->dump());
        e.steps = static_cast<int>(steps);
    }
    if (auto* v = get("realizations")) {
        const auto r = integer("realizations", *v);
        if (r < 1 || r > 100'000'000) throw ConfigError("realizations", "must lie in [1, 100000000], got " + v->dump());
        e.realizations = static_cast<int>(r);
    }
    if (auto* v = get("seed")) {
        if (!v->is_number_unsigned()) {
            throw ConfigError("seed", "expected a non-negative integer, got " + v->dump());
        }
        e.master_seed = v->get<std::uint64_t>();
    }
    if (auto* v = get("measures")) {
        MeasureSet set;
        const auto names = text_list("measures", *v);
        for (std::size_t i = 0; i < names.size(); ++i) {
            const auto m = parse_measure(names[i]);
            if (!m) {
                throw ConfigError("measures[" + std::to_string(i) + "]",
                                  "unknown measure '" + names[i] + "'");
            }
            set.insert(*m);
        }
        if (set.empty()) throw ConfigError("measures", "must not be empty");
        e.measures = set;
    }
    if (auto* v = get("output.formats")) {
        cfg.output = {false, false};
        const auto names = text_list("output.formats", *v);
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (names[i] == "csv") {
                cfg.output.csv = true;
            } else if (names[i] == "svg") {
                cfg.output.svg = true;
            } else {
                throw ConfigError("output.formats[" + std::to_string(i) + "]",
                                  "expected csv or svg, got '" + names[i] + "'");
            }
        }
        if (!cfg.output.csv && !cfg.output.svg) {
            throw ConfigError("output.formats", "must name at least one format");
        }
    }
    return cfg;
}

RunConfig parse_config_text(std::string_view text) {
    json document;
    try {
        document = json::parse(text.begin(), text.end(), nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ConfigError("", std::string("parse error: ") + e.what());
    }
    return parse_config(document);
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw ConfigError("", "cannot read config file " + path.string());
    std::ostringstream buffer;
    buffer << file.rdbuf();
    return parse_config_text(buffer.str());
}

json to_json(const RunConfig& cfg) {
    const ExperimentConfig& e = cfg.experiment;
    json measures = json::array();
    for (Measure m : kAllMeasures) {
        if (e.measures.contains(m)) measures.push_back(std::string(to_string(m)));
    }
    json formats = json::array();
    if (cfg.output.csv) formats.push_back("csv");
    if (cfg.output.svg) formats.push_back("svg");
    return json{
        {"initial", {{"delta", e.initial.delta}, {"eta", e.initial.eta}}},
        {"initial2", {{"delta", e.initial2.delta}, {"eta", e.initial2.eta}}},
        {"disorder",
         {{"kind", std::string(to_string(e.disorder.kind))},
          {"strength", e.disorder.strength},
          {"base_theta", e.disorder.base_theta},
          {"distribution", "uniform"}}},
        {"steps", e.steps},
        {"realizations", e.realizations},
        {"seed", e.master_seed},
        {"measures", measures},
        {"output", {{"formats", formats}}}};
}

}  // namespace qwalk
