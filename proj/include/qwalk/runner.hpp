#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qwalk/config.hpp"

namespace qwalk {

inline constexpr std::uint64_t kDefaultSeed = 20180101;

// Bad command-line usage: unknown preset, malformed manifest.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Command-line values that take precedence over preset and config values.
struct Overrides {
    std::optional<int> steps;
    std::optional<int> realizations;
    std::optional<std::uint64_t> seed;
    // Sweep presets take the whole list as their grid; others use the first value.
    std::optional<std::vector<double>> theta;
    std::optional<std::vector<double>> strength;
    int workers = 1;
    bool svg = false;

    // Throws ValidationError naming the flag.
    void validate() const;
    nlohmann::json to_json() const;
    static Overrides from_json(const nlohmann::json& j);
};

struct PresetInfo {
    std::string_view name;
    std::string_view description;
};

std::span<const PresetInfo> presets();

struct RunManifest {
    std::string command;  // "run" or "config"
    std::string preset;
    std::string config_path;
    nlohmann::json config_document;
    Overrides overrides;
    // One {label, config} entry per ensemble executed.
    nlohmann::json resolved = nlohmann::json::array();
    std::filesystem::path output_dir;
    std::vector<std::string> files;
    std::vector<std::string> checksums;  // FNV-1a 64 of each file, hex
    std::uint64_t seed = kDefaultSeed;
    std::string started_at;
    double wall_seconds = 0.0;
    nlohmann::json summary = nlohmann::json::object();

    nlohmann::json to_json() const;
};

// Runs a named preset and writes its CSV/SVG files plus manifest.json into
// `outdir`. Throws UsageError for an unknown name.
RunManifest run_preset(std::string_view name, const std::filesystem::path& outdir,
                       const Overrides& overrides = {});

// Runs a config document and writes series.csv, summary.csv and
// distribution.csv as selected, plus manifest.json.
RunManifest run_config(const std::filesystem::path& path, const std::filesystem::path& outdir,
                       const Overrides& overrides = {});
RunManifest run_config_document(const nlohmann::json& document, const std::string& source,
                                const std::filesystem::path& outdir,
                                const Overrides& overrides = {});

// Re-executes the run recorded in a manifest.json.
RunManifest replay(const std::filesystem::path& manifest, const std::filesystem::path& outdir);

std::uint64_t fnv1a64(std::string_view bytes) noexcept;

}  // namespace qwalk
