#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qwalk/ensemble.hpp"
#include "qwalk/errors.hpp"

namespace qwalk {

// Rejected config document; key() names the offending dotted key, or is
// empty for a syntax error.
class ConfigError : public ValidationError {
public:
    ConfigError(std::string key, const std::string& message)
        : ValidationError(key.empty() ? message : "config key '" + key + "': " + message),
          key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

struct OutputOptions {
    bool csv = true;
    bool svg = false;
};

struct RunConfig {
    ExperimentConfig experiment;
    OutputOptions output;
};

// Keys accepted by parse_config, nested objects or flat dotted names alike:
//   initial.delta initial.eta initial2.delta initial2.eta
//   disorder.kind disorder.strength disorder.base_theta disorder.distribution
//   steps realizations seed measures[] output.formats[]
// When initial2 is absent it defaults to psi(-initial.delta, initial.eta).
RunConfig parse_config(const nlohmann::json& document);
RunConfig parse_config_text(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

// Canonical document for `cfg`; parse_config(to_json(cfg)) gives back cfg.
nlohmann::json to_json(const RunConfig& cfg);

}  // namespace qwalk
