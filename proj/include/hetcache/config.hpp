#pragma once

#include <istream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hetcache/experiment.hpp"

namespace hetcache {

using ConfigEntries = std::vector<std::pair<std::string, std::string>>;

// Every key accepted in a config file or as a --key flag.
const std::vector<std::string>& config_keys();

/// Flat "key = value" text: one pair per line, '#' starts a comment, blank
/// lines are ignored. Throws ConfigError on malformed lines.
ConfigEntries parse_config(std::istream& in);
ConfigEntries read_config_file(const std::string& path);

struct LoadedConfig {
    ExperimentConfig config;
    std::string out;
};

// Applies one key; throws ConfigError for unknown keys or unparsable values.
void apply_key(LoadedConfig& target, std::string_view key, std::string_view value);

/// Starts from the preset of the last `scenario` key (scenario1 if none) and
/// applies the remaining entries in order, so later entries win.
LoadedConfig build_config(const ConfigEntries& entries);

}  // namespace hetcache
