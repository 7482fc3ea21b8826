#include "hetcache/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>

#include "hetcache/errors.hpp"

namespace hetcache {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double to_double(std::string_view key, std::string_view text)
{
    double v = 0.0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || end != text.data() + text.size()) {
        throw ConfigError("key '" + std::string(key) + "': '" + std::string(text) + "' is not a number");
    }
    return v;
}

std::uint64_t to_unsigned(std::string_view key, std::string_view text)
{
    std::uint64_t v = 0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || end != text.data() + text.size()) {
        throw ConfigError("key '" + std::string(key) + "': '" + std::string(text) + "' is not a non-negative integer");
    }
    return v;
}

bool to_bool(std::string_view key, std::string_view text)
{
    if (text == "1" || text == "true" || text == "yes" || text == "on") return true;
    if (text == "0" || text == "false" || text == "no" || text == "off") return false;
    throw ConfigError("key '" + std::string(key) + "': '" + std::string(text) + "' is not a boolean");
}

std::vector<Scheme> to_schemes(std::string_view text)
{
    std::vector<Scheme> out;
    while (!text.empty()) {
        const auto comma = text.find(',');
        const auto item = trim(text.substr(0, comma));
        if (!item.empty()) {
            const Scheme s = parse_scheme(item);
            if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
        }
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    return out;
}

}  // namespace

const std::vector<std::string>& config_keys()
{
    static const std::vector<std::string> keys = {
        "scenario", "lambda_B", "lambda_U", "power", "alpha", "sigma2", "delta", "bandwidth", "file_size",
        "c0",       "side",     "wrap",     "K",     "J",     "Q",      "G",     "s",         "schemes",
        "trials",   "seed",     "T",        "eps",   "mu",    "cap",    "workers", "out"};
    return keys;
}

ConfigEntries parse_config(std::istream& in)
{
    ConfigEntries entries;
    std::string line;
    for (std::size_t number = 1; std::getline(in, line); ++number) {
        std::string_view view(line);
        if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
        view = trim(view);
        if (view.empty()) continue;
        const auto eq = view.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("config line " + std::to_string(number) + ": expected key = value");
        }
        const auto key = trim(view.substr(0, eq));
        const auto value = trim(view.substr(eq + 1));
        if (key.empty()) throw ConfigError("config line " + std::to_string(number) + ": empty key");
        entries.emplace_back(std::string(key), std::string(value));
    }
    return entries;
}

ConfigEntries read_config_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(in);
}

void apply_key(LoadedConfig& target, std::string_view key, std::string_view value)
{
    ExperimentConfig& c = target.config;
    GeometryParams& g = c.geometry;
    if (key == "scenario") {
        // Re-basing on a preset only makes sense first; build_config handles the order.
        c.scenario = parse_scenario(value);
    } else if (key == "lambda_B") {
        g.lambda_B = to_double(key, value);
    } else if (key == "lambda_U") {
        g.lambda_U = to_double(key, value);
    } else if (key == "power") {
        g.power = to_double(key, value);
    } else if (key == "alpha") {
        g.alpha = to_double(key, value);
    } else if (key == "sigma2") {
        g.sigma2 = to_double(key, value);
    } else if (key == "delta") {
        g.delta = to_double(key, value);
    } else if (key == "bandwidth") {
        g.bandwidth = to_double(key, value);
    } else if (key == "file_size") {
        g.file_size = to_double(key, value);
    } else if (key == "c0") {
        g.mbs_rate = to_double(key, value);
    } else if (key == "side") {
        c.region.side = to_double(key, value);
    } else if (key == "wrap") {
        c.region.wrap = to_bool(key, value);
    } else if (key == "K") {
        c.sbs_count = to_unsigned(key, value);
    } else if (key == "J") {
        c.mu_count = to_unsigned(key, value);
    } else if (key == "Q") {
        c.files = to_unsigned(key, value);
    } else if (key == "G") {
        c.group_size = to_unsigned(key, value);
    } else if (key == "s") {
        c.zipf_s = to_double(key, value);
    } else if (key == "schemes") {
        c.schemes = to_schemes(value);
    } else if (key == "trials") {
        c.trials = to_unsigned(key, value);
    } else if (key == "seed") {
        c.seed = to_unsigned(key, value);
    } else if (key == "T") {
        c.bp.max_iterations = to_unsigned(key, value);
    } else if (key == "eps") {
        c.bp.tolerance = to_double(key, value);
    } else if (key == "mu") {
        c.bp.mu = to_double(key, value);
    } else if (key == "cap") {
        c.bp.enumeration_cap = to_double(key, value);
    } else if (key == "workers") {
        c.workers = to_unsigned(key, value);
    } else if (key == "out") {
        target.out = std::string(value);
    } else {
        throw ConfigError("unknown config key '" + std::string(key) + "'");
    }
}

LoadedConfig build_config(const ConfigEntries& entries)
{
    ScenarioKind kind = ScenarioKind::scenario1;
    for (const auto& [key, value] : entries) {
        if (key == "scenario") kind = parse_scenario(value);
    }
    LoadedConfig loaded;
    loaded.config = preset(kind);
    for (const auto& [key, value] : entries) {
        if (key != "scenario") apply_key(loaded, key, value);
    }
    return loaded;
}

}  // namespace hetcache
