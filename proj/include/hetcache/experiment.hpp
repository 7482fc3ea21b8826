#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hetcache/bp.hpp"
#include "hetcache/hbp.hpp"
#include "hetcache/net_model.hpp"

namespace hetcache {

enum class ScenarioKind { ppp_sweep, fixed_topology, scenario1, scenario2_case1, scenario2_case2, large_scale };
enum class Scheme { bp, hbp, fprc, orc, exhaustive };

std::string_view to_string(ScenarioKind kind);
std::string_view to_string(Scheme scheme);
ScenarioKind parse_scenario(std::string_view text);
Scheme parse_scheme(std::string_view text);

struct ExperimentConfig {
    ScenarioKind scenario = ScenarioKind::scenario1;
    GeometryParams geometry;
    Region region;
    // Node counts for the fixed-count scenarios; PPP scenarios use the intensities.
    std::size_t sbs_count = 8;
    std::size_t mu_count = 4;
    std::size_t files = 100;
    std::size_t group_size = 25;
    double zipf_s = 0.5;
    std::vector<Scheme> schemes;
    std::size_t trials = 100;
    std::optional<std::uint64_t> seed;
    BpOptions bp;
    std::size_t workers = 1;

    bool is_ppp() const noexcept { return scenario == ScenarioKind::ppp_sweep; }
    bool has(Scheme scheme) const;
};

// Parameters of the canned scenarios.
ExperimentConfig preset(ScenarioKind kind);

// Throws ConfigError for inconsistent settings.
void validate(const ExperimentConfig& config);

struct Sample {
    std::string scheme;
    std::string metric;
    double value = 0.0;
};

struct TraceRow {
    std::string scheme;
    std::size_t iteration = 0;
    double residual = 0.0;
    std::size_t churn = 0;
};

struct TrialStats {
    std::size_t trial = 0;
    std::vector<Sample> samples;
    std::vector<TraceRow> trace;
    std::vector<CommLedgerRow> ledger;

    void add(std::string scheme, std::string metric, double value);
    std::optional<double> find(std::string_view scheme, std::string_view metric) const;
};

struct MetricSummary {
    std::string scheme;
    std::string metric;
    double mean = 0.0;
    double stderr_ = 0.0;
    std::size_t count = 0;
};

struct TrialFailure {
    std::size_t trial = 0;
    std::string message;
    int exit_code = 1;
};

struct ExperimentResult {
    std::vector<TrialStats> trials;
    std::vector<MetricSummary> summary;
    std::vector<TrialFailure> failures;

    const MetricSummary* find(std::string_view scheme, std::string_view metric) const;
};

// Mean and standard error of every (scheme, metric), folded in trial order.
std::vector<MetricSummary> summarize(std::span<const TrialStats> trials);

// Runs config.trials independent trials on config.workers threads.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// One setting of a parameter grid. For PPP scenarios all points of a grid
/// share each trial's link scan, so a sweep costs one O(J K) pass per trial.
struct GridPoint {
    double delta = 0.1;
    double zipf_s = 0.5;
    double power = 2.0;
};

std::vector<ExperimentResult> run_grid(const ExperimentConfig& config, std::span<const GridPoint> points);

// Single trial, exposed for tests.
TrialStats run_trial(const ExperimentConfig& config, std::size_t trial);

}  // namespace hetcache
