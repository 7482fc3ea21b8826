#pragma once

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "hetcache/analysis.hpp"
#include "hetcache/experiment.hpp"

namespace hetcache {

// Ten significant digits, the output format of every CSV this tool writes.
std::string format_double(double value);

// Config echo rows written ahead of the metrics (scheme column "config").
std::vector<std::pair<std::string, double>> config_echo(const ExperimentConfig& config);

// Header: scheme,metric,mean,stderr,count
void write_summary_csv(std::ostream& out, const ExperimentConfig& config, const ExperimentResult& result);
// Header: trial,scheme,metric,value
void write_trials_csv(std::ostream& out, const ExperimentResult& result);
// Header: trial,scheme,iteration,residual,churn
void write_trace_csv(std::ostream& out, const ExperimentResult& result);
// Header: trial,iteration,hbp_words,hbp_bits,bp_words,bp_bits
void write_ledger_csv(std::ostream& out, const ExperimentResult& result);

struct SummaryTable {
    std::map<std::string, double> config;
    std::vector<MetricSummary> rows;

    const MetricSummary* find(const std::string& scheme, const std::string& metric) const;
};

// Parses a file written by write_summary_csv. Throws ConfigError on malformed input.
SummaryTable read_summary_csv(std::istream& in);

struct ComparisonRow {
    std::string metric;
    std::string scheme;
    double empirical = 0.0;
    double stderr_ = 0.0;
    double analytic = 0.0;
    double relative_error = 0.0;
    double z = 0.0;
    // "estimate" rows flag |z| > 3; "bound" rows flag empirical > analytic + 3 SE.
    std::string kind;
    bool flagged = false;
};

struct AnalyticBundle {
    GeometryParams geometry;
    std::vector<double> group_probs;
    std::vector<double> fprc_omega;
    std::vector<double> orc_omega;
};

AnalyticBundle make_analytic_bundle(const GeometryParams& geometry, std::size_t files, std::size_t group_size, double s);

/// Empirical vs closed-form rows for degrees, per-group and average outage,
/// and the composed average delay. Throws ConfigError when the table's
/// config echo does not match the analytic parameterization.
std::vector<ComparisonRow> compare_analytic(const SummaryTable& stats, const AnalyticBundle& model,
                                            double flag_threshold = 3.0);

// Header: metric,scheme,empirical,stderr,analytic,rel_err,z,kind,flag
void write_comparison_csv(std::ostream& out, std::span<const ComparisonRow> rows);

// Summary table straight from an in-memory result.
SummaryTable to_table(const ExperimentConfig& config, const ExperimentResult& result);

}  // namespace hetcache
