#include "hetcache/report.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "hetcache/baselines.hpp"
#include "hetcache/content.hpp"
#include "hetcache/errors.hpp"

namespace hetcache {

std::string format_double(double value)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", value);
    return buf;
}

std::vector<std::pair<std::string, double>> config_echo(const ExperimentConfig& c)
{
    const auto& g = c.geometry;
    return {
        {"scenario_" + std::string(to_string(c.scenario)), 1.0},
        {"ppp", c.is_ppp() ? 1.0 : 0.0},
        {"lambda_B", g.lambda_B},
        {"lambda_U", g.lambda_U},
        {"power", g.power},
        {"alpha", g.alpha},
        {"sigma2", g.sigma2},
        {"delta", g.delta},
        {"bandwidth", g.bandwidth},
        {"file_size", g.file_size},
        {"c0", mbs_rate(g)},
        {"side", c.region.side},
        {"wrap", c.region.wrap ? 1.0 : 0.0},
        {"K", static_cast<double>(c.sbs_count)},
        {"J", static_cast<double>(c.mu_count)},
        {"Q", static_cast<double>(c.files)},
        {"G", static_cast<double>(c.group_size)},
        {"s", c.zipf_s},
        {"trials", static_cast<double>(c.trials)},
        {"seed", c.seed ? static_cast<double>(*c.seed) : std::nan("")},
        {"T", static_cast<double>(c.bp.max_iterations)},
        {"eps", c.bp.tolerance},
        {"mu", c.bp.mu},
        {"cap", c.bp.enumeration_cap},
    };
}

void write_summary_csv(std::ostream& out, const ExperimentConfig& config, const ExperimentResult& result)
{
    out << "scheme,metric,mean,stderr,count\n";
    for (const auto& [key, value] : config_echo(config)) out << "config," << key << ',' << format_double(value) << ",0,1\n";
    out << "run,failed_trials," << result.failures.size() << ",0," << config.trials << '\n';
    for (const auto& m : result.summary) {
        out << m.scheme << ',' << m.metric << ',' << format_double(m.mean) << ',' << format_double(m.stderr_) << ','
            << m.count << '\n';
    }
}

void write_trials_csv(std::ostream& out, const ExperimentResult& result)
{
    out << "trial,scheme,metric,value\n";
    for (const auto& t : result.trials) {
        for (const auto& s : t.samples) out << t.trial << ',' << s.scheme << ',' << s.metric << ',' << format_double(s.value) << '\n';
    }
}

void write_trace_csv(std::ostream& out, const ExperimentResult& result)
{
    out << "trial,scheme,iteration,residual,churn\n";
    for (const auto& t : result.trials) {
        for (const auto& r : t.trace) {
            out << t.trial << ',' << r.scheme << ',' << r.iteration << ',' << format_double(r.residual) << ','
                << r.churn << '\n';
        }
    }
}

void write_ledger_csv(std::ostream& out, const ExperimentResult& result)
{
    out << "trial,iteration,hbp_words,hbp_bits,bp_words,bp_bits\n";
    for (const auto& t : result.trials) {
        for (const auto& r : t.ledger) {
            out << t.trial << ',' << r.iteration << ',' << r.hbp.words << ',' << r.hbp.bits << ','
                << r.bp_equivalent.words << ',' << r.bp_equivalent.bits << '\n';
        }
    }
}

const MetricSummary* SummaryTable::find(const std::string& scheme, const std::string& metric) const
{
    for (const auto& r : rows) {
        if (r.scheme == scheme && r.metric == metric) return &r;
    }
    return nullptr;
}

namespace {

std::vector<std::string> split_csv(const std::string& line)
{
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_number(const std::string& text, std::size_t line)
{
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        if (text == "nan" || text == "-nan") return std::nan("");
        throw ConfigError("summary line " + std::to_string(line) + ": bad number '" + text + "'");
    }
}

}  // namespace

SummaryTable read_summary_csv(std::istream& in)
{
    SummaryTable table;
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("summary: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "scheme,metric,mean,stderr,count") throw ConfigError("summary: unexpected header '" + line + "'");
    for (std::size_t number = 2; std::getline(in, line); ++number) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = split_csv(line);
        if (cells.size() != 5) throw ConfigError("summary line " + std::to_string(number) + ": expected 5 columns");
        if (cells[0] == "config") {
            table.config[cells[1]] = parse_number(cells[2], number);
            continue;
        }
        MetricSummary m;
        m.scheme = cells[0];
        m.metric = cells[1];
        m.mean = parse_number(cells[2], number);
        m.stderr_ = parse_number(cells[3], number);
        m.count = static_cast<std::size_t>(parse_number(cells[4], number));
        table.rows.push_back(std::move(m));
    }
    return table;
}

AnalyticBundle make_analytic_bundle(const GeometryParams& geometry, std::size_t files, std::size_t group_size, double s)
{
    AnalyticBundle b;
    b.geometry = geometry;
    b.group_probs = PopularityModel::zipf(files, group_size, s).group_probs;
    b.fprc_omega = fprc_omega(b.group_probs);
    b.orc_omega = orc_omega_checked(b.group_probs, geometry.delta, geometry.alpha);
    return b;
}

namespace {

void check_match(const SummaryTable& stats, const std::string& key, double expected)
{
    const auto it = stats.config.find(key);
    if (it == stats.config.end()) return;
    const double got = it->second;
    if (std::fabs(got - expected) > 1e-9 * std::max(1.0, std::fabs(expected))) {
        throw ConfigError("parameter mismatch for '" + key + "': simulation used " + format_double(got) +
                          ", analytic model uses " + format_double(expected));
    }
}

ComparisonRow make_row(std::string metric, std::string scheme, const MetricSummary& emp, double analytic,
                       std::string kind, double threshold)
{
    ComparisonRow r;
    r.metric = std::move(metric);
    r.scheme = std::move(scheme);
    r.empirical = emp.mean;
    r.stderr_ = emp.stderr_;
    r.analytic = analytic;
    r.relative_error = analytic != 0.0 ? (emp.mean - analytic) / analytic : emp.mean - analytic;
    const double diff = emp.mean - analytic;
    if (emp.stderr_ > 0.0) {
        r.z = diff / emp.stderr_;
    } else {
        r.z = diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
    }
    r.kind = std::move(kind);
    if (r.kind == "bound") {
        r.flagged = emp.mean > analytic + threshold * emp.stderr_ * (1.0 + 1e-12) + 1e-12 * std::fabs(analytic);
    } else {
        r.flagged = std::fabs(r.z) > threshold;
    }
    return r;
}

}  // namespace

std::vector<ComparisonRow> compare_analytic(const SummaryTable& stats, const AnalyticBundle& model,
                                            double flag_threshold)
{
    const GeometryParams& g = model.geometry;
    check_match(stats, "delta", g.delta);
    check_match(stats, "alpha", g.alpha);
    check_match(stats, "lambda_B", g.lambda_B);
    check_match(stats, "lambda_U", g.lambda_U);
    check_match(stats, "power", g.power);
    check_match(stats, "sigma2", g.sigma2);
    if (stats.config.count("Q") && stats.config.count("G")) {
        const double groups = stats.config.at("Q") / stats.config.at("G");
        check_match(stats, "Q", groups * stats.config.at("G"));
        if (std::fabs(groups - static_cast<double>(model.group_probs.size())) > 1e-9) {
            throw ConfigError("parameter mismatch: simulation has " + format_double(groups) +
                              " file groups, analytic model has " + std::to_string(model.group_probs.size()));
        }
    }

    std::vector<ComparisonRow> rows;
    const auto ppp = stats.config.find("ppp");
    if (ppp == stats.config.end() || ppp->second != 0.0) {
        const Degrees deg = degrees_exact(g);
        if (const auto* m = stats.find("graph", "factor_degree")) {
            rows.push_back(make_row("zeta_U", "graph", *m, deg.zeta_U, "estimate", flag_threshold));
        }
        if (const auto* m = stats.find("graph", "variable_degree")) {
            rows.push_back(make_row("zeta_B", "graph", *m, deg.zeta_B, "estimate", flag_threshold));
        }
    }

    const double c = interference_coef_c(g.delta, g.alpha);
    const double a = interference_coef_a(g.delta, g.alpha);
    for (const auto& [scheme, omega] : {std::pair{std::string("fprc"), model.fprc_omega},
                                        std::pair{std::string("orc"), model.orc_omega}}) {
        double avg = 0.0;
        for (std::size_t n = 0; n < omega.size(); ++n) {
            const double bound = outage_bound_from_coefs(omega[n], c, a);
            avg += model.group_probs[n] * bound;
            const std::string metric = "outage_group_" + std::to_string(n + 1);
            if (const auto* m = stats.find(scheme, metric)) {
                rows.push_back(make_row(metric, scheme, *m, bound, "bound", flag_threshold));
            }
        }
        if (const auto* m = stats.find(scheme, "outage_avg")) {
            rows.push_back(make_row("outage_avg", scheme, *m, avg, "bound", flag_threshold));
        }
        const auto* ds = stats.find(scheme, "delay_sbs");
        const auto* d = stats.find(scheme, "delay");
        if (ds && d) {
            const double composed = avg_delay_composed(avg, ds->mean, g.file_size, mbs_rate(g));
            rows.push_back(make_row("delay_composed", scheme, *d, composed, "bound", flag_threshold));
        }
    }
    return rows;
}

void write_comparison_csv(std::ostream& out, std::span<const ComparisonRow> rows)
{
    out << "metric,scheme,empirical,stderr,analytic,rel_err,z,kind,flag\n";
    for (const auto& r : rows) {
        out << r.metric << ',' << r.scheme << ',' << format_double(r.empirical) << ',' << format_double(r.stderr_) << ','
            << format_double(r.analytic) << ',' << format_double(r.relative_error) << ',' << format_double(r.z) << ','
            << r.kind << ',' << (r.flagged ? 1 : 0) << '\n';
    }
}

SummaryTable to_table(const ExperimentConfig& config, const ExperimentResult& result)
{
    SummaryTable t;
    for (const auto& [key, value] : config_echo(config)) t.config[key] = value;
    t.rows = result.summary;
    return t;
}

}  // namespace hetcache
