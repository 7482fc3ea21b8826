// Command-line front end: analyze, simulate, sweep, compare, repro.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

#include "hetcache/analysis.hpp"
#include "hetcache/baselines.hpp"
#include "hetcache/config.hpp"
#include "hetcache/content.hpp"
#include "hetcache/errors.hpp"
#include "hetcache/experiment.hpp"
#include "hetcache/report.hpp"

using namespace hetcache;

namespace {

// --key value flags mirroring the config file keys.
struct KeyOptions {
    std::string config_path;
    std::map<std::string, std::string> values;
    std::vector<std::pair<std::string, CLI::Option*>> options;

    void attach(CLI::App* app)
    {
        app->add_option("--config", config_path, "flat key=value config file");
        for (const auto& key : config_keys()) {
            options.emplace_back(key, app->add_option("--" + key, values[key], "config key " + key));
        }
    }

    LoadedConfig load() const
    {
        ConfigEntries entries;
        if (!config_path.empty()) entries = read_config_file(config_path);
        for (const auto& [key, opt] : options) {
            if (opt->count() > 0) entries.emplace_back(key, values.at(key));
        }
        return build_config(entries);
    }
};

class Output {
public:
    explicit Output(const std::string& path)
    {
        if (!path.empty() && path != "-") {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw ConfigError("cannot open '" + path + "' for writing");
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

std::vector<double> parse_list(const std::string& text)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError("'" + item + "' is not a number");
        }
    }
    if (out.empty()) throw ConfigError("empty value list");
    return out;
}

int report_failures(const ExperimentResult& result)
{
    for (const auto& f : result.failures) std::cerr << "trial " << f.trial << " failed: " << f.message << '\n';
    return result.failures.empty() ? 0 : result.failures.front().exit_code;
}

void write_if(const std::string& path, const ExperimentResult& result,
              void (*writer)(std::ostream&, const ExperimentResult&))
{
    if (path.empty()) return;
    Output out(path);
    writer(out.stream(), result);
}

int cmd_analyze(const KeyOptions& keys)
{
    const LoadedConfig loaded = keys.load();
    const ExperimentConfig& c = loaded.config;
    validate(c.geometry);
    const auto bundle = make_analytic_bundle(c.geometry, c.files, c.group_size, c.zipf_s);
    const auto fprc = make_analytic_model(c.geometry, bundle.group_probs, bundle.fprc_omega);
    const auto orc = make_analytic_model(c.geometry, bundle.group_probs, bundle.orc_omega);

    Output file(loaded.out);
    std::ostream& out = file.stream();
    out << "quantity,scheme,group,value\n";
    auto row = [&](const std::string& q, const std::string& scheme, const std::string& group, double v) {
        out << q << ',' << scheme << ',' << group << ',' << format_double(v) << '\n';
    };
    row("beta", "", "", fprc.beta);
    row("c_coef", "", "", fprc.c_coef);
    row("a_coef", "", "", fprc.a_coef);
    row("zeta_U", "", "", fprc.zeta_U);
    row("zeta_B", "", "", fprc.zeta_B);
    row("zeta_U_noise_free", "", "", fprc.zeta_U_noise_free);
    row("zeta_B_noise_free", "", "", fprc.zeta_B_noise_free);
    row("c0", "", "", mbs_rate(c.geometry));
    row("mbs_delay", "", "", c.geometry.file_size / mbs_rate(c.geometry));
    for (const auto* m : {&fprc, &orc}) {
        const std::string scheme = m == &fprc ? "fprc" : "orc";
        const auto& omega = m == &fprc ? bundle.fprc_omega : bundle.orc_omega;
        for (std::size_t n = 0; n < omega.size(); ++n) {
            const std::string g = std::to_string(n + 1);
            row("popularity", scheme, g, bundle.group_probs[n]);
            row("omega", scheme, g, omega[n]);
            row("outage_bound", scheme, g, m->group_bound[n]);
            row("weighted_bound", scheme, g, m->group_bound[n] * bundle.group_probs[n]);
        }
        row("avg_outage_bound", scheme, "", m->average_bound);
    }
    return 0;
}

int cmd_simulate(const KeyOptions& keys, const std::string& trials_out, const std::string& trace_out,
                 const std::string& ledger_out)
{
    const LoadedConfig loaded = keys.load();
    if (!loaded.config.seed) throw ConfigError("--seed (or a 'seed' config key) is required");
    const ExperimentResult result = run_experiment(loaded.config);
    {
        Output out(loaded.out);
        write_summary_csv(out.stream(), loaded.config, result);
    }
    write_if(trials_out, result, write_trials_csv);
    write_if(trace_out, result, write_trace_csv);
    write_if(ledger_out, result, write_ledger_csv);
    return report_failures(result);
}

// Analytic value of a (scheme, metric) row, if the closed forms cover it.
std::map<std::pair<std::string, std::string>, std::pair<double, double>> analytic_lookup(
    const ExperimentConfig& config, const ExperimentResult& result)
{
    std::map<std::pair<std::string, std::string>, std::pair<double, double>> out;
    const auto bundle = make_analytic_bundle(config.geometry, config.files, config.group_size, config.zipf_s);
    for (const auto& row : compare_analytic(to_table(config, result), bundle)) {
        const std::string metric = row.metric == "zeta_U"   ? "factor_degree"
                                   : row.metric == "zeta_B" ? "variable_degree"
                                   : row.metric == "delay_composed" ? "delay"
                                                                    : row.metric;
        out[{row.scheme, metric}] = {row.analytic, row.relative_error};
    }
    return out;
}

int cmd_sweep(const KeyOptions& keys, const std::string& param, const std::string& values_text)
{
    const LoadedConfig loaded = keys.load();
    if (!loaded.config.seed) throw ConfigError("--seed (or a 'seed' config key) is required");
    if (param != "delta" && param != "s") throw ConfigError("--param must be 'delta' or 's'");
    const auto values = parse_list(values_text);
    std::vector<GridPoint> points;
    for (double v : values) {
        GridPoint p{loaded.config.geometry.delta, loaded.config.zipf_s, loaded.config.geometry.power};
        (param == "delta" ? p.delta : p.zipf_s) = v;
        points.push_back(p);
    }
    const auto results = run_grid(loaded.config, points);

    Output file(loaded.out);
    std::ostream& out = file.stream();
    out << "param,scheme,metric,mean,stderr,analytic,rel_err\n";
    int code = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        ExperimentConfig at = loaded.config;
        at.geometry.delta = points[i].delta;
        at.zipf_s = points[i].zipf_s;
        const auto analytic = analytic_lookup(at, results[i]);
        for (const auto& m : results[i].summary) {
            out << format_double(values[i]) << ',' << m.scheme << ',' << m.metric << ',' << format_double(m.mean) << ','
                << format_double(m.stderr_) << ',';
            const auto it = analytic.find({m.scheme, m.metric});
            if (it != analytic.end()) out << format_double(it->second.first) << ',' << format_double(it->second.second);
            else out << ',';
            out << '\n';
        }
        if (const int c = report_failures(results[i]); c != 0 && code == 0) code = c;
    }
    return code;
}

int cmd_compare(const KeyOptions& keys, const std::string& summary_path)
{
    std::ifstream in(summary_path);
    if (!in) throw ConfigError("cannot open summary '" + summary_path + "'");
    const SummaryTable table = read_summary_csv(in);

    // Parameters come from the summary's config echo unless overridden on the command line.
    ConfigEntries entries;
    auto echo = [&](const char* key) {
        if (auto it = table.config.find(key); it != table.config.end()) entries.emplace_back(key, format_double(it->second));
    };
    for (const char* key : {"lambda_B", "lambda_U", "power", "alpha", "sigma2", "delta", "bandwidth", "file_size",
                            "Q", "G", "s"}) {
        echo(key);
    }
    if (!keys.config_path.empty()) {
        const auto file = read_config_file(keys.config_path);
        entries.insert(entries.end(), file.begin(), file.end());
    }
    for (const auto& [key, opt] : keys.options) {
        if (opt->count() > 0) entries.emplace_back(key, keys.values.at(key));
    }
    const LoadedConfig loaded = build_config(entries);
    const ExperimentConfig& c = loaded.config;
    const auto bundle = make_analytic_bundle(c.geometry, c.files, c.group_size, c.zipf_s);
    const auto rows = compare_analytic(table, bundle);
    Output out(loaded.out);
    write_comparison_csv(out.stream(), rows);
    std::size_t flagged = 0;
    for (const auto& r : rows) flagged += r.flagged;
    std::cerr << rows.size() << " rows, " << flagged << " flagged\n";
    return 0;
}

// ---- repro -------------------------------------------------------------

struct ReproOptions {
    std::string target;
    std::size_t trials = 0;  // 0: per-target default
    std::uint64_t seed = 1;
    double side = 10.0;
    std::size_t workers = 1;
    std::string out;
};

const std::vector<double> kZipfGrid = {0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};

void repro_header(std::ostream& out)
{
    out << "series,x,scheme,metric,mean,stderr,analytic\n";
}

void repro_row(std::ostream& out, const std::string& series, double x, const std::string& scheme,
               const std::string& metric, double mean, double se, double analytic)
{
    out << series << ',' << format_double(x) << ',' << scheme << ',' << metric << ',' << format_double(mean) << ','
        << format_double(se) << ',';
    if (!std::isnan(analytic)) out << format_double(analytic);
    out << '\n';
}

int emit_grid(std::ostream& out, const std::string& series, const ExperimentConfig& config,
              const std::vector<GridPoint>& points, const std::vector<double>& xs,
              const std::vector<std::string>& metrics)
{
    const auto results = run_grid(config, points);
    int code = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        ExperimentConfig at = config;
        at.geometry.delta = points[i].delta;
        at.geometry.power = points[i].power;
        at.zipf_s = points[i].zipf_s;
        const auto analytic = analytic_lookup(at, results[i]);
        for (const auto& m : results[i].summary) {
            if (std::find(metrics.begin(), metrics.end(), m.metric) == metrics.end()) continue;
            const auto it = analytic.find({m.scheme, m.metric});
            repro_row(out, series, xs[i], m.scheme, m.metric, m.mean, m.stderr_,
                      it != analytic.end() ? it->second.first : std::nan(""));
        }
        if (const int c = report_failures(results[i]); c != 0 && code == 0) code = c;
    }
    return code;
}

ExperimentConfig ppp_config(const ReproOptions& o, double lambda_B, double lambda_U, std::size_t default_trials)
{
    ExperimentConfig c = preset(ScenarioKind::ppp_sweep);
    c.region = {o.side, true};
    c.geometry.lambda_B = lambda_B;
    c.geometry.lambda_U = lambda_U;
    c.trials = o.trials > 0 ? o.trials : default_trials;
    c.seed = o.seed;
    c.workers = o.workers;
    return c;
}

std::string density_series(double lb, double lu, double p)
{
    std::ostringstream s;
    s << "lambda_B=" << lb << ";lambda_U=" << lu << ";P=" << p;
    return s.str();
}

int cmd_repro(const ReproOptions& o)
{
    Output file(o.out);
    std::ostream& out = file.stream();
    repro_header(out);
    const std::vector<std::pair<double, double>> densities = {{50.0, 100.0}, {100.0, 200.0}};
    const std::vector<double> powers = {2.0, 4.0};
    int code = 0;
    auto keep = [&](int c) {
        if (c != 0 && code == 0) code = c;
    };

    const std::string& t = o.target;
    if (t == "factor-degree" || t == "variable-degree" || t == "outage-vs-delta") {
        const std::vector<double> deltas = t == "outage-vs-delta" ? std::vector<double>{0.01, 0.03, 0.05, 0.07, 0.1}
                                                       : std::vector<double>{0.02, 0.04, 0.06, 0.08, 0.1};
        const std::vector<std::string> metrics =
            t == "factor-degree" ? std::vector<std::string>{"factor_degree"}
            : t == "variable-degree" ? std::vector<std::string>{"variable_degree"} : std::vector<std::string>{"outage_avg"};
        for (const auto& [lb, lu] : densities) {
            ExperimentConfig c = ppp_config(o, lb, lu, 500);
            if (t != "outage-vs-delta") c.schemes.clear();
            c.zipf_s = 0.5;
            for (double p : powers) {
                std::vector<GridPoint> pts;
                for (double d : deltas) pts.push_back({d, 0.5, p});
                keep(emit_grid(out, density_series(lb, lu, p), c, pts, deltas, metrics));
            }
        }
    } else if (t == "group-bounds") {
        GeometryParams g;
        g.delta = 0.03;
        const auto bundle = make_analytic_bundle(g, 100, 5, 0.5);
        for (const auto* omega : {&bundle.fprc_omega, &bundle.orc_omega}) {
            const std::string scheme = omega == &bundle.fprc_omega ? "fprc" : "orc";
            for (std::size_t n = 0; n < omega->size(); ++n) {
                const double v = outage_bound(omega->at(n), g.delta, g.alpha) * bundle.group_probs[n];
                repro_row(out, "delta=0.03;s=0.5", static_cast<double>(n + 1), scheme, "weighted_bound", v, 0.0, v);
            }
        }
    } else if (t == "outage-vs-s" || t == "delay-vs-s") {
        const std::string metric = t == "outage-vs-s" ? "outage_avg" : "delay";
        for (const auto& [lb, lu] : densities) {
            ExperimentConfig c = ppp_config(o, lb, lu, 500);
            c.geometry.delta = 0.03;
            for (double p : powers) {
                std::vector<GridPoint> pts;
                for (double s : kZipfGrid) pts.push_back({0.03, s, p});
                keep(emit_grid(out, density_series(lb, lu, p), c, pts, kZipfGrid, {metric}));
            }
        }
    } else if (t == "delay-scenario1" || t == "delay-scenario2" || t == "delay-large-scale" || t == "iterations") {
        std::vector<ScenarioKind> kinds;
        if (t == "delay-scenario1") kinds = {ScenarioKind::scenario1};
        if (t == "delay-scenario2") kinds = {ScenarioKind::scenario2_case1, ScenarioKind::scenario2_case2};
        if (t == "delay-large-scale") kinds = {ScenarioKind::large_scale};
        if (t == "iterations") kinds = {ScenarioKind::scenario1, ScenarioKind::scenario2_case1, ScenarioKind::scenario2_case2};
        for (ScenarioKind kind : kinds) {
            ExperimentConfig c = preset(kind);
            if (o.trials > 0) c.trials = o.trials;
            c.seed = o.seed;
            c.workers = o.workers;
            if (t == "iterations") c.schemes = {Scheme::bp, Scheme::hbp};
            std::vector<GridPoint> pts;
            for (double s : kZipfGrid) pts.push_back({c.geometry.delta, s, c.geometry.power});
            const std::vector<std::string> metrics =
                t == "iterations" ? std::vector<std::string>{"iterations"} : std::vector<std::string>{"delay"};
            keep(emit_grid(out, std::string(to_string(kind)), c, pts, kZipfGrid, metrics));
        }
    } else {
        throw ConfigError("unknown repro target '" + t + "' (factor-degree, variable-degree, group-bounds, outage-vs-delta, outage-vs-s, delay-vs-s, delay-scenario1, delay-scenario2, delay-large-scale, iterations)");
    }
    return code;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Cache placement in heterogeneous cellular networks: belief propagation, random caching and "
                 "stochastic-geometry analysis"};
    app.require_subcommand(1);

    KeyOptions analyze_keys;
    auto* analyze = app.add_subcommand("analyze", "closed-form degrees, interference terms and outage bounds");
    analyze_keys.attach(analyze);

    KeyOptions sim_keys;
    std::string trials_out, trace_out, ledger_out;
    auto* simulate = app.add_subcommand("simulate", "Monte-Carlo run of one configuration");
    sim_keys.attach(simulate);
    simulate->add_option("--trials-out", trials_out, "per-trial samples CSV");
    simulate->add_option("--trace-out", trace_out, "BP residual trace CSV");
    simulate->add_option("--ledger-out", ledger_out, "HBP communication ledger CSV");

    KeyOptions sweep_keys;
    std::string param, values;
    auto* sweep = app.add_subcommand("sweep", "grid over delta or s");
    sweep_keys.attach(sweep);
    sweep->add_option("--param", param, "delta or s")->required();
    sweep->add_option("--values", values, "comma-separated grid")->required();

    KeyOptions compare_keys;
    std::string summary;
    auto* compare = app.add_subcommand("compare", "empirical summary vs closed forms");
    compare_keys.attach(compare);
    compare->add_option("--summary", summary, "summary CSV written by simulate")->required();

    ReproOptions repro_opts;
    auto* repro = app.add_subcommand("repro", "canned sweeps and scenario runs");
    repro->add_option("target", repro_opts.target, "one of: factor-degree, variable-degree, group-bounds, outage-vs-delta, outage-vs-s, delay-vs-s, delay-scenario1, delay-scenario2, delay-large-scale, iterations")->required();
    repro->add_option("--trials", repro_opts.trials, "trials per point (default: per target)");
    repro->add_option("--seed", repro_opts.seed, "master seed");
    repro->add_option("--side", repro_opts.side, "PPP window side in km");
    repro->add_option("--workers", repro_opts.workers, "worker threads");
    repro->add_option("--out", repro_opts.out, "output CSV (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (analyze->parsed()) return cmd_analyze(analyze_keys);
        if (simulate->parsed()) return cmd_simulate(sim_keys, trials_out, trace_out, ledger_out);
        if (sweep->parsed()) return cmd_sweep(sweep_keys, param, values);
        if (compare->parsed()) return cmd_compare(compare_keys, summary);
        if (repro->parsed()) return cmd_repro(repro_opts);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const ResourceError& e) {
        std::cerr << "resource limit: " << e.what() << '\n';
        return 3;
    } catch (const NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
