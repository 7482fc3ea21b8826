#include "hetcache/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "hetcache/analysis.hpp"
#include "hetcache/baselines.hpp"
#include "hetcache/content.hpp"
#include "hetcache/errors.hpp"
#include "hetcache/factor_graph.hpp"
#include "hetcache/objective.hpp"

namespace hetcache {

namespace {

struct ScenarioName {
    ScenarioKind kind;
    std::string_view name;
};

constexpr ScenarioName kScenarioNames[] = {
    {ScenarioKind::ppp_sweep, "ppp-sweep"},
    {ScenarioKind::fixed_topology, "fixed-topology"},
    {ScenarioKind::scenario1, "scenario1"},
    {ScenarioKind::scenario2_case1, "scenario2-case1"},
    {ScenarioKind::scenario2_case2, "scenario2-case2"},
    {ScenarioKind::large_scale, "large-scale"},
};

struct SchemeName {
    Scheme scheme;
    std::string_view name;
};

constexpr SchemeName kSchemeNames[] = {
    {Scheme::bp, "bp"}, {Scheme::hbp, "hbp"}, {Scheme::fprc, "fprc"}, {Scheme::orc, "orc"},
    {Scheme::exhaustive, "exhaustive"},
};

int exit_code_of(const std::exception& e)
{
    if (dynamic_cast<const ConfigError*>(&e)) return 2;
    if (dynamic_cast<const ResourceError*>(&e)) return 3;
    if (dynamic_cast<const NumericError*>(&e)) return 4;
    return 1;
}

}  // namespace

std::string_view to_string(ScenarioKind kind)
{
    for (const auto& s : kScenarioNames) {
        if (s.kind == kind) return s.name;
    }
    return "unknown";
}

std::string_view to_string(Scheme scheme)
{
    for (const auto& s : kSchemeNames) {
        if (s.scheme == scheme) return s.name;
    }
    return "unknown";
}

ScenarioKind parse_scenario(std::string_view text)
{
    for (const auto& s : kScenarioNames) {
        if (s.name == text) return s.kind;
    }
    throw ConfigError("unknown scenario '" + std::string(text) + "'");
}

Scheme parse_scheme(std::string_view text)
{
    for (const auto& s : kSchemeNames) {
        if (s.name == text) return s.scheme;
    }
    throw ConfigError("unknown scheme '" + std::string(text) + "'");
}

bool ExperimentConfig::has(Scheme scheme) const
{
    return std::find(schemes.begin(), schemes.end(), scheme) != schemes.end();
}

ExperimentConfig preset(ScenarioKind kind)
{
    ExperimentConfig c;
    c.scenario = kind;
    c.geometry.power = 2.0;
    c.geometry.alpha = 4.0;
    c.geometry.sigma2 = 1e-10;
    c.files = 100;
    c.zipf_s = 0.5;
    switch (kind) {
    case ScenarioKind::ppp_sweep:
        c.region = {10.0, true};
        c.geometry.lambda_B = 50.0;
        c.geometry.lambda_U = 100.0;
        c.geometry.delta = 0.05;
        c.group_size = 5;
        c.schemes = {Scheme::fprc, Scheme::orc};
        c.trials = 500;
        break;
    case ScenarioKind::fixed_topology:
    case ScenarioKind::scenario1:
        c.region = {0.6, false};
        c.sbs_count = 8;
        c.mu_count = 4;
        c.group_size = 25;
        c.geometry.delta = 0.1;
        c.schemes = {Scheme::exhaustive, Scheme::bp, Scheme::hbp, Scheme::orc, Scheme::fprc};
        c.trials = 200;
        break;
    case ScenarioKind::scenario2_case1:
    case ScenarioKind::scenario2_case2:
        c.region = {1.5, false};
        c.sbs_count = 50;
        c.mu_count = 25;
        c.group_size = kind == ScenarioKind::scenario2_case1 ? 20 : 10;
        c.geometry.delta = 0.1;
        c.schemes = {Scheme::bp, Scheme::hbp, Scheme::orc, Scheme::fprc};
        c.trials = 100;
        break;
    case ScenarioKind::large_scale:
        c.region = {5.0, false};
        c.sbs_count = 50;
        c.mu_count = 100;
        c.files = 1000;
        c.group_size = 20;
        c.geometry.delta = 0.2;
        c.schemes = {Scheme::bp, Scheme::hbp, Scheme::orc, Scheme::fprc};
        c.trials = 20;
        break;
    }
    return c;
}

void validate(const ExperimentConfig& c)
{
    validate(c.geometry);
    std::ostringstream why;
    if (c.trials == 0) why << "trials must be at least 1; ";
    if (c.workers == 0) why << "workers must be at least 1; ";
    if (!(c.region.side > 0.0)) why << "side must be positive; ";
    if (c.group_size == 0 || c.files == 0 || c.files % c.group_size != 0) {
        why << "Q must be a positive multiple of G; ";
    }
    if (!(c.zipf_s >= 0.0)) why << "s must be non-negative; ";
    if (c.bp.max_iterations == 0) why << "T must be at least 1; ";
    if (!(c.bp.tolerance > 0.0)) why << "eps must be positive; ";
    if (!(c.bp.mu >= 0.0)) why << "mu must be non-negative (0 selects the default); ";
    if (!(c.bp.enumeration_cap >= 1.0)) why << "cap must be at least 1; ";
    if (!c.is_ppp() && c.sbs_count == 0) why << "K must be at least 1; ";
    if (!c.is_ppp() && c.mu_count == 0) why << "J must be at least 1; ";
    if (c.has(Scheme::exhaustive)) {
        const std::size_t groups = c.group_size > 0 ? c.files / c.group_size : 0;
        if (c.is_ppp()) {
            why << "exhaustive search needs a fixed SBS count; ";
        } else if (std::pow(static_cast<double>(groups), static_cast<double>(c.sbs_count)) > c.bp.enumeration_cap) {
            why << "exhaustive search over N^K = " << groups << "^" << c.sbs_count << " exceeds the cap; ";
        }
    }
    const std::string text = why.str();
    if (!text.empty()) throw ConfigError("invalid experiment: " + text.substr(0, text.size() - 2));
}

void TrialStats::add(std::string scheme, std::string metric, double value)
{
    samples.push_back({std::move(scheme), std::move(metric), value});
}

std::optional<double> TrialStats::find(std::string_view scheme, std::string_view metric) const
{
    for (const auto& s : samples) {
        if (s.scheme == scheme && s.metric == metric) return s.value;
    }
    return std::nullopt;
}

const MetricSummary* ExperimentResult::find(std::string_view scheme, std::string_view metric) const
{
    for (const auto& s : summary) {
        if (s.scheme == scheme && s.metric == metric) return &s;
    }
    return nullptr;
}

std::vector<MetricSummary> summarize(std::span<const TrialStats> trials)
{
    // Welford accumulation in trial order; rows in order of first appearance.
    struct Acc {
        std::size_t n = 0;
        double mean = 0.0;
        double m2 = 0.0;
    };
    std::vector<std::pair<std::string, std::string>> keys;
    std::map<std::pair<std::string, std::string>, Acc> acc;
    for (const auto& t : trials) {
        for (const auto& s : t.samples) {
            auto key = std::make_pair(s.scheme, s.metric);
            auto [it, inserted] = acc.try_emplace(key);
            if (inserted) keys.push_back(key);
            Acc& a = it->second;
            ++a.n;
            const double d = s.value - a.mean;
            a.mean += d / static_cast<double>(a.n);
            a.m2 += d * (s.value - a.mean);
        }
    }
    std::vector<MetricSummary> out;
    for (const auto& key : keys) {
        const Acc& a = acc[key];
        MetricSummary m;
        m.scheme = key.first;
        m.metric = key.second;
        m.mean = a.mean;
        m.count = a.n;
        m.stderr_ = a.n > 1 ? std::sqrt(a.m2 / static_cast<double>(a.n - 1) / static_cast<double>(a.n)) : 0.0;
        out.push_back(std::move(m));
    }
    return out;
}

namespace {

// Everything a grid point needs that does not depend on the trial.
struct PointContext {
    GridPoint point;
    GeometryParams geometry;
    std::vector<double> group_probs;
    std::vector<double> fprc;
    std::vector<double> orc;
};

std::vector<PointContext> prepare_points(const ExperimentConfig& config, std::span<const GridPoint> points)
{
    std::vector<PointContext> out;
    for (const auto& p : points) {
        PointContext ctx;
        ctx.point = p;
        ctx.geometry = config.geometry;
        ctx.geometry.delta = p.delta;
        ctx.geometry.power = p.power;
        validate(ctx.geometry);
        ctx.group_probs = PopularityModel::zipf(config.files, config.group_size, p.zipf_s).group_probs;
        if (config.has(Scheme::fprc)) ctx.fprc = fprc_omega(ctx.group_probs);
        if (config.has(Scheme::orc)) ctx.orc = orc_omega_checked(ctx.group_probs, p.delta, ctx.geometry.alpha);
        out.push_back(std::move(ctx));
    }
    return out;
}

// Node positions and fading of one trial; candidate sets are derived per point.
struct Realization {
    std::size_t sbs_count = 0;
    std::size_t mu_count = 0;
    LinkScan scan;                // PPP scenarios
    std::optional<Topology> topo;  // fixed-count scenarios
    Region region;
};

Realization realize(const ExperimentConfig& config, std::span<const PointContext> points, std::size_t trial)
{
    const RandomStream master(*config.seed);
    // The fixed-topology scenario keeps the nodes of trial 0 for every trial.
    const std::size_t layout = config.scenario == ScenarioKind::fixed_topology ? 0 : trial;
    const RandomStream nodes = master.substream(layout);
    RandomStream sbs_rng = substream(nodes, StreamTag::sbs_positions);
    RandomStream mu_rng = substream(nodes, StreamTag::mu_positions);
    const RandomStream fading = substream(nodes, StreamTag::fading);

    Realization r;
    r.region = config.region;
    if (config.is_ppp()) {
        const auto sbs = sample_ppp(config.geometry.lambda_B, config.region, sbs_rng);
        const auto mu = sample_ppp(config.geometry.lambda_U, config.region, mu_rng);
        double floor = points.front().point.delta;
        for (const auto& p : points) floor = std::min(floor, p.point.delta);
        r.scan = scan_links(sbs, mu, config.region, config.geometry.alpha, floor, fading);
        r.sbs_count = sbs.size();
        r.mu_count = mu.size();
    } else {
        auto sbs = sample_uniform(config.sbs_count, config.region, sbs_rng);
        auto mu = sample_uniform(config.mu_count, config.region, mu_rng);
        r.topo.emplace(make_topology(std::move(sbs), std::move(mu), config.region, config.geometry.power, fading));
        r.sbs_count = config.sbs_count;
        r.mu_count = config.mu_count;
    }
    return r;
}

DelayModel delay_model(const Realization& r, const PointContext& ctx)
{
    if (r.topo) {
        GeometryParams g = ctx.geometry;
        Topology topo = *r.topo;
        if (g.power != topo.power(0)) {
            std::vector<double> fading;
            fading.reserve(topo.mu_count() * topo.sbs_count());
            for (std::size_t j = 0; j < topo.mu_count(); ++j) {
                for (std::size_t k = 0; k < topo.sbs_count(); ++k) fading.push_back(topo.fading(k, j));
            }
            topo = Topology(topo.sbs_positions(), topo.mu_positions(), std::vector<double>(topo.sbs_count(), g.power),
                            std::move(fading), r.region);
        }
        return DelayModel::from_topology(topo, g, ctx.group_probs);
    }
    std::vector<std::vector<double>> sinrs;
    const CandidateSets sets = r.scan.candidates(ctx.geometry.delta, ctx.geometry.power, ctx.geometry.sigma2, &sinrs);
    return DelayModel::from_sinr(r.sbs_count, sets, sinrs, ctx.geometry, ctx.group_probs);
}

// Fraction of MUs with no candidate caching each group.
std::vector<double> outage_by_group(const DelayModel& model, std::span<const std::size_t> group_of_sbs)
{
    const std::size_t N = model.group_count();
    std::vector<double> miss(N, 0.0);
    if (model.mu_count() == 0) return miss;
    std::vector<char> hit(N);
    for (std::size_t j = 0; j < model.mu_count(); ++j) {
        std::fill(hit.begin(), hit.end(), 0);
        for (std::size_t k : model.candidates[j]) hit[group_of_sbs[k]] = 1;
        for (std::size_t n = 0; n < N; ++n) miss[n] += hit[n] ? 0.0 : 1.0;
    }
    for (double& m : miss) m /= static_cast<double>(model.mu_count());
    return miss;
}

void record_placement(TrialStats& stats, const std::string& scheme, const DelayModel& model,
                      std::span<const std::size_t> groups)
{
    const auto miss = outage_by_group(model, groups);
    double avg = 0.0;
    for (std::size_t n = 0; n < miss.size(); ++n) {
        avg += model.group_probs[n] * miss[n];
        stats.add(scheme, "outage_group_" + std::to_string(n + 1), miss[n]);
    }
    stats.add(scheme, "outage_avg", avg);
    if (model.mu_count() == 0) return;
    stats.add(scheme, "delay", average_delay(groups, model));
    const double ds = mean_sbs_delay(groups, model);
    if (!std::isnan(ds)) stats.add(scheme, "delay_sbs", ds);
}

TrialStats run_point(const ExperimentConfig& config, const Realization& r, const PointContext& ctx, std::size_t trial)
{
    TrialStats stats;
    stats.trial = trial;
    const RandomStream stream = RandomStream(*config.seed).substream(trial);
    const DelayModel model = delay_model(r, ctx);
    const std::size_t K = model.sbs_count;
    const std::size_t J = model.mu_count();

    const CandidateSets sets = from_mu_lists(model.candidates, K);
    stats.add("graph", "sbs", static_cast<double>(K));
    stats.add("graph", "mu", static_cast<double>(J));
    stats.add("graph", "edges", static_cast<double>(sets.edge_count()));
    if (J > 0) stats.add("graph", "factor_degree", static_cast<double>(sets.edge_count()) / static_cast<double>(J));
    if (K > 0) stats.add("graph", "variable_degree", static_cast<double>(sets.edge_count()) / static_cast<double>(K));

    std::optional<double> optimum;
    std::map<Scheme, double> delays;
    const bool need_graph = config.has(Scheme::bp) || config.has(Scheme::hbp);
    FactorGraph graph;
    std::vector<LocalUtility> utilities;
    if (need_graph) {
        graph = build_factor_graph(model);
        utilities = build_local_utilities(graph, model);
    }

    for (Scheme scheme : config.schemes) {
        const std::string name(to_string(scheme));
        switch (scheme) {
        case Scheme::fprc:
        case Scheme::orc: {
            const bool fprc = scheme == Scheme::fprc;
            RandomStream rng = substream(stream, fprc ? StreamTag::fprc_placement : StreamTag::orc_placement);
            const auto placement = random_caching(fprc ? ctx.fprc : ctx.orc, K, rng);
            const auto groups = placement.groups();
            record_placement(stats, name, model, groups);
            if (J > 0) delays[scheme] = average_delay(groups, model);
            break;
        }
        case Scheme::bp: {
            const BpResult res = run_bp(graph, utilities, model.group_probs, config.bp, model.mbs_delay());
            const auto groups = res.placement.groups();
            record_placement(stats, name, model, groups);
            if (J > 0) delays[scheme] = average_delay(groups, model);
            const CommCost per = bp_cost_per_iteration(graph);
            stats.add(name, "iterations", static_cast<double>(res.iterations));
            stats.add(name, "converged", res.converged ? 1.0 : 0.0);
            stats.add(name, "traffic_words", static_cast<double>(per.words * res.iterations));
            stats.add(name, "traffic_bits", static_cast<double>(per.bits * res.iterations));
            for (const auto& rec : res.trace) stats.trace.push_back({name, rec.iteration, rec.residual, rec.churn});
            break;
        }
        case Scheme::hbp: {
            const HbpResult res =
                hbp_run(graph, utilities, model.group_probs, config.bp, model.mbs_delay(), substream(stream, StreamTag::hbp));
            const auto groups = res.placement.groups();
            record_placement(stats, name, model, groups);
            if (J > 0) delays[scheme] = average_delay(groups, model);
            const CommCost total = res.ledger.hbp_total();
            const CommCost bp_equiv = res.ledger.bp_equivalent_total();
            stats.add(name, "iterations", static_cast<double>(res.iterations));
            stats.add(name, "stabilized", res.stabilized ? 1.0 : 0.0);
            stats.add(name, "traffic_words", static_cast<double>(total.words));
            stats.add(name, "traffic_bits", static_cast<double>(total.bits));
            stats.add(name, "bp_equivalent_words", static_cast<double>(bp_equiv.words));
            stats.add(name, "bp_equivalent_bits", static_cast<double>(bp_equiv.bits));
            stats.ledger.insert(stats.ledger.end(), res.ledger.rows.begin(), res.ledger.rows.end());
            break;
        }
        case Scheme::exhaustive: {
            if (J == 0) break;
            const ExhaustiveResult res = exhaustive_search(model, config.bp.enumeration_cap);
            record_placement(stats, name, model, res.placement.groups());
            optimum = res.delay;
            delays[scheme] = res.delay;
            break;
        }
        }
    }
    if (optimum) {
        for (const auto& [scheme, d] : delays) {
            if (scheme != Scheme::exhaustive) stats.add(std::string(to_string(scheme)), "gap", d / *optimum - 1.0);
        }
    }
    return stats;
}

std::vector<TrialStats> run_trial_points(const ExperimentConfig& config, std::span<const PointContext> points,
                                         std::size_t trial)
{
    const Realization r = realize(config, points, trial);
    std::vector<TrialStats> out;
    out.reserve(points.size());
    for (const auto& ctx : points) out.push_back(run_point(config, r, ctx, trial));
    return out;
}

GridPoint point_of(const ExperimentConfig& config)
{
    return {config.geometry.delta, config.zipf_s, config.geometry.power};
}

}  // namespace

std::vector<ExperimentResult> run_grid(const ExperimentConfig& config, std::span<const GridPoint> points)
{
    validate(config);
    if (!config.seed) throw ConfigError("a master seed is required");
    if (points.empty()) throw ConfigError("empty parameter grid");
    const auto contexts = prepare_points(config, points);

    const std::size_t T = config.trials;
    std::vector<std::vector<TrialStats>> per_trial(T);
    std::vector<std::optional<TrialFailure>> failed(T);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t t = next.fetch_add(1); t < T; t = next.fetch_add(1)) {
            try {
                per_trial[t] = run_trial_points(config, contexts, t);
            } catch (const std::exception& e) {
                failed[t] = TrialFailure{t, e.what(), exit_code_of(e)};
            }
        }
    };
    const std::size_t threads = std::min(config.workers, T);
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
    }

    std::vector<ExperimentResult> results(points.size());
    for (std::size_t t = 0; t < T; ++t) {
        if (failed[t]) {
            for (auto& r : results) r.failures.push_back(*failed[t]);
            continue;
        }
        for (std::size_t p = 0; p < points.size(); ++p) results[p].trials.push_back(std::move(per_trial[t][p]));
    }
    for (auto& r : results) r.summary = summarize(r.trials);
    return results;
}

ExperimentResult run_experiment(const ExperimentConfig& config)
{
    const GridPoint p = point_of(config);
    return std::move(run_grid(config, std::span<const GridPoint>(&p, 1)).front());
}

TrialStats run_trial(const ExperimentConfig& config, std::size_t trial)
{
    validate(config);
    if (!config.seed) throw ConfigError("a master seed is required");
    const GridPoint p = point_of(config);
    const auto contexts = prepare_points(config, std::span<const GridPoint>(&p, 1));
    return std::move(run_trial_points(config, contexts, trial).front());
}

}  // namespace hetcache
