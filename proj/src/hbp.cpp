#include "hetcache/hbp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hetcache {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::uint64_t bits_for(std::uint64_t values)
{
    // Fewest bits that distinguish `values` symbols, at least one.
    std::uint64_t b = 1;
    while ((std::uint64_t{1} << b) < values) ++b;
    return b;
}

// Inverse-CDF draw; written out rather than std::discrete_distribution so that
// the sequence does not depend on the standard library.
std::size_t sample_index(std::span<const double> probs, double u)
{
    double total = 0.0;
    for (double p : probs) total += p;
    double acc = 0.0;
    const double target = (1.0 - u) * total;  // u in (0, 1] -> target in [0, total)
    std::size_t last = 0;
    for (std::size_t n = 0; n < probs.size(); ++n) {
        if (probs[n] <= 0.0) continue;
        last = n;
        acc += probs[n];
        if (target < acc) return n;
    }
    return last;
}

std::size_t argmax_count(std::span<const std::size_t> counts, std::span<const double> group_probs)
{
    std::size_t best = 0;
    for (std::size_t n = 1; n < counts.size(); ++n) {
        if (counts[n] > counts[best] || (counts[n] == counts[best] && group_probs[n] > group_probs[best])) best = n;
    }
    return best;
}

}  // namespace

CommCost hbp_cost_per_iteration(const FactorGraph& graph)
{
    const std::uint64_t N = graph.group_count();
    CommCost c;
    for (std::size_t k = 0; k < graph.sbs_count(); ++k) {
        c.words += N;
        c.bits += N * bits_for(graph.variable_degree(k) + 1);
    }
    c.words += graph.edge_count();
    c.bits += graph.edge_count() * bits_for(N);
    return c;
}

CommCost bp_cost_per_iteration(const FactorGraph& graph)
{
    CommCost c;
    c.words = 2 * graph.group_count() * graph.edge_count();
    c.bits = 64 * c.words;
    return c;
}

CommCost CommLedger::hbp_total() const
{
    CommCost c;
    for (const auto& r : rows) {
        c.words += r.hbp.words;
        c.bits += r.hbp.bits;
    }
    return c;
}

CommCost CommLedger::bp_equivalent_total() const
{
    CommCost c;
    for (const auto& r : rows) {
        c.words += r.bp_equivalent.words;
        c.bits += r.bp_equivalent.bits;
    }
    return c;
}

std::vector<std::vector<std::size_t>> hbp_counts(const FactorGraph& graph, std::span<const std::size_t> choices)
{
    if (choices.size() != graph.edge_count()) throw std::invalid_argument("hbp_counts: one index per edge");
    std::vector<std::vector<std::size_t>> counts(graph.sbs_count(), std::vector<std::size_t>(graph.group_count(), 0));
    for (std::size_t e = 0; e < choices.size(); ++e) {
        if (choices[e] >= graph.group_count()) throw std::out_of_range("hbp_counts: group index out of range");
        ++counts[graph.edge_sbs(e)][choices[e]];
    }
    return counts;
}

HbpState hbp_init(const FactorGraph& graph, std::span<const double> group_probs, RandomStream& rng)
{
    if (group_probs.size() != graph.group_count()) throw std::invalid_argument("hbp_init: popularity length differs from N");
    HbpState state;
    state.choices.assign(graph.edge_count(), 0);
    for (std::size_t k = 0; k < graph.sbs_count(); ++k) {
        for (const auto& ve : graph.edges_of_sbs(k)) state.choices[ve.edge] = sample_index(group_probs, rng.uniform());
    }
    state.counts = hbp_counts(graph, state.choices);
    return state;
}

std::vector<double> hbp_excluded_prob(const HbpState& state, const FactorGraph& graph, std::size_t edge,
                                      std::span<const double> group_probs, bool* fallback)
{
    const std::size_t k = graph.edge_sbs(edge);
    const std::size_t d = graph.variable_degree(k);
    if (d <= 1) {
        if (fallback) *fallback = true;
        return {group_probs.begin(), group_probs.end()};
    }
    std::vector<double> p(graph.group_count());
    const std::size_t own = state.choices.at(edge);
    for (std::size_t n = 0; n < p.size(); ++n) {
        const std::size_t c = state.counts[k][n] - (n == own ? 1 : 0);
        p[n] = static_cast<double>(c) / static_cast<double>(d - 1);
    }
    return p;
}

double hbp_excluded_prob(const HbpState& state, const FactorGraph& graph, std::size_t edge, std::size_t n,
                         std::span<const double> group_probs)
{
    return hbp_excluded_prob(state, graph, edge, group_probs).at(n);
}

std::vector<std::vector<double>> hbp_factor_messages(const HbpState& state, const FactorGraph& graph,
                                                     std::span<const LocalUtility> utilities,
                                                     std::span<const double> group_probs, double mu, double cap,
                                                     bool* fallback)
{
    const std::size_t N = graph.group_count();
    std::vector<std::vector<double>> messages(graph.edge_count());
    std::vector<std::vector<double>> in_log;
    std::vector<std::vector<double>> out_log;
    for (std::size_t f = 0; f < graph.factor_count(); ++f) {
        const std::size_t d = graph.factor_degree(f);
        const std::size_t e0 = graph.edge_begin(f);
        in_log.assign(d, std::vector<double>(N));
        out_log.assign(d, std::vector<double>(N));
        for (std::size_t i = 0; i < d; ++i) {
            const auto p = hbp_excluded_prob(state, graph, e0 + i, group_probs, fallback);
            for (std::size_t n = 0; n < N; ++n) in_log[i][n] = p[n] > 0.0 ? std::log(p[n]) : kNegInf;
        }
        std::vector<std::span<const double>> in(in_log.begin(), in_log.end());
        std::vector<std::span<double>> out(out_log.begin(), out_log.end());
        marginalize_factor(utilities[f], mu, in, out, cap);
        for (std::size_t i = 0; i < d; ++i) {
            auto& m = messages[e0 + i];
            m.resize(N);
            for (std::size_t n = 0; n < N; ++n) m[n] = std::exp(out_log[i][n]);
        }
    }
    return messages;
}

std::vector<std::size_t> hbp_factor_step(const HbpState& state, const FactorGraph& graph,
                                         std::span<const LocalUtility> utilities, std::span<const double> group_probs,
                                         double mu, const RandomStream& rng, double cap, bool* fallback)
{
    const auto messages = hbp_factor_messages(state, graph, utilities, group_probs, mu, cap, fallback);
    std::vector<std::size_t> choices(graph.edge_count());
    const RandomStream round = rng.substream(state.iteration);
    for (std::size_t f = 0; f < graph.factor_count(); ++f) {
        RandomStream stream = round.substream(f);
        const std::size_t e0 = graph.edge_begin(f);
        for (std::size_t i = 0; i < graph.factor_degree(f); ++i) {
            choices[e0 + i] = sample_index(messages[e0 + i], stream.uniform());
        }
    }
    return choices;
}

HbpResult hbp_run(const FactorGraph& graph, std::span<const LocalUtility> utilities,
                  std::span<const double> group_probs, const BpOptions& options, double mbs_delay,
                  const RandomStream& rng)
{
    const std::size_t K = graph.sbs_count();
    const std::size_t N = graph.group_count();
    const double mu = options.mu > 0.0 ? options.mu : kDefaultMuScale / mbs_delay;
    if (!(mu > 0.0) || !std::isfinite(mu)) throw std::invalid_argument("hbp_run: mu must be positive");
    if (options.max_iterations == 0) throw std::invalid_argument("hbp_run: need at least one iteration");

    HbpResult result;
    if (N == 1) {
        result.placement = PlacementMatrix::from_groups(std::vector<std::size_t>(K, 0), 1);
        result.stabilized = true;
        return result;
    }
    for (std::size_t f = 0; f < graph.factor_count(); ++f) {
        check_enumeration(N, graph.factor_degree(f), options.enumeration_cap);
    }

    RandomStream init_stream = rng.substream(0);
    HbpState state = hbp_init(graph, group_probs, init_stream);
    const CommCost hbp_cost = hbp_cost_per_iteration(graph);
    const CommCost bp_cost = bp_cost_per_iteration(graph);

    std::size_t unchanged = 0;
    for (std::size_t t = 1; t <= options.max_iterations; ++t) {
        state.iteration = t;
        bool fallback = false;
        auto choices =
            hbp_factor_step(state, graph, utilities, group_probs, mu, rng, options.enumeration_cap, &fallback);
        state.prior_fallback = state.prior_fallback || fallback;
        auto counts = hbp_counts(graph, choices);
        result.ledger.rows.push_back({t, hbp_cost, bp_cost});
        result.iterations = t;

        unchanged = counts == state.counts ? unchanged + 1 : 0;
        state.choices = std::move(choices);
        state.counts = std::move(counts);
        if (unchanged >= 2) {
            result.stabilized = true;
            break;
        }
    }

    std::vector<std::size_t> decision(K);
    for (std::size_t k = 0; k < K; ++k) decision[k] = argmax_count(state.counts[k], group_probs);
    result.placement = PlacementMatrix::from_groups(decision, N);
    result.prior_fallback = state.prior_fallback;
    result.final_state = std::move(state);
    return result;
}

}  // namespace hetcache
