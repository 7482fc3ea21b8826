#include "hetcache/bp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hetcache {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Two log-beliefs closer than this are a tie.
constexpr double kTieTolerance = 1e-12;

std::size_t argmax_with_ties(std::span<const double> log_belief, std::span<const double> group_probs)
{
    std::size_t best = 0;
    for (std::size_t n = 1; n < log_belief.size(); ++n) {
        const double tol = kTieTolerance * std::max(1.0, std::fabs(log_belief[best]));
        if (log_belief[n] > log_belief[best] + tol) {
            best = n;
        } else if (log_belief[n] >= log_belief[best] - tol && group_probs[n] > group_probs[best]) {
            best = n;
        }
    }
    return best;
}

}  // namespace

double default_mu(double file_size, double mbs_rate)
{
    return kDefaultMuScale / (file_size / mbs_rate);
}

BeliefState init_messages(const FactorGraph& graph, std::span<const double> group_probs, double mu)
{
    const std::size_t N = graph.group_count();
    if (group_probs.size() != N) throw std::invalid_argument("init_messages: popularity length differs from N");
    BeliefState state;
    state.group_count = N;
    state.iteration = 1;
    state.mu = mu;
    const std::size_t E = graph.edge_count();
    state.v2f_log.resize(E * N);
    state.f2v_log.assign(E * N, -std::log(static_cast<double>(N)));
    std::vector<double> prior(N);
    for (std::size_t n = 0; n < N; ++n) prior[n] = group_probs[n] > 0.0 ? std::log(group_probs[n]) : kNegInf;
    normalize_log(prior);
    for (std::size_t e = 0; e < E; ++e) std::copy(prior.begin(), prior.end(), state.v2f(e).begin());
    return state;
}

void variable_update(BeliefState& state, const FactorGraph& graph)
{
    const std::size_t N = state.group_count;
    std::vector<double> prefix;
    std::vector<double> suffix;
    for (std::size_t k = 0; k < graph.sbs_count(); ++k) {
        const auto& edges = graph.edges_of_sbs(k);
        const std::size_t d = edges.size();
        if (d == 0) continue;
        // Leave-one-out sums of incoming log messages via prefix/suffix sums;
        // avoids subtracting -inf.
        prefix.assign((d + 1) * N, 0.0);
        suffix.assign((d + 1) * N, 0.0);
        for (std::size_t i = 0; i < d; ++i) {
            const auto in = state.f2v(edges[i].edge);
            for (std::size_t n = 0; n < N; ++n) prefix[(i + 1) * N + n] = prefix[i * N + n] + in[n];
        }
        for (std::size_t i = d; i-- > 0;) {
            const auto in = state.f2v(edges[i].edge);
            for (std::size_t n = 0; n < N; ++n) suffix[i * N + n] = suffix[(i + 1) * N + n] + in[n];
        }
        for (std::size_t i = 0; i < d; ++i) {
            auto out = state.v2f(edges[i].edge);
            for (std::size_t n = 0; n < N; ++n) out[n] = prefix[i * N + n] + suffix[(i + 1) * N + n];
            if (!normalize_log(out)) state.underflow = true;
        }
    }
}

void factor_update(BeliefState& state, const FactorGraph& graph, std::span<const LocalUtility> utilities, double cap)
{
    if (utilities.size() != graph.factor_count()) throw std::invalid_argument("factor_update: one utility per factor");
    std::vector<std::span<const double>> in;
    std::vector<std::span<double>> out;
    for (std::size_t f = 0; f < graph.factor_count(); ++f) {
        const std::size_t d = graph.factor_degree(f);
        const std::size_t e0 = graph.edge_begin(f);
        in.clear();
        out.clear();
        for (std::size_t i = 0; i < d; ++i) {
            in.push_back(std::as_const(state).v2f(e0 + i));
            out.push_back(state.f2v(e0 + i));
        }
        if (!marginalize_factor(utilities[f], state.mu, in, out, cap)) state.underflow = true;
    }
}

std::vector<std::size_t> decide(const BeliefState& state, const FactorGraph& graph, std::span<const double> group_probs)
{
    const std::size_t N = state.group_count;
    std::vector<std::size_t> out(graph.sbs_count());
    std::vector<double> belief(N);
    for (std::size_t k = 0; k < graph.sbs_count(); ++k) {
        const auto& edges = graph.edges_of_sbs(k);
        if (edges.empty()) {
            for (std::size_t n = 0; n < N; ++n) belief[n] = group_probs[n] > 0.0 ? std::log(group_probs[n]) : kNegInf;
        } else {
            std::fill(belief.begin(), belief.end(), 0.0);
            for (const auto& ve : edges) {
                const auto in = state.f2v(ve.edge);
                for (std::size_t n = 0; n < N; ++n) belief[n] += in[n];
            }
        }
        out[k] = argmax_with_ties(belief, group_probs);
    }
    return out;
}

double message_change(const BeliefState& before, const BeliefState& after)
{
    if (before.v2f_log.size() != after.v2f_log.size() || before.f2v_log.size() != after.f2v_log.size()) {
        throw std::invalid_argument("message_change: states of different shape");
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < before.v2f_log.size(); ++i) {
        worst = std::max(worst, std::fabs(std::exp(before.v2f_log[i]) - std::exp(after.v2f_log[i])));
    }
    for (std::size_t i = 0; i < before.f2v_log.size(); ++i) {
        worst = std::max(worst, std::fabs(std::exp(before.f2v_log[i]) - std::exp(after.f2v_log[i])));
    }
    return worst;
}

BpResult run_bp(const FactorGraph& graph, std::span<const LocalUtility> utilities,
                std::span<const double> group_probs, const BpOptions& options, double mbs_delay)
{
    const std::size_t K = graph.sbs_count();
    const std::size_t N = graph.group_count();
    const double mu = options.mu > 0.0 ? options.mu : kDefaultMuScale / mbs_delay;
    if (!(mu > 0.0) || !std::isfinite(mu)) throw std::invalid_argument("run_bp: mu must be positive");
    if (options.max_iterations == 0) throw std::invalid_argument("run_bp: need at least one iteration");

    BpResult result;
    if (N == 1) {
        result.placement = PlacementMatrix::from_groups(std::vector<std::size_t>(K, 0), 1);
        result.converged = true;
        return result;
    }
    for (std::size_t f = 0; f < graph.factor_count(); ++f) {
        check_enumeration(N, graph.factor_degree(f), options.enumeration_cap);
    }

    // M^(1): prior v2f messages pushed once through the factors.
    BeliefState current = init_messages(graph, group_probs, mu);
    factor_update(current, graph, utilities, options.enumeration_cap);

    std::vector<double> prior_log(N);
    for (std::size_t n = 0; n < N; ++n) prior_log[n] = group_probs[n] > 0.0 ? std::log(group_probs[n]) : kNegInf;
    std::vector<std::size_t> previous(K, argmax_with_ties(prior_log, group_probs));

    // The residual at t is ||M^(t) - Gamma(M^(t))||, so a converged run
    // returns a state that one more round moves by less than the tolerance.
    for (std::size_t t = 1;; ++t) {
        current.iteration = t;
        BeliefState next = current;
        variable_update(next, graph);
        factor_update(next, graph, utilities, options.enumeration_cap);

        const std::vector<std::size_t> decision = decide(current, graph, group_probs);
        IterationRecord rec;
        rec.iteration = t;
        rec.residual = message_change(current, next);
        for (std::size_t k = 0; k < K; ++k) rec.churn += decision[k] != previous[k];
        result.trace.push_back(rec);
        previous = decision;

        result.iterations = t;
        if (rec.residual < options.tolerance) {
            result.converged = true;
            break;
        }
        if (t == options.max_iterations) break;
        next.iteration = t + 1;
        current = std::move(next);
    }

    result.underflow = current.underflow;
    result.placement = PlacementMatrix::from_groups(previous, N);
    result.final_state = std::move(current);
    return result;
}

}  // namespace hetcache
