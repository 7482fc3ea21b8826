#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "hetcache/content.hpp"
#include "hetcache/factor_graph.hpp"

namespace hetcache {

/// Default temperature, in units of 1 / (M / C0). mu F_j then spans a few
/// hundred nats across placements, so the marginals are sharply peaked at the
/// joint optimum; messages live in the log domain, so nothing overflows.
inline constexpr double kDefaultMuScale = 1000.0;

struct BpOptions {
    std::size_t max_iterations = 15;
    double tolerance = 1e-6;
    // Temperature of p(Lambda) ∝ exp(mu F). Zero selects kDefaultMuScale / (M / C0).
    double mu = 0.0;
    double enumeration_cap = 1e7;
};

double default_mu(double file_size, double mbs_rate);

/// Messages of one BP run, stored as log-probabilities, one length-N row per
/// edge. v2f is p_{k->j}, f2v is p_{j->k}.
struct BeliefState {
    std::size_t group_count = 0;
    std::size_t iteration = 0;
    double mu = 0.0;
    std::vector<double> v2f_log;
    std::vector<double> f2v_log;
    // Set when some product of incoming messages vanished and a uniform
    // message was substituted.
    bool underflow = false;

    std::span<const double> v2f(std::size_t e) const { return {v2f_log.data() + e * group_count, group_count}; }
    std::span<const double> f2v(std::size_t e) const { return {f2v_log.data() + e * group_count, group_count}; }
    std::span<double> v2f(std::size_t e) { return {v2f_log.data() + e * group_count, group_count}; }
    std::span<double> f2v(std::size_t e) { return {f2v_log.data() + e * group_count, group_count}; }
};

// Every variable-to-factor message starts at the group popularity; f2v starts uniform.
BeliefState init_messages(const FactorGraph& graph, std::span<const double> group_probs, double mu);

// p_{k->j}(n) ∝ prod over H(k) \ {j} of p_{h->k}(n).
void variable_update(BeliefState& state, const FactorGraph& graph);

void factor_update(BeliefState& state, const FactorGraph& graph, std::span<const LocalUtility> utilities,
                   double cap = 1e7);

// Per-SBS MAP decision. Degree-0 SBSs take the prior argmax; ties go to the
// more popular group, then the lower index.
std::vector<std::size_t> decide(const BeliefState& state, const FactorGraph& graph, std::span<const double> group_probs);

// Largest absolute change of any message entry in probability space.
double message_change(const BeliefState& before, const BeliefState& after);

struct IterationRecord {
    std::size_t iteration = 0;
    double residual = std::numeric_limits<double>::infinity();
    std::size_t churn = 0;
};

struct BpResult {
    PlacementMatrix placement;
    std::size_t iterations = 0;
    bool converged = false;
    bool underflow = false;
    std::vector<IterationRecord> trace;
    BeliefState final_state;
};

/// Synchronous flooding schedule: at t = 1 the prior messages go straight to
/// the factors; from t = 2 on, all variables update and then all factors.
/// Stops when the residual drops below the tolerance or at max_iterations.
BpResult run_bp(const FactorGraph& graph, std::span<const LocalUtility> utilities,
                std::span<const double> group_probs, const BpOptions& options, double mbs_delay);

}  // namespace hetcache
