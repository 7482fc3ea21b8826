#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hetcache/bp.hpp"
#include "hetcache/rng.hpp"

namespace hetcache {

/// Per-iteration message cost of one protocol.
///
/// `words` counts transmitted numbers (integers for the heuristic variant,
/// reals for full BP). `bits` weighs them: a real is a 64-bit double, an
/// integer takes the fewest bits that hold its range (ceil(log2 N) for a
/// group index, ceil(log2(|H(k)| + 1)) for a count), at least one bit.
struct CommCost {
    std::uint64_t words = 0;
    std::uint64_t bits = 0;
};

// SBS broadcasts of N counts (all K SBSs) plus one index per edge from the MUs.
CommCost hbp_cost_per_iteration(const FactorGraph& graph);
// N reals per edge in each direction.
CommCost bp_cost_per_iteration(const FactorGraph& graph);

struct CommLedgerRow {
    std::size_t iteration = 0;
    CommCost hbp;
    CommCost bp_equivalent;
};

struct CommLedger {
    std::vector<CommLedgerRow> rows;

    CommCost hbp_total() const;
    CommCost bp_equivalent_total() const;
};

struct HbpState {
    std::size_t iteration = 0;
    // counts[k][n] = J_{k,n}: how many neighbors last pointed SBS k at group n.
    std::vector<std::vector<std::size_t>> counts;
    // Index each MU last sent along each edge (0-based group).
    std::vector<std::size_t> choices;
    // Set when |H(k)| = 1 forced the prior in place of the excluded-count estimate.
    bool prior_fallback = false;
};

/// Each SBS draws |H(k)| group indices from the popularity distribution. The
/// i-th draw is attributed to the i-th incident edge, so the first exclusion
/// step has a well-defined "own" index to remove.
HbpState hbp_init(const FactorGraph& graph, std::span<const double> group_probs, RandomStream& rng);

/// p_{k->j}: SBS k's count vector with the index MU j sent last removed,
/// divided by |H(k)| - 1. When |H(k)| = 1 the prior is returned and
/// `*fallback` is set.
std::vector<double> hbp_excluded_prob(const HbpState& state, const FactorGraph& graph, std::size_t edge,
                                      std::span<const double> group_probs, bool* fallback = nullptr);
double hbp_excluded_prob(const HbpState& state, const FactorGraph& graph, std::size_t edge, std::size_t n,
                         std::span<const double> group_probs);

// Exact factor messages p_{j->k} from the current counts, per edge (probabilities).
std::vector<std::vector<double>> hbp_factor_messages(const HbpState& state, const FactorGraph& graph,
                                                     std::span<const LocalUtility> utilities,
                                                     std::span<const double> group_probs, double mu, double cap,
                                                     bool* fallback = nullptr);

/// One MU round: messages as above, then every edge samples its index from
/// its message using the stream of (iteration, factor).
std::vector<std::size_t> hbp_factor_step(const HbpState& state, const FactorGraph& graph,
                                         std::span<const LocalUtility> utilities, std::span<const double> group_probs,
                                         double mu, const RandomStream& rng, double cap = 1e7,
                                         bool* fallback = nullptr);

// Recount J_{k,n} from the per-edge indices.
std::vector<std::vector<std::size_t>> hbp_counts(const FactorGraph& graph, std::span<const std::size_t> choices);

struct HbpResult {
    PlacementMatrix placement;
    std::size_t iterations = 0;
    bool stabilized = false;
    bool prior_fallback = false;
    CommLedger ledger;
    HbpState final_state;
};

/// Runs rounds until the count vectors are unchanged for two consecutive
/// rounds or max_iterations is reached; SBS k then caches argmax_n J_{k,n}
/// (ties to the more popular group).
HbpResult hbp_run(const FactorGraph& graph, std::span<const LocalUtility> utilities,
                  std::span<const double> group_probs, const BpOptions& options, double mbs_delay,
                  const RandomStream& rng);

}  // namespace hetcache
