#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hetcache/objective.hpp"

namespace hetcache {

/// Bipartite graph between MU factor nodes and SBS variable nodes.
///
/// Only MUs with a non-empty candidate set become factors; the others pay
/// M/C0 whatever the placement. Edges are numbered factor-major: the edges of
/// factor f are edge_begin(f) .. edge_begin(f) + degree(f) - 1, in the order of
/// sbs_of_factor[f].
class FactorGraph {
public:
    struct VariableEdge {
        std::size_t factor;
        std::size_t edge;
    };

    FactorGraph() = default;
    FactorGraph(std::size_t sbs_count, std::size_t group_count,
                const std::vector<std::vector<std::size_t>>& sbs_of_mu);

    std::size_t sbs_count() const noexcept { return edges_of_sbs_.size(); }
    std::size_t factor_count() const noexcept { return sbs_of_factor_.size(); }
    std::size_t group_count() const noexcept { return groups_; }
    std::size_t edge_count() const noexcept { return edge_sbs_.size(); }

    std::size_t mu_of_factor(std::size_t f) const { return mu_of_factor_.at(f); }
    const std::vector<std::size_t>& sbs_of_factor(std::size_t f) const { return sbs_of_factor_.at(f); }
    std::size_t factor_degree(std::size_t f) const { return sbs_of_factor_.at(f).size(); }
    std::size_t edge_begin(std::size_t f) const { return edge_begin_.at(f); }

    const std::vector<VariableEdge>& edges_of_sbs(std::size_t k) const { return edges_of_sbs_.at(k); }
    std::size_t variable_degree(std::size_t k) const { return edges_of_sbs_.at(k).size(); }

    std::size_t edge_sbs(std::size_t e) const { return edge_sbs_[e]; }
    std::size_t edge_factor(std::size_t e) const { return edge_factor_[e]; }

private:
    std::size_t groups_ = 0;
    std::vector<std::size_t> mu_of_factor_;
    std::vector<std::vector<std::size_t>> sbs_of_factor_;
    std::vector<std::size_t> edge_begin_;
    std::vector<std::vector<VariableEdge>> edges_of_sbs_;
    std::vector<std::size_t> edge_sbs_;
    std::vector<std::size_t> edge_factor_;
};

FactorGraph build_factor_graph(const DelayModel& model);

/// Local utility F_j = -D_j of one factor as a function of the groups cached
/// by its neighbors (in sbs_of_factor order).
class LocalUtility {
public:
    LocalUtility(std::vector<double> capacities, std::vector<double> group_probs, double file_size, double mbs_rate);

    std::size_t degree() const noexcept { return capacity_.size(); }
    std::size_t group_count() const noexcept { return probs_.size(); }

    double operator()(std::span<const std::size_t> groups) const;

    // F_j when every request goes to the MBS, and an upper bound on
    // F_j - mbs_utility() over all assignments.
    double mbs_utility() const noexcept { return -file_size_ / mbs_rate_; }
    double gain_span() const noexcept { return span_; }

    // Utility gain when slot i is the best holder of group n:
    // P_n M (1/C0 - 1/C_i).
    double gain(std::size_t slot, std::size_t n) const { return probs_[n] * file_size_ * (1.0 / mbs_rate_ - 1.0 / capacity_[slot]); }

    // Slots sorted by descending capacity (ties by slot index).
    const std::vector<std::size_t>& slots_by_capacity() const noexcept { return order_; }

private:
    std::vector<double> capacity_;
    std::vector<double> probs_;
    double file_size_;
    double mbs_rate_;
    double span_ = 0.0;
    std::vector<std::size_t> order_;
};

std::vector<LocalUtility> build_local_utilities(const FactorGraph& graph, const DelayModel& model);

/// Sum-product marginalization at one factor node.
///
/// `incoming_log[i]` is the log message from neighbor slot i (length N).
/// Writes, for every slot k, the normalized log message
///   log p_{j->k}(n) ∝ log sum_{x : x_k = n} exp(mu F_j(x)) prod_{h != k} p_{h->j}(x_h)
/// into `outgoing_log[k]`. The joint sum runs over all N^(d-1) assignments of
/// the other neighbors. Throws ResourceError when N^(d-1) exceeds `cap`.
/// Returns false if some outgoing message had no finite entry (it is then set
/// to uniform).
bool marginalize_factor(const LocalUtility& utility, double mu, std::span<const std::span<const double>> incoming_log,
                        std::span<const std::span<double>> outgoing_log, double cap);

// Reference implementation in the log domain with no scaling shortcuts.
bool marginalize_factor_logspace(const LocalUtility& utility, double mu,
                                 std::span<const std::span<const double>> incoming_log,
                                 std::span<const std::span<double>> outgoing_log, double cap);

// Throws ResourceError when N^(degree - 1) > cap.
void check_enumeration(std::size_t group_count, std::size_t degree, double cap);

// In-place log-sum-exp normalization; returns false (and sets uniform) if all entries are -inf.
bool normalize_log(std::span<double> values);

}  // namespace hetcache
