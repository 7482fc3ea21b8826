#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "hetcache/content.hpp"
#include "hetcache/net_model.hpp"

namespace hetcache {

// Association target meaning "download from the macro base station".
inline constexpr std::size_t kMbs = std::numeric_limits<std::size_t>::max();

/// Everything the delay objective needs about one instance: candidate sets
/// with aligned capacities C_{h,j}, group popularity, file size M and C0.
struct DelayModel {
    std::size_t sbs_count = 0;
    std::vector<std::vector<std::size_t>> candidates;
    std::vector<std::vector<double>> capacities;
    std::vector<double> group_probs;
    double file_size = 0.0;
    double mbs_rate = 0.0;

    static DelayModel from_topology(const Topology& topo, const GeometryParams& params,
                                    std::span<const double> group_probs);
    // From candidate sets with aligned SINRs (e.g. a LinkScan).
    static DelayModel from_sinr(std::size_t sbs_count, const CandidateSets& sets,
                                const std::vector<std::vector<double>>& sinr_of_mu,
                                const GeometryParams& params, std::span<const double> group_probs);

    std::size_t mu_count() const noexcept { return candidates.size(); }
    std::size_t group_count() const noexcept { return group_probs.size(); }
    double mbs_delay() const noexcept { return file_size / mbs_rate; }
};

// argmax over H(j) of lambda_{h,n} C_{h,j}; kMbs when nobody in H(j) caches n.
// Ties go to the lowest SBS index.
std::size_t associate(std::size_t j, std::size_t n, const PlacementMatrix& placement, const DelayModel& model);

// D_{j,n} in seconds.
double delay_file(std::size_t j, std::size_t n, const PlacementMatrix& placement, const DelayModel& model);

struct DelayBreakdown {
    double average = 0.0;
    std::vector<double> per_mu;
};

// D_j = sum_n P_n D_{j,n} and D = mean_j D_j. Utility is F = -D.
DelayBreakdown average_delay(const PlacementMatrix& placement, const DelayModel& model);

// Same objective for a per-SBS group assignment; the hot path of exhaustive search.
double average_delay(std::span<const std::size_t> group_of_sbs, const DelayModel& model);

// Mean delay over the requests that some SBS serves; NaN when none are.
double mean_sbs_delay(std::span<const std::size_t> group_of_sbs, const DelayModel& model);

}  // namespace hetcache
