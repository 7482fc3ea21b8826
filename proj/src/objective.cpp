#include "hetcache/objective.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace hetcache {

namespace {

void check_rates(const DelayModel& model)
{
    // SBS-first: every candidate link is at least as fast as the MBS.
    for (const auto& caps : model.capacities) {
        for (double c : caps) {
            if (c < model.mbs_rate * (1.0 - 1e-9)) {
                throw std::logic_error("DelayModel: candidate capacity below C0 violates the SBS-first rule");
            }
        }
    }
}

}  // namespace

DelayModel DelayModel::from_topology(const Topology& topo, const GeometryParams& params,
                                     std::span<const double> group_probs)
{
    const CandidateSets sets = candidate_sets(topo, params);
    std::vector<std::vector<double>> sinrs(topo.mu_count());
    for (std::size_t j = 0; j < topo.mu_count(); ++j) {
        for (std::size_t k : sets.sbs_of_mu[j]) sinrs[j].push_back(sinr(k, j, topo, params));
    }
    return from_sinr(topo.sbs_count(), sets, sinrs, params, group_probs);
}

DelayModel DelayModel::from_sinr(std::size_t sbs_count, const CandidateSets& sets,
                                 const std::vector<std::vector<double>>& sinr_of_mu, const GeometryParams& params,
                                 std::span<const double> group_probs)
{
    DelayModel model;
    model.sbs_count = sbs_count;
    model.candidates = sets.sbs_of_mu;
    model.capacities.resize(sets.sbs_of_mu.size());
    for (std::size_t j = 0; j < sets.sbs_of_mu.size(); ++j) {
        if (sinr_of_mu.at(j).size() != sets.sbs_of_mu[j].size()) {
            throw std::invalid_argument("DelayModel: SINR list not aligned with H(j)");
        }
        for (double s : sinr_of_mu[j]) model.capacities[j].push_back(capacity_from_sinr(s, params.bandwidth));
    }
    model.group_probs.assign(group_probs.begin(), group_probs.end());
    model.file_size = params.file_size;
    model.mbs_rate = hetcache::mbs_rate(params);
    check_rates(model);
    return model;
}

std::size_t associate(std::size_t j, std::size_t n, const PlacementMatrix& placement, const DelayModel& model)
{
    const auto& cand = model.candidates.at(j);
    std::size_t best = kMbs;
    double best_rate = 0.0;
    for (std::size_t i = 0; i < cand.size(); ++i) {
        if (!placement.at(cand[i], n)) continue;
        const double c = model.capacities[j][i];
        // Strict comparison keeps the lowest index on ties (cand is ascending).
        if (best == kMbs || c > best_rate) {
            best = cand[i];
            best_rate = c;
        }
    }
    return best;
}

double delay_file(std::size_t j, std::size_t n, const PlacementMatrix& placement, const DelayModel& model)
{
    const std::size_t h = associate(j, n, placement, model);
    if (h == kMbs) return model.mbs_delay();
    const auto& cand = model.candidates[j];
    for (std::size_t i = 0; i < cand.size(); ++i) {
        if (cand[i] == h) {
            assert(model.capacities[j][i] >= model.mbs_rate * (1.0 - 1e-9));
            return model.file_size / model.capacities[j][i];
        }
    }
    throw std::logic_error("delay_file: associated SBS not in H(j)");
}

DelayBreakdown average_delay(const PlacementMatrix& placement, const DelayModel& model)
{
    const std::size_t J = model.mu_count();
    if (J == 0) throw std::invalid_argument("average_delay: no MUs");
    if (placement.sbs_count() != model.sbs_count || placement.group_count() != model.group_count()) {
        throw std::invalid_argument("average_delay: placement shape does not match the model");
    }
    DelayBreakdown out;
    out.per_mu.resize(J);
    double total = 0.0;
    for (std::size_t j = 0; j < J; ++j) {
        double dj = 0.0;
        for (std::size_t n = 0; n < model.group_count(); ++n) {
            dj += model.group_probs[n] * delay_file(j, n, placement, model);
        }
        out.per_mu[j] = dj;
        total += dj;
    }
    out.average = total / static_cast<double>(J);
    return out;
}

namespace {

// Best capacity per group seen by MU j, 0 where no candidate caches the group.
void best_rates(std::size_t j, std::span<const std::size_t> group_of_sbs, const DelayModel& model,
                std::vector<double>& best)
{
    std::fill(best.begin(), best.end(), 0.0);
    const auto& cand = model.candidates[j];
    for (std::size_t i = 0; i < cand.size(); ++i) {
        const std::size_t n = group_of_sbs[cand[i]];
        if (model.capacities[j][i] > best[n]) best[n] = model.capacities[j][i];
    }
}

}  // namespace

double average_delay(std::span<const std::size_t> group_of_sbs, const DelayModel& model)
{
    const std::size_t J = model.mu_count();
    if (J == 0) throw std::invalid_argument("average_delay: no MUs");
    if (group_of_sbs.size() != model.sbs_count) throw std::invalid_argument("average_delay: assignment size mismatch");
    std::vector<double> best(model.group_count());
    const double mbs = model.mbs_delay();
    double total = 0.0;
    for (std::size_t j = 0; j < J; ++j) {
        best_rates(j, group_of_sbs, model, best);
        for (std::size_t n = 0; n < best.size(); ++n) {
            total += model.group_probs[n] * (best[n] > 0.0 ? model.file_size / best[n] : mbs);
        }
    }
    return total / static_cast<double>(J);
}

double mean_sbs_delay(std::span<const std::size_t> group_of_sbs, const DelayModel& model)
{
    std::vector<double> best(model.group_count());
    double weighted = 0.0;
    double mass = 0.0;
    for (std::size_t j = 0; j < model.mu_count(); ++j) {
        best_rates(j, group_of_sbs, model, best);
        for (std::size_t n = 0; n < best.size(); ++n) {
            if (best[n] > 0.0) {
                weighted += model.group_probs[n] * model.file_size / best[n];
                mass += model.group_probs[n];
            }
        }
    }
    return mass > 0.0 ? weighted / mass : std::nan("");
}

}  // namespace hetcache
