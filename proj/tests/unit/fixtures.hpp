#pragma once

#include <cstddef>
#include <vector>

#include "hetcache/content.hpp"
#include "hetcache/objective.hpp"
#include "hetcache/rng.hpp"

namespace fixtures {

// Hand-built delay model; capacities in bits/s, M = 1e9, C0 = 1.3e6.
inline hetcache::DelayModel model(std::size_t K, std::vector<std::vector<std::size_t>> cand,
                                  std::vector<std::vector<double>> caps, std::vector<double> probs,
                                  double c0 = 1.3e6)
{
    hetcache::DelayModel m;
    m.sbs_count = K;
    m.candidates = std::move(cand);
    m.capacities = std::move(caps);
    m.group_probs = std::move(probs);
    m.file_size = 1e9;
    m.mbs_rate = c0;
    return m;
}

// Random instance: each (j, k) pair is a candidate with probability `density`,
// capacities uniform in [C0, 10 C0], Zipf(s) group popularity.
inline hetcache::DelayModel random_model(std::size_t K, std::size_t J, std::size_t N, std::uint64_t seed,
                                         double density = 0.6, double s = 0.8)
{
    hetcache::RandomStream rng(seed);
    std::vector<std::vector<std::size_t>> cand(J);
    std::vector<std::vector<double>> caps(J);
    const double c0 = 1.3e6;
    for (std::size_t j = 0; j < J; ++j) {
        for (std::size_t k = 0; k < K; ++k) {
            if (rng.uniform() <= density) {
                cand[j].push_back(k);
                caps[j].push_back(c0 * (1.0 + 9.0 * rng.uniform()));
            }
        }
    }
    return model(K, std::move(cand), std::move(caps), hetcache::zipf_probs(N, s), c0);
}

// Straight transcription of D = mean_j sum_n P_n M / max(C0, best cacher rate).
inline double delay_oracle(const hetcache::DelayModel& m, const std::vector<std::size_t>& groups)
{
    double total = 0.0;
    for (std::size_t j = 0; j < m.candidates.size(); ++j) {
        for (std::size_t n = 0; n < m.group_probs.size(); ++n) {
            double rate = m.mbs_rate;
            for (std::size_t i = 0; i < m.candidates[j].size(); ++i) {
                if (groups[m.candidates[j][i]] == n && m.capacities[j][i] > rate) rate = m.capacities[j][i];
            }
            total += m.group_probs[n] * m.file_size / rate;
        }
    }
    return total / static_cast<double>(m.candidates.size());
}

}  // namespace fixtures
