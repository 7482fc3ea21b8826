#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "fixtures.hpp"
#include "hetcache/objective.hpp"

using namespace hetcache;

TEST_CASE("associate: MBS fallback, argmax, lowest-index ties")
{
    auto m = fixtures::model(3, {{}, {0, 1}, {0, 2}}, {{}, {5e6, 7e6}, {4e6, 4e6}}, {0.6, 0.4});
    const std::size_t all0[] = {0, 0, 0};
    const auto lam = PlacementMatrix::from_groups(all0, 2);
    CHECK(associate(0, 0, lam, m) == kMbs);
    CHECK(associate(1, 0, lam, m) == 1);
    CHECK(associate(1, 1, lam, m) == kMbs);
    CHECK(associate(2, 0, lam, m) == 0);
}

TEST_CASE("associate matches a brute-force scan on random instances")
{
    RandomStream rng(5);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto m = fixtures::random_model(6, 5, 3, seed);
        std::vector<std::size_t> g(6);
        for (auto& x : g) x = rng() % 3;
        const auto lam = PlacementMatrix::from_groups(g, 3);
        for (std::size_t j = 0; j < 5; ++j) {
            for (std::size_t n = 0; n < 3; ++n) {
                std::size_t want = kMbs;
                double rate = -1.0;
                for (std::size_t i = 0; i < m.candidates[j].size(); ++i) {
                    const std::size_t k = m.candidates[j][i];
                    if (g[k] == n && (m.capacities[j][i] > rate || (m.capacities[j][i] == rate && k < want))) {
                        want = k;
                        rate = m.capacities[j][i];
                    }
                }
                CHECK(associate(j, n, lam, m) == want);
            }
        }
    }
}

TEST_CASE("per-file delay")
{
    auto m = fixtures::model(1, {{0}, {}}, {{1e7}, {}}, {0.7, 0.3});
    const std::size_t g0[] = {0};
    const auto lam = PlacementMatrix::from_groups(g0, 2);
    CHECK(delay_file(1, 0, lam, m) == doctest::Approx(769.23).epsilon(1e-5));
    CHECK(delay_file(0, 0, lam, m) == doctest::Approx(100.0));
    CHECK(delay_file(0, 1, lam, m) == doctest::Approx(1e9 / 1.3e6));
}

TEST_CASE("average delay: hand instance, MBS-only, MU permutation")
{
    auto m = fixtures::model(1, {{0}}, {{1e7}}, {0.7, 0.3});
    const std::size_t g0[] = {0};
    const auto r = average_delay(PlacementMatrix::from_groups(g0, 2), m);
    CHECK(r.average == doctest::Approx(0.7 * 100.0 + 0.3 * 1e9 / 1.3e6));
    CHECK(r.average == doctest::Approx(300.77).epsilon(1e-5));
    CHECK(r.per_mu.size() == 1);

    auto empty = fixtures::model(2, {{}, {}, {}}, {{}, {}, {}}, {0.5, 0.3, 0.2});
    const std::size_t g[] = {0, 1};
    CHECK(average_delay(g, empty) == doctest::Approx(1e9 / 1.3e6).epsilon(1e-15));
    CHECK(std::isnan(mean_sbs_delay(g, empty)));

    auto rm = fixtures::random_model(5, 6, 3, 77);
    const std::size_t gr[] = {0, 2, 1, 0, 1};
    const double d = average_delay(gr, rm);
    auto swapped = rm;
    std::reverse(swapped.candidates.begin(), swapped.candidates.end());
    std::reverse(swapped.capacities.begin(), swapped.capacities.end());
    CHECK(average_delay(gr, swapped) == doctest::Approx(d).epsilon(1e-14));
}

TEST_CASE("average delay: oracle agreement, range, monotone in extra copies")
{
    RandomStream rng(8);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto m = fixtures::random_model(5, 6, 4, seed);
        std::vector<std::size_t> g(5);
        for (auto& x : g) x = rng() % 4;
        const auto lam = PlacementMatrix::from_groups(g, 4);
        const double d = average_delay(g, m);
        CHECK(d == doctest::Approx(fixtures::delay_oracle(m, g)).epsilon(1e-12));
        CHECK(average_delay(lam, m).average == doctest::Approx(d).epsilon(1e-12));

        double cmax = m.mbs_rate;
        for (const auto& c : m.capacities) {
            for (double x : c) cmax = std::max(cmax, x);
        }
        CHECK(d <= m.mbs_delay() * (1 + 1e-12));
        CHECK(d >= m.file_size / cmax * (1 - 1e-12));

        // One more copy somewhere (a row with two ones) never hurts.
        auto more = lam;
        more.set(rng() % 5, rng() % 4, true);
        double total = 0.0;
        for (std::size_t j = 0; j < 6; ++j) {
            for (std::size_t n = 0; n < 4; ++n) total += m.group_probs[n] * delay_file(j, n, more, m);
        }
        CHECK(total / 6 <= d * (1 + 1e-12));
    }
}

TEST_CASE("delay model from a topology")
{
    RandomStream rng(12);
    const Region region{0.6, false};
    const auto t = make_topology(sample_uniform(8, region, rng), sample_uniform(4, region, rng), region, 2.0,
                                 RandomStream(13));
    GeometryParams p;
    p.delta = 0.1;
    const auto probs = zipf_probs(4, 0.5);
    const auto m = DelayModel::from_topology(t, p, probs);
    const auto sets = candidate_sets(t, p);
    CHECK(m.candidates == sets.sbs_of_mu);
    for (std::size_t j = 0; j < 4; ++j) {
        for (std::size_t i = 0; i < m.candidates[j].size(); ++i) {
            CHECK(m.capacities[j][i] == doctest::Approx(capacity(m.candidates[j][i], j, t, p)));
            CHECK(m.capacities[j][i] >= m.mbs_rate * (1 - 1e-12));
        }
    }
    CHECK(m.mbs_rate == doctest::Approx(1e7 * std::log2(1.1)));
}
