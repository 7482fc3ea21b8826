// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any fails. `acceptance 3 5` runs only criteria 3 and 5.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <numeric>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "hetcache/analysis.hpp"
#include "hetcache/baselines.hpp"
#include "hetcache/bp.hpp"
#include "hetcache/content.hpp"
#include "hetcache/experiment.hpp"
#include "hetcache/hbp.hpp"
#include "hetcache/net_model.hpp"
#include "hetcache/objective.hpp"

using namespace hetcache;
using std::numbers::pi;

namespace {

constexpr std::uint64_t kSeed = 20240601;

struct Verdict {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            detail += " [fail: " + what + "]";
        }
    }
};

std::string fmt(const char* f, double a)
{
    char buf[96];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string fmt(const char* f, double a, double b)
{
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

std::string fmt(const char* f, double a, double b, double c)
{
    char buf[200];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double mean_of(const ExperimentResult& r, const char* scheme, const char* metric)
{
    const MetricSummary* m = r.find(scheme, metric);
    return m ? m->mean : std::nan("");
}

// Independent closed forms for alpha = 4: B = pi, C = sqrt(d) pi / 2,
// A = sqrt(d) atan(sqrt(d)).
double c4(double d) { return 0.5 * std::sqrt(d) * pi; }
double a4(double d) { return std::sqrt(d) * std::atan(std::sqrt(d)); }
double bound4(double omega, double d)
{
    const double c = c4(d), a = a4(d);
    return 1.0 - omega / (omega * (a - c + 1.0) + c);
}

// Paired per-trial delay difference hi - lo: mean and standard error.
struct Paired {
    double mean = 0.0;
    double se = 0.0;
    double lo_mean = 0.0;
    std::size_t n = 0;
};

Paired paired(const ExperimentResult& r, const char* lo, const char* hi)
{
    std::vector<double> d;
    double base = 0.0;
    for (const auto& t : r.trials) {
        const auto a = t.find(lo, "delay");
        const auto b = t.find(hi, "delay");
        if (!a || !b) continue;
        d.push_back(*b - *a);
        base += *a;
    }
    Paired p;
    p.n = d.size();
    if (p.n < 2) return p;
    p.mean = std::accumulate(d.begin(), d.end(), 0.0) / p.n;
    p.lo_mean = base / p.n;
    double ss = 0.0;
    for (double x : d) ss += (x - p.mean) * (x - p.mean);
    p.se = std::sqrt(ss / (p.n - 1) / p.n);
    return p;
}

// Ordering lo <= hi holds when the gap is positive at 3 sigma, or when the
// two means are within `band` (relative) of each other.
bool ordered(const Paired& p, double band) { return p.mean > 3.0 * p.se || std::fabs(p.mean) <= band * p.lo_mean; }

// ---------------------------------------------------------------------------

Verdict degree_analytics()
{
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentConfig c = preset(ScenarioKind::ppp_sweep);
    c.region = {10.0, true};
    c.geometry.lambda_B = 50.0;
    c.geometry.lambda_U = 100.0;
    c.geometry.alpha = 4.0;
    c.geometry.sigma2 = 1e-10;
    c.trials = 500;
    c.seed = kSeed;
    c.schemes = {};
    c.workers = std::max(1u, std::thread::hardware_concurrency());
    const double deltas[] = {0.02, 0.05, 0.1};
    std::vector<GridPoint> pts;
    for (double d : deltas) {
        for (double p : {2.0, 4.0}) pts.push_back({d, 0.5, p});
    }
    const auto res = run_grid(c, pts);
    Verdict v;
    for (std::size_t i = 0; i < 3; ++i) {
        const double zu = 2.0 / (pi * std::sqrt(deltas[i]));
        const double zb = 2.0 * zu;
        const auto& p2 = res[2 * i];
        const auto& p4 = res[2 * i + 1];
        v.require(p2.failures.empty() && p4.failures.empty(), "trial failures");
        const double fu2 = mean_of(p2, "graph", "factor_degree"), fu4 = mean_of(p4, "graph", "factor_degree");
        const double vb2 = mean_of(p2, "graph", "variable_degree"), vb4 = mean_of(p4, "graph", "variable_degree");
        const double e_u = std::max(std::fabs(fu2 / zu - 1), std::fabs(fu4 / zu - 1));
        const double e_b = std::max(std::fabs(vb2 / zb - 1), std::fabs(vb4 / zb - 1));
        const double dp = std::max(std::fabs(fu2 / fu4 - 1), std::fabs(vb2 / vb4 - 1));
        v.detail += fmt(" d=%.2f:", deltas[i]) + fmt(" zetaU err %.4f zetaB err %.4f", e_u, e_b) + fmt(" P2/P4 %.4f;", dp);
        v.require(e_u < 0.05, "factor degree off by more than 5%");
        v.require(e_b < 0.05, "variable degree off by more than 5%");
        v.require(dp < 0.02, "P=2 vs P=4 differ by 2% or more");
    }
    const double secs = seconds_since(t0);
    v.detail += fmt(" runtime %.1fs (target < 120s, ", secs) + (secs < 120.0 ? "met)" : "missed)");
    return v;
}

Verdict special_functions()
{
    Verdict v;
    double worst_h = 0.0;
    for (int i = 0; i <= 400; ++i) {
        const double d = std::pow(10.0, -4.0 + 4.0 * i / 400.0);
        const double want = std::atan(std::sqrt(d)) / std::sqrt(d);
        worst_h = std::max(worst_h, std::fabs(hyp2f1(1.0, 0.5, 1.5, -d) - want));
    }
    v.require(worst_h <= 1e-10, "2F1 vs arctan");
    const double beta_err = std::fabs(beta_reflection(4.0) - pi);
    v.require(beta_err <= 1e-14, "B at alpha=4");
    double worst_z = 0.0;
    for (double alpha : {2.5, 3.0, 4.0, 5.0, 6.0}) {
        for (double d : {1e-3, 0.03, 0.1, 1.0}) {
            const double b = pi / std::sin(2 * pi / alpha);
            const double closed = alpha / (4 * pi * 50.0 * b * std::pow(d, 2 / alpha));
            worst_z = std::max(worst_z, std::fabs(z_integral(50.0, 2.0, alpha, d, 0.0) / closed - 1));
        }
    }
    v.require(worst_z <= 1e-9, "Z noise-free");
    v.detail = fmt(" max|2F1-atan| %.2e, |B(4)-pi| %.2e, max rel Z err %.2e", worst_h, beta_err, worst_z) + v.detail;
    return v;
}

Verdict bound_anchors()
{
    Verdict v;
    const auto pop = PopularityModel::zipf(100, 5, 0.5);
    const auto& p = pop.group_probs;
    const double d = 0.03;
    const auto orc = orc_omega(p, d, 4.0);
    const std::size_t last = p.size() - 1;
    const double fprc_first = bound4(p[0], d) * p[0];
    const double orc_first = bound4(orc[0], d) * p[0];
    const double fprc_last = bound4(p[last], d) * p[last];
    const double orc_last = bound4(orc[last], d) * p[last];
    // Library path agrees with the closed forms above.
    v.require(std::fabs(outage_bound(p[0], d, 4.0) * p[0] - fprc_first) < 1e-12, "library bound differs");
    v.require(std::fabs(fprc_first - 0.0990) <= 0.0005, "FPRC first group");
    v.require(std::fabs(orc_first - 0.054) <= 0.005, "ORC first group");
    v.require(std::fabs(orc_last / 0.027 - 1) <= 0.10, "ORC last group");
    v.require(std::fabs(fprc_last / 0.025 - 1) <= 0.10, "FPRC last group");
    v.require(std::fabs(orc_last / fprc_last - 1.08) <= 0.05, "ORC/FPRC last-group ratio");
    v.detail = fmt(" FPRC F1 %.5f, ORC F1 %.5f;", fprc_first, orc_first) +
               fmt(" last group ORC %.5f FPRC %.5f ratio %.4f", orc_last, fprc_last, orc_last / fprc_last) + v.detail;
    return v;
}

Verdict bound_dominance()
{
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentConfig c = preset(ScenarioKind::ppp_sweep);
    c.region = {4.0, true};
    c.trials = 500;
    c.seed = kSeed + 4;
    c.workers = std::max(1u, std::thread::hardware_concurrency());
    c.schemes = {Scheme::fprc, Scheme::orc};
    std::vector<GridPoint> pts;
    for (double d : {0.02, 0.05, 0.1, 0.2, 0.5}) {
        for (double s : {0.3, 0.6, 0.9, 1.2}) pts.push_back({d, s, c.geometry.power});
    }
    const auto res = run_grid(c, pts);
    Verdict v;
    // Random caching hands group n exactly q_n = round(Omega_n K) SBSs, so the
    // probability that a given SBS caches n is q_n / K, not Omega_n. For tail
    // groups largest-remainder rounding lands several percent below Omega_n K,
    // so the bound is taken at the realized fraction of each trial and
    // averaged. Flags against the nominal Omega are reported alongside.
    std::size_t checked = 0, flagged = 0, nominal_flagged = 0;
    double worst_z = -1e300;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        v.require(res[i].failures.empty(), "trial failures");
        const double d = pts[i].delta;
        const auto pop = PopularityModel::zipf(c.files, c.group_size, pts[i].zipf_s);
        const std::size_t N = pop.group_count();
        const auto orc = orc_omega(pop.group_probs, d, 4.0);
        for (const char* scheme : {"fprc", "orc"}) {
            const auto& om = std::string(scheme) == "fprc" ? pop.group_probs : orc;
            std::vector<double> realized(N, 0.0);
            double realized_avg = 0.0, nominal_avg = 0.0;
            std::size_t used = 0;
            for (const auto& t : res[i].trials) {
                const auto k = t.find("graph", "sbs");
                if (!k || *k < 1) continue;
                const auto K = static_cast<std::size_t>(*k);
                const auto q = largest_remainder_quotas(om, K);
                for (std::size_t n = 0; n < N; ++n) {
                    const double b = bound4(static_cast<double>(q[n]) / K, d);
                    realized[n] += b;
                    realized_avg += pop.group_probs[n] * b;
                }
                ++used;
            }
            for (double& b : realized) b /= used;
            realized_avg /= used;
            auto test = [&](const std::string& metric, double bound, double nominal) {
                const auto* m = res[i].find(scheme, metric);
                if (!m) return;
                ++checked;
                if (m->mean > nominal + 3.0 * m->stderr_) ++nominal_flagged;
                if (m->mean > bound + 3.0 * m->stderr_) {
                    ++flagged;
                    std::fprintf(stderr, "  flagged d=%g s=%g %s %s: %.5f > %.5f (se %.5f)\n", d, pts[i].zipf_s,
                                 scheme, metric.c_str(), m->mean, bound, m->stderr_);
                }
                if (m->stderr_ > 0) worst_z = std::max(worst_z, (m->mean - bound) / m->stderr_);
            };
            for (std::size_t n = 0; n < N; ++n) {
                const double nominal = bound4(om[n], d);
                nominal_avg += pop.group_probs[n] * nominal;
                test("outage_group_" + std::to_string(n + 1), realized[n], nominal);
            }
            test("outage_avg", realized_avg, nominal_avg);
        }
    }
    v.require(flagged == 0, "bound violations");
    v.require(checked >= 20 * 2 * 21, "too few rows checked");
    v.detail = fmt(" %.0f grid points x 500 trials, %.0f rows, %.0f flagged", pts.size(), checked, flagged) +
               fmt(" (%.0f against the nominal Omega), max z %.2f", nominal_flagged, worst_z) +
               fmt(", runtime %.1fs", seconds_since(t0)) + v.detail;
    return v;
}

Verdict orc_optimality()
{
    Verdict v;
    double worst = 0.0;
    bool ordered_ok = true;
    const double d = 0.03;
    for (int i = 3; i <= 10; ++i) {
        const double s = i / 10.0;
        const auto pop = PopularityModel::zipf(100, 5, s);
        const auto closed = orc_omega(pop.group_probs, d, 4.0);
        const auto numeric = solve_orc_numeric(pop.group_probs, c4(d), a4(d));
        v.require(numeric.converged, "projected gradient did not converge");
        for (std::size_t n = 0; n < closed.size(); ++n) worst = std::max(worst, std::fabs(closed[n] - numeric.omega[n]));
        ordered_ok = ordered_ok && avg_outage_bound(closed, pop.group_probs, d, 4.0) <=
                                       avg_outage_bound(pop.group_probs, pop.group_probs, d, 4.0);
    }
    v.require(worst <= 1e-6, "closed form vs numeric");
    v.require(ordered_ok, "ORC average bound above FPRC");
    v.detail = fmt(" max |closed - numeric| %.2e over s=0.3..1.0; ORC <= FPRC at every s: ", worst) +
               (ordered_ok ? "yes" : "no") + v.detail;
    return v;
}

// Scenario-1 run shared by criteria 6, 7 and 8. The HBP-vs-BP gap sits near
// 4-5%, with a per-seed spread of about 0.5% at 200 topologies, so 1000 are
// used to keep the 5% comparison from hinging on the draw.
const ExperimentResult& scenario1()
{
    static const ExperimentResult r = [] {
        ExperimentConfig c = preset(ScenarioKind::scenario1);
        c.trials = 1000;
        c.seed = kSeed + 1;
        c.bp.max_iterations = 15;
        return run_experiment(c);
    }();
    return r;
}

Verdict bp_near_optimal()
{
    const auto t0 = std::chrono::steady_clock::now();
    const auto& r = scenario1();
    Verdict v;
    v.require(r.failures.empty(), "trial failures");
    v.require(r.trials.size() >= 200, "fewer than 200 topologies");
    v.require(r.trials.size() == 1000, "unexpected topology count");
    const double ex = mean_of(r, "exhaustive", "delay");
    const double bp = mean_of(r, "bp", "delay");
    const double hbp = mean_of(r, "hbp", "delay");
    v.require(bp / ex - 1 <= 0.05, "BP more than 5% above optimum");
    v.require(hbp / ex - 1 <= 0.08, "HBP more than 8% above optimum");
    v.require(hbp / bp - 1 <= 0.05, "HBP more than 5% above BP");
    v.detail = fmt(" delay opt %.2fs BP %.2fs HBP %.2fs;", ex, bp, hbp) +
               fmt(" BP gap %.4f, HBP gap %.4f, HBP vs BP %.4f", bp / ex - 1, hbp / ex - 1, hbp / bp - 1) +
               fmt(", %.0f topologies, runtime %.1fs", r.trials.size(), seconds_since(t0)) + v.detail;
    return v;
}

std::string check_chain(Verdict& v, const ExperimentResult& r, const std::vector<const char*>& chain, double band,
                        const std::string& label)
{
    std::string out = " " + label + ":";
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
        const Paired p = paired(r, chain[i], chain[i + 1]);
        const bool ok = ordered(p, band);
        out += std::string(" ") + chain[i] + "<=" + chain[i + 1] + fmt(" (%+.2f +- %.2f s)", p.mean, p.se);
        v.require(ok && p.n >= 2, label + " " + chain[i] + "<=" + chain[i + 1]);
    }
    return out;
}

Verdict scheme_ordering()
{
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    const double band = 0.01;
    v.detail += check_chain(v, scenario1(), {"exhaustive", "bp", "hbp", "orc", "fprc"}, band, "scenario 1");

    ExperimentConfig s2 = preset(ScenarioKind::scenario2_case1);
    s2.sbs_count = 25;
    s2.mu_count = 12;
    s2.region.side = 1.5 * std::sqrt(0.5);
    s2.trials = 200;
    s2.seed = kSeed + 2;
    const auto r2 = run_experiment(s2);
    v.require(r2.failures.empty(), "scenario 2 failures");
    v.detail += check_chain(v, r2, {"bp", "hbp", "orc", "fprc"}, band, "reduced scenario 2 (K=25,J=12,N=5)");

    ExperimentConfig big = preset(ScenarioKind::large_scale);
    big.trials = 10;
    big.seed = kSeed + 3;
    const auto r3 = run_experiment(big);
    v.require(r3.failures.empty(), "large-scale failures");
    v.detail += check_chain(v, r3, {"bp", "hbp", "orc", "fprc"}, band, "large scale (K=50,J=100,Q=1000, 10 trials)");
    const double gap = mean_of(r3, "hbp", "delay") / mean_of(r3, "bp", "delay") - 1;
    v.require(gap <= 0.03, "large-scale BP-HBP gap above 3%");
    v.detail += fmt("; large-scale HBP vs BP gap %.4f; band %.0f%%", gap, band * 100) +
                fmt(", runtime %.1fs", seconds_since(t0));
    return v;
}

Verdict iteration_counts()
{
    const auto& r = scenario1();
    Verdict v;
    const double bp = mean_of(r, "bp", "iterations");
    const double hbp = mean_of(r, "hbp", "iterations");
    v.require(bp >= 2.0 && bp <= 9.0, "BP iterations outside [2, 9]");
    v.require(hbp >= bp, "HBP iterations below BP");
    v.detail = fmt(" T=15: BP mean %.3f, HBP mean %.3f, BP converged %.3f", bp, hbp, mean_of(r, "bp", "converged")) +
               v.detail;
    return v;
}

// Candidate-set sizes recomputed from positions and fading without the
// library's SINR code.
std::vector<std::size_t> oracle_h_sizes(const Topology& t, const GeometryParams& g)
{
    std::vector<std::size_t> h(t.mu_count(), 0);
    for (std::size_t j = 0; j < t.mu_count(); ++j) {
        double total = 0.0;
        std::vector<double> rx(t.sbs_count());
        for (std::size_t k = 0; k < t.sbs_count(); ++k) {
            const Point a = t.sbs_positions()[k], b = t.mu_positions()[j];
            const double d = std::hypot(a.x - b.x, a.y - b.y);
            rx[k] = t.fading(k, j) * g.power * std::pow(d, -g.alpha);
            total += rx[k];
        }
        for (std::size_t k = 0; k < t.sbs_count(); ++k) h[j] += rx[k] / (total - rx[k] + g.sigma2) >= g.delta;
    }
    return h;
}

Verdict communication_ledger()
{
    const ExperimentConfig c = preset(ScenarioKind::scenario1);
    const auto pop = PopularityModel::zipf(c.files, c.group_size, c.zipf_s);
    const std::size_t K = c.sbs_count, N = pop.group_count();
    const RandomStream master(kSeed + 9);
    std::size_t rows = 0, bad_rows = 0, trials = 0, skipped = 0, hbp_wins = 0, word_wins = 0;
    for (std::size_t t = 0; t < 200; ++t) {
        const RandomStream s = master.substream(t);
        RandomStream ps = s.substream(1), ms = s.substream(2);
        auto sbs = sample_uniform(K, c.region, ps);
        auto mu = sample_uniform(c.mu_count, c.region, ms);
        const Topology topo = make_topology(sbs, mu, c.region, c.geometry.power, s.substream(3));
        const auto h = oracle_h_sizes(topo, c.geometry);
        const std::size_t sum_hj = std::accumulate(h.begin(), h.end(), std::size_t{0});

        const DelayModel model = DelayModel::from_topology(topo, c.geometry, pop.group_probs);
        const FactorGraph graph = build_factor_graph(model);
        const auto utils = build_local_utilities(graph, model);
        std::size_t sum_hk = 0;
        for (std::size_t k = 0; k < K; ++k) sum_hk += graph.variable_degree(k);

        const auto hb = hbp_run(graph, utils, pop.group_probs, c.bp, model.mbs_delay(), s.substream(4));
        const auto bp = run_bp(graph, utils, pop.group_probs, c.bp, model.mbs_delay());
        for (const auto& row : hb.ledger.rows) {
            ++rows;
            const bool ok = row.hbp.words == K * N + sum_hj && row.bp_equivalent.words == N * sum_hk + N * sum_hj;
            bad_rows += !ok;
        }
        ++trials;
        if (sum_hj == 0) {
            ++skipped;
            continue;
        }
        const auto hbp_total = hb.ledger.hbp_total();
        const auto bp_per = bp_cost_per_iteration(graph);
        hbp_wins += hbp_total.bits < bp_per.bits * bp.iterations;
        word_wins += hbp_total.words < bp_per.words * bp.iterations;
    }
    Verdict v;
    v.require(bad_rows == 0, "per-iteration counts differ");
    v.require(hbp_wins == trials - skipped, "HBP traffic not below BP on some trial");
    v.detail = fmt(" %.0f ledger rows exact (%.0f mismatches);", rows, bad_rows) +
               fmt(" HBP bits < BP bits on %.0f/%.0f trials with edges (%.0f edgeless skipped);", hbp_wins,
                   trials - skipped, skipped) +
               fmt(" in words HBP < BP on only %.0f/%.0f", word_wins, trials - skipped) + v.detail;
    return v;
}

Verdict property_suites()
{
    Verdict v;
    std::size_t checks = 0;
    auto check = [&](bool ok, const char* what) {
        ++checks;
        v.require(ok, what);
    };
    RandomStream rng(kSeed + 10);
    const ExperimentConfig c = preset(ScenarioKind::scenario1);
    const auto pop = PopularityModel::zipf(c.files, c.group_size, c.zipf_s);
    const std::size_t N = pop.group_count();
    bool norm_ok = true, fixed_ok = true, valid_ok = true;
    for (std::size_t t = 0; t < 100; ++t) {
        const RandomStream s = RandomStream(kSeed + 11).substream(t);
        RandomStream ps = s.substream(1), ms = s.substream(2);
        const Topology topo = make_topology(sample_uniform(c.sbs_count, c.region, ps),
                                            sample_uniform(c.mu_count, c.region, ms), c.region, 2.0, s.substream(3));
        const DelayModel model = DelayModel::from_topology(topo, c.geometry, pop.group_probs);
        const FactorGraph g = build_factor_graph(model);
        const auto u = build_local_utilities(g, model);

        // Normalization through 15 rounds.
        BeliefState st = init_messages(g, pop.group_probs, default_mu(model.file_size, model.mbs_rate));
        factor_update(st, g, u);
        for (int it = 0; it < 15; ++it) {
            for (const auto* fam : {&st.v2f_log, &st.f2v_log}) {
                for (std::size_t e = 0; e * N < fam->size(); ++e) {
                    double z = 0.0;
                    for (std::size_t n = 0; n < N; ++n) z += std::exp((*fam)[e * N + n]);
                    norm_ok = norm_ok && std::fabs(z - 1.0) <= 1e-9;
                }
            }
            variable_update(st, g);
            factor_update(st, g, u);
        }

        // Fixed-point residual at exit.
        const auto r = run_bp(g, u, pop.group_probs, c.bp, model.mbs_delay());
        if (r.converged && r.iterations > 0) {
            auto again = r.final_state;
            variable_update(again, g);
            factor_update(again, g, u);
            fixed_ok = fixed_ok && message_change(r.final_state, again) < c.bp.tolerance;
        }

        // Placement validity for every producer.
        const auto hb = hbp_run(g, u, pop.group_probs, c.bp, model.mbs_delay(), s.substream(4));
        RandomStream cs = s.substream(5);
        for (const auto& lam : {r.placement, hb.placement, random_caching(pop.group_probs, c.sbs_count, cs),
                                exhaustive_search(model).placement}) {
            valid_ok = valid_ok && validate_placement(lam, c.sbs_count, N).ok;
        }
    }
    check(norm_ok, "message normalization");
    check(fixed_ok, "fixed-point residual");
    check(valid_ok, "placement validity");

    bool mono_ok = true;
    for (double d : {0.01, 0.03, 0.1, 0.3, 1.0}) {
        double prev = 2.0;
        for (int i = 0; i <= 200; ++i) {
            const double b = outage_bound(i / 200.0, d, 4.0);
            mono_ok = mono_ok && b < prev && b >= 0.0 && b <= 1.0 + 1e-12;
            prev = b;
        }
    }
    for (double w : {0.01, 0.2, 0.7, 1.0}) {
        double prev = -1.0;
        for (double d = 1e-3; d < 5.0; d *= 1.1) {
            const double b = outage_bound(w, d, 4.0);
            mono_ok = mono_ok && b > prev;
            prev = b;
        }
    }
    check(mono_ok, "outage bound monotonicity");

    bool quota_ok = true;
    for (int i = 0; i < 2000; ++i) {
        const std::size_t n = 1 + rng() % 30, k = rng() % 200;
        std::vector<double> w(n);
        for (double& x : w) x = rng.uniform();
        const double z = std::accumulate(w.begin(), w.end(), 0.0);
        for (double& x : w) x /= z;
        const auto q = largest_remainder_quotas(w, k);
        quota_ok = quota_ok && std::accumulate(q.begin(), q.end(), std::size_t{0}) == k;
    }
    for (double s = 0.1; s <= 1.0001; s += 0.1) {
        const auto p = PopularityModel::zipf(100, 5, s);
        const auto om = orc_omega(p.group_probs, 0.03, 4.0);
        quota_ok = quota_ok && std::fabs(std::accumulate(om.begin(), om.end(), 0.0) - 1.0) <= 1e-9;
        const auto q = largest_remainder_quotas(om, 37);
        quota_ok = quota_ok && std::accumulate(q.begin(), q.end(), std::size_t{0}) == 37;
    }
    check(quota_ok, "quota conservation");
    v.detail = fmt(" %.0f property groups green: normalization, fixed-point residual, placement validity,", checks) +
               " bound monotonicity, quota conservation" + v.detail;
    return v;
}

}  // namespace

int main(int argc, char** argv)
{
    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
        {"degree analytics vs PPP simulation", degree_analytics},
        {"special functions", special_functions},
        {"outage bound anchors", bound_anchors},
        {"bound dominance over a (delta, s) grid", bound_dominance},
        {"ORC closed form vs numeric optimum", orc_optimality},
        {"BP/HBP near the exhaustive optimum (scenario 1)", bp_near_optimal},
        {"scheme delay ordering", scheme_ordering},
        {"iteration counts (scenario 1)", iteration_counts},
        {"communication ledger", communication_ledger},
        {"property suites", property_suites},
    };
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!only.empty() && !only.count(id)) continue;
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v.pass = false;
            v.detail = std::string(" [exception: ") + e.what() + "]";
        }
        failed += !v.pass;
        std::printf("%s criterion %d: %s --%s\n", v.pass ? "PASS" : "FAIL", id, criteria[i].first, v.detail.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
