#include "hetcache/net_model.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "hetcache/errors.hpp"

namespace hetcache {

void validate(const GeometryParams& p)
{
    std::ostringstream why;
    if (!(p.alpha > 2.0)) why << "alpha must exceed 2; ";
    if (!(p.delta > 0.0)) why << "delta must be positive; ";
    if (!(p.power > 0.0)) why << "power must be positive; ";
    if (!(p.sigma2 >= 0.0)) why << "sigma2 must be non-negative; ";
    if (!(p.lambda_B >= 0.0) || !(p.lambda_U >= 0.0)) why << "intensities must be non-negative; ";
    if (!(p.bandwidth > 0.0)) why << "bandwidth must be positive; ";
    if (!(p.file_size > 0.0)) why << "file_size must be positive; ";
    if (p.mbs_rate < 0.0) why << "c0 must be non-negative; ";
    if (p.mbs_rate > 0.0 && p.delta > 0.0 && p.bandwidth > 0.0) {
        const double cap = p.bandwidth * std::log2(1.0 + p.delta);
        if (p.mbs_rate > cap * (1.0 + 1e-12)) why << "c0 exceeds W log2(1 + delta) = " << cap << "; ";
    }
    const std::string text = why.str();
    if (!text.empty()) throw ConfigError("invalid geometry: " + text.substr(0, text.size() - 2));
}

double mbs_rate(const GeometryParams& params)
{
    if (params.mbs_rate > 0.0) return params.mbs_rate;
    return params.bandwidth * std::log2(1.0 + params.delta);
}

double distance(Point a, Point b, const Region& region)
{
    double dx = std::fabs(a.x - b.x);
    double dy = std::fabs(a.y - b.y);
    if (region.wrap) {
        dx = std::min(dx, region.side - dx);
        dy = std::min(dy, region.side - dy);
    }
    return std::hypot(dx, dy);
}

Topology::Topology(std::vector<Point> sbs, std::vector<Point> mu, std::vector<double> sbs_power,
                   std::vector<double> fading_power, const Region& region)
    : sbs_(std::move(sbs)), mu_(std::move(mu)), power_(std::move(sbs_power)), fading_(std::move(fading_power))
{
    const std::size_t K = sbs_.size();
    const std::size_t J = mu_.size();
    if (power_.size() != K) throw std::invalid_argument("Topology: one power per SBS required");
    if (fading_.size() != J * K) throw std::invalid_argument("Topology: fading matrix must be J x K");
    for (double h : fading_) {
        if (!(h > 0.0)) throw std::invalid_argument("Topology: fading power must be positive");
    }
    for (double p : power_) {
        if (!(p > 0.0)) throw std::invalid_argument("Topology: SBS power must be positive");
    }
    distance_.resize(J * K);
    for (std::size_t j = 0; j < J; ++j) {
        for (std::size_t k = 0; k < K; ++k) {
            const double d = hetcache::distance(sbs_[k], mu_[j], region);
            if (!(d > 0.0)) throw std::invalid_argument("Topology: co-located SBS and MU");
            distance_[j * K + k] = d;
        }
    }
}

double Topology::received_power(std::size_t k, std::size_t j, double alpha) const
{
    return fading(k, j) * std::pow(distance(k, j), -alpha) * power_[k];
}

Topology make_topology(std::vector<Point> sbs, std::vector<Point> mu, const Region& region, double power,
                       const RandomStream& fading)
{
    const std::size_t K = sbs.size();
    const std::size_t J = mu.size();
    return Topology(std::move(sbs), std::move(mu), std::vector<double>(K, power), sample_fading(J, K, fading), region);
}

std::vector<Point> sample_ppp(double intensity, const Region& region, RandomStream& rng)
{
    if (!(intensity >= 0.0)) throw std::invalid_argument("sample_ppp: intensity must be non-negative");
    if (!(region.side > 0.0)) throw std::invalid_argument("sample_ppp: region side must be positive");
    if (intensity == 0.0) return {};
    std::poisson_distribution<std::size_t> count(intensity * region.side * region.side);
    return sample_uniform(count(rng), region, rng);
}

std::vector<Point> sample_uniform(std::size_t count, const Region& region, RandomStream& rng)
{
    if (!(region.side > 0.0)) throw std::invalid_argument("sample_uniform: region side must be positive");
    std::vector<Point> points(count);
    for (auto& p : points) {
        // uniform() is in (0, 1]; the reflected value lands in [0, side).
        p.x = (1.0 - rng.uniform()) * region.side;
        p.y = (1.0 - rng.uniform()) * region.side;
    }
    return points;
}

std::vector<double> sample_fading(std::size_t mu_count, std::size_t sbs_count, const RandomStream& rng)
{
    std::vector<double> h(mu_count * sbs_count);
    for (std::size_t i = 0; i < h.size(); ++i) h[i] = exponential_from_bits(rng.at(i));
    return h;
}

namespace {

void check_pair(std::size_t k, std::size_t j, const Topology& topo)
{
    if (topo.sbs_count() == 0 || topo.mu_count() == 0) throw std::invalid_argument("sinr: empty topology");
    if (k >= topo.sbs_count()) throw std::out_of_range("sinr: SBS index out of range");
    if (j >= topo.mu_count()) throw std::out_of_range("sinr: MU index out of range");
}

}  // namespace

double sinr(std::size_t k, std::size_t j, const Topology& topo, const GeometryParams& params)
{
    check_pair(k, j, topo);
    double interference = 0.0;
    for (std::size_t q = 0; q < topo.sbs_count(); ++q) {
        if (q != k) interference += topo.received_power(q, j, params.alpha);
    }
    return topo.received_power(k, j, params.alpha) / (interference + params.sigma2);
}

double capacity_from_sinr(double sinr, double bandwidth)
{
    return bandwidth * std::log2(1.0 + sinr);
}

double capacity(std::size_t k, std::size_t j, const Topology& topo, const GeometryParams& params)
{
    return capacity_from_sinr(sinr(k, j, topo, params), params.bandwidth);
}

std::size_t CandidateSets::edge_count() const noexcept
{
    std::size_t edges = 0;
    for (const auto& h : sbs_of_mu) edges += h.size();
    return edges;
}

CandidateSets from_mu_lists(std::vector<std::vector<std::size_t>> sbs_of_mu, std::size_t sbs_count)
{
    CandidateSets sets;
    sets.mu_of_sbs.resize(sbs_count);
    for (std::size_t j = 0; j < sbs_of_mu.size(); ++j) {
        std::sort(sbs_of_mu[j].begin(), sbs_of_mu[j].end());
        for (std::size_t k : sbs_of_mu[j]) sets.mu_of_sbs.at(k).push_back(j);
    }
    sets.sbs_of_mu = std::move(sbs_of_mu);
    return sets;
}

CandidateSets candidate_sets(const Topology& topo, const GeometryParams& params)
{
    std::vector<std::vector<std::size_t>> lists(topo.mu_count());
    for (std::size_t j = 0; j < topo.mu_count(); ++j) {
        for (std::size_t k = 0; k < topo.sbs_count(); ++k) {
            if (sinr(k, j, topo, params) >= params.delta) lists[j].push_back(k);
        }
    }
    return from_mu_lists(std::move(lists), topo.sbs_count());
}

CandidateSets LinkScan::candidates(double delta, double power, double sigma2,
                                   std::vector<std::vector<double>>* sinr_of_mu) const
{
    if (delta < delta_floor * (1.0 - 1e-12)) {
        throw std::invalid_argument("LinkScan: threshold below the scan floor");
    }
    std::vector<std::vector<std::size_t>> lists(links.size());
    if (sinr_of_mu) sinr_of_mu->assign(links.size(), {});
    for (std::size_t j = 0; j < links.size(); ++j) {
        // Links are stored in ascending SBS order.
        for (const Link& link : links[j]) {
            const double s = sinr(j, link, power, sigma2);
            if (s >= delta) {
                lists[j].push_back(link.sbs);
                if (sinr_of_mu) (*sinr_of_mu)[j].push_back(s);
            }
        }
    }
    return from_mu_lists(std::move(lists), sbs_count);
}

}  // namespace hetcache
