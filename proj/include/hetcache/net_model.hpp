#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hetcache/rng.hpp"

namespace hetcache {

/// Radio and traffic parameters of one network.
///
/// Distances are in km, intensities in nodes/km^2, powers in watt. A zero
/// `mbs_rate` means "derive it": W * log2(1 + delta), the highest rate the
/// SBS-first rule allows for the macro cell.
struct GeometryParams {
    double lambda_B = 50.0;
    double lambda_U = 100.0;
    double power = 2.0;
    double alpha = 4.0;
    double sigma2 = 1e-10;
    double delta = 0.1;
    double bandwidth = 1e7;
    double file_size = 1e9;
    double mbs_rate = 0.0;
};

// Throws ConfigError when an invariant does not hold.
void validate(const GeometryParams& params);

// C0, resolved from the params.
double mbs_rate(const GeometryParams& params);

struct Region {
    double side = 1.0;
    bool wrap = false;
};

struct Point {
    double x = 0.0;
    double y = 0.0;
};

// Euclidean distance, or toroidal distance when region.wrap is set.
double distance(Point a, Point b, const Region& region);

/// One network realization: positions, powers, Rayleigh power gains and
/// pairwise distances. Matrices are J x K, row-major by MU.
class Topology {
public:
    Topology(std::vector<Point> sbs, std::vector<Point> mu, std::vector<double> sbs_power,
             std::vector<double> fading_power, const Region& region);

    std::size_t sbs_count() const noexcept { return sbs_.size(); }
    std::size_t mu_count() const noexcept { return mu_.size(); }

    const std::vector<Point>& sbs_positions() const noexcept { return sbs_; }
    const std::vector<Point>& mu_positions() const noexcept { return mu_; }
    double power(std::size_t k) const { return power_.at(k); }
    double fading(std::size_t k, std::size_t j) const { return fading_[j * sbs_.size() + k]; }
    double distance(std::size_t k, std::size_t j) const { return distance_[j * sbs_.size() + k]; }

    // Received power from SBS k at MU j: h^2 d^-alpha P_k.
    double received_power(std::size_t k, std::size_t j, double alpha) const;

private:
    std::vector<Point> sbs_;
    std::vector<Point> mu_;
    std::vector<double> power_;
    std::vector<double> fading_;
    std::vector<double> distance_;
};

// Builds a topology with uniform SBS power and fading drawn from `fading`.
Topology make_topology(std::vector<Point> sbs, std::vector<Point> mu, const Region& region,
                       double power, const RandomStream& fading);

std::vector<Point> sample_ppp(double intensity, const Region& region, RandomStream& rng);
std::vector<Point> sample_uniform(std::size_t count, const Region& region, RandomStream& rng);

/// J x K matrix of i.i.d. Exp(1) power gains. Entry (j, k) is a function of
/// the stream key and the index j * K + k only, so scan_links() reproduces it
/// without materializing the matrix.
std::vector<double> sample_fading(std::size_t mu_count, std::size_t sbs_count, const RandomStream& rng);

double sinr(std::size_t k, std::size_t j, const Topology& topo, const GeometryParams& params);

// Shannon rate in bits/s for a linear SINR.
double capacity_from_sinr(double sinr, double bandwidth);
double capacity(std::size_t k, std::size_t j, const Topology& topo, const GeometryParams& params);

/// Bipartite SINR-threshold neighborhoods. `sbs_of_mu[j]` is H(j) and
/// `mu_of_sbs[k]` is H(k); both lists are sorted ascending.
struct CandidateSets {
    std::vector<std::vector<std::size_t>> sbs_of_mu;
    std::vector<std::vector<std::size_t>> mu_of_sbs;

    std::size_t edge_count() const noexcept;
};

CandidateSets candidate_sets(const Topology& topo, const GeometryParams& params);

// Builds the transpose neighborhoods from H(j).
CandidateSets from_mu_lists(std::vector<std::vector<std::size_t>> sbs_of_mu, std::size_t sbs_count);

/// Result of a streaming link scan over a uniform-power PPP realization.
///
/// For MU j, `total_gain[j]` is the sum over all SBSs of h^2 d^-alpha, and
/// `links[j]` holds every SBS whose noise-free SINR reaches `delta_floor`,
/// together with its gain. The SINR at power P is then
/// gain / (total_gain - gain + sigma2 / P), exactly as sinr() computes it.
struct LinkScan {
    struct Link {
        std::size_t sbs;
        double gain;
    };
    std::size_t sbs_count = 0;
    double delta_floor = 0.0;
    std::vector<double> total_gain;
    std::vector<std::vector<Link>> links;

    double sinr(std::size_t j, const Link& link, double power, double sigma2) const noexcept
    {
        return link.gain / (total_gain[j] - link.gain + sigma2 / power);
    }

    // Candidate sets and aligned SINRs at threshold delta (>= delta_floor).
    CandidateSets candidates(double delta, double power, double sigma2,
                             std::vector<std::vector<double>>* sinr_of_mu = nullptr) const;
};

/// O(J K) scan that never stores the J x K matrices. Fading for pair (j, k)
/// is the same draw sample_fading() would place at (j, k).
LinkScan scan_links(std::span<const Point> sbs, std::span<const Point> mu, const Region& region,
                    double alpha, double delta_floor, const RandomStream& fading);

}  // namespace hetcache
