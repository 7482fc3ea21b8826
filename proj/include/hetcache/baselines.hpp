#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hetcache/content.hpp"
#include "hetcache/objective.hpp"
#include "hetcache/rng.hpp"

namespace hetcache {

// Integer quotas q_n ~ omega_n K with sum q_n = K (largest remainder; remainder
// ties to the lower index).
std::vector<std::size_t> largest_remainder_quotas(std::span<const double> omega, std::size_t sbs_count);

/// Random caching: a random permutation of the SBSs is cut into consecutive
/// blocks of the quota sizes and block n caches group n.
PlacementMatrix random_caching(std::span<const double> omega, std::size_t sbs_count, RandomStream& rng);

// File-popularity random caching: Omega = P_F.
std::vector<double> fprc_omega(std::span<const double> group_probs);

/// Optimized random caching: the water-filling maximizer of
///   sum_n P_n Omega_n / (Omega_n (A - C + 1) + C)   s.t. Omega on the simplex,
/// with C = C(delta, alpha) and A = A(delta, alpha).
std::vector<double> orc_omega(std::span<const double> group_probs, double delta, double alpha);
std::vector<double> orc_omega_from_coefs(std::span<const double> group_probs, double c_coef, double a_coef);

// Objective of the ORC program (the complement of the averaged outage bound).
double orc_objective(std::span<const double> omega, std::span<const double> group_probs, double c_coef, double a_coef);

struct NumericSolve {
    std::vector<double> omega;
    std::size_t iterations = 0;
    bool converged = false;
};

// Projected-gradient ascent of the ORC program onto the probability simplex.
NumericSolve solve_orc_numeric(std::span<const double> group_probs, double c_coef, double a_coef,
                               double tolerance = 1e-13, std::size_t max_iterations = 2000000);

// Euclidean projection onto {x >= 0, sum x = 1}.
std::vector<double> project_to_simplex(std::span<const double> v);

/// orc_omega() cross-checked against solve_orc_numeric(); throws NumericError
/// when any coordinate differs by more than `max_mismatch`.
std::vector<double> orc_omega_checked(std::span<const double> group_probs, double delta, double alpha,
                                      double max_mismatch = 1e-6);

struct ExhaustiveResult {
    PlacementMatrix placement;
    double delay = 0.0;
    std::size_t evaluated = 0;
};

// Minimizes D over all N^K placements; ties to the lexicographically smallest
// assignment. Throws ResourceError when N^K > cap.
ExhaustiveResult exhaustive_search(const DelayModel& model, double cap = 1e7);

}  // namespace hetcache
