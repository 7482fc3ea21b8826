#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hetcache/net_model.hpp"

namespace hetcache {

// B(2/alpha, 1 - 2/alpha) = pi / sin(2 pi / alpha). Requires alpha > 2.
double beta_reflection(double alpha);

/// Gauss hypergeometric 2F1(a, b; c; x) for x < 1.
///
/// Direct power series; for x < -1/2 the Pfaff transformation
/// 2F1(a,b;c;x) = (1-x)^-a 2F1(a, c-b; c; x/(x-1)) is applied first.
/// Throws NumericError if the series has not converged after max_terms.
double hyp2f1(double a, double b, double c, double x, std::size_t max_terms = 100000);

// C(delta, alpha) = (2/alpha) delta^(2/alpha) B(2/alpha, 1 - 2/alpha).
double interference_coef_c(double delta, double alpha);
// A(delta, alpha) = 2 delta / (alpha - 2) 2F1(1, 1 - 2/alpha; 2 - 2/alpha; -delta).
double interference_coef_a(double delta, double alpha);

struct QuadratureOptions {
    double relative_tolerance = 1e-9;
    // Integration stops where the integrand falls below this fraction of its peak.
    double truncation = 1e-16;
};

/// Z(lambda_B, P, alpha, delta) =
///   int_0^inf exp(-(2 pi lambda_B / alpha) delta^(2/alpha) B r^2 - (delta sigma2 / P) r^alpha) r dr
/// by adaptive Gauss-Kronrod quadrature. Throws NumericError on failure.
double z_integral(double lambda_B, double power, double alpha, double delta, double sigma2,
                  const QuadratureOptions& options = {});

// Noise-free value alpha / (4 pi lambda_B B delta^(2/alpha)).
double z_noise_free(double lambda_B, double alpha, double delta);

struct Degrees {
    double zeta_U = 0.0;
    double zeta_B = 0.0;
};

// zeta_U = 2 pi lambda_B Z, zeta_B = 2 pi lambda_U Z.
Degrees degrees_exact(const GeometryParams& params, const QuadratureOptions& options = {});
// zeta_U = alpha / (2 delta^(2/alpha) B), zeta_B = (lambda_U / lambda_B) zeta_U.
Degrees degrees_noise_free(const GeometryParams& params);

// Upper bound on the outage probability of a group cached with probability omega.
double outage_bound(double omega, double delta, double alpha);
double outage_bound_from_coefs(double omega, double c_coef, double a_coef);

// Popularity-weighted average of the per-group bounds.
double avg_outage_bound(std::span<const double> omega, std::span<const double> group_probs, double delta, double alpha);

// (1 - Pr(Q)) D_s + Pr(Q) M / C0.
double avg_delay_composed(double outage, double mean_sbs_delay, double file_size, double mbs_rate);

/// Closed-form results for one parameterization and one caching distribution.
struct AnalyticModel {
    double delta = 0.0;
    double alpha = 0.0;
    double lambda_B = 0.0;
    double lambda_U = 0.0;
    double power = 0.0;
    double sigma2 = 0.0;
    double c_coef = 0.0;
    double a_coef = 0.0;
    double beta = 0.0;
    double zeta_U = 0.0;
    double zeta_B = 0.0;
    double zeta_U_noise_free = 0.0;
    double zeta_B_noise_free = 0.0;
    std::vector<double> group_bound;
    double average_bound = 0.0;
};

AnalyticModel make_analytic_model(const GeometryParams& params, std::span<const double> group_probs,
                                  std::span<const double> omega);

}  // namespace hetcache
