#include "hetcache/analysis.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "hetcache/errors.hpp"

namespace hetcache {

double beta_reflection(double alpha)
{
    if (!(alpha > 2.0)) throw std::invalid_argument("beta_reflection: alpha must exceed 2");
    return std::numbers::pi / std::sin(2.0 * std::numbers::pi / alpha);
}

namespace {

double hyp2f1_series(double a, double b, double c, double x, std::size_t max_terms)
{
    double term = 1.0;
    double sum = 1.0;
    for (std::size_t k = 0; k < max_terms; ++k) {
        const double kk = static_cast<double>(k);
        term *= (a + kk) * (b + kk) / ((c + kk) * (kk + 1.0)) * x;
        sum += term;
        if (std::fabs(term) < 1e-14 * std::fabs(sum)) return sum;
        if (term == 0.0) return sum;
    }
    std::ostringstream msg;
    msg << "2F1(" << a << ", " << b << "; " << c << "; " << x << ") did not converge in " << max_terms << " terms";
    throw NumericError(msg.str());
}

}  // namespace

double hyp2f1(double a, double b, double c, double x, std::size_t max_terms)
{
    if (!(x < 1.0)) throw std::invalid_argument("hyp2f1: requires x < 1");
    if (c <= 0.0 && c == std::floor(c)) throw std::invalid_argument("hyp2f1: c must not be a non-positive integer");
    if (x < -0.5) {
        // Pfaff: maps x in (-inf, -1/2) to x/(x-1) in (1/3, 1).
        return std::pow(1.0 - x, -a) * hyp2f1_series(a, c - b, c, x / (x - 1.0), max_terms);
    }
    return hyp2f1_series(a, b, c, x, max_terms);
}

double interference_coef_c(double delta, double alpha)
{
    if (!(delta > 0.0)) throw std::invalid_argument("interference_coef_c: delta must be positive");
    return 2.0 / alpha * std::pow(delta, 2.0 / alpha) * beta_reflection(alpha);
}

double interference_coef_a(double delta, double alpha)
{
    if (!(delta > 0.0)) throw std::invalid_argument("interference_coef_a: delta must be positive");
    if (!(alpha > 2.0)) throw std::invalid_argument("interference_coef_a: alpha must exceed 2");
    return 2.0 * delta / (alpha - 2.0) * hyp2f1(1.0, 1.0 - 2.0 / alpha, 2.0 - 2.0 / alpha, -delta);
}

double z_integral(double lambda_B, double power, double alpha, double delta, double sigma2,
                  const QuadratureOptions& options)
{
    if (!(lambda_B > 0.0)) throw std::invalid_argument("z_integral: lambda_B must be positive");
    if (!(power > 0.0)) throw std::invalid_argument("z_integral: power must be positive");
    if (!(sigma2 >= 0.0)) throw std::invalid_argument("z_integral: sigma2 must be non-negative");
    const double a = 2.0 * std::numbers::pi * lambda_B / alpha * std::pow(delta, 2.0 / alpha) * beta_reflection(alpha);
    const double b = delta * sigma2 / power;
    const double half_power = alpha / 2.0;

    // With u = r^2: Z = 1/2 int_0^inf exp(-a u - b u^(alpha/2)) du. The
    // integrand is decreasing with peak 1 at u = 0.
    auto exponent = [&](double u) { return a * u + b * std::pow(u, half_power); };
    const double stop = -std::log(options.truncation);
    double hi = stop / a;
    double lo = 0.0;
    if (exponent(hi) > stop) {
        for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
            const double mid = 0.5 * (lo + hi);
            (exponent(mid) > stop ? hi : lo) = mid;
        }
    }
    auto integrand = [&](double u) { return std::exp(-exponent(u)); };
    double error = 0.0;
    const double value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        integrand, 0.0, hi, 20, options.relative_tolerance * 1e-2, &error);
    if (!std::isfinite(value) || !(value > 0.0) || error > options.relative_tolerance * value) {
        std::ostringstream msg;
        msg << "Z quadrature failed: value " << value << ", error estimate " << error;
        throw NumericError(msg.str());
    }
    return 0.5 * value;
}

double z_noise_free(double lambda_B, double alpha, double delta)
{
    return alpha / (4.0 * std::numbers::pi * lambda_B * beta_reflection(alpha) * std::pow(delta, 2.0 / alpha));
}

Degrees degrees_exact(const GeometryParams& params, const QuadratureOptions& options)
{
    const double z = z_integral(params.lambda_B, params.power, params.alpha, params.delta, params.sigma2, options);
    return {2.0 * std::numbers::pi * params.lambda_B * z, 2.0 * std::numbers::pi * params.lambda_U * z};
}

Degrees degrees_noise_free(const GeometryParams& params)
{
    const double zeta_u =
        params.alpha / (2.0 * std::pow(params.delta, 2.0 / params.alpha) * beta_reflection(params.alpha));
    return {zeta_u, params.lambda_U / params.lambda_B * zeta_u};
}

double outage_bound_from_coefs(double omega, double c_coef, double a_coef)
{
    if (!(omega >= 0.0 && omega <= 1.0)) throw std::invalid_argument("outage_bound: omega must lie in [0, 1]");
    const double num = c_coef * (1.0 - omega) + a_coef * omega;
    return num / (num + omega);
}

double outage_bound(double omega, double delta, double alpha)
{
    return outage_bound_from_coefs(omega, interference_coef_c(delta, alpha), interference_coef_a(delta, alpha));
}

double avg_outage_bound(std::span<const double> omega, std::span<const double> group_probs, double delta, double alpha)
{
    if (omega.size() != group_probs.size()) throw std::invalid_argument("avg_outage_bound: length mismatch");
    const double c = interference_coef_c(delta, alpha);
    const double A = interference_coef_a(delta, alpha);
    double total = 0.0;
    for (std::size_t n = 0; n < omega.size(); ++n) total += group_probs[n] * outage_bound_from_coefs(omega[n], c, A);
    return total;
}

double avg_delay_composed(double outage, double mean_sbs_delay, double file_size, double mbs_rate)
{
    if (!(outage >= 0.0 && outage <= 1.0)) throw std::invalid_argument("avg_delay_composed: outage must lie in [0, 1]");
    const double mbs = file_size / mbs_rate;
    if (outage == 1.0) return mbs;
    return (1.0 - outage) * mean_sbs_delay + outage * mbs;
}

AnalyticModel make_analytic_model(const GeometryParams& params, std::span<const double> group_probs,
                                  std::span<const double> omega)
{
    AnalyticModel m;
    m.delta = params.delta;
    m.alpha = params.alpha;
    m.lambda_B = params.lambda_B;
    m.lambda_U = params.lambda_U;
    m.power = params.power;
    m.sigma2 = params.sigma2;
    m.c_coef = interference_coef_c(params.delta, params.alpha);
    m.a_coef = interference_coef_a(params.delta, params.alpha);
    m.beta = beta_reflection(params.alpha);
    if (params.lambda_B > 0.0) {
        const Degrees exact = degrees_exact(params);
        const Degrees free = degrees_noise_free(params);
        m.zeta_U = exact.zeta_U;
        m.zeta_B = exact.zeta_B;
        m.zeta_U_noise_free = free.zeta_U;
        m.zeta_B_noise_free = free.zeta_B;
    }
    if (omega.size() != group_probs.size()) throw std::invalid_argument("make_analytic_model: length mismatch");
    m.group_bound.resize(omega.size());
    for (std::size_t n = 0; n < omega.size(); ++n) {
        m.group_bound[n] = outage_bound_from_coefs(omega[n], m.c_coef, m.a_coef);
        m.average_bound += group_probs[n] * m.group_bound[n];
    }
    return m;
}

}  // namespace hetcache
