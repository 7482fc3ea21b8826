#include "hetcache/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "hetcache/analysis.hpp"
#include "hetcache/errors.hpp"

namespace hetcache {

namespace {

void check_distribution(std::span<const double> omega, const char* who)
{
    if (omega.empty()) throw std::invalid_argument(std::string(who) + ": empty distribution");
    double total = 0.0;
    for (double w : omega) {
        if (!(w >= 0.0)) throw std::invalid_argument(std::string(who) + ": negative or NaN entry");
        total += w;
    }
    if (std::fabs(total - 1.0) > 1e-9) throw std::invalid_argument(std::string(who) + ": entries must sum to 1");
}

double orc_denominator(double c_coef, double a_coef)
{
    const double a = a_coef - c_coef + 1.0;
    if (!(a > 0.0)) throw NumericError("ORC: A - C + 1 must be positive");
    return a;
}

}  // namespace

std::vector<std::size_t> largest_remainder_quotas(std::span<const double> omega, std::size_t sbs_count)
{
    check_distribution(omega, "largest_remainder_quotas");
    const std::size_t N = omega.size();
    std::vector<std::size_t> q(N);
    std::vector<double> rest(N);
    std::size_t used = 0;
    for (std::size_t n = 0; n < N; ++n) {
        const double raw = omega[n] * static_cast<double>(sbs_count);
        // Guard against 4.0 arriving as 3.9999999.
        const double fl = std::floor(raw + 1e-9);
        q[n] = static_cast<std::size_t>(fl);
        rest[n] = raw - fl;
        used += q[n];
    }
    if (used > sbs_count) throw std::logic_error("largest_remainder_quotas: floor quotas exceed K");
    std::vector<std::size_t> order(N);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rest[a] > rest[b]; });
    for (std::size_t i = 0; used < sbs_count; ++i, ++used) ++q[order[i % N]];
    return q;
}

PlacementMatrix random_caching(std::span<const double> omega, std::size_t sbs_count, RandomStream& rng)
{
    const auto quotas = largest_remainder_quotas(omega, sbs_count);
    std::vector<std::size_t> perm(sbs_count);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    // Fisher-Yates with an explicit bounded draw keeps the permutation
    // independent of the standard library's shuffle.
    for (std::size_t i = sbs_count; i > 1; --i) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0, 1)
        const auto j = static_cast<std::size_t>(u * static_cast<double>(i));
        std::swap(perm[i - 1], perm[std::min(j, i - 1)]);
    }
    std::vector<std::size_t> group(sbs_count);
    std::size_t pos = 0;
    for (std::size_t n = 0; n < quotas.size(); ++n) {
        for (std::size_t c = 0; c < quotas[n]; ++c) group[perm[pos++]] = n;
    }
    return PlacementMatrix::from_groups(group, omega.size());
}

std::vector<double> fprc_omega(std::span<const double> group_probs)
{
    return {group_probs.begin(), group_probs.end()};
}

std::vector<double> orc_omega(std::span<const double> group_probs, double delta, double alpha)
{
    return orc_omega_from_coefs(group_probs, interference_coef_c(delta, alpha), interference_coef_a(delta, alpha));
}

std::vector<double> orc_omega_from_coefs(std::span<const double> group_probs, double c_coef, double a_coef)
{
    check_distribution(group_probs, "orc_omega");
    const std::size_t N = group_probs.size();
    const double a = orc_denominator(c_coef, a_coef);
    std::vector<std::size_t> order(N);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return group_probs[x] > group_probs[y]; });

    // KKT: Omega_n = (sqrt(P_n / xi) - C) / a on the active set, where
    // sqrt(xi) = sum_active sqrt(P) / (n* C + a) from the simplex constraint.
    std::vector<double> omega(N, 0.0);
    double root_sum = 0.0;
    std::vector<double> prefix(N);
    for (std::size_t i = 0; i < N; ++i) {
        root_sum += std::sqrt(group_probs[order[i]]);
        prefix[i] = root_sum;
    }
    for (std::size_t active = N; active >= 1; --active) {
        const double root_xi = prefix[active - 1] / (static_cast<double>(active) * c_coef + a);
        // Smallest active entry decides feasibility.
        const double last = (std::sqrt(group_probs[order[active - 1]]) / root_xi - c_coef) / a;
        if (last < 0.0 && active > 1) continue;
        double total = 0.0;
        for (std::size_t i = 0; i < active; ++i) {
            const double w = std::max(0.0, (std::sqrt(group_probs[order[i]]) / root_xi - c_coef) / a);
            omega[order[i]] = w;
            total += w;
        }
        for (double& w : omega) w /= total;
        return omega;
    }
    throw std::logic_error("orc_omega: no feasible active set");
}

double orc_objective(std::span<const double> omega, std::span<const double> group_probs, double c_coef, double a_coef)
{
    const double a = orc_denominator(c_coef, a_coef);
    double value = 0.0;
    for (std::size_t n = 0; n < omega.size(); ++n) value += group_probs[n] * omega[n] / (a * omega[n] + c_coef);
    return value;
}

std::vector<double> project_to_simplex(std::span<const double> v)
{
    // Sort-based projection (Held, Wolfe and Crowder).
    std::vector<double> u(v.begin(), v.end());
    std::sort(u.begin(), u.end(), std::greater<>());
    double cumulative = 0.0;
    double theta = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        cumulative += u[i];
        const double t = (cumulative - 1.0) / static_cast<double>(i + 1);
        if (u[i] - t > 0.0) theta = t;
    }
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::max(0.0, v[i] - theta);
    return out;
}

NumericSolve solve_orc_numeric(std::span<const double> group_probs, double c_coef, double a_coef, double tolerance,
                               std::size_t max_iterations)
{
    const std::size_t N = group_probs.size();
    const double a = orc_denominator(c_coef, a_coef);
    double lipschitz = 0.0;
    for (double p : group_probs) lipschitz = std::max(lipschitz, 2.0 * p * a / (c_coef * c_coef));
    NumericSolve out;
    out.omega.assign(N, 1.0 / static_cast<double>(N));
    if (!(lipschitz > 0.0)) {
        out.converged = true;
        return out;
    }
    const double step = 1.0 / lipschitz;
    std::vector<double> trial(N);
    for (std::size_t it = 1; it <= max_iterations; ++it) {
        for (std::size_t n = 0; n < N; ++n) {
            const double denom = a * out.omega[n] + c_coef;
            trial[n] = out.omega[n] + step * group_probs[n] * c_coef / (denom * denom);
        }
        auto next = project_to_simplex(trial);
        double change = 0.0;
        for (std::size_t n = 0; n < N; ++n) change = std::max(change, std::fabs(next[n] - out.omega[n]));
        out.omega = std::move(next);
        out.iterations = it;
        if (change < tolerance) {
            out.converged = true;
            break;
        }
    }
    return out;
}

std::vector<double> orc_omega_checked(std::span<const double> group_probs, double delta, double alpha,
                                      double max_mismatch)
{
    const double c = interference_coef_c(delta, alpha);
    const double A = interference_coef_a(delta, alpha);
    auto closed = orc_omega_from_coefs(group_probs, c, A);
    const auto numeric = solve_orc_numeric(group_probs, c, A);
    double worst = 0.0;
    std::size_t where = 0;
    for (std::size_t n = 0; n < closed.size(); ++n) {
        const double diff = std::fabs(closed[n] - numeric.omega[n]);
        if (diff > worst) {
            worst = diff;
            where = n;
        }
    }
    if (!numeric.converged || worst > max_mismatch) {
        std::ostringstream msg;
        msg << "ORC closed form disagrees with the numeric solve: |diff| = " << worst << " at group " << where + 1
            << " (closed " << closed[where] << ", numeric " << numeric.omega[where] << ", numeric "
            << (numeric.converged ? "converged" : "not converged") << " after " << numeric.iterations
            << " iterations)";
        throw NumericError(msg.str());
    }
    return closed;
}

ExhaustiveResult exhaustive_search(const DelayModel& model, double cap)
{
    const std::size_t K = model.sbs_count;
    const std::size_t N = model.group_count();
    if (N == 0) throw std::invalid_argument("exhaustive_search: no groups");
    const double size = std::pow(static_cast<double>(N), static_cast<double>(K));
    if (size > cap) {
        std::ostringstream msg;
        msg << "exhaustive search over N^K = " << N << "^" << K << " placements exceeds the cap " << cap;
        throw ResourceError(msg.str());
    }
    ExhaustiveResult out;
    std::vector<std::size_t> x(K, 0);
    std::vector<std::size_t> best = x;
    double best_delay = std::numeric_limits<double>::infinity();
    // Odometer with SBS 0 most significant, so the first minimizer met is the
    // lexicographically smallest.
    for (;;) {
        const double d = average_delay(x, model);
        ++out.evaluated;
        if (d < best_delay * (1.0 - 1e-12)) {
            best_delay = d;
            best = x;
        }
        std::size_t i = K;
        while (i > 0 && ++x[i - 1] == N) x[--i] = 0;
        if (i == 0) break;
    }
    out.placement = PlacementMatrix::from_groups(best, N);
    out.delay = best_delay;
    return out;
}

}  // namespace hetcache
