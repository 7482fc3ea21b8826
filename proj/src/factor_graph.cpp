#include "hetcache/factor_graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "hetcache/errors.hpp"

namespace hetcache {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// The linear path multiplies exp(mu * gain) factors in long double (x87
// extended range, about e^+-11356); past this span it could overflow.
constexpr double kLinearExponentLimit = 10000.0;

static_assert(std::numeric_limits<long double>::max_exponent >= 16384,
              "linear marginalization needs an extended-range long double");

}  // namespace

FactorGraph::FactorGraph(std::size_t sbs_count, std::size_t group_count,
                         const std::vector<std::vector<std::size_t>>& sbs_of_mu)
    : groups_(group_count), edges_of_sbs_(sbs_count)
{
    for (std::size_t j = 0; j < sbs_of_mu.size(); ++j) {
        if (sbs_of_mu[j].empty()) continue;
        const std::size_t f = sbs_of_factor_.size();
        mu_of_factor_.push_back(j);
        sbs_of_factor_.push_back(sbs_of_mu[j]);
        edge_begin_.push_back(edge_sbs_.size());
        for (std::size_t k : sbs_of_mu[j]) {
            if (k >= sbs_count) throw std::out_of_range("FactorGraph: SBS index out of range");
            edges_of_sbs_[k].push_back({f, edge_sbs_.size()});
            edge_sbs_.push_back(k);
            edge_factor_.push_back(f);
        }
    }
}

FactorGraph build_factor_graph(const DelayModel& model)
{
    return FactorGraph(model.sbs_count, model.group_count(), model.candidates);
}

LocalUtility::LocalUtility(std::vector<double> capacities, std::vector<double> group_probs, double file_size,
                           double mbs_rate)
    : capacity_(std::move(capacities)), probs_(std::move(group_probs)), file_size_(file_size), mbs_rate_(mbs_rate)
{
    if (!(mbs_rate_ > 0.0) || !(file_size_ > 0.0)) throw std::invalid_argument("LocalUtility: M and C0 must be positive");
    double c_max = mbs_rate_;
    for (double c : capacity_) c_max = std::max(c_max, c);
    span_ = file_size_ * (1.0 / mbs_rate_ - 1.0 / c_max);
    order_.resize(capacity_.size());
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::stable_sort(order_.begin(), order_.end(),
                     [&](std::size_t a, std::size_t b) { return capacity_[a] > capacity_[b]; });
}

double LocalUtility::operator()(std::span<const std::size_t> groups) const
{
    if (groups.size() != capacity_.size()) throw std::invalid_argument("LocalUtility: one group per neighbor required");
    double d = 0.0;
    for (std::size_t n = 0; n < probs_.size(); ++n) {
        double best = 0.0;
        for (std::size_t i = 0; i < groups.size(); ++i) {
            if (groups[i] == n) best = std::max(best, capacity_[i]);
        }
        d += probs_[n] * file_size_ / (best > 0.0 ? best : mbs_rate_);
    }
    return -d;
}

std::vector<LocalUtility> build_local_utilities(const FactorGraph& graph, const DelayModel& model)
{
    std::vector<LocalUtility> out;
    out.reserve(graph.factor_count());
    for (std::size_t f = 0; f < graph.factor_count(); ++f) {
        out.emplace_back(model.capacities.at(graph.mu_of_factor(f)), model.group_probs, model.file_size,
                         model.mbs_rate);
    }
    return out;
}

void check_enumeration(std::size_t group_count, std::size_t degree, double cap)
{
    if (degree == 0) return;
    const double size = std::pow(static_cast<double>(group_count), static_cast<double>(degree - 1));
    if (size > cap) {
        std::ostringstream msg;
        msg << "factor enumeration N^(d-1) = " << group_count << "^" << degree - 1 << " = " << size
            << " exceeds the cap " << cap;
        throw ResourceError(msg.str());
    }
}

bool normalize_log(std::span<double> values)
{
    double top = kNegInf;
    for (double v : values) top = std::max(top, v);
    if (!std::isfinite(top)) {
        const double u = -std::log(static_cast<double>(values.size()));
        std::fill(values.begin(), values.end(), u);
        return false;
    }
    double sum = 0.0;
    for (double v : values) sum += std::exp(v - top);
    const double shift = top + std::log(sum);
    for (double& v : values) v -= shift;
    return true;
}

namespace {

void check_shapes(const LocalUtility& utility, std::span<const std::span<const double>> in,
                  std::span<const std::span<double>> out)
{
    const std::size_t d = utility.degree();
    const std::size_t N = utility.group_count();
    if (in.size() != d || out.size() != d) throw std::invalid_argument("marginalize_factor: one message per neighbor");
    for (std::size_t i = 0; i < d; ++i) {
        if (in[i].size() != N || out[i].size() != N) throw std::invalid_argument("marginalize_factor: message length");
    }
}

// Depth-first enumeration in descending-capacity order. A slot only earns its
// gain factor r(n) when no faster slot already holds n, which is exactly
// exp(mu (F_j - F_mbs)).
struct LinearEnumerator {
    std::size_t N;
    const std::vector<std::size_t>& order;
    const std::vector<std::vector<long double>>& weight;  // incoming, scaled to max 1
    const std::vector<std::vector<long double>>& ratio;   // exp(mu gain)
    std::vector<int> covered;
    std::size_t target = 0;
    std::size_t fixed = 0;

    long double walk(std::size_t depth, long double acc)
    {
        if (depth == order.size()) return acc;
        const std::size_t s = order[depth];
        long double total = 0.0L;
        const std::size_t lo = s == target ? fixed : 0;
        const std::size_t hi = s == target ? fixed + 1 : N;
        for (std::size_t n = lo; n < hi; ++n) {
            long double w = s == target ? 1.0L : weight[s][n];
            if (w == 0.0) continue;
            if (covered[n] == 0) w *= ratio[s][n];
            ++covered[n];
            total += walk(depth + 1, acc * w);
            --covered[n];
        }
        return total;
    }
};

}  // namespace

bool marginalize_factor(const LocalUtility& utility, double mu, std::span<const std::span<const double>> incoming_log,
                        std::span<const std::span<double>> outgoing_log, double cap)
{
    check_shapes(utility, incoming_log, outgoing_log);
    const std::size_t d = utility.degree();
    const std::size_t N = utility.group_count();
    check_enumeration(N, d, cap);
    if (d == 0) return true;
    if (!(mu * utility.gain_span() < kLinearExponentLimit)) {
        return marginalize_factor_logspace(utility, mu, incoming_log, outgoing_log, cap);
    }

    std::vector<std::vector<long double>> weight(d, std::vector<long double>(N));
    std::vector<std::vector<long double>> ratio(d, std::vector<long double>(N));
    for (std::size_t i = 0; i < d; ++i) {
        double top = kNegInf;
        for (double v : incoming_log[i]) top = std::max(top, v);
        for (std::size_t n = 0; n < N; ++n) {
            weight[i][n] = std::isfinite(top) ? std::exp(static_cast<long double>(incoming_log[i][n] - top)) : 1.0L;
            ratio[i][n] = std::exp(static_cast<long double>(mu * utility.gain(i, n)));
        }
    }

    LinearEnumerator walker{N, utility.slots_by_capacity(), weight, ratio, std::vector<int>(N, 0)};
    bool ok = true;
    for (std::size_t k = 0; k < d; ++k) {
        walker.target = k;
        bool positive = false;
        bool overflow = false;
        for (std::size_t n = 0; n < N; ++n) {
            walker.fixed = n;
            const long double m = walker.walk(0, 1.0L);
            outgoing_log[k][n] = m > 0.0L ? static_cast<double>(std::log(m)) : kNegInf;
            positive = positive || m > 0.0L;
            overflow = overflow || !std::isfinite(m);
        }
        if (!positive || overflow) {
            // Out of range even in extended precision: redo this factor the slow way.
            return marginalize_factor_logspace(utility, mu, incoming_log, outgoing_log, cap);
        }
        ok = normalize_log(outgoing_log[k]) && ok;
    }
    return ok;
}

bool marginalize_factor_logspace(const LocalUtility& utility, double mu,
                                 std::span<const std::span<const double>> incoming_log,
                                 std::span<const std::span<double>> outgoing_log, double cap)
{
    check_shapes(utility, incoming_log, outgoing_log);
    const std::size_t d = utility.degree();
    const std::size_t N = utility.group_count();
    check_enumeration(N, d, cap);
    if (d == 0) return true;

    // Log-sum-exp accumulators per (slot, group): running max and scaled sum.
    std::vector<double> top(d * N, kNegInf);
    std::vector<double> acc(d * N, 0.0);
    auto add = [&](std::size_t idx, double v) {
        if (v == kNegInf) return;
        if (v > top[idx]) {
            acc[idx] = acc[idx] * std::exp(top[idx] - v) + 1.0;
            top[idx] = v;
        } else {
            acc[idx] += std::exp(v - top[idx]);
        }
    };

    std::vector<std::size_t> x(d, 0);
    for (;;) {
        const double f = mu * utility(x);
        double all = f;
        for (std::size_t h = 0; h < d; ++h) all += incoming_log[h][x[h]];
        for (std::size_t k = 0; k < d; ++k) {
            // Leave out neighbor k's own message.
            const double own = incoming_log[k][x[k]];
            double v;
            if (std::isfinite(all)) {
                v = all - own;
            } else {
                v = f;
                for (std::size_t h = 0; h < d; ++h) {
                    if (h != k) v += incoming_log[h][x[h]];
                }
            }
            add(k * N + x[k], v);
        }
        std::size_t i = 0;
        while (i < d && ++x[i] == N) x[i++] = 0;
        if (i == d) break;
    }

    bool ok = true;
    for (std::size_t k = 0; k < d; ++k) {
        for (std::size_t n = 0; n < N; ++n) {
            const std::size_t idx = k * N + n;
            outgoing_log[k][n] = top[idx] == kNegInf ? kNegInf : top[idx] + std::log(acc[idx]);
        }
        ok = normalize_log(outgoing_log[k]) && ok;
    }
    return ok;
}

}  // namespace hetcache
