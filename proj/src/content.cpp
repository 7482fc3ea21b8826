#include "hetcache/content.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

namespace hetcache {

namespace {

// Neumaier compensated sum.
template <class Range>
double compensated_sum(const Range& values)
{
    double sum = 0.0;
    double carry = 0.0;
    for (double v : values) {
        const double t = sum + v;
        if (std::fabs(sum) >= std::fabs(v)) {
            carry += (sum - t) + v;
        } else {
            carry += (v - t) + sum;
        }
        sum = t;
    }
    return sum + carry;
}

}  // namespace

std::vector<double> zipf_probs(std::size_t files, double s)
{
    if (files == 0) throw std::invalid_argument("zipf_probs: need at least one file");
    if (!(s > 0.0 && s <= 1.0)) {
        std::clog << "warning: Zipf exponent " << s << " is outside (0, 1]\n";
    }
    std::vector<double> p(files);
    for (std::size_t f = 0; f < files; ++f) p[f] = std::pow(static_cast<double>(f + 1), -s);
    // Summing smallest-first plus compensation keeps the total at 1 within 1e-12.
    std::vector<double> reversed(p.rbegin(), p.rend());
    const double norm = compensated_sum(reversed);
    for (double& v : p) v /= norm;
    return p;
}

std::vector<double> group_probs(std::span<const double> file_probs, std::size_t group_size)
{
    if (group_size == 0 || file_probs.empty() || file_probs.size() % group_size != 0) {
        throw std::invalid_argument("group_probs: file count must be a positive multiple of the group size");
    }
    std::vector<double> groups(file_probs.size() / group_size);
    for (std::size_t n = 0; n < groups.size(); ++n) {
        groups[n] = compensated_sum(file_probs.subspan(n * group_size, group_size));
    }
    return groups;
}

PopularityModel PopularityModel::zipf(std::size_t files, std::size_t group_size, double s)
{
    PopularityModel model;
    model.files = files;
    model.group_size = group_size;
    model.s = s;
    model.file_probs = zipf_probs(files, s);
    model.group_probs = hetcache::group_probs(model.file_probs, group_size);
    return model;
}

PlacementMatrix::PlacementMatrix(std::size_t sbs_count, std::size_t group_count)
    : rows_(sbs_count), cols_(group_count), entries_(sbs_count * group_count, 0)
{
}

PlacementMatrix PlacementMatrix::from_groups(std::span<const std::size_t> group_of_sbs, std::size_t group_count)
{
    PlacementMatrix m(group_of_sbs.size(), group_count);
    for (std::size_t k = 0; k < group_of_sbs.size(); ++k) {
        if (group_of_sbs[k] >= group_count) throw std::out_of_range("PlacementMatrix: group index out of range");
        m.set(k, group_of_sbs[k], true);
    }
    return m;
}

std::size_t PlacementMatrix::row_sum(std::size_t k) const
{
    std::size_t sum = 0;
    for (std::size_t n = 0; n < cols_; ++n) sum += entries_.at(k * cols_ + n);
    return sum;
}

std::size_t PlacementMatrix::column_sum(std::size_t n) const
{
    std::size_t sum = 0;
    for (std::size_t k = 0; k < rows_; ++k) sum += entries_.at(k * cols_ + n);
    return sum;
}

std::size_t PlacementMatrix::group_of(std::size_t k) const
{
    if (row_sum(k) != 1) throw std::logic_error("PlacementMatrix: row is not one-hot");
    for (std::size_t n = 0; n < cols_; ++n) {
        if (entries_[k * cols_ + n]) return n;
    }
    throw std::logic_error("unreachable");
}

std::vector<std::size_t> PlacementMatrix::groups() const
{
    std::vector<std::size_t> g(rows_);
    for (std::size_t k = 0; k < rows_; ++k) g[k] = group_of(k);
    return g;
}

PlacementReport validate_placement(const PlacementMatrix& placement, std::size_t sbs_count, std::size_t group_count)
{
    PlacementReport report;
    if (placement.sbs_count() != sbs_count || placement.group_count() != group_count) {
        report.ok = false;
        report.shape_ok = false;
        return report;
    }
    for (std::size_t k = 0; k < sbs_count; ++k) {
        if (placement.row_sum(k) != 1) report.bad_rows.push_back(k);
    }
    report.ok = report.bad_rows.empty();
    return report;
}

}  // namespace hetcache
