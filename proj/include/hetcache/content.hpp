#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace hetcache {

// Zipf file popularity p_f = f^-s / sum_q q^-s, f = 1..Q.
std::vector<double> zipf_probs(std::size_t files, double s);

// Sums contiguous blocks of `group_size` files into file-group probabilities.
std::vector<double> group_probs(std::span<const double> file_probs, std::size_t group_size);

struct PopularityModel {
    std::size_t files = 0;
    std::size_t group_size = 0;
    double s = 0.0;
    std::vector<double> file_probs;
    std::vector<double> group_probs;

    static PopularityModel zipf(std::size_t files, std::size_t group_size, double s);

    std::size_t group_count() const noexcept { return group_probs.size(); }
};

/// K x N binary file-placement matrix. Row k marks the file group cached by
/// SBS k. The type can hold invalid rows so that validate_placement() has
/// something to report; producers in this library always emit one-hot rows.
class PlacementMatrix {
public:
    PlacementMatrix() = default;
    PlacementMatrix(std::size_t sbs_count, std::size_t group_count);

    // One-hot matrix from a per-SBS group index.
    static PlacementMatrix from_groups(std::span<const std::size_t> group_of_sbs, std::size_t group_count);

    std::size_t sbs_count() const noexcept { return rows_; }
    std::size_t group_count() const noexcept { return cols_; }

    bool at(std::size_t k, std::size_t n) const { return entries_.at(k * cols_ + n) != 0; }
    void set(std::size_t k, std::size_t n, bool value) { entries_.at(k * cols_ + n) = value ? 1 : 0; }

    std::size_t row_sum(std::size_t k) const;
    // Cached group of SBS k; throws std::logic_error if row k is not one-hot.
    std::size_t group_of(std::size_t k) const;
    std::vector<std::size_t> groups() const;
    // Number of SBSs caching group n.
    std::size_t column_sum(std::size_t n) const;

    friend bool operator==(const PlacementMatrix&, const PlacementMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::uint8_t> entries_;
};

struct PlacementReport {
    bool ok = true;
    bool shape_ok = true;
    std::vector<std::size_t> bad_rows;
};

// Checks shape and the one-FG-per-SBS constraint. Never throws.
PlacementReport validate_placement(const PlacementMatrix& placement, std::size_t sbs_count, std::size_t group_count);

}  // namespace hetcache
