#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace hetcache {

// SplitMix64 output function.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

// Maps 64 random bits to a double in (0, 1].
constexpr double unit_open_left(std::uint64_t bits) noexcept
{
    return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

// Exp(1) draw from 64 random bits by inversion.
inline double exponential_from_bits(std::uint64_t bits) noexcept
{
    return -std::log(unit_open_left(bits));
}

/// Counter-based random stream.
///
/// The i-th output of a stream is a pure function of (key, i), so a stream can
/// be sampled sequentially or indexed directly, and child streams derived with
/// substream() are independent of the order in which they are consumed. Every
/// trial, scheme and iteration in an experiment draws from its own substream of
/// the master seed, which makes results independent of worker count.
///
/// Satisfies UniformRandomBitGenerator.
class RandomStream {
public:
    using result_type = std::uint64_t;

    explicit constexpr RandomStream(std::uint64_t seed) noexcept : key_(mix64(seed ^ 0x6a09e667f3bcc909ULL)) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept { return at(counter_++); }

    // Output at a given counter position; does not advance the stream.
    constexpr result_type at(std::uint64_t index) const noexcept
    {
        return mix64(key_ + (index + 1) * kGoldenGamma);
    }

    double uniform() noexcept { return unit_open_left((*this)()); }
    double exponential() noexcept { return exponential_from_bits((*this)()); }

    // Independent child stream; the parent is left untouched.
    constexpr RandomStream substream(std::uint64_t id) const noexcept
    {
        RandomStream child(0);
        child.key_ = mix64(key_ ^ mix64(id * kGoldenGamma + 0x3c6ef372fe94f82bULL));
        return child;
    }

    constexpr std::uint64_t key() const noexcept { return key_; }
    constexpr std::uint64_t position() const noexcept { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

// Substream identifiers used by the experiment harness.
enum class StreamTag : std::uint64_t {
    sbs_positions = 1,
    mu_positions = 2,
    fading = 3,
    fprc_placement = 4,
    orc_placement = 5,
    hbp = 6,
};

inline RandomStream substream(const RandomStream& parent, StreamTag tag)
{
    return parent.substream(static_cast<std::uint64_t>(tag));
}

}  // namespace hetcache
