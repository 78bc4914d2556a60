#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>

namespace tabclust::numkit {

/// Deterministic generator: xoshiro256** seeded through SplitMix64.
///
/// The integer stream is fully specified and identical on every platform.
/// Real-valued helpers are built on top of it without calling into the
/// implementation-defined <random> distributions.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t seed() const noexcept { return seed_; }

    std::uint64_t next_u64() noexcept;

    // Uniform in [0, 1) with 53 random bits.
    double uniform() noexcept;
    double uniform(double lo, double hi) noexcept;

    // Standard normal via the Marsaglia polar method.
    double normal() noexcept;

    // Unbiased integer in [0, n), n > 0.
    std::size_t uniform_index(std::size_t n) noexcept;

    // Fisher-Yates.
    template <typename T>
    void shuffle(std::span<T> items) noexcept {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::size_t j = uniform_index(i);
            std::swap(items[i - 1], items[j]);
        }
    }

    // Independent child generator seeded from this stream.
    Rng split() noexcept { return Rng(next_u64()); }

    // Order-free sub-seed for (base, stream), e.g. one stream per restart.
    static std::uint64_t derive(std::uint64_t base, std::uint64_t stream) noexcept;

private:
    std::uint64_t seed_;
    std::uint64_t s_[4];
    std::optional<double> spare_normal_;
};

std::uint64_t splitmix64(std::uint64_t& state) noexcept;

}  // namespace tabclust::numkit
