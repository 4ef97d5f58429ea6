#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>

namespace avbench {

/// std::mt19937_64 has a standard-mandated output sequence; the helpers below
/// avoid std::uniform_int_distribution and std::shuffle, whose results are
/// library-specific, so seeded plans and splits are identical everywhere.
using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// FNV-1a over the bytes of `text`.
std::uint64_t fnv1a64(std::string_view text) noexcept;

/// Independent stream per (seed, key), e.g. one per sample_id.
Rng rng_for(std::uint64_t seed, std::string_view key);

/// Unbiased integer in [0, bound) by rejection; bound must be > 0.
std::uint64_t uniform_below(Rng& rng, std::uint64_t bound);

/// Unbiased integer in [lo, hi].
std::int64_t uniform_between(Rng& rng, std::int64_t lo, std::int64_t hi);

template <typename T>
void shuffle(std::span<T> items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(uniform_below(rng, i));
    using std::swap;
    swap(items[i - 1], items[j]);
  }
}

}  // namespace avbench
