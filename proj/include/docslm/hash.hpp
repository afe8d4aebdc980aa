// Copyright 2026 The docslm-lite Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <initializer_list>
#include <string_view>

namespace docslm {

/// SplitMix64 finalizer. Used as the deterministic source for mock weights and
/// mock encoder features.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Folds a sequence of keys into one 64-bit hash.
constexpr std::uint64_t hash_keys(std::initializer_list<std::uint64_t> keys) noexcept {
    std::uint64_t h = 0x6A09E667F3BCC909ULL;
    for (auto k : keys) {
        h = splitmix64(h ^ splitmix64(k));
    }
    return h;
}

/// FNV-1a over bytes.
constexpr std::uint64_t hash_bytes(std::string_view s) noexcept {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

/// Maps a hash to a double in [-1, 1].
constexpr double hash_to_unit(std::uint64_t h) noexcept {
    // 53 high bits -> [0, 1], then affine to [-1, 1].
    const double u = static_cast<double>(h >> 11) / static_cast<double>((1ULL << 53) - 1);
    return 2.0 * u - 1.0;
}

/// Sequential generator over splitmix64.
class SplitMix {
public:
    explicit constexpr SplitMix(std::uint64_t seed) noexcept : state_(seed) {}

    constexpr std::uint64_t next() noexcept {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [-1, 1].
    constexpr double next_signed() noexcept { return hash_to_unit(next()); }

private:
    std::uint64_t state_;
};

}  // namespace docslm
