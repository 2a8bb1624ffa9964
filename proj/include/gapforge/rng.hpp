#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace gapforge {

// All randomness in the toolkit flows from one 64-bit seed.  Stages derive
// independent substreams by hashing a fixed label into the seed, so adding a
// stage never perturbs the draws of another.
inline std::uint64_t substream_seed(std::uint64_t seed, std::string_view label) {
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a
    for (char c : label) {
        h ^= static_cast<std::uint8_t>(c);
        h *= 1099511628211ull;
    }
    return seed ^ h;
}

inline std::mt19937_64 make_rng(std::uint64_t seed, std::string_view label) {
    return std::mt19937_64(substream_seed(seed, label));
}

}  // namespace gapforge
