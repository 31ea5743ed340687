#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace ellseg {

/// Independent generator stream for (seed, ids...), so per-item work can be
/// reordered or parallelized without changing results.
inline std::mt19937_64 derive_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> ids) {
    std::vector<std::uint32_t> words{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    for (std::uint64_t id : ids) {
        words.push_back(static_cast<std::uint32_t>(id));
        words.push_back(static_cast<std::uint32_t>(id >> 32));
    }
    std::seed_seq seq(words.begin(), words.end());
    return std::mt19937_64(seq);
}

}  // namespace ellseg
