#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace fastrcs {

/// SplitMix64 finalizer; used to derive independent substream seeds.
constexpr std::uint64_t mix64(std::uint64_t z)
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed of substream `stream` of the master seed `seed`.
constexpr std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream)
{
    return mix64(mix64(seed) ^ mix64(stream + 0x632be59bd9b4e019ULL));
}

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream)
{
    return Rng(substream_seed(seed, stream));
}

/// `count` distinct entries of `pool`, uniformly without replacement.
template <typename T>
std::vector<T> sample_without_replacement(const std::vector<T>& pool, std::size_t count, Rng& rng)
{
    std::vector<T> out;
    out.reserve(count);
    std::vector<std::size_t> picked;
    picked.reserve(count);
    // Floyd's algorithm: exactly `count` draws, no rejection loop.
    const std::size_t n = pool.size();
    for (std::size_t j = n - count; j < n; ++j) {
        std::uniform_int_distribution<std::size_t> dist(0, j);
        std::size_t t = dist(rng);
        bool seen = false;
        for (std::size_t s : picked)
            if (s == t) {
                seen = true;
                break;
            }
        picked.push_back(seen ? j : t);
    }
    for (std::size_t s : picked)
        out.push_back(pool[s]);
    return out;
}

} // namespace fastrcs
