#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

namespace rekit {

/// SplitMix64 finalizer. Used to seed Rng and to derive per-stream seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Seed of an independent stream: hash(master_seed, index).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t state = master ^ (0xD1B54A32D192ED03ULL * (index + 1));
    splitmix64(state);
    return splitmix64(state);
}

/// xoshiro256** generator with explicit distributions so streams are
/// bit-identical across platforms and standard libraries.
///
/// Normals use the Box-Muller transform; both variates of a pair are used.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();
    /// Uniform in [0, 1) with 53 random bits.
    double uniform();
    /// Uniform integer in [0, bound), bound > 0, unbiased (rejection).
    std::uint64_t uniform_index(std::uint64_t bound);
    double normal();
    /// +1 or -1 with equal probability.
    double rademacher();

private:
    std::array<std::uint64_t, 4> s_{};
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace rekit
