#pragma once

#include <array>
#include <cstdint>

namespace modunwrap {

/// xoshiro256++ generator seeded through SplitMix64.
///
/// Substreams are derived from (seed, index) so that independent trials get
/// independent, scheduling-invariant streams: substream(i) re-seeds from a
/// SplitMix64 hash of the base seed and the index.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    // Stream for trial/instance `index`, independent of call order.
    Rng substream(std::uint64_t index) const;

    std::uint64_t next_u64();

    // Uniform on [0, 1), 53 bits.
    double next_double();

    // Standard normal via Box-Muller; consumes two uniforms per pair.
    double next_normal();

private:
    std::array<std::uint64_t, 4> state_{};
    std::uint64_t base_seed_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace modunwrap
