#pragma once

#include <cstdint>

namespace qjump {

// Counter-based stream generator in the splitmix64 family. Each trajectory
// gets its own stream keyed by (master_seed, stream_index), so ensembles are
// reproducible bit for bit no matter how trajectories are scheduled across
// threads.
class CounterRng {
public:
    CounterRng(std::uint64_t master_seed, std::uint64_t stream_index)
        : state_(mix(master_seed + 0x9E3779B97F4A7C15ULL * (stream_index + 1))) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

private:
    // SplitMix64 / Murmur3-style finalizer.
    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ULL;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t state_;
};

}  // namespace qjump
