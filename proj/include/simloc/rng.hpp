#pragma once

#include <cstdint>
#include <limits>

namespace simloc {

/// SplitMix64 finalizer; bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Small-state generator satisfying UniformRandomBitGenerator. A stream is fully determined by its
/// 64-bit key, so substreams can be derived from counters without any shared state.
class RandomStream {
public:
    using result_type = std::uint64_t;

    explicit RandomStream(std::uint64_t key = 0) : state_(key) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Child stream keyed by (this stream's key, index). Does not advance this stream.
    RandomStream substream(std::uint64_t index) const { return RandomStream(mix64(key_of(state_) ^ mix64(index + 1))); }

private:
    static std::uint64_t key_of(std::uint64_t s) { return mix64(s ^ 0xD1B54A32D192ED03ULL); }

    std::uint64_t state_;
};

/// Stream for trial `trial` of sweep point `point` under `master_seed`.
inline RandomStream trial_stream(std::uint64_t master_seed, std::uint64_t point, std::uint64_t trial) {
    return RandomStream(master_seed).substream(point).substream(trial);
}

}  // namespace simloc
