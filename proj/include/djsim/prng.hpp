#pragma once

#include <cstdint>

namespace djsim {

/// SplitMix64 (Vigna's public-domain mixer). This is the one and only random
/// number generator in the project: every histogram is a pure function of the
/// user-visible seed, bit-identical across platforms. Integer arithmetic only,
/// so no libm or FP-contraction variance can creep in.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ull;
        return mix(state_);
    }

    /// Uniform double in [0, 1) with 53 random mantissa bits.
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Finalizer; a bijective avalanche function on 64 bits.
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

/// Independent sub-stream `index` of a base stream. Used to give each shot of
/// a noise trajectory its own generator, so shots could be drawn in parallel
/// without changing any result.
inline SplitMix64 substream(std::uint64_t base, std::uint64_t index) {
    return SplitMix64(SplitMix64::mix(base ^ SplitMix64::mix(index + 0x9E3779B97F4A7C15ull)));
}

/// The three independent streams derived from one user seed. `outcome` drives
/// measurement sampling, `readout` the classical bit flips, `depolarizing` the
/// per-gate trajectory events. Keeping them separate means enabling one noise
/// knob never shifts the draws of another.
struct SampleStreams {
    std::uint64_t outcome;
    std::uint64_t readout;
    std::uint64_t depolarizing;
};

inline SampleStreams derive_streams(std::uint64_t seed) {
    SplitMix64 root(seed);
    SampleStreams s{};
    s.outcome = root.next();
    s.readout = root.next();
    s.depolarizing = root.next();
    return s;
}

}  // namespace djsim
