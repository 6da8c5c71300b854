#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "djsim/errors.hpp"
#include "djsim/prng.hpp"
#include "djsim/state_vector.hpp"

namespace djsim {

/// Phenomenological noise knobs. `readout_flip` flips each reported bit
/// independently; `depolarizing` replaces the state with a uniformly random
/// basis state with the given probability per gate application (trajectory
/// method, handled by the circuit executor). No claim is made that either
/// reproduces any particular device's physics.
struct NoiseModel {
    double readout_flip = 0.0;
    double depolarizing = 0.0;

    void validate() const {
        if (!(readout_flip >= 0.0 && readout_flip <= 1.0)) {
            throw Error("readout_flip must be in [0, 1]");
        }
        if (!(depolarizing >= 0.0 && depolarizing <= 1.0)) {
            throw Error("depolarizing must be in [0, 1]");
        }
    }

    bool is_zero() const { return readout_flip == 0.0 && depolarizing == 0.0; }
};

/// Config format: {"readout_flip": float, "depolarizing": float}. Both keys
/// optional (default 0), unknown keys rejected.
inline NoiseModel parse_noise_config(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("noise config: ") + e.what());
    }
    if (!j.is_object()) throw Error("noise config must be a JSON object");
    NoiseModel model;
    for (const auto& [key, value] : j.items()) {
        if (key == "readout_flip") {
            model.readout_flip = value.get<double>();
        } else if (key == "depolarizing") {
            model.depolarizing = value.get<double>();
        } else {
            throw Error("noise config: unknown key \"" + key + "\"");
        }
    }
    model.validate();
    return model;
}

namespace detail {

/// Flips each of the low `nbits` bits of `outcome` independently with
/// probability `p`. One draw per bit, always, so the stream position does not
/// depend on `p` and the flip pattern is symmetric under relabeling 0<->1.
inline std::uint64_t flip_readout(std::uint64_t outcome, int nbits, double p, SplitMix64& gen) {
    for (int b = 0; b < nbits; ++b) {
        if (gen.next_double() < p) outcome ^= std::uint64_t{1} << b;
    }
    return outcome;
}

}  // namespace detail

/// Ideal sampling followed by independent per-qubit readout flips. With a
/// zero model this is bit-identical to sample_shots under the same seed: both
/// draw outcomes from the same derived stream, and the flip stream is
/// independent of it.
inline ShotHistogram sample_with_noise(const StateVector& state, const NoiseModel& model,
                                       std::uint64_t shots, std::uint64_t seed) {
    model.validate();
    if (shots == 0) throw Error("shots must be >= 1");
    const int n = state.num_qubits();
    const detail::DistributionSampler sampler(state.probabilities());
    const SampleStreams streams = derive_streams(seed);
    SplitMix64 outcome_gen(streams.outcome);
    SplitMix64 flip_gen(streams.readout);

    ShotHistogram hist;
    hist.shots = shots;
    hist.seed = seed;
    for (std::uint64_t s = 0; s < shots; ++s) {
        std::uint64_t outcome = sampler.draw(outcome_gen);
        outcome = detail::flip_readout(outcome, n, model.readout_flip, flip_gen);
        ++hist.counts[bitstring(outcome, n)];
    }
    return hist;
}

}  // namespace djsim
