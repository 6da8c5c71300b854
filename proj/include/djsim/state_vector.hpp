#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "djsim/errors.hpp"
#include "djsim/gates.hpp"
#include "djsim/prng.hpp"

namespace djsim {

inline constexpr int kDefaultMaxQubits = 24;  // 2^24 amplitudes ~ 256 MiB
inline constexpr double kNormTolerance = 1e-10;
inline constexpr double kGateUnitarityTolerance = 1e-10;

/// Qubit-count ceiling; DJSIM_MAX_QUBITS overrides the default of 24.
inline int max_qubits() {
    if (const char* env = std::getenv("DJSIM_MAX_QUBITS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1) return static_cast<int>(v);
        throw Error(std::string("invalid DJSIM_MAX_QUBITS value: ") + env);
    }
    return kDefaultMaxQubits;
}

/// Dense statevector over n qubits. Qubit 0 occupies the least-significant
/// bit of the basis index. Gates mutate the amplitude array in place through
/// bit-masked index pairs; the norm is re-checked after every operation and a
/// violation is a hard error, never a silent renormalization.
class StateVector {
public:
    /// |00...0>.
    explicit StateVector(int num_qubits) : n_(num_qubits) {
        const int cap = max_qubits();
        if (num_qubits < 1 || num_qubits > cap) {
            throw Error("num_qubits must be in [1, " + std::to_string(cap) + "], got " +
                        std::to_string(num_qubits));
        }
        amp_.assign(std::size_t{1} << n_, Complex{0.0, 0.0});
        amp_[0] = Complex{1.0, 0.0};
    }

    /// Adopts an explicit amplitude vector; must have length 2^num_qubits and
    /// unit norm within tolerance.
    StateVector(int num_qubits, std::vector<Complex> amplitudes)
        : n_(num_qubits), amp_(std::move(amplitudes)) {
        const int cap = max_qubits();
        if (num_qubits < 1 || num_qubits > cap) {
            throw Error("num_qubits must be in [1, " + std::to_string(cap) + "], got " +
                        std::to_string(num_qubits));
        }
        if (amp_.size() != (std::size_t{1} << n_)) {
            throw Error("amplitude vector has length " + std::to_string(amp_.size()) +
                        ", expected " + std::to_string(std::size_t{1} << n_));
        }
        check_norm("construction");
    }

    static StateVector basis(int num_qubits, std::uint64_t index) {
        StateVector s(num_qubits);
        if (index >= s.dim()) throw Error("basis index out of range");
        s.amp_[0] = Complex{0.0, 0.0};
        s.amp_[index] = Complex{1.0, 0.0};
        return s;
    }

    int num_qubits() const { return n_; }
    std::size_t dim() const { return amp_.size(); }
    Complex amplitude(std::size_t k) const { return amp_[k]; }
    std::span<const Complex> amplitudes() const { return amp_; }

    void apply_single(const GateMatrix& g, int target) {
        require_single_qubit_gate(g);
        require_in_range(target, "target");
        const Complex u00 = g.at(0, 0), u01 = g.at(0, 1), u10 = g.at(1, 0), u11 = g.at(1, 1);
        const std::uint64_t mask = std::uint64_t{1} << target;
        for (std::uint64_t k = 0; k < amp_.size(); ++k) {
            if (k & mask) continue;
            const Complex a0 = amp_[k];
            const Complex a1 = amp_[k | mask];
            amp_[k] = u00 * a0 + u01 * a1;
            amp_[k | mask] = u10 * a0 + u11 * a1;
        }
        check_norm(g.name.c_str());
    }

    /// Applies `g` on `target` within the subspace where `control` is 1.
    void apply_controlled(const GateMatrix& g, int control, int target) {
        require_single_qubit_gate(g);
        require_in_range(control, "control");
        require_in_range(target, "target");
        if (control == target) throw Error("apply_controlled: control and target alias");
        const Complex u00 = g.at(0, 0), u01 = g.at(0, 1), u10 = g.at(1, 0), u11 = g.at(1, 1);
        const std::uint64_t cmask = std::uint64_t{1} << control;
        const std::uint64_t tmask = std::uint64_t{1} << target;
        for (std::uint64_t k = 0; k < amp_.size(); ++k) {
            if (!(k & cmask) || (k & tmask)) continue;
            const Complex a0 = amp_[k];
            const Complex a1 = amp_[k | tmask];
            amp_[k] = u00 * a0 + u01 * a1;
            amp_[k | tmask] = u10 * a0 + u11 * a1;
        }
        check_norm(g.name.c_str());
    }

    /// Relabels basis states: new[perm[k]] = old[k]. `perm` must be a bijection.
    void apply_permutation(std::span<const std::uint64_t> perm) {
        if (perm.size() != amp_.size()) {
            throw Error("apply_permutation: permutation length " + std::to_string(perm.size()) +
                        " does not match dimension " + std::to_string(amp_.size()));
        }
        std::vector<bool> seen(amp_.size(), false);
        for (const std::uint64_t image : perm) {
            if (image >= amp_.size() || seen[image]) {
                throw Error("apply_permutation: not a bijection on the basis");
            }
            seen[image] = true;
        }
        std::vector<Complex> next(amp_.size());
        for (std::uint64_t k = 0; k < amp_.size(); ++k) next[perm[k]] = amp_[k];
        amp_.swap(next);
    }

    /// Born-rule probabilities p[k] = |amp[k]|^2.
    std::vector<double> probabilities() const {
        std::vector<double> p(amp_.size());
        for (std::size_t k = 0; k < amp_.size(); ++k) p[k] = std::norm(amp_[k]);
        return p;
    }

    double norm_sq() const {
        // Kahan summation: a naive sum over 2^24 terms can lose more than the
        // 1e-10 budget the norm check enforces.
        double sum = 0.0, comp = 0.0;
        for (const Complex& a : amp_) {
            const double y = std::norm(a) - comp;
            const double t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        return sum;
    }

private:
    void require_single_qubit_gate(const GateMatrix& g) const {
        if (g.dim != 2) {
            throw Error("expected a 2x2 gate, got dim " + std::to_string(g.dim) + " (" + g.name + ")");
        }
        const double err = g.unitarity_error();
        if (!(err < kGateUnitarityTolerance)) {
            throw Error("gate " + g.name + " is not unitary (deviation " + std::to_string(err) + ")");
        }
    }

    void require_in_range(int q, const char* role) const {
        if (q < 0 || q >= n_) {
            throw Error(std::string(role) + " qubit " + std::to_string(q) + " out of range [0, " +
                        std::to_string(n_) + ")");
        }
    }

    void check_norm(const char* op) const {
        const double n2 = norm_sq();
        if (!(std::abs(n2 - 1.0) < kNormTolerance)) {
            throw Error(std::string("norm broken after ") + op + ": |psi|^2 = " + std::to_string(n2));
        }
    }

    int n_;
    std::vector<Complex> amp_;
};

/// Classical register content of basis index `k`, most-significant qubit
/// first: |q0,q1> = |1,0> over two qubits prints as "01".
inline std::string bitstring(std::uint64_t k, int nbits) {
    std::string s(static_cast<std::size_t>(nbits), '0');
    for (int b = 0; b < nbits; ++b) {
        if (k >> b & 1) s[static_cast<std::size_t>(nbits - 1 - b)] = '1';
    }
    return s;
}

struct ShotHistogram {
    std::map<std::string, std::uint64_t> counts;
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;
};

/// JSON form {"counts": {...}, "seed": n, "shots": n}; keys sort
/// lexicographically, so serialization is byte-stable.
inline nlohmann::json histogram_json(const ShotHistogram& h) {
    nlohmann::json j;
    j["shots"] = h.shots;
    j["seed"] = h.seed;
    j["counts"] = nlohmann::json::object();
    for (const auto& [key, count] : h.counts) j["counts"][key] = count;
    return j;
}

namespace detail {

/// Inverse-CDF sampler over an explicit probability vector. Draws come from
/// the given generator; ties and rounding residue both resolve toward the
/// last index with nonzero probability so impossible outcomes never appear.
class DistributionSampler {
public:
    explicit DistributionSampler(const std::vector<double>& probs) : cdf_(probs.size()) {
        double acc = 0.0;
        last_nonzero_ = 0;
        for (std::size_t k = 0; k < probs.size(); ++k) {
            acc += probs[k];
            cdf_[k] = acc;
            if (probs[k] > 0.0) last_nonzero_ = k;
        }
    }

    std::uint64_t draw(SplitMix64& gen) const {
        const double u = gen.next_double();
        const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
        std::size_t k = static_cast<std::size_t>(it - cdf_.begin());
        if (k > last_nonzero_) k = last_nonzero_;
        return k;
    }

private:
    std::vector<double> cdf_;
    std::size_t last_nonzero_;
};

}  // namespace detail

/// Samples `shots` outcomes from an explicit distribution over `nbits`-bit
/// strings. Shared by the ideal sampler, the noise model and the frontend.
inline ShotHistogram sample_distribution(const std::vector<double>& probs, int nbits,
                                         std::uint64_t shots, std::uint64_t seed) {
    if (shots == 0) throw Error("shots must be >= 1");
    const detail::DistributionSampler sampler(probs);
    SplitMix64 gen(derive_streams(seed).outcome);
    ShotHistogram hist;
    hist.shots = shots;
    hist.seed = seed;
    for (std::uint64_t s = 0; s < shots; ++s) {
        ++hist.counts[bitstring(sampler.draw(gen), nbits)];
    }
    return hist;
}

/// Measures every qubit `shots` times in the computational basis. Identical
/// seed gives an identical histogram, on any platform.
inline ShotHistogram sample_shots(const StateVector& state, std::uint64_t shots,
                                  std::uint64_t seed) {
    return sample_distribution(state.probabilities(), state.num_qubits(), shots, seed);
}

}  // namespace djsim
