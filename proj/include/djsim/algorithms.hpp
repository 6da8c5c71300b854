#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "djsim/errors.hpp"
#include "djsim/gates.hpp"
#include "djsim/oracle.hpp"
#include "djsim/state_vector.hpp"

namespace djsim {

inline constexpr double kVerdictTolerance = 1e-10;

/// Result of one quantum run. `final_state` is the full pre-measurement
/// statevector over n+1 qubits (input register plus ancilla), kept for
/// inspection. `first_register_outcome` is the most probable input-register
/// reading, ties broken toward the smallest index; for every function under
/// the promise the distribution is concentrated enough that this is the
/// certain (constant case) or a certain-to-differ-from-zero (balanced case)
/// outcome.
struct DJResult {
    FunctionClass verdict = FunctionClass::Neither;
    std::string first_register_outcome;
    int oracle_queries = 0;
    StateVector final_state;
};

struct ClassicalResult {
    FunctionClass verdict = FunctionClass::Neither;
    int queries_used = 0;
    std::vector<std::uint64_t> query_sequence;
};

namespace detail {

/// Marginal distribution of the first register (qubits 0..n-1), ancilla
/// traced out.
inline std::vector<double> first_register_marginal(const StateVector& s, int n) {
    const std::uint64_t half = std::uint64_t{1} << n;
    std::vector<double> p(half, 0.0);
    for (std::uint64_t z = 0; z < half; ++z) {
        p[z] = std::norm(s.amplitude(z)) + std::norm(s.amplitude(z + half));
    }
    return p;
}

inline std::uint64_t most_probable(const std::vector<double>& p) {
    std::uint64_t best = 0;
    for (std::uint64_t z = 1; z < p.size(); ++z) {
        if (p[z] > p[best]) best = z;
    }
    return best;
}

inline FunctionClass verdict_from_all_zeros(double p0) {
    if (std::abs(p0 - 1.0) <= kVerdictTolerance) return FunctionClass::Constant;
    if (p0 <= kVerdictTolerance) return FunctionClass::Balanced;
    throw PromiseViolation(p0);
}

}  // namespace detail

/// Deutsch-Jozsa on an n-bit oracle: ancilla prepared |1> then H, Hadamard
/// wall on the input register, one oracle application, Hadamard wall again.
/// Constant iff all the first-register probability sits on |0...0>.
inline DJResult deutsch_jozsa(const OracleCircuit& oracle, int n) {
    if (oracle.n != n) {
        throw Error("oracle is on " + std::to_string(oracle.n) + " inputs, expected " +
                    std::to_string(n));
    }
    const GateMatrix x_gate = gate(GateId::X);
    const GateMatrix h_gate = gate(GateId::H);

    StateVector state(n + 1);
    state.apply_single(x_gate, n);  // hardware starts at |0>, so |1> takes an explicit X
    state.apply_single(h_gate, n);
    for (int q = 0; q < n; ++q) state.apply_single(h_gate, q);
    state.apply_permutation(oracle.permutation);
    for (int q = 0; q < n; ++q) state.apply_single(h_gate, q);

    const std::vector<double> marginal = detail::first_register_marginal(state, n);
    DJResult result{detail::verdict_from_all_zeros(marginal[0]),
                    bitstring(detail::most_probable(marginal), n), 1, std::move(state)};
    return result;
}

/// The n=1 special case, executed as its own two-qubit circuit:
/// |0>|1> -> HxH -> U_f -> H on the first register. The measured first
/// register reads f(0) XOR f(1): 0 for constant, 1 for balanced.
inline DJResult deutsch(const OracleCircuit& oracle) {
    if (oracle.n != 1) throw Error("deutsch runs 1-bit oracles; got n=" + std::to_string(oracle.n));
    const GateMatrix x_gate = gate(GateId::X);
    const GateMatrix h_gate = gate(GateId::H);

    StateVector state(2);
    state.apply_single(x_gate, 1);
    state.apply_single(h_gate, 0);
    state.apply_single(h_gate, 1);
    state.apply_permutation(oracle.permutation);
    state.apply_single(h_gate, 0);

    const std::vector<double> marginal = detail::first_register_marginal(state, 1);
    DJResult result{detail::verdict_from_all_zeros(marginal[0]),
                    bitstring(detail::most_probable(marginal), 1), 1, std::move(state)};
    return result;
}

/// Closed-form first-register amplitudes after the full pipeline:
/// c_z = sum_x (-1)^{x.z + f(x)} / 2^n with x.z the bitwise inner product.
/// Direct double summation, O(4^n); all values are real.
inline std::vector<double> final_amplitudes_closed_form(const TruthTable& t) {
    const int n = t.n();
    const std::uint64_t size = std::uint64_t{1} << n;
    const double scale = 1.0 / static_cast<double>(size);
    std::vector<double> c(size, 0.0);
    for (std::uint64_t z = 0; z < size; ++z) {
        double acc = 0.0;
        for (std::uint64_t x = 0; x < size; ++x) {
            const int parity = (std::popcount(x & z) + t(x)) & 1;
            acc += parity ? -1.0 : 1.0;
        }
        c[z] = acc * scale;
    }
    return c;
}

/// Deterministic classical baseline: evaluate f on inputs 0, 1, 2, ... and
/// stop at the first differing pair (balanced) or after 2^(n-1)+1 equal
/// answers (constant). Worst case is exactly 2^(n-1)+1 queries; n=1 needs 2.
inline ClassicalResult classical_baseline(const TruthTable& t) {
    const std::uint64_t stop_after = (std::uint64_t{1} << (t.n() - 1)) + 1;
    ClassicalResult result;
    std::uint8_t first = 0;
    for (std::uint64_t x = 0; x < stop_after; ++x) {
        const std::uint8_t fx = t(x);
        result.query_sequence.push_back(x);
        ++result.queries_used;
        if (x == 0) {
            first = fx;
        } else if (fx != first) {
            result.verdict = FunctionClass::Balanced;
            return result;
        }
    }
    result.verdict = FunctionClass::Constant;
    return result;
}

}  // namespace djsim
