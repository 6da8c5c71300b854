#pragma once

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "djsim/errors.hpp"

namespace djsim {

enum class FunctionClass { Constant, Balanced, Neither };

inline const char* to_string(FunctionClass c) {
    switch (c) {
        case FunctionClass::Constant: return "constant";
        case FunctionClass::Balanced: return "balanced";
        case FunctionClass::Neither: return "neither";
    }
    return "?";
}

/// Boolean function f: {0,1}^n -> {0,1} as its full truth table.
/// outputs[x] = f(x) with x decimal, x = sum x_i 2^i.
class TruthTable {
public:
    TruthTable(int n, std::vector<std::uint8_t> outputs) : n_(n), outputs_(std::move(outputs)) {
        if (n_ < 1) throw Error("truth table needs n >= 1");
        if (outputs_.size() != (std::size_t{1} << n_)) {
            throw Error("truth table for n=" + std::to_string(n_) + " needs " +
                        std::to_string(std::size_t{1} << n_) + " outputs, got " +
                        std::to_string(outputs_.size()));
        }
        for (const std::uint8_t b : outputs_) {
            if (b > 1) throw Error("truth table outputs must be 0 or 1");
        }
    }

    int n() const { return n_; }
    std::size_t domain_size() const { return outputs_.size(); }
    std::uint8_t operator()(std::uint64_t x) const { return outputs_[x]; }
    const std::vector<std::uint8_t>& outputs() const { return outputs_; }

private:
    int n_;
    std::vector<std::uint8_t> outputs_;
};

inline FunctionClass classify(const TruthTable& t) {
    std::size_t ones = 0;
    for (const std::uint8_t b : t.outputs()) ones += b;
    if (ones == 0 || ones == t.domain_size()) return FunctionClass::Constant;
    if (ones * 2 == t.domain_size()) return FunctionClass::Balanced;
    return FunctionClass::Neither;
}

/// One X on the ancilla, controlled on a subset of the input qubits (empty
/// set = unconditional X, one control = CNOT, more = multi-controlled X).
struct OracleGate {
    std::vector<int> controls;  // input-qubit indices, ascending
    int target = 0;             // always the ancilla, index n

    bool operator==(const OracleGate&) const = default;
};

/// Reversible embedding of f on n+1 qubits: basis index x + 2^n*y maps to
/// x + 2^n*(y XOR f(x)). The ancilla is qubit n, the highest, matching the
/// |x>|f(x)> register order. Always an involution.
struct OracleCircuit {
    int n = 0;
    std::vector<std::uint64_t> permutation;  // length 2^(n+1)
    std::optional<std::vector<OracleGate>> gate_list;
};

inline OracleCircuit synthesize_permutation(const TruthTable& t) {
    OracleCircuit oc;
    oc.n = t.n();
    const std::uint64_t half = std::uint64_t{1} << oc.n;
    oc.permutation.resize(half * 2);
    for (std::uint64_t y = 0; y <= 1; ++y) {
        for (std::uint64_t x = 0; x < half; ++x) {
            oc.permutation[x + half * y] = x + half * (y ^ t(x));
        }
    }
    return oc;
}

/// Permutation composed from a gate list, applied left to right.
inline std::vector<std::uint64_t> permutation_of_gates(int n, const std::vector<OracleGate>& gates) {
    const std::uint64_t dim = std::uint64_t{1} << (n + 1);
    std::vector<std::uint64_t> perm(dim);
    for (std::uint64_t k = 0; k < dim; ++k) perm[k] = k;
    for (const OracleGate& g : gates) {
        const std::uint64_t tmask = std::uint64_t{1} << g.target;
        for (std::uint64_t k = 0; k < dim; ++k) {
            bool fire = true;
            for (const int c : g.controls) {
                if (!(perm[k] >> c & 1)) {
                    fire = false;
                    break;
                }
            }
            if (fire) perm[k] ^= tmask;
        }
    }
    return perm;
}

/// Gate-level synthesis via the algebraic normal form of f: the XOR of
/// monomials becomes one (multi-)controlled X per monomial, all targeting the
/// ancilla, with only positive-polarity controls. A constant f reduces to a
/// bare X, f(x) = x_i to a single CNOT.
inline OracleCircuit synthesize_gates(const TruthTable& t) {
    const int n = t.n();
    const std::uint64_t half = std::uint64_t{1} << n;

    // Moebius transform over GF(2): anf[m] is the coefficient of monomial m.
    std::vector<std::uint8_t> anf = t.outputs();
    for (int bit = 0; bit < n; ++bit) {
        for (std::uint64_t x = 0; x < half; ++x) {
            if (x >> bit & 1) anf[x] ^= anf[x ^ (std::uint64_t{1} << bit)];
        }
    }

    std::vector<OracleGate> gates;
    for (std::uint64_t m = 0; m < half; ++m) {
        if (!anf[m]) continue;
        OracleGate g;
        g.target = n;
        for (int bit = 0; bit < n; ++bit) {
            if (m >> bit & 1) g.controls.push_back(bit);
        }
        gates.push_back(std::move(g));
    }

    OracleCircuit oc;
    oc.n = n;
    oc.gate_list = gates;
    oc.permutation = permutation_of_gates(n, gates);
    return oc;
}

/// Truth-table file format: optional '#' comment lines, a "n=<int>" header,
/// then exactly 2^n lines "<n-bit binary input> <bit>" with inputs ascending.
inline TruthTable parse_truth_table(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    int n = -1;
    std::vector<std::uint8_t> outputs;
    std::uint64_t expect = 0;

    auto strip = [](std::string s) {
        while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.pop_back();
        std::size_t i = 0;
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
        return s.substr(i);
    };

    while (std::getline(in, line)) {
        ++lineno;
        const std::string body = strip(line);
        if (body.empty() || body[0] == '#') continue;

        if (n < 0) {
            if (body.rfind("n=", 0) != 0) throw ParseError(lineno, 1, "expected header 'n=<int>'");
            std::size_t pos = 0;
            int value = 0;
            try {
                value = std::stoi(body.substr(2), &pos);
            } catch (const std::exception&) {
                throw ParseError(lineno, 3, "invalid qubit count in header");
            }
            if (pos + 2 != body.size() || value < 1) {
                throw ParseError(lineno, 3, "invalid qubit count in header");
            }
            n = value;
            outputs.assign(std::size_t{1} << n, 0);
            continue;
        }

        if (expect >= outputs.size()) {
            throw ParseError(lineno, 1, "extra line; table already has 2^n entries");
        }

        const std::size_t sep = body.find(' ');
        if (sep == std::string::npos) throw ParseError(lineno, 1, "expected '<input bits> <output bit>'");
        const std::string input = body.substr(0, sep);
        const std::string output = strip(body.substr(sep + 1));

        if (input.size() != static_cast<std::size_t>(n)) {
            throw ParseError(lineno, 1, "input must have exactly " + std::to_string(n) + " bits");
        }
        std::uint64_t x = 0;
        for (std::size_t i = 0; i < input.size(); ++i) {
            const char ch = input[i];
            if (ch != '0' && ch != '1') {
                throw ParseError(lineno, static_cast<int>(i) + 1, "input bits must be 0 or 1");
            }
            // the leftmost character is the most significant bit x_{n-1}
            x = (x << 1) | static_cast<std::uint64_t>(ch - '0');
        }
        if (x != expect) {
            if (x < expect) throw ParseError(lineno, 1, "duplicate or out-of-order input");
            throw ParseError(lineno, 1, "inputs must ascend; expected " +
                                            std::to_string(expect) + " next");
        }
        if (output.size() != 1 || (output[0] != '0' && output[0] != '1')) {
            throw ParseError(lineno, static_cast<int>(sep) + 2, "output must be a single bit");
        }
        outputs[x] = static_cast<std::uint8_t>(output[0] - '0');
        ++expect;
    }

    if (n < 0) throw ParseError(lineno + 1, 1, "missing 'n=<int>' header");
    if (expect != outputs.size()) {
        throw ParseError(lineno + 1, 1,
                         "table has " + std::to_string(expect) + " of " +
                             std::to_string(outputs.size()) + " required entries");
    }
    return TruthTable(n, std::move(outputs));
}

}  // namespace djsim
