#pragma once

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "djsim/errors.hpp"
#include "djsim/gates.hpp"
#include "djsim/noise.hpp"
#include "djsim/prng.hpp"
#include "djsim/state_vector.hpp"

// OpenQASM 2.0 subset: version header, optional qelib1.inc include (ignored),
// qreg/creg declarations, the gates id x y z h s sdg ry rz cx with indexed
// operands, barrier, and terminal measurements. No gate definitions, no `if`,
// no `reset`. Angle expressions allow numeric literals and `pi` combined with
// * and /.
namespace djsim::qasm {

/// Register reference; no index means the whole register (measure/barrier only).
struct RegRef {
    std::string reg;
    std::optional<int> index;

    bool operator==(const RegRef&) const = default;
};

struct GateStmt {
    std::string name;  // lowercase qasm mnemonic
    std::vector<double> params;
    std::vector<RegRef> operands;

    bool operator==(const GateStmt&) const = default;
};

struct MeasureStmt {
    RegRef qubit;
    RegRef bit;

    bool operator==(const MeasureStmt&) const = default;
};

struct BarrierStmt {
    std::vector<RegRef> operands;

    bool operator==(const BarrierStmt&) const = default;
};

using Statement = std::variant<GateStmt, MeasureStmt, BarrierStmt>;

struct QasmProgram {
    std::string version = "2.0";
    bool include_qelib = false;
    std::vector<std::pair<std::string, int>> qregs;
    std::vector<std::pair<std::string, int>> cregs;
    std::vector<Statement> statements;

    bool operator==(const QasmProgram&) const = default;
};

struct Diagnostic {
    int line = 0;  // 1-based
    int col = 0;   // 1-based
    std::string message;
};

struct ParseResult {
    std::optional<QasmProgram> program;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return program.has_value(); }
};

namespace detail {

enum class Tok { Ident, Int, Real, Str, Sym, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    int line = 1;
    int col = 1;
};

inline void tokenize(std::string_view src, std::vector<Token>& out, std::vector<Diagnostic>& diags) {
    int line = 1, col = 1;
    std::size_t i = 0;
    auto bump = [&](char c) {
        if (c == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    };
    while (i < src.size()) {
        const char c = src[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            bump(c);
            ++i;
            continue;
        }
        if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
            while (i < src.size() && src[i] != '\n') {
                bump(src[i]);
                ++i;
            }
            continue;
        }
        Token t;
        t.line = line;
        t.col = col;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            t.kind = Tok::Ident;
            while (i < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_')) {
                t.text += src[i];
                bump(src[i]);
                ++i;
            }
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            t.kind = Tok::Int;
            bool bad_exponent = false;
            while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) {
                t.text += src[i];
                bump(src[i]);
                ++i;
            }
            if (i < src.size() && src[i] == '.') {
                t.kind = Tok::Real;
                t.text += src[i];
                bump(src[i]);
                ++i;
                while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) {
                    t.text += src[i];
                    bump(src[i]);
                    ++i;
                }
            }
            if (i < src.size() && (src[i] == 'e' || src[i] == 'E')) {
                t.kind = Tok::Real;
                t.text += src[i];
                bump(src[i]);
                ++i;
                if (i < src.size() && (src[i] == '+' || src[i] == '-')) {
                    t.text += src[i];
                    bump(src[i]);
                    ++i;
                }
                if (i >= src.size() || !std::isdigit(static_cast<unsigned char>(src[i]))) {
                    bad_exponent = true;
                }
                while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) {
                    t.text += src[i];
                    bump(src[i]);
                    ++i;
                }
            }
            if (bad_exponent) {
                diags.push_back({t.line, t.col, "malformed number '" + t.text + "'"});
                continue;
            }
        } else if (c == '"') {
            t.kind = Tok::Str;
            bump(c);
            ++i;
            bool closed = false;
            while (i < src.size()) {
                if (src[i] == '"') {
                    closed = true;
                    bump(src[i]);
                    ++i;
                    break;
                }
                if (src[i] == '\n') break;
                t.text += src[i];
                bump(src[i]);
                ++i;
            }
            if (!closed) {
                diags.push_back({t.line, t.col, "unterminated string"});
                continue;
            }
        } else if (c == '-' && i + 1 < src.size() && src[i + 1] == '>') {
            t.kind = Tok::Sym;
            t.text = "->";
            bump(src[i]);
            bump(src[i + 1]);
            i += 2;
        } else if (c == ';' || c == ',' || c == '[' || c == ']' || c == '(' || c == ')' ||
                   c == '*' || c == '/' || c == '-') {
            t.kind = Tok::Sym;
            t.text = c;
            bump(c);
            ++i;
        } else {
            diags.push_back({line, col, std::string("unexpected character '") + c + "'"});
            bump(c);
            ++i;
            continue;
        }
        out.push_back(std::move(t));
    }
    Token end;
    end.kind = Tok::End;
    end.line = line;
    end.col = col;
    out.push_back(std::move(end));
}

struct GateSpec {
    int arity;
    int params;
};

inline const std::map<std::string, GateSpec>& gate_table() {
    static const std::map<std::string, GateSpec> table = {
        {"id", {1, 0}}, {"x", {1, 0}},  {"y", {1, 0}},  {"z", {1, 0}},  {"h", {1, 0}},
        {"s", {1, 0}},  {"sdg", {1, 0}}, {"ry", {1, 1}}, {"rz", {1, 1}}, {"cx", {2, 0}},
    };
    return table;
}

class Parser {
public:
    explicit Parser(std::string_view src) { tokenize(src, tokens_, result_.diagnostics); }

    ParseResult run() {
        parse_header();
        while (peek().kind != Tok::End) {
            try {
                parse_item();
            } catch (const Recover&) {
                skip_past_semicolon();
            }
        }
        if (result_.diagnostics.empty()) result_.program = std::move(program_);
        return std::move(result_);
    }

private:
    struct Recover {};

    const Token& peek(std::size_t ahead = 0) const {
        const std::size_t k = pos_ + ahead;
        return k < tokens_.size() ? tokens_[k] : tokens_.back();
    }
    const Token& advance() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

    [[noreturn]] void fail(const Token& at, std::string message) {
        result_.diagnostics.push_back({at.line, at.col, std::move(message)});
        throw Recover{};
    }

    void skip_past_semicolon() {
        while (peek().kind != Tok::End) {
            const Token& t = advance();
            if (t.kind == Tok::Sym && t.text == ";") return;
        }
    }

    const Token& expect_sym(const char* sym) {
        const Token& t = peek();
        if (t.kind != Tok::Sym || t.text != sym) {
            fail(t, std::string("expected '") + sym + "'");
        }
        return advance();
    }

    int to_int(const Token& t) {
        try {
            return std::stoi(t.text);
        } catch (const std::exception&) {
            fail(t, "integer '" + t.text + "' out of range");
        }
    }

    double to_double(const Token& t) {
        try {
            return std::stod(t.text);
        } catch (const std::exception&) {
            fail(t, "number '" + t.text + "' out of range");
        }
    }

    void parse_header() {
        try {
            const Token& kw = peek();
            if (kw.kind != Tok::Ident || kw.text != "OPENQASM") {
                fail(kw, "file must start with 'OPENQASM 2.0;'");
            }
            advance();
            const Token& v = peek();
            if (v.kind != Tok::Real || v.text != "2.0") {
                fail(v, "unsupported OPENQASM version (only 2.0)");
            }
            advance();
            expect_sym(";");
            if (peek().kind == Tok::Ident && peek().text == "include") {
                advance();
                const Token& file = peek();
                if (file.kind != Tok::Str) fail(file, "expected include file string");
                if (file.text != "qelib1.inc") {
                    fail(file, "only include \"qelib1.inc\" is supported (and ignored)");
                }
                advance();
                expect_sym(";");
                program_.include_qelib = true;
            }
        } catch (const Recover&) {
            skip_past_semicolon();
        }
    }

    void parse_item() {
        const Token& t = peek();
        if (t.kind != Tok::Ident) fail(t, "expected a statement");
        if (t.text == "qreg" || t.text == "creg") {
            parse_reg_decl();
        } else if (t.text == "measure") {
            parse_measure();
        } else if (t.text == "barrier") {
            parse_barrier();
        } else if (t.text == "OPENQASM" || t.text == "include") {
            fail(t, "'" + t.text + "' is only allowed at the top of the file");
        } else {
            parse_gate();
        }
    }

    void parse_reg_decl() {
        const bool quantum = peek().text == "qreg";
        advance();
        const Token& name = peek();
        if (name.kind != Tok::Ident) fail(name, "expected register name");
        advance();
        expect_sym("[");
        const Token& size_tok = peek();
        if (size_tok.kind != Tok::Int) fail(size_tok, "expected register size");
        const int size = to_int(size_tok);
        advance();
        expect_sym("]");
        expect_sym(";");
        if (size < 1) fail(size_tok, "register size must be >= 1");
        if (qsizes_.count(name.text) || csizes_.count(name.text)) {
            fail(name, "register '" + name.text + "' already declared");
        }
        if (quantum) {
            qsizes_[name.text] = size;
            program_.qregs.emplace_back(name.text, size);
        } else {
            csizes_[name.text] = size;
            program_.cregs.emplace_back(name.text, size);
        }
    }

    /// name or name[index]
    std::pair<RegRef, Token> parse_ref() {
        const Token& name = peek();
        if (name.kind != Tok::Ident) fail(name, "expected register reference");
        advance();
        RegRef ref{name.text, std::nullopt};
        if (peek().kind == Tok::Sym && peek().text == "[") {
            advance();
            const Token& idx = peek();
            if (idx.kind != Tok::Int) fail(idx, "expected index");
            ref.index = to_int(idx);
            advance();
            expect_sym("]");
        }
        return {ref, name};
    }

    void check_qubit(const RegRef& ref, const Token& at, bool require_index) {
        const auto it = qsizes_.find(ref.reg);
        if (it == qsizes_.end()) {
            if (csizes_.count(ref.reg)) fail(at, "'" + ref.reg + "' is a classical register");
            fail(at, "undeclared register '" + ref.reg + "'");
        }
        if (!ref.index) {
            if (require_index) fail(at, "this subset requires indexed qubit operands like q[0]");
            return;
        }
        if (*ref.index < 0 || *ref.index >= it->second) {
            fail(at, "index " + std::to_string(*ref.index) + " out of range for '" + ref.reg +
                         "[" + std::to_string(it->second) + "]'");
        }
    }

    void check_bit(const RegRef& ref, const Token& at) {
        const auto it = csizes_.find(ref.reg);
        if (it == csizes_.end()) {
            if (qsizes_.count(ref.reg)) fail(at, "'" + ref.reg + "' is a quantum register");
            fail(at, "undeclared register '" + ref.reg + "'");
        }
        if (ref.index && (*ref.index < 0 || *ref.index >= it->second)) {
            fail(at, "index " + std::to_string(*ref.index) + " out of range for '" + ref.reg +
                         "[" + std::to_string(it->second) + "]'");
        }
    }

    void require_not_measured(const RegRef& qubit, const Token& at) {
        if (measured_.count({qubit.reg, *qubit.index})) {
            fail(at, "qubit " + qubit.reg + "[" + std::to_string(*qubit.index) +
                         "] was already measured; measurements must be terminal");
        }
    }

    double parse_angle_factor() {
        const Token& t = peek();
        if (t.kind == Tok::Ident && t.text == "pi") {
            advance();
            return std::numbers::pi;
        }
        if (t.kind == Tok::Int || t.kind == Tok::Real) {
            advance();
            return to_double(t);
        }
        fail(t, "expected a number or 'pi'");
    }

    double parse_angle() {
        double sign = 1.0;
        if (peek().kind == Tok::Sym && peek().text == "-") {
            advance();
            sign = -1.0;
        }
        double value = sign * parse_angle_factor();
        while (peek().kind == Tok::Sym && (peek().text == "*" || peek().text == "/")) {
            const bool mul = advance().text == "*";
            const double rhs = parse_angle_factor();
            value = mul ? value * rhs : value / rhs;
        }
        return value;
    }

    void parse_gate() {
        const Token& name = advance();
        const auto spec = gate_table().find(name.text);
        if (spec == gate_table().end()) {
            fail(name, "unknown gate '" + name.text + "'");
        }

        GateStmt stmt;
        stmt.name = name.text;
        if (peek().kind == Tok::Sym && peek().text == "(") {
            const Token& paren = advance();
            if (spec->second.params == 0) {
                fail(paren, "gate '" + name.text + "' takes no parameters");
            }
            stmt.params.push_back(parse_angle());
            while (peek().kind == Tok::Sym && peek().text == ",") {
                advance();
                stmt.params.push_back(parse_angle());
            }
            expect_sym(")");
        }
        if (static_cast<int>(stmt.params.size()) != spec->second.params) {
            fail(name, "gate '" + name.text + "' needs " + std::to_string(spec->second.params) +
                           " parameter(s), got " + std::to_string(stmt.params.size()));
        }

        std::vector<Token> operand_tokens;
        while (true) {
            auto [ref, at] = parse_ref();
            check_qubit(ref, at, /*require_index=*/true);
            stmt.operands.push_back(ref);
            operand_tokens.push_back(at);
            if (peek().kind == Tok::Sym && peek().text == ",") {
                advance();
                continue;
            }
            break;
        }
        expect_sym(";");

        if (static_cast<int>(stmt.operands.size()) != spec->second.arity) {
            fail(name, "gate '" + name.text + "' takes " + std::to_string(spec->second.arity) +
                           " operand(s), got " + std::to_string(stmt.operands.size()));
        }
        if (stmt.name == "cx" && stmt.operands[0] == stmt.operands[1]) {
            fail(operand_tokens[1], "cx control and target must be distinct");
        }
        for (std::size_t k = 0; k < stmt.operands.size(); ++k) {
            require_not_measured(stmt.operands[k], operand_tokens[k]);
        }
        program_.statements.emplace_back(std::move(stmt));
    }

    void parse_measure() {
        advance();
        auto [qref, qat] = parse_ref();
        check_qubit(qref, qat, /*require_index=*/false);
        const Token& arrow = peek();
        if (arrow.kind != Tok::Sym || arrow.text != "->") fail(arrow, "expected '->'");
        advance();
        auto [cref, cat] = parse_ref();
        check_bit(cref, cat);
        expect_sym(";");

        if (qref.index.has_value() != cref.index.has_value()) {
            fail(cat, "measure must be register -> register or qubit -> bit");
        }
        if (!qref.index && qsizes_[qref.reg] != csizes_[cref.reg]) {
            fail(cat, "register sizes differ: " + qref.reg + "[" +
                          std::to_string(qsizes_[qref.reg]) + "] -> " + cref.reg + "[" +
                          std::to_string(csizes_[cref.reg]) + "]");
        }

        // Record per-index effects now so later statements see them.
        const int span = qref.index ? 1 : qsizes_[qref.reg];
        for (int k = 0; k < span; ++k) {
            const int qi = qref.index ? *qref.index : k;
            const int ci = cref.index ? *cref.index : k;
            if (measured_.count({qref.reg, qi})) {
                fail(qat, "qubit " + qref.reg + "[" + std::to_string(qi) + "] measured twice");
            }
            if (!written_bits_.insert({cref.reg, ci}).second) {
                fail(cat, "classical bit " + cref.reg + "[" + std::to_string(ci) +
                              "] written twice");
            }
            measured_.insert({qref.reg, qi});
        }
        program_.statements.emplace_back(MeasureStmt{qref, cref});
    }

    void parse_barrier() {
        advance();
        BarrierStmt stmt;
        if (!(peek().kind == Tok::Sym && peek().text == ";")) {
            while (true) {
                auto [ref, at] = parse_ref();
                check_qubit(ref, at, /*require_index=*/false);
                stmt.operands.push_back(ref);
                if (peek().kind == Tok::Sym && peek().text == ",") {
                    advance();
                    continue;
                }
                break;
            }
        }
        expect_sym(";");
        program_.statements.emplace_back(std::move(stmt));
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    QasmProgram program_;
    ParseResult result_;
    std::map<std::string, int> qsizes_;
    std::map<std::string, int> csizes_;
    std::set<std::pair<std::string, int>> measured_;
    std::set<std::pair<std::string, int>> written_bits_;
};

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string ref_to_string(const RegRef& r) {
    return r.index ? r.reg + "[" + std::to_string(*r.index) + "]" : r.reg;
}

}  // namespace detail

inline ParseResult parse(std::string_view source) { return detail::Parser(source).run(); }

/// Canonical source text; parses back to a structurally identical program.
inline std::string to_source(const QasmProgram& p) {
    std::string out = "OPENQASM " + p.version + ";\n";
    if (p.include_qelib) out += "include \"qelib1.inc\";\n";
    for (const auto& [name, size] : p.qregs) {
        out += "qreg " + name + "[" + std::to_string(size) + "];\n";
    }
    for (const auto& [name, size] : p.cregs) {
        out += "creg " + name + "[" + std::to_string(size) + "];\n";
    }
    for (const Statement& stmt : p.statements) {
        if (const auto* g = std::get_if<GateStmt>(&stmt)) {
            out += g->name;
            if (!g->params.empty()) {
                out += "(";
                for (std::size_t k = 0; k < g->params.size(); ++k) {
                    if (k) out += ", ";
                    out += detail::format_double(g->params[k]);
                }
                out += ")";
            }
            out += " ";
            for (std::size_t k = 0; k < g->operands.size(); ++k) {
                if (k) out += ", ";
                out += detail::ref_to_string(g->operands[k]);
            }
            out += ";\n";
        } else if (const auto* m = std::get_if<MeasureStmt>(&stmt)) {
            out += "measure " + detail::ref_to_string(m->qubit) + " -> " +
                   detail::ref_to_string(m->bit) + ";\n";
        } else if (const auto* b = std::get_if<BarrierStmt>(&stmt)) {
            out += "barrier";
            for (std::size_t k = 0; k < b->operands.size(); ++k) {
                out += (k ? ", " : " ") + detail::ref_to_string(b->operands[k]);
            }
            out += ";\n";
        }
    }
    return out;
}

namespace detail {

struct Layout {
    int total_qubits = 0;
    int total_clbits = 0;
    std::map<std::string, int> qbase;
    std::map<std::string, int> cbase;
};

inline Layout layout_of(const QasmProgram& p) {
    Layout l;
    for (const auto& [name, size] : p.qregs) {
        l.qbase[name] = l.total_qubits;
        l.total_qubits += size;
    }
    for (const auto& [name, size] : p.cregs) {
        l.cbase[name] = l.total_clbits;
        l.total_clbits += size;
    }
    return l;
}

inline void apply_gate(StateVector& state, const GateStmt& g, const Layout& l) {
    const auto qubit = [&](const RegRef& r) { return l.qbase.at(r.reg) + *r.index; };
    if (g.name == "cx") {
        state.apply_controlled(gate(GateId::X), qubit(g.operands[0]), qubit(g.operands[1]));
        return;
    }
    GateId id = GateId::I;
    std::optional<double> param;
    if (g.name == "id") id = GateId::I;
    else if (g.name == "x") id = GateId::X;
    else if (g.name == "y") id = GateId::Y;
    else if (g.name == "z") id = GateId::Z;
    else if (g.name == "h") id = GateId::H;
    else if (g.name == "s") id = GateId::S;
    else if (g.name == "sdg") id = GateId::Sdg;
    else if (g.name == "ry") { id = GateId::Ry; param = g.params[0]; }
    else if (g.name == "rz") { id = GateId::Rz; param = g.params[0]; }
    else throw Error("unsupported gate '" + g.name + "'");
    state.apply_single(gate(id, param), qubit(g.operands[0]));
}

/// (qubit, clbit) pairs in statement order, whole-register forms expanded.
inline std::vector<std::pair<int, int>> measure_map(const QasmProgram& p, const Layout& l) {
    std::vector<std::pair<int, int>> pairs;
    for (const Statement& stmt : p.statements) {
        const auto* m = std::get_if<MeasureStmt>(&stmt);
        if (!m) continue;
        if (m->qubit.index) {
            pairs.emplace_back(l.qbase.at(m->qubit.reg) + *m->qubit.index,
                               l.cbase.at(m->bit.reg) + *m->bit.index);
        } else {
            int size = 0;
            for (const auto& [name, sz] : p.qregs) {
                if (name == m->qubit.reg) size = sz;
            }
            for (int k = 0; k < size; ++k) {
                pairs.emplace_back(l.qbase.at(m->qubit.reg) + k, l.cbase.at(m->bit.reg) + k);
            }
        }
    }
    return pairs;
}

inline std::uint64_t classical_word(std::uint64_t outcome,
                                    const std::vector<std::pair<int, int>>& measures) {
    std::uint64_t word = 0;
    for (const auto& [q, c] : measures) {
        if (outcome >> q & 1) word |= std::uint64_t{1} << c;
    }
    return word;
}

}  // namespace detail

/// Ideal full statevector after all gates, measurements ignored.
inline StateVector run_statevector(const QasmProgram& p) {
    const detail::Layout l = detail::layout_of(p);
    if (l.total_qubits < 1) throw Error("program declares no qubits");
    if (l.total_qubits > max_qubits()) {
        throw Error("program needs " + std::to_string(l.total_qubits) +
                    " qubits, cap is " + std::to_string(max_qubits()));
    }
    StateVector state(l.total_qubits);
    for (const Statement& stmt : p.statements) {
        if (const auto* g = std::get_if<GateStmt>(&stmt)) detail::apply_gate(state, *g, l);
    }
    return state;
}

/// Runs the program `shots` times. Histogram keys are the classical-register
/// contents, c[0] as the rightmost character. With a noise model, readout
/// bits flip independently and depolarizing events replace the state with a
/// uniformly random basis state per gate (a fresh trajectory per shot, each
/// on its own PRNG substream).
inline ShotHistogram execute(const QasmProgram& p, std::uint64_t shots, std::uint64_t seed,
                             const NoiseModel* noise = nullptr) {
    if (shots == 0) throw Error("shots must be >= 1");
    if (noise) noise->validate();
    const detail::Layout l = detail::layout_of(p);
    const auto measures = detail::measure_map(p, l);
    if (l.total_clbits < 1 || measures.empty()) {
        throw Error("program has no measurements; nothing to sample");
    }

    const SampleStreams streams = derive_streams(seed);
    SplitMix64 outcome_gen(streams.outcome);
    SplitMix64 flip_gen(streams.readout);
    const double flip_p = noise ? noise->readout_flip : 0.0;

    ShotHistogram hist;
    hist.shots = shots;
    hist.seed = seed;

    if (!noise || noise->depolarizing == 0.0) {
        const StateVector state = run_statevector(p);
        const djsim::detail::DistributionSampler sampler(state.probabilities());
        for (std::uint64_t s = 0; s < shots; ++s) {
            std::uint64_t word = detail::classical_word(sampler.draw(outcome_gen), measures);
            word = djsim::detail::flip_readout(word, l.total_clbits, flip_p, flip_gen);
            ++hist.counts[bitstring(word, l.total_clbits)];
        }
        return hist;
    }

    if (l.total_qubits > max_qubits()) {
        throw Error("program needs " + std::to_string(l.total_qubits) +
                    " qubits, cap is " + std::to_string(max_qubits()));
    }
    for (std::uint64_t s = 0; s < shots; ++s) {
        SplitMix64 traj = substream(streams.depolarizing, s);
        StateVector state(l.total_qubits);
        for (const Statement& stmt : p.statements) {
            const auto* g = std::get_if<GateStmt>(&stmt);
            if (!g) continue;
            detail::apply_gate(state, *g, l);
            if (traj.next_double() < noise->depolarizing) {
                state = StateVector::basis(l.total_qubits, traj.next() & (state.dim() - 1));
            }
        }
        const djsim::detail::DistributionSampler sampler(state.probabilities());
        std::uint64_t word = detail::classical_word(sampler.draw(outcome_gen), measures);
        word = djsim::detail::flip_readout(word, l.total_clbits, flip_p, flip_gen);
        ++hist.counts[bitstring(word, l.total_clbits)];
    }
    return hist;
}

}  // namespace djsim::qasm
