#pragma once

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "djsim/algorithms.hpp"
#include "djsim/errors.hpp"
#include "djsim/noise.hpp"
#include "djsim/oracle.hpp"
#include "djsim/qasm.hpp"
#include "djsim/state_vector.hpp"

namespace djsim::cli {

// Exit codes: 0 success, 1 usage error, 2 parse/validation error, 3 promise
// violation.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitParse = 2;
inline constexpr int kExitPromise = 3;

namespace detail {

struct Options {
    std::string command;
    std::string file;
    std::uint64_t shots = 8000;  // the implemented circuits keep the 8000-shot convention
    std::uint64_t seed = 0;
    std::string noise_path;
    bool json = false;
    std::string out_path;
};

class UsageError : public Error {
public:
    using Error::Error;
};

inline void print_usage(std::ostream& os) {
    os << "usage: djsim <command> <file> [options]\n"
          "\n"
          "commands:\n"
          "  run <file.qasm>     execute an OpenQASM 2.0 circuit\n"
          "  dj <table.tt>       run Deutsch-Jozsa on a truth-table file\n"
          "  oracle <table.tt>   synthesize and print the oracle for a truth table\n"
          "\n"
          "options:\n"
          "  --shots <n>    shots to sample (default 8000)\n"
          "  --seed <n>     PRNG seed (default 0)\n"
          "  --noise <file> JSON noise config, run command only\n"
          "  --json         emit the report as JSON\n"
          "  --out <file>   also write the report to a file\n"
          "\n"
          "environment:\n"
          "  DJSIM_MAX_QUBITS   overrides the qubit cap (default 24)\n";
}

inline std::uint64_t parse_count(const std::string& flag, const std::string& text) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(text, &pos);
        if (pos != text.size()) throw UsageError(flag + " expects an integer, got '" + text + "'");
        return static_cast<std::uint64_t>(v);
    } catch (const UsageError&) {
        throw;
    } catch (const std::exception&) {
        throw UsageError(flag + " expects an integer, got '" + text + "'");
    }
}

inline Options parse_options(const std::vector<std::string>& args) {
    if (args.empty()) throw UsageError("missing command");
    Options opt;
    opt.command = args[0];
    if (opt.command != "run" && opt.command != "dj" && opt.command != "oracle") {
        throw UsageError("unknown command '" + opt.command + "'");
    }
    for (std::size_t i = 1; i < args.size(); ++i) {
        const std::string& a = args[i];
        auto value = [&](const char* flag) -> const std::string& {
            if (i + 1 >= args.size()) throw UsageError(std::string(flag) + " needs a value");
            return args[++i];
        };
        if (a == "--shots") {
            opt.shots = parse_count("--shots", value("--shots"));
            if (opt.shots == 0) throw UsageError("--shots must be >= 1");
        } else if (a == "--seed") {
            opt.seed = parse_count("--seed", value("--seed"));
        } else if (a == "--noise") {
            if (opt.command != "run") throw UsageError("--noise applies to the run command only");
            opt.noise_path = value("--noise");
        } else if (a == "--json") {
            opt.json = true;
        } else if (a == "--out") {
            opt.out_path = value("--out");
        } else if (a == "--help" || a == "-h") {
            throw UsageError("help");
        } else if (!a.empty() && a[0] == '-') {
            throw UsageError("unknown option '" + a + "'");
        } else if (opt.file.empty()) {
            opt.file = a;
        } else {
            throw UsageError("unexpected argument '" + a + "'");
        }
    }
    if (opt.file.empty()) throw UsageError("missing input file");
    return opt;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("file not found: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline std::string join(const std::vector<std::string>& args) {
    std::string s;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) s += ' ';
        s += args[i];
    }
    return s;
}

/// Count descending, ties by bitstring ascending.
inline std::vector<std::pair<std::string, std::uint64_t>> sorted_counts(const ShotHistogram& h) {
    std::vector<std::pair<std::string, std::uint64_t>> rows(h.counts.begin(), h.counts.end());
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    return rows;
}

inline void print_histogram(std::ostream& os, const ShotHistogram& h) {
    char pct[16];
    for (const auto& [key, count] : sorted_counts(h)) {
        std::snprintf(pct, sizeof pct, "%.1f",
                      100.0 * static_cast<double>(count) / static_cast<double>(h.shots));
        os << key << ": " << count << " (" << pct << "%)\n";
    }
}

inline std::string gate_line(const OracleGate& g) {
    std::string mnemonic;
    switch (g.controls.size()) {
        case 0: mnemonic = "x"; break;
        case 1: mnemonic = "cx"; break;
        case 2: mnemonic = "ccx"; break;
        default: mnemonic = "mcx"; break;
    }
    std::string line = mnemonic + " ";
    for (const int c : g.controls) line += "q[" + std::to_string(c) + "], ";
    line += "q[" + std::to_string(g.target) + "];";
    return line;
}

inline void emit(const Options& opt, const std::string& text, std::ostream& out) {
    out << text;
    if (!opt.out_path.empty()) {
        std::ofstream f(opt.out_path, std::ios::binary);
        if (!f) throw Error("cannot write " + opt.out_path);
        f << text;
    }
}

inline int cmd_run(const Options& opt, const std::vector<std::string>& args, std::ostream& out,
                   std::ostream& err) {
    const std::string source = read_file(opt.file);
    const qasm::ParseResult parsed = qasm::parse(source);
    if (!parsed.ok()) {
        for (const qasm::Diagnostic& d : parsed.diagnostics) {
            err << opt.file << ":" << d.line << ":" << d.col << ": error: " << d.message << "\n";
        }
        return kExitParse;
    }

    NoiseModel noise;
    const bool has_noise = !opt.noise_path.empty();
    if (has_noise) noise = parse_noise_config(read_file(opt.noise_path));

    const auto t0 = std::chrono::steady_clock::now();
    const ShotHistogram hist =
        qasm::execute(*parsed.program, opt.shots, opt.seed, has_noise ? &noise : nullptr);
    const double ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0).count();

    if (opt.json) {
        nlohmann::json report;
        report["schema"] = "djsim/1";
        report["command"] = join(args);
        report["shots"] = opt.shots;
        report["seed"] = opt.seed;
        report["histogram"] = histogram_json(hist);
        report["wall_time_ms"] = ms;
        emit(opt, report.dump(2) + "\n", out);
    } else {
        std::ostringstream text;
        text << "shots: " << opt.shots << "\nseed: " << opt.seed << "\n";
        print_histogram(text, hist);
        emit(opt, text.str(), out);
    }
    return kExitOk;
}

inline int cmd_dj(const Options& opt, const std::vector<std::string>& args, std::ostream& out,
                  std::ostream& err) {
    const TruthTable table = parse_truth_table(read_file(opt.file));
    const OracleCircuit oracle = synthesize_permutation(table);

    const auto t0 = std::chrono::steady_clock::now();
    DJResult result = deutsch_jozsa(oracle, table.n());
    const ClassicalResult classical = classical_baseline(table);
    const std::vector<double> marginal =
        djsim::detail::first_register_marginal(result.final_state, table.n());
    const ShotHistogram hist = sample_distribution(marginal, table.n(), opt.shots, opt.seed);
    const double ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0).count();

    (void)err;
    if (opt.json) {
        nlohmann::json report;
        report["schema"] = "djsim/1";
        report["command"] = join(args);
        report["shots"] = opt.shots;
        report["seed"] = opt.seed;
        report["verdict"] = to_string(result.verdict);
        report["outcome"] = result.first_register_outcome;
        report["oracle_queries"] = result.oracle_queries;
        report["classical_queries"] = classical.queries_used;
        report["histogram"] = histogram_json(hist);
        report["wall_time_ms"] = ms;
        emit(opt, report.dump(2) + "\n", out);
    } else {
        std::ostringstream text;
        text << "verdict: " << to_string(result.verdict) << "\n"
             << "outcome: " << result.first_register_outcome << "\n"
             << "oracle queries: " << result.oracle_queries << " (quantum), "
             << classical.queries_used << " (classical)\n"
             << "shots: " << opt.shots << "\nseed: " << opt.seed << "\n";
        print_histogram(text, hist);
        emit(opt, text.str(), out);
    }
    return kExitOk;
}

inline int cmd_oracle(const Options& opt, const std::vector<std::string>& args, std::ostream& out,
                      std::ostream& err) {
    const TruthTable table = parse_truth_table(read_file(opt.file));
    const OracleCircuit oracle = synthesize_gates(table);

    (void)err;
    if (opt.json) {
        nlohmann::json report;
        report["schema"] = "djsim/1";
        report["command"] = join(args);
        report["n"] = oracle.n;
        report["class"] = to_string(classify(table));
        report["permutation"] = oracle.permutation;
        report["gates"] = nlohmann::json::array();
        for (const OracleGate& g : *oracle.gate_list) report["gates"].push_back(gate_line(g));
        emit(opt, report.dump(2) + "\n", out);
    } else {
        std::ostringstream text;
        text << "n: " << oracle.n << "\nclass: " << to_string(classify(table)) << "\npermutation:";
        for (const std::uint64_t v : oracle.permutation) text << " " << v;
        text << "\n";
        for (const OracleGate& g : *oracle.gate_list) text << gate_line(g) << "\n";
        emit(opt, text.str(), out);
    }
    return kExitOk;
}

}  // namespace detail

/// Entry point behind the `djsim` binary; `args` excludes argv[0]. Writes the
/// report to `out`, diagnostics to `err`, and returns the process exit code.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    if (!args.empty() && (args[0] == "--help" || args[0] == "-h")) {
        detail::print_usage(out);
        return kExitOk;
    }
    detail::Options opt;
    try {
        opt = detail::parse_options(args);
    } catch (const detail::UsageError& e) {
        if (std::string(e.what()) == "help") {
            detail::print_usage(out);
            return kExitOk;
        }
        err << "error: " << e.what() << "\n";
        detail::print_usage(err);
        return kExitUsage;
    }

    try {
        if (opt.command == "run") return detail::cmd_run(opt, args, out, err);
        if (opt.command == "dj") return detail::cmd_dj(opt, args, out, err);
        return detail::cmd_oracle(opt, args, out, err);
    } catch (const PromiseViolation& e) {
        err << "error: " << e.what() << "\n";
        return kExitPromise;
    } catch (const ParseError& e) {
        err << opt.file << ":" << e.what() << "\n";
        return kExitParse;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitParse;
    }
}

}  // namespace djsim::cli
