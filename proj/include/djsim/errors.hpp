#pragma once

#include <stdexcept>
#include <string>

namespace djsim {

/// Base class for every error raised by the simulator.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised by the truth-table and QASM parsers; carries a 1-based source location.
class ParseError : public Error {
public:
    ParseError(int line, int col, const std::string& message)
        : Error(std::to_string(line) + ":" + std::to_string(col) + ": " + message),
          line(line),
          col(col) {}

    int line;
    int col;
};

/// Raised when a function handed to Deutsch-Jozsa is neither constant nor
/// balanced. Carries the measured all-zeros probability so callers can report
/// how badly the promise was broken.
class PromiseViolation : public Error {
public:
    explicit PromiseViolation(double all_zeros_probability)
        : Error("promise violated: P(all-zeros) = " +
                std::to_string(all_zeros_probability) +
                " is neither 0 nor 1"),
          all_zeros_probability(all_zeros_probability) {}

    double all_zeros_probability;
};

}  // namespace djsim
