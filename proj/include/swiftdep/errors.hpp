#pragma once

#include <stdexcept>
#include <string>

namespace swiftdep {

// Malformed input data (CoNLL-U files, model files, config files).
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
    ParseError(const std::string& msg, int line)
        : std::runtime_error(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
    int line() const { return line_; }

private:
    int line_ = -1;
};

// A caller violated an operation's precondition (e.g. applying an
// infeasible transition). These indicate bugs, not bad data.
class ContractError : public std::logic_error {
public:
    explicit ContractError(const std::string& msg) : std::logic_error(msg) {}
};

// The static oracle could not find a next transition. Only reachable
// when the gold tree is non-projective or the state was corrupted.
class OracleError : public std::runtime_error {
public:
    explicit OracleError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace swiftdep
