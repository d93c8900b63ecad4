#pragma once

#include <stdexcept>
#include <string>

namespace dacml {

/// Invalid parameter set (maze geometry, thresholds, capacities, ...).
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string &what) : std::invalid_argument(what) {}
};

/// Caller broke a precondition (dimension mismatch, empty selection, ...).
class ContractError : public std::logic_error {
public:
    explicit ContractError(const std::string &what) : std::logic_error(what) {}
};

/// Environment used out of order, e.g. stepping an episode that already ended.
class ProtocolError : public std::logic_error {
public:
    explicit ProtocolError(const std::string &what) : std::logic_error(what) {}
};

/// Non-finite values during learning. Aborts the current run.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string &what) : std::runtime_error(what) {}
};

} // namespace dacml
