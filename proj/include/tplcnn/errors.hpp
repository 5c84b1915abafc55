#pragma once

#include <stdexcept>
#include <string>

namespace tplcnn {

/// Scenario / parameter validation failures. Maps to CLI exit code 1.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// An operation was invoked outside its stated domain (e.g. a formula
/// that only applies with the pump off).
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

/// More than the allowed number of tunneling events inside one step or
/// cascade resolution. Signals runaway (nonphysical) parameters.
class CascadeOverflow : public std::runtime_error {
public:
    explicit CascadeOverflow(const std::string& msg, long cycle = -1)
        : std::runtime_error(msg), cycle_index(cycle) {}
    long cycle_index;
};

/// A lock classification was requested on a window with too few events.
class InsufficientData : public std::runtime_error {
public:
    explicit InsufficientData(const std::string& msg) : std::runtime_error(msg) {}
};

class IndexOutOfRange : public std::out_of_range {
public:
    explicit IndexOutOfRange(const std::string& msg) : std::out_of_range(msg) {}
};

class EmptyWindow : public std::runtime_error {
public:
    explicit EmptyWindow(const std::string& msg) : std::runtime_error(msg) {}
};

/// Centroid tracking found no cycle with any active cell.
class AllEmpty : public std::runtime_error {
public:
    explicit AllEmpty(const std::string& msg) : std::runtime_error(msg) {}
};

/// Edge scoring against an all-true or all-false mask.
class DegenerateMask : public std::runtime_error {
public:
    explicit DegenerateMask(const std::string& msg) : std::runtime_error(msg) {}
};

class NumericalBlowup : public std::runtime_error {
public:
    explicit NumericalBlowup(const std::string& msg) : std::runtime_error(msg) {}
};

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace tplcnn
