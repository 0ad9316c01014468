#pragma once

#include <stdexcept>
#include <string>

namespace hcgibbs {

/// Argument outside the mathematical domain of an operation (j = 0, k < 2, Λ <= 0, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A series that was expected to converge failed to close its tail bound.
class DivergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Root finding or scanning did not produce the count/accuracy that theory guarantees.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, std::string trace = {})
        : std::runtime_error(what), trace_(std::move(trace)) {}

    const std::string& trace() const noexcept { return trace_; }

private:
    std::string trace_;
};

/// Truncation level too small for the requested tail tolerance.
class TruncationError : public std::runtime_error {
public:
    TruncationError(const std::string& what, long minimal_truncation)
        : std::runtime_error(what), minimal_(minimal_truncation) {}

    long minimal_truncation() const noexcept { return minimal_; }

private:
    long minimal_;
};

}  // namespace hcgibbs
