#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gbm {

// Enumeration request exceeds the configured router cap.
class SizeLimitError : public std::length_error {
public:
    SizeLimitError(int n_routers, int cap, std::uint64_t count)
        : std::length_error("enumeration of " + std::to_string(n_routers) +
                            " routers exceeds cap " + std::to_string(cap) +
                            " (Catalan count " + std::to_string(count) + ")"),
          count_(count) {}

    std::uint64_t catalan_count() const noexcept { return count_; }

private:
    std::uint64_t count_;
};

class MalformedSequenceError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A caller broke an argument precondition (unsorted arms, probability out of range, ...).
class ContractViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Quantity is mathematically undefined for the given input (e.g. g2 of the vacuum).
class UndefinedValueError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace gbm
