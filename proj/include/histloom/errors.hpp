#pragma once

#include <stdexcept>
#include <string>

namespace histloom {

/// Violation of a documented precondition of a library operation
/// (overlapping partitions, non-consecutive intervals, ...).
class contract_error : public std::logic_error {
public:
    explicit contract_error(const std::string& what) : std::logic_error(what) {}
};

/// Thrown by finite sample sources when more draws are requested than exist.
class sample_exhausted : public std::runtime_error {
public:
    explicit sample_exhausted(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace histloom
