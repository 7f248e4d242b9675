#ifndef CMRAD_COMMON_HPP
#define CMRAD_COMMON_HPP

#include <stdexcept>
#include <string>

namespace cmrad {

inline constexpr const char* kVersion = "0.1.0";

// Argument outside the documented domain of an operation.
struct domain_error : std::runtime_error {
    explicit domain_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A certified-rounding or residual check failed even after escalation.
struct precision_error : std::runtime_error {
    explicit precision_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Two internally computed quantities that must agree do not.
struct internal_error : std::runtime_error {
    explicit internal_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A search (integer relation, resolvent ordering, ...) found nothing at the
// current precision; the caller may escalate and retry.
struct not_found_error : std::runtime_error {
    explicit not_found_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Roots could not be partitioned into the required equal-gamma2 triples.
struct grouping_error : std::runtime_error {
    explicit grouping_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A heuristic assumption (e.g. an expected perfect square) failed; reported
// to the caller, not a bug.
struct assumption_error : std::runtime_error {
    explicit assumption_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace cmrad

#endif
