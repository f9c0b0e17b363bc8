#pragma once

#include <stdexcept>
#include <string>

namespace shootcalc {

/// A caller broke an operation's precondition.
class ContractViolation : public std::invalid_argument {
public:
    explicit ContractViolation(const std::string& what) : std::invalid_argument(what) {}
};

/// The requested shoot target lies at or beyond the ball's total travel limit.
class UnreachableTarget : public std::runtime_error {
public:
    UnreachableTarget(double dist, double limit)
        : std::runtime_error("target unreachable: distance " + std::to_string(dist) +
                             " m >= travel limit " + std::to_string(limit) + " m"),
          distance(dist),
          travel_limit(limit) {}

    double distance;
    double travel_limit;
};

/// Malformed input file; message names the offending line.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& source, long line, const std::string& detail)
        : std::runtime_error(source + ":" + std::to_string(line) + ": " + detail),
          line_number(line) {}

    long line_number;
};

/// Input data is well-formed but unusable (empty dataset, degenerate regression, ...).
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace shootcalc
