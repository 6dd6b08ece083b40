#pragma once

#include <stdexcept>
#include <string>

namespace ressize {

// Scenario/config problems. Messages carry the offending field path.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// File parsing: malformed content, with the line number where known.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Time-series cadence violations (duplicate or non-uniform timestamps).
struct GapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Value outside the unit's admissible range (e.g. per-unit > 1).
struct RangeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Argument outside a function's mathematical domain.
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DivisionByZero : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Vector length does not match the expected problem dimension.
struct DimensionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Two independent computations of the same quantity disagree.
struct ConsistencyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A variable is unbounded in both directions and appears nowhere.
struct UnboundedDomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bus allocation weights do not sum to one.
struct WeightError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Two sweep reports have different alpha grids.
struct GridMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Remote fetch failures. Never fatal to offline workflows.
struct NetworkError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AuthError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct QuotaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Solver gave up (iteration limit or numerical breakdown).
struct SolverFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace ressize
