#pragma once

#include <stdexcept>
#include <string>

namespace omnitile {

/// Scheme violates the ordering constraints on its cut latitudes.
class InvalidScheme : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// No feasible cut ordering exists for the requested (n, sigma).
class InfeasibleProblem : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Image or tile dimensions disagree with the plan or manifest describing them.
class GeometryMismatch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace omnitile
