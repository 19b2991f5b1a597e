#pragma once

#include <stdexcept>
#include <string>

namespace avta {

/// Solver exceeded its iteration cap. For a query known to lie inside the
/// hull this signals a bug, not a hard instance.
class IterationLimitError : public std::runtime_error {
public:
    explicit IterationLimitError(const std::string& what) : std::runtime_error(what) {}
};

/// A pivot step was requested at a point coinciding with the iterate;
/// indicates numerical corruption of the solver state.
class DegeneratePivotError : public std::runtime_error {
public:
    explicit DegeneratePivotError(const std::string& what) : std::runtime_error(what) {}
};

/// No valid scaling anchor could be found for a cone-feasibility query.
class AnchorError : public std::runtime_error {
public:
    explicit AnchorError(const std::string& what) : std::runtime_error(what) {}
};

/// K-driven vertex search reached the gamma floor without finding K vertices.
class GammaFloorError : public std::runtime_error {
public:
    explicit GammaFloorError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace avta
