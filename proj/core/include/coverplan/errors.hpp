#pragma once

#include <stdexcept>
#include <string>

namespace coverplan {

// Bad caller-supplied input (empty mesh, unknown waypoint id, zero-volume box, ...).
struct InvalidInputError : std::runtime_error {
    explicit InvalidInputError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed mesh file; message carries the byte offset or line number.
struct MeshFormatError : std::runtime_error {
    explicit MeshFormatError(const std::string& msg) : std::runtime_error(msg) {}
};

// A plan references waypoints that do not exist in the grid it is paired with.
struct InvalidPlanError : InvalidInputError {
    explicit InvalidPlanError(const std::string& msg) : InvalidInputError(msg) {}
};

// The sampling planner could not reach the requested coverage fraction.
struct UnreachableCoverageError : std::runtime_error {
    UnreachableCoverageError(const std::string& msg, double best)
        : std::runtime_error(msg), best_fraction(best) {}
    double best_fraction{0.0};
};

// A persisted record has an unexpected schema_version.
struct SchemaMismatchError : std::runtime_error {
    explicit SchemaMismatchError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace coverplan
