#pragma once

#include <stdexcept>
#include <string>

namespace polyvem {

/// Base class for all solver errors. `exit_code` follows the CLI contract:
/// 2 = input/validation problem, 3 = solver failure.
class Error : public std::runtime_error {
public:
    Error(std::string msg, int exit_code = 2)
        : std::runtime_error(std::move(msg)), exit_code_(exit_code) {}
    int exit_code() const noexcept { return exit_code_; }

private:
    int exit_code_;
};

struct DegenerateElement : Error {
    explicit DegenerateElement(const std::string& msg) : Error("degenerate element: " + msg) {}
};

struct OrientationError : Error {
    explicit OrientationError(const std::string& msg) : Error("orientation error: " + msg) {}
};

struct NonClosedSurface : Error {
    explicit NonClosedSurface(const std::string& msg) : Error("non-closed surface: " + msg) {}
};

struct FaceTooSmall : Error {
    explicit FaceTooSmall(const std::string& msg) : Error("face too small: " + msg) {}
};

struct DegenerateTriangle : Error {
    explicit DegenerateTriangle(const std::string& msg) : Error("degenerate triangle: " + msg) {}
};

struct SubdivisionFailed : Error {
    explicit SubdivisionFailed(const std::string& msg) : Error("subdivision failed: " + msg) {}
};

struct DuplicateSeeds : Error {
    explicit DuplicateSeeds(const std::string& msg) : Error("duplicate seeds: " + msg) {}
};

struct ParseError : Error {
    explicit ParseError(const std::string& msg) : Error("parse error: " + msg) {}
};

struct ValidationError : Error {
    explicit ValidationError(const std::string& msg) : Error("validation error: " + msg) {}
};

struct IncompressibleLimit : Error {
    explicit IncompressibleLimit(const std::string& msg) : Error("incompressible limit: " + msg) {}
};

struct InvertedElement : Error {
    explicit InvertedElement(const std::string& msg) : Error("inverted element: " + msg, 3) {}
};

struct NewtonDiverged : Error {
    explicit NewtonDiverged(const std::string& msg) : Error("newton diverged: " + msg, 3) {}
};

struct SingularSystem : Error {
    explicit SingularSystem(const std::string& msg, int near_null_count = -1)
        : Error("singular system: " + msg, 3), near_null_count_(near_null_count) {}
    /// Number of near-null pivots seen by the factorization, -1 if unknown.
    int near_null_count() const noexcept { return near_null_count_; }

private:
    int near_null_count_;
};

struct FacetNotOnBoundary : Error {
    explicit FacetNotOnBoundary(const std::string& msg) : Error("facet not on boundary: " + msg) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error("config error: " + msg) {}
};

} // namespace polyvem
