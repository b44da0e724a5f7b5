#pragma once

#include <stdexcept>
#include <string>

namespace penrose {

/// A pentagrid with three (or more) lines through one point; the dual
/// construction is not defined for it and callers are expected to resample.
struct SingularGridError : std::runtime_error {
    explicit SingularGridError(const std::string& what) : std::runtime_error(what) {}
};

/// Strip index queried exactly on a grid line without a side hint.
struct OnGridLineError : std::runtime_error {
    explicit OnGridLineError(const std::string& what) : std::runtime_error(what) {}
};

/// No tile of the patch lies on the requested pentagrid line.
struct EmptyRibbonError : std::runtime_error {
    explicit EmptyRibbonError(const std::string& what) : std::runtime_error(what) {}
};

/// Tile key not present in the ribbon.
struct NotOnRibbonError : std::runtime_error {
    explicit NotOnRibbonError(const std::string& what) : std::runtime_error(what) {}
};

/// Vertex not reachable from the origin; indicates patch corruption.
struct UnreachableError : std::runtime_error {
    explicit UnreachableError(const std::string& what) : std::runtime_error(what) {}
};

/// Iterative solver exceeded its iteration cap before reaching tolerance.
struct NoConvergenceError : std::runtime_error {
    explicit NoConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

/// Random walk stepped into the boundary margin; the run is invalid and the
/// caller must enlarge the patch.
struct BoundaryHitError : std::runtime_error {
    explicit BoundaryHitError(const std::string& what) : std::runtime_error(what) {}
};

/// Corrected path touched vertices without trustworthy corrector values.
struct MarginViolationError : std::runtime_error {
    explicit MarginViolationError(const std::string& what) : std::runtime_error(what) {}
};

/// Walk shorter than the requested scaling window.
struct PathTooShortError : std::runtime_error {
    explicit PathTooShortError(const std::string& what) : std::runtime_error(what) {}
};

/// Requested range exceeds the safe interior of the patch.
struct OutOfRangeError : std::runtime_error {
    explicit OutOfRangeError(const std::string& what) : std::runtime_error(what) {}
};

/// Statistical routine invoked with fewer samples than its contract allows.
struct InsufficientSamplesError : std::runtime_error {
    explicit InsufficientSamplesError(const std::string& what) : std::runtime_error(what) {}
};

/// Patch construction produced no tiles (radius too small).
struct EmptyPatchError : std::runtime_error {
    explicit EmptyPatchError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace penrose
