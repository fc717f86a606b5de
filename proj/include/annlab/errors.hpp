#pragma once

#include <stdexcept>
#include <string>

namespace annlab {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad inputs: point outside a series' annulus of validity, malformed grid,
// inconsistent scenario config.
struct DomainError : Error {
    using Error::Error;
};

// Two-radius coefficient recovery disagreed, or the recovered window cannot
// reproduce the samples.  Signals an essential singularity or an undersized
// index window / sample count.
struct NonMeromorphicSuspected : Error {
    double score;
    NonMeromorphicSuspected(const std::string& msg, double s) : Error(msg), score(s) {}
};

// Grid too coarse to separate the structures being counted.
struct ResolutionError : Error {
    using Error::Error;
};

// An arc reached partway down the radius schedule and then terminated at a
// crossing node, so its continuation toward the inner boundary is ambiguous.
struct UndeterminedEnd : Error {
    int arc_id;
    UndeterminedEnd(const std::string& msg, int id) : Error(msg), arc_id(id) {}
};

// Iteration or refinement failed to reach its tolerance.
struct NumericalNonconvergence : Error {
    double residual;
    NumericalNonconvergence(const std::string& msg, double r) : Error(msg), residual(r) {}
};

// Conformal factor of an immersion vanished at a mesh vertex.
struct DegenerateMetric : Error {
    using Error::Error;
};

// Total phase increment around a circle did not land near an integer multiple
// of 2*pi.
struct WindingUnresolved : Error {
    double residual;
    WindingUnresolved(const std::string& msg, double r) : Error(msg), residual(r) {}
};

// Phase unwrapping produced inconsistent branches between sample circles.
struct BranchError : Error {
    using Error::Error;
};

// A height-style coordinate would be multivalued: its one-form carries a
// forbidden period around the core circle.
struct SlicePeriodError : Error {
    double period;
    SlicePeriodError(const std::string& msg, double p) : Error(msg), period(p) {}
};

// Requested resolution/window cannot represent the requested quantity at all
// (as opposed to merely being too coarse).
struct InsufficientResolution : Error {
    using Error::Error;
};

}  // namespace annlab
