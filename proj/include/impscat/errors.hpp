#pragma once

#include <stdexcept>
#include <string>

namespace impscat {

// Base class for all toolkit errors. The CLI maps these to exit status 2;
// everything derived from here is a numerical/domain failure, not a usage error.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Point outside the surface's planar domain, or on the shadowed side.
class DomainError : public Error {
  public:
    using Error::Error;
};

// Gaussian curvature <= 0 where strict convexity is required.
class ConvexityViolation : public Error {
  public:
    using Error::Error;
};

// Direction within the guard cap around the incident direction.
class ForwardSingularityError : public Error {
  public:
    using Error::Error;
};

// Iterative solve did not reach tolerance.
class ConvergenceError : public Error {
  public:
    using Error::Error;
};

// Spherical angles undefined (gradient vanishes at the pole).
class DegenerateCoordinatesError : public Error {
  public:
    using Error::Error;
};

// Special-function overflow; carries the first order that failed.
class RangeError : public Error {
  public:
    RangeError(const std::string& msg, int order) : Error(msg), failing_order(order) {}
    int failing_order;
};

// Quadrature spec too coarse for the requested computation.
class UnderResolvedError : public Error {
  public:
    UnderResolvedError(const std::string& msg, int required) : Error(msg), required_nodes(required) {}
    int required_nodes;
};

// Scattering matrix gained energy for a passive boundary: coefficient bug.
class PassivityViolation : public Error {
  public:
    using Error::Error;
};

// Operation not defined for this surface kind.
class UnsupportedSurfaceError : public Error {
  public:
    using Error::Error;
};

// Constraint set empty or projection cannot reach joint feasibility.
class FeasibilityError : public Error {
  public:
    using Error::Error;
};

// Optimizer step schedule failed to produce a monotone trace.
class StepScheduleError : public Error {
  public:
    using Error::Error;
};

// Malformed config/CSV input. The CLI maps this to exit status 1.
class ParseError : public Error {
  public:
    using Error::Error;
};

}  // namespace impscat
