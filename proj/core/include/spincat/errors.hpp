#pragma once

#include <stdexcept>
#include <string>

namespace spincat {

/// Quadrature grid too coarse for the requested operation.
class ResolutionError : public std::runtime_error {
public:
    explicit ResolutionError(const std::string& what) : std::runtime_error(what) {}
};

/// Adaptive step size underflowed; the problem is stiffer than the explicit
/// integrator can handle.
class StiffnessError : public std::runtime_error {
public:
    StiffnessError(const std::string& what, double smallest_step)
        : std::runtime_error(what), smallest_step(smallest_step) {}
    double smallest_step;
};

/// A trace is too short for the requested extraction and must be re-run with
/// a longer horizon.
class HorizonError : public std::runtime_error {
public:
    explicit HorizonError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace spincat
