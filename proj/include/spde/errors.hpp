#pragma once

#include <stdexcept>
#include <string>

namespace spde {

/// Parameter outside its admissible range (nonpositive xi, kappa >= kappa_C, ...).
class InvalidParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Quadrature or iteration failed to reach the requested tolerance.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, double achieved_tol)
        : std::runtime_error(what), achieved_tolerance(achieved_tol) {}
    double achieved_tolerance;
};

/// A model violated one of its structural assumptions (e.g. negative diffusivity).
class ModelViolationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shifted-mollifier containment check failed; carries the offending node.
class GeometryError : public std::runtime_error {
public:
    GeometryError(const std::string& what, double node_x, double node_y = 0.0)
        : std::runtime_error(what), node{node_x, node_y} {}
    double node[2];
};

/// Time step failure: Newton non-convergence or a non-finite state.
class StepError : public std::runtime_error {
public:
    StepError(const std::string& what, int step, double residual)
        : std::runtime_error(what), step_index(step), residual_norm(residual) {}
    int step_index;
    double residual_norm;
};

/// Config file problem; line is 1-based, 0 when not tied to a line.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& what, int line_no = 0)
        : std::runtime_error(what), line(line_no) {}
    int line;
};

} // namespace spde
