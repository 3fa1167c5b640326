#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hypo {

/// Base class for all errors raised by the library.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Operands of a tensor contraction do not share a dimension.
struct DimensionMismatch : Error {
    using Error::Error;
};

/// Inverse requested for a matrix whose determinant vanishes.
struct SingularMatrix : Error {
    double det;
    explicit SingularMatrix(double d)
        : Error("singular matrix: det = " + std::to_string(d)), det(d) {}
};

/// A stored-energy evaluation or a transport step ran into the
/// determinant blow-up regime (det <= 0, or below the configured floor).
struct DeterminantCollapse : Error {
    double det;
    int ix, iy;  // grid location, -1 when not tied to a node
    DeterminantCollapse(double d, int i = -1, int j = -1)
        : Error("determinant collapse: det = " + std::to_string(d) +
                (i >= 0 ? " at node (" + std::to_string(i) + "," + std::to_string(j) + ")" : "")),
          det(d), ix(i), iy(j) {}
};

/// A trace-free argument was expected.
struct NonDeviatoric : Error {
    using Error::Error;
};

/// Time step violates the advective or diffusive stability estimate.
struct CflViolation : Error {
    double dt_given;
    double dt_suggested;
    CflViolation(double given, double suggested)
        : Error("time step " + std::to_string(given) + " rejected; retry with dt <= " +
                std::to_string(suggested)),
          dt_given(given), dt_suggested(suggested) {}
};

/// A nonlinear solve ran out of iterations. Carries the residual history
/// so the caller can tell a stagnating solve from a diverging one.
struct SolverDivergence : Error {
    std::vector<double> residual_history;
    SolverDivergence(const std::string& which, std::vector<double> history)
        : Error(which + " solve did not converge after " + std::to_string(history.size()) +
                " iterations; last residual = " +
                (history.empty() ? std::string("n/a") : std::to_string(history.back()))),
          residual_history(std::move(history)) {}
};

/// Isochoricity monitor tripped during plastic-distortion reconstruction.
struct IsochoricityViolation : Error {
    double defect;
    explicit IsochoricityViolation(double d)
        : Error("reconstructed plastic distortion lost isochoricity: max |det Fp - 1| = " +
                std::to_string(d)),
          defect(d) {}
};

/// Malformed configuration input (parse-level; semantic checks go through
/// scenario validation reports instead).
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace hypo
