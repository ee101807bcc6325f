#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qmemch {

// Shapes of two operands are incompatible for the requested operation.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A physical or numerical parameter lies outside its admitted interval.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A value violates a documented invariant (non-Hermitian input, trace
// defect, incomplete Kraus set, ...).
class InvariantError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SingularMatrixError : public std::runtime_error {
public:
    SingularMatrixError(std::size_t pivot, double magnitude)
        : std::runtime_error("singular matrix: pivot " + std::to_string(pivot) +
                             " has magnitude " + std::to_string(magnitude)),
          pivot_(pivot) {}

    std::size_t pivot() const noexcept { return pivot_; }

private:
    std::size_t pivot_;
};

class ConvergenceError : public std::runtime_error {
public:
    explicit ConvergenceError(double off_diagonal_norm)
        : std::runtime_error("Jacobi eigensolver did not converge; off-diagonal norm " +
                             std::to_string(off_diagonal_norm)),
          off_norm_(off_diagonal_norm) {}

    double off_diagonal_norm() const noexcept { return off_norm_; }

private:
    double off_norm_;
};

}  // namespace qmemch
