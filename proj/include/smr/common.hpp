#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace smr {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Selects the OpenMP kernel or the serial reference path. Both produce
/// bit-identical results; the serial path exists for testing.
enum class Execution { Serial, Parallel };

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad or insufficient input data (parse failures, ordering, too few rows).
class DataError : public Error {
public:
    using Error::Error;
};

/// Numerical failure: non-SPD input, rank deficiency beyond ridge rescue.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Matrix that stays non-positive-definite after the maximal ridge.
class ConditioningError : public NumericalError {
public:
    ConditioningError(const std::string& what, double smallest_eigenvalue)
        : NumericalError(what + " (smallest eigenvalue " + std::to_string(smallest_eigenvalue) + ")"),
          smallest_eigenvalue_(smallest_eigenvalue) {}
    double smallest_eigenvalue() const noexcept { return smallest_eigenvalue_; }

private:
    double smallest_eigenvalue_;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

inline Matrix symmetrize(const Matrix& m) { return 0.5 * (m + m.transpose()); }

/// Principal submatrix m[idx, idx].
Matrix principal_submatrix(const Matrix& m, const std::vector<std::size_t>& idx);

}  // namespace smr
