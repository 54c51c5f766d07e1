#pragma once

#include <string>
#include <vector>

#include "smr/common.hpp"
#include "smr/data_io.hpp"

namespace smr {

enum class EstimationMethod { Ols, Lasso, Endogenous };

/// VAR(1) model S_t = S_{t-1} A + Z_t with asset covariance Gamma.
struct VarModel {
    Matrix a;
    Matrix gamma;
    Matrix sigma_noise;        // residual covariance (sigma * I for the endogenous model)
    double sigma_scalar = 0.0; // endogenous model only
    EstimationMethod method = EstimationMethod::Ols;
    double penalty = 0.0;      // LASSO gamma
    double spectral_radius = 0.0;
    std::vector<std::string> warnings;
};

/// A = (L'L)^{-1} L'C with L = lagged, C = current. A ridge of 1e-8 * trace(L'L)
/// is added (and a warning recorded) when L'L is numerically rank deficient.
VarModel ols_transition(const LaggedPair& pair);

/// Column-wise LASSO
///     a_i = argmin ||C_i - L x||^2 + gamma ||x||_1
/// exactly as written: no 1/2 or 1/m factors on the loss. Solved by cyclic
/// coordinate descent (max coordinate update < 1e-8 or 10,000 sweeps).
/// A column is exactly zero once gamma >= 2 ||L'C_i||_inf.
VarModel lasso_transition(const LaggedPair& pair, double gamma_pen, Execution exec = Execution::Parallel);

/// Smallest penalty (40 bisection steps on [0, 2 max_i ||L'C_i||_inf]) whose
/// LASSO solution has at least `target_zero_fraction` of its n*n
/// coefficients exactly zero.
double lasso_penalty_for_sparsity(const LaggedPair& pair, double target_zero_fraction);

/// Fraction of exactly-zero entries.
double zero_fraction(const Matrix& m);

struct EndogenousModel {
    Matrix a;             // upper triangular, A'A = I - sigma Gamma^{-1}
    double sigma = 0.0;   // sigma actually used
    bool sigma_shrunk = false;
    std::vector<std::string> warnings;
};

/// Upper-triangular square root of I - sigma Gamma^{-1}. If sigma exceeds
/// the PSD limit 1/lambda_max(Gamma^{-1}) it is shrunk to 0.99 of that
/// limit and a warning recorded.
EndogenousModel endogenous_transition(const Matrix& gamma, double sigma);
/// Same, from a precision matrix Gamma^{-1} directly. Exact zeros in the
/// precision carry through to the factor when no fill-in occurs.
EndogenousModel endogenous_transition_from_precision(const Matrix& precision, double sigma);

/// Unbiased (1/(m-1)) sample covariance of the panel columns.
Matrix sample_covariance(const TimePanel& panel);
Matrix sample_covariance(const Matrix& values);

/// Penalized least-squares objective ||C - L A||_F^2 + gamma * sum |A_ij|.
double lasso_objective(const LaggedPair& pair, const Matrix& a, double gamma_pen);

/// Largest modulus among the eigenvalues of a (non-symmetric) square matrix.
double spectral_radius(const Matrix& a);

/// P M P' for the ordering `order` (row i of the result is row order[i]).
Matrix permute_symmetric(const Matrix& m, const std::vector<std::size_t>& order);

/// Lower-triangular L with L L' = M for symmetric PSD M; zero pivots give
/// zero columns. Throws ConditioningError on a significantly negative pivot.
Matrix psd_cholesky(const Matrix& m);

}  // namespace smr
