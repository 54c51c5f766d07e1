#pragma once

#include "smr/common.hpp"

namespace smr {

/// Symmetric-definite pencil (A, B). `ridge` is a minimum diagonal shift
/// applied to B; a larger one is chosen automatically when B is
/// near-singular.
struct SymmetricPair {
    Matrix a;
    Matrix b;
    double ridge = 0.0;
};

/// Solutions of det(lambda B - A) = 0. Eigenvalues descending; column i of
/// `eigenvectors` pairs with eigenvalue i and satisfies v' (B + ridge I) v = 1.
/// Each column is flipped so its largest-magnitude entry is positive.
struct GenEigResult {
    Vector eigenvalues;
    Matrix eigenvectors;
    double ridge = 0.0;
    bool triangular_whitening = true;
};

GenEigResult generalized_eig(const SymmetricPair& pair);
GenEigResult generalized_eig(const Matrix& a, const Matrix& b);

/// x'Ax / x'Bx. Throws DomainError when x'Bx <= 0 (e.g. x = 0).
double rayleigh(const Matrix& a, const Matrix& b, const Vector& x);

/// Symmetric R with R M R = I, via eigendecomposition (ridge policy as for B).
Matrix inverse_sqrt(const Matrix& m);

/// Ridge added to the diagonal of symmetric `b` so that it is safely
/// positive definite: 0 when the condition number is at most 1e12, otherwise
/// 1e-10 * trace/n escalated by 10x up to 1e-6 * trace/n. Throws
/// ConditioningError when even the largest ridge is not enough.
double required_ridge(const Matrix& b);

/// Flip v so its largest-magnitude entry (first one on ties) is positive.
void canonical_sign(Eigen::Ref<Vector> v);

}  // namespace smr
