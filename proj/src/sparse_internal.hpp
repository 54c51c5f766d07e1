#pragma once

#include <vector>

#include "smr/sparse_geneig.hpp"

namespace smr::detail {

/// The pencil actually maximized: (A, B) for Maximize, (B, A + ridge) for
/// Minimize.
struct OrientedPencil {
    Matrix num;
    Matrix den;
};

OrientedPencil orient(const SparseProblem& problem);

struct RestrictedTop {
    double value = 0.0;
    Vector x;  // full length, zero off support
};

RestrictedTop restricted_top(const OrientedPencil& pencil, const std::vector<std::size_t>& support);

SparsePortfolio make_portfolio(const SparseProblem& problem, const std::vector<std::size_t>& support, Vector x,
                               SparseMethod method);

/// Strict improvement beyond the 1e-12 tie band.
inline bool improves(double candidate, double incumbent) {
    return candidate > incumbent + 1e-12 * std::max(1.0, std::abs(incumbent));
}

}  // namespace smr::detail
