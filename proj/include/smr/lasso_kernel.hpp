#pragma once

#include "smr/common.hpp"

namespace smr::detail {

struct CoordinateDescentStatus {
    int sweeps = 0;
    double max_update = 0.0;
    bool converged = false;
};

/// Cyclic coordinate descent for
///     minimize 0.5 x'Qx - c'x + penalty * ||x||_1
/// with Q symmetric PSD, starting from the contents of `x` (warm start).
/// Coordinates with Q_ii <= 0 are held at zero. Coordinates are visited in
/// index order, so the result is deterministic.
CoordinateDescentStatus lasso_coordinate_descent(const Matrix& q, const Vector& c, double penalty, Vector& x,
                                                 double tolerance, int max_sweeps);

inline double soft_threshold(double z, double t) {
    if (z > t) return z - t;
    if (z < -t) return z + t;
    return 0.0;
}

}  // namespace smr::detail
